import os

from setuptools import Extension, setup

ext_modules = []
pyx = os.path.join("src", "arcgallai", "_core.pyx")
if os.path.exists(pyx):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        # optional: a failed build falls back to the pure-Python kernel
        ext_modules = cythonize(
            [Extension("arcgallai._core", [pyx], optional=True)],
            language_level="3",
        )

setup(ext_modules=ext_modules)
