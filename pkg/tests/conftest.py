import pytest

from arcgallai.family import ArcFamily, parse_instance
from arcgallai.geometry import Arc, Circle

FAM3_TEXT = """\
circle 12
arc 0 5
arc 4 9
arc 8 1
"""

FAM4_TEXT = FAM3_TEXT + "arc 3 6\n"

# two pendant 2-paths hanging in the private zone of cover arc 0
BROOM_TEXT = """\
circle 40
arc 0 15
arc 14 27
arc 26 1
arc 2 5
arc 4 7
arc 8 11
arc 10 13
"""

# non-covering path family (interval graph)
P3_TEXT = """\
circle 12
arc 0 3
arc 2 5
arc 4 7
"""


@pytest.fixture
def fam3():
    return parse_instance(FAM3_TEXT)[0]


@pytest.fixture
def fam4():
    return parse_instance(FAM4_TEXT)[0]


@pytest.fixture
def broom():
    return parse_instance(BROOM_TEXT)[0]


@pytest.fixture
def p3():
    return parse_instance(P3_TEXT)[0]


# cover ring K0=(0,10) K1=(8,18) K2=(16,2) plus straddlers over delta K2 = (0,2);
# the swap drills in test_reorder run on chains of this family
DRILL_NAMES = ("K0", "K1", "K2", "A", "B", "A2")
DRILL_ARCS = {
    "K0": (0, 10),
    "K1": (8, 18),
    "K2": (16, 2),
    "A": (22, 7),
    "B": (3, 12),
    "A2": (23, 6),
}


@pytest.fixture
def drill():
    circle = Circle(24)
    family = ArcFamily(
        circle, tuple(Arc.proper(circle, *DRILL_ARCS[k]) for k in DRILL_NAMES)
    )
    index = {k: i for i, k in enumerate(DRILL_NAMES)}
    return family, index
