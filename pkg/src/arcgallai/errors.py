"""Exception hierarchy shared by all modules."""


class ArcGallaiError(Exception):
    """Base class for every error raised by this package."""


class MixedCircles(ArcGallaiError):
    """Operands live on circles with different tick counts."""


class ParseError(ArcGallaiError):
    """Malformed instance file."""


class GenerationExhausted(ArcGallaiError):
    """The instance generator hit its retry bound without satisfying the flags."""


class NotCovering(ArcGallaiError):
    """A cover was requested but the family does not cover the circle."""


class TooLarge(ArcGallaiError):
    """Instance exceeds the exact-oracle size bound."""


class InvalidChainError(ArcGallaiError):
    """Sequence is not a chain; pinpoints the first duplicate or failing pair."""

    def __init__(self, kind, position, arcs):
        self.kind = kind          # "duplicate" | "gap" | "range" | "empty"
        self.position = position  # 1-based position of the offending element/pair
        self.arcs = arcs
        super().__init__(f"invalid chain: {kind} at position {position} (arcs {arcs})")


class AssignmentFailed(ArcGallaiError):
    """A required open region for a chain point was empty."""


class NoPermutationFound(ArcGallaiError):
    """No reordering matches the sorted points; precondition violation or bug."""


class SwapIllegal(ArcGallaiError):
    """swap() called on a position pair whose closed spans do not both fit."""


class PivotMissing(ArcGallaiError):
    """The designated cover arc is not on the chain."""


class PreconditionViolated(ArcGallaiError):
    """A documented operation precondition does not hold for the inputs."""


class ClaimViolation(ArcGallaiError):
    """A structural step of the reordering procedure failed on real data.

    This is a finding, not a usage error: the harness records it as a
    counterexample payload instead of crashing.
    """


class InternalError(ArcGallaiError):
    """An invariant the implementation itself guarantees was broken."""
