"""Exception hierarchy shared by all modules."""


class SketchError(ValueError):
    """Base class for every error raised by this package."""


class InvalidLength(SketchError):
    """Transform length not supported by the requested transform kind."""


class DimensionMismatch(SketchError):
    """Input vector length does not match the operator or plan."""


class ShapeError(SketchError):
    """Inconsistent operator shape parameters."""


class ParameterError(SketchError):
    """Malformed or out-of-range parameter."""


class TooLarge(SketchError):
    """Dense materialization would exceed the size guard."""


class DomainError(SketchError):
    """Argument outside the validity range of a formula."""


class InfiniteReach(DomainError):
    """Formula needs a finite reach but the descriptor reports infinity."""


class NotSpecial(DomainError):
    """Descriptor does not fall under any special-case formula."""


class DescriptorError(SketchError):
    """Manifold descriptor is internally inconsistent."""


class EmptySet(SketchError):
    """Point set has no points."""


class TooFewPoints(SketchError):
    """Point set has fewer than two points, so no secants exist."""


class TooManySupports(SketchError):
    """Brute-force enumeration exceeds the support-count guard."""


class DimensionError(SketchError):
    """Geometry does not fit in the requested ambient dimension."""
