"""Exception types shared across the package."""


class KirchoqError(Exception):
    """Base class for all package errors."""


class RangeError(KirchoqError, ValueError):
    """A numeric argument lies outside its admissible range."""


class CouplingError(KirchoqError, ValueError):
    """The linear coupling violates lambda < sqrt(V1*V2)."""


class RegimeError(KirchoqError, ValueError):
    """Operation not defined for the given exponent regime."""


class GridMismatch(KirchoqError, ValueError):
    """Two fields (or a field and an operator) live on different grids."""


class AllocationError(KirchoqError, MemoryError):
    """Padded work arrays would exceed the configured memory cap."""


class SizeError(KirchoqError, ValueError):
    """Grid too large for an intentionally slow oracle path."""


class SupportError(KirchoqError, ValueError):
    """Field mass outside the dilation-safe region exceeds tolerance."""


class NoNonlocalMass(KirchoqError, ValueError):
    """Both nonlocal integrals vanish; the fiber map has no maximizer."""


class DegenerateInput(KirchoqError, ValueError):
    """All quadratic fiber coefficients vanish (zero field pair)."""
