"""Exception hierarchy for regfall."""


class RegFallError(ValueError):
    """Base class for every error raised by the library."""


class ZeroLoop(RegFallError):
    """The loop x vanishes identically, so ||x|| = 0."""


class BadMode(RegFallError):
    """A mode index k < 1 was requested."""


class BadRange(RegFallError):
    """A spectral range such as n_max < k was requested."""


class TruncationTooSmall(RegFallError):
    """The Fourier truncation level cannot resolve the requested modes."""


class InsufficientSamples(RegFallError):
    """Too few samples for a lossless round trip."""


class DomainError(RegFallError):
    """An argument lies outside the domain of a map, e.g. tau outside [0, 1]."""


class NonMonotone(RegFallError):
    """Classical time is not strictly increasing."""


class CollisionPresent(RegFallError):
    """A trajectory touches the origin where a positive one is required."""


class NotCritical(RegFallError):
    """The loop is not a critical point within tolerance."""


class VanishingEigenvector(RegFallError):
    """A loop passes through the origin, so its winding is undefined."""


class NonIntegralWinding(RegFallError):
    """The accumulated angle is not close to a multiple of 2*pi."""


class DegenerateWindingMismatch(RegFallError):
    """Eigenvectors inside one eigenvalue cluster have different windings."""


class WindowTooWide(RegFallError):
    """The eigenvalue window exceeds the range the truncation resolves."""


class DegenerateAtZero(RegFallError):
    """Zero is an eigenvalue, so the Conley-Zehnder index is undefined."""


class WindowInsufficient(RegFallError):
    """The eigenvalue window does not contain everything the index needs."""


class NoConvergence(RegFallError):
    """An iterative routine exhausted its budget."""


class LayoutMismatch(RegFallError):
    """A coefficient vector does not match the basis layout."""
