"""Exception types shared across the package.

Everything raised deliberately by this library derives from
:class:`SphereCodesError`, so callers (and the CLI) can catch one type.
"""


class SphereCodesError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SphereCodesError):
    """A numeric operation left its domain (sqrt of a negative, log of a
    non-positive value, a kernel evaluated at distance zero)."""


class ZeroVector(SphereCodesError):
    """Tried to normalize a vector with (near-)zero length."""


class CoincidentPoints(SphereCodesError):
    """Two points of a configuration coincide, so the energy diverges."""


class SizeMismatch(SphereCodesError):
    """Two objects that must agree in size do not."""


class DomainViolation(SphereCodesError):
    """A generator radicand went negative while instantiating a
    parameterized configuration."""


class SingularJacobian(SphereCodesError):
    """Gaussian elimination hit a pivot too small to trust."""


class Diverged(SphereCodesError):
    """Newton refinement grew its gradient norm on consecutive steps."""


class StagnationLimit(SphereCodesError):
    """An optimizer exhausted its round/iteration budget before meeting
    its convergence target.  Carries the partial run in ``report`` when
    one is available."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NoProgress(SphereCodesError):
    """Gradient descent could not decrease the energy even at the
    minimum step size."""


class NotCritical(SphereCodesError):
    """A point set submitted for minimum certification is not a critical
    point (its tangential force residual is too large)."""


class NonSymmetric(SphereCodesError):
    """A matrix that must be symmetric is not."""


class DependentBasis(SphereCodesError):
    """Lattice reduction received linearly dependent basis vectors."""


class InsufficientPrecision(SphereCodesError):
    """An input carries too few digits for the requested recovery."""


class Unregistered(SphereCodesError):
    """No built-in parameterization exists for the requested (n, potential)."""

    def __init__(self, n, potential):
        super().__init__(f"no built-in structure for n={n} under {potential}")
        self.n = n
        self.potential = potential


class ParseError(SphereCodesError):
    """A text file violated its format.  ``line`` is the 1-based line
    number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class OffSphere(SphereCodesError):
    """An input point is too far from the unit sphere.  ``index`` is the
    0-based point index."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NoStructure(SphereCodesError):
    """No planes or polygons were detected, so no axis can be suggested."""
