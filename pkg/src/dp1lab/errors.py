"""Typed failures raised by the dP1 toolkit.

Singular steps are semantically meaningful (they are where confinement
starts), so they are never encoded as infinities or NaNs.
"""


class Dp1Error(Exception):
    """Base class for all library errors."""


class NumericError(Dp1Error):
    """A computation hit a mathematically singular or undefined point."""


class SingularAxis(NumericError):
    """A map was applied on its singular axis (x = 0 forward, y = 0 inverse)."""

    def __init__(self, n, message=None):
        self.n = n
        super().__init__(message or f"singular axis hit at n={n}")


class SingularStep(NumericError):
    """The Z denominator of an asymptotic-coordinate step vanished."""


class PlaneAtInfinity(NumericError):
    """Requested (x, y) for a point with u = 0."""


class ComplexRoot(NumericError):
    """A square root of a negative radicand was required."""


class NotGenuine(NumericError):
    """The requested period-2 orbit degenerates (alpha >= 0)."""


class NegativeInput(NumericError):
    """Square root of a negative number."""


class SingularFamilyMember(NumericError):
    """Member of the singular period-3 orbit requested from the regular family."""


class InsufficientLength(Dp1Error):
    """Truncated sequence too short for the requested number of contractions."""


class QuadratureNonConvergence(NumericError):
    """Quadrature did not reach the requested accuracy."""


class NoInteriorMinimum(Dp1Error):
    """A series has no interior minimum (monotone or minimum at an end)."""
