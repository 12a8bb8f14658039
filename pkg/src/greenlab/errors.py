"""Exception types shared across the toolkit.

Every error raised by greenlab derives from :class:`GreenLabError`, so
callers (CLI, service) can map failures onto structured responses.
"""

from __future__ import annotations


class GreenLabError(Exception):
    """Base class for all greenlab errors."""


class ConfigError(GreenLabError):
    """Invalid experiment configuration or malformed input file."""


class ToleranceFailure(GreenLabError):
    """A named experiment finished but violated its tolerance."""

    def __init__(self, message: str, first_failing_row=None):
        super().__init__(message)
        self.first_failing_row = first_failing_row


# -- geometry ---------------------------------------------------------------

class NotInDomain(GreenLabError):
    """Query point lies outside the (open) domain."""


class OutOfChart(GreenLabError):
    """Point outside the region where the defining function is defined."""


class DegenerateCurve(GreenLabError):
    """Boundary parametrization has a vanishing tangent."""


class ZeroGradient(GreenLabError):
    """Defining-function gradient vanished where it must not."""


class RescaleTooExtreme(GreenLabError):
    """Affinely rescaled domain too distorted for the dense solver."""


# -- Green's function / Dirichlet solver ------------------------------------

class CoincidentPoints(GreenLabError):
    """z == pole where G has its logarithmic singularity."""


class OrderTooHigh(GreenLabError):
    """Requested derivative order beyond what a backend supports."""


class SingularSystem(GreenLabError):
    """Dense boundary system numerically singular."""

    def __init__(self, message: str, rcond: float | None = None):
        super().__init__(message)
        self.rcond = rcond


class NonSmoothData(GreenLabError):
    """Boundary data not resolved by the quadrature grid."""


class GridTouchesPole(GreenLabError):
    """Comparison grid contains (or nearly contains) the pole."""


class BadNeighborhood(GreenLabError):
    """Localization neighborhood does not cut a simply connected piece."""


class UnsupportedDomain(GreenLabError):
    """Operation restricted to specific model domains."""


# -- Robin function ----------------------------------------------------------

class DiscNotContained(GreenLabError):
    """Averaging disc not compactly contained in the domain."""


class PoleOnCircle(GreenLabError):
    """Sampling circle passes through the pole."""


class RadiusTooSmall(GreenLabError):
    """Extraction radius below the resolvable floor."""


class StepTooLarge(GreenLabError):
    """Finite-difference step too large for the local geometry."""


# -- capacity-metric geometry -------------------------------------------------

class LeftDomain(GreenLabError):
    """Trajectory stepped out of the domain."""

    def __init__(self, message: str, exit_time: float | None = None):
        super().__init__(message)
        self.exit_time = exit_time


class StepUnderflow(GreenLabError):
    """Adaptive integrator could not advance."""


class NoConvergence(GreenLabError):
    """Iterative search failed to converge."""


class TrivialClass(GreenLabError):
    """Requested loop class is trivial (no closed geodesic)."""


class NotEscaping(GreenLabError):
    """Path does not diverge to the boundary."""


class AllEscaped(GreenLabError):
    """No scanned direction produced a forward-compact trajectory."""

    def __init__(self, message: str, best_stay_time: float | None = None):
        super().__init__(message)
        self.best_stay_time = best_stay_time


class NotUnitTangent(GreenLabError):
    """Supplied tangent vector is not unit length."""


class NoQualifyingTime(GreenLabError):
    """No sample time satisfies the monitor precondition."""


# -- critical points ----------------------------------------------------------

class BadNormalizer(GreenLabError):
    """Normalizing point has (numerically) vanishing gradient."""


class TrackingLost(GreenLabError):
    """Newton continuation diverged between family steps."""
