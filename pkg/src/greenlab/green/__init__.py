from .annulus_series import AnnulusSeries
from .bie import HarmonicSolution, NystromSolver, solve_dirichlet
from .closed_forms import (
    DiscClosedForm,
    HalfPlaneClosedForm,
    annulus_hyperbolic_density,
    disc_hyperbolic_density,
    mobius_halfplane_to_disc,
)
from .convergence import (
    build_lens,
    green_convergence_report,
    localization_bound,
    localization_gap,
)
from .evaluator import AffineImageGreen, NystromGreen, make_evaluator

__all__ = [
    "AffineImageGreen",
    "AnnulusSeries",
    "DiscClosedForm",
    "HalfPlaneClosedForm",
    "HarmonicSolution",
    "NystromGreen",
    "NystromSolver",
    "annulus_hyperbolic_density",
    "build_lens",
    "disc_hyperbolic_density",
    "green_convergence_report",
    "localization_bound",
    "localization_gap",
    "make_evaluator",
    "mobius_halfplane_to_disc",
    "solve_dirichlet",
]
