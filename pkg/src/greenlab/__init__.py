"""greenlab: numerical potential theory on planar domains.

Green's functions (closed forms, Laurent series, dense Nystrom solver),
Robin/capacity functions, capacity-metric geometry (curvature, geodesics,
closed geodesics, spirals), Bergman kernels and Green's-function critical
points, with boundary-asymptotics verification experiments.
"""

__version__ = "0.1.0"

from .geometry import Annulus, HalfPlane, SmoothDomain, UnitDisc, load_domain  # noqa: E402
from .green import make_evaluator  # noqa: E402

__all__ = [
    "Annulus",
    "HalfPlane",
    "SmoothDomain",
    "UnitDisc",
    "__version__",
    "load_domain",
    "make_evaluator",
]
