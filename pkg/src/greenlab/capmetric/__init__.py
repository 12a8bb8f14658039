from .closed import (
    ClosedGeodesic,
    SpiralReport,
    calibrate_band,
    circle_criterion,
    find_closed_geodesic,
    loop_shorten,
    nonclosure_margin,
    spiral_search,
)
from .geodesics import (
    GeodesicPath,
    GeodesicState,
    escape_analysis,
    geodesic_angle_monitor,
    integrate_geodesic,
    unit_capacity_velocity,
)
from .metric import (
    comparability_report,
    curvature,
    euclid_curvature,
    grad_robin,
    hyperbolic_density,
)

__all__ = [
    "ClosedGeodesic",
    "GeodesicPath",
    "GeodesicState",
    "SpiralReport",
    "calibrate_band",
    "circle_criterion",
    "comparability_report",
    "curvature",
    "escape_analysis",
    "euclid_curvature",
    "find_closed_geodesic",
    "geodesic_angle_monitor",
    "grad_robin",
    "hyperbolic_density",
    "integrate_geodesic",
    "loop_shorten",
    "nonclosure_margin",
    "spiral_search",
    "unit_capacity_velocity",
]
