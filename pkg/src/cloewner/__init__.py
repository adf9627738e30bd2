"""Numerics for the chordal Loewner equation with complex-valued drivers of
small half-Hölder norm: forward flow and hulls, backward flow and traces,
holomorphic motion of the trace, and verification of the identities and
bounds that make those computations trustworthy.
"""

from .analysis import (
    QuasiArcEstimate,
    VerificationReport,
    continuity_constant,
    derivative_formula,
    diameter_of_endpoints,
    hull_property_suite,
    hull_trace_consistency,
    injectivity_check,
    quasi_arc_constant,
    raster_mismatch,
    round_trip_check,
    run_verification,
)
from .backward import (
    DEFAULT_LADDER,
    BackwardTrajectory,
    TraceSamples,
    backward_map,
    cone_certificate,
    gronwall_gap,
    integrate_backward,
    schedule_size,
    tip_flow,
    trace_curve,
    trace_point,
)
from .cli import main, run_cli
from .cones import (
    DEFAULT_SIGMA,
    ConeParams,
    ConeSpec,
    cone_contains,
    constraint_holds,
    constraint_margin,
    default_cone_params,
    feasible_theta2,
    gap_growth_coefficient,
    nu_coefficient,
)
from .config import RunConfig, TOOL_VERSION
from .drivers import (
    BrownianDriver,
    ConstantDriver,
    Driver,
    HolderEstimate,
    LinearDriver,
    SamplesDriver,
    SqrtDriver,
    WeierstrassDriver,
    driver_fingerprint,
    driver_from_spec,
    eval_driver,
    holder_norm_estimate,
    load_driver,
    transform_driver,
)
from .errors import (
    DomainError,
    InconsistencyError,
    NumericalOverflowError,
    SingularityError,
)
from .forward import (
    HullRaster,
    Trajectory,
    expansion_at_infinity,
    forward_map,
    hull_raster,
    integrate_forward,
    right_hull_raster,
)
from .io import emit_svg, format_float
from .motion import (
    MotionGrid,
    analyticity_residual,
    certified_alpha_radius,
    motion_grid,
    motion_of_segment,
    motion_sample,
    real_slice_matches,
)

__version__ = TOOL_VERSION

__all__ = [
    "BackwardTrajectory",
    "BrownianDriver",
    "ConeParams",
    "ConeSpec",
    "ConstantDriver",
    "DEFAULT_LADDER",
    "DEFAULT_SIGMA",
    "DomainError",
    "Driver",
    "HolderEstimate",
    "HullRaster",
    "InconsistencyError",
    "LinearDriver",
    "MotionGrid",
    "NumericalOverflowError",
    "QuasiArcEstimate",
    "RunConfig",
    "SamplesDriver",
    "SingularityError",
    "SqrtDriver",
    "TraceSamples",
    "Trajectory",
    "VerificationReport",
    "WeierstrassDriver",
    "analyticity_residual",
    "backward_map",
    "certified_alpha_radius",
    "cone_certificate",
    "cone_contains",
    "constraint_holds",
    "constraint_margin",
    "continuity_constant",
    "default_cone_params",
    "derivative_formula",
    "diameter_of_endpoints",
    "driver_fingerprint",
    "driver_from_spec",
    "emit_svg",
    "eval_driver",
    "expansion_at_infinity",
    "feasible_theta2",
    "format_float",
    "forward_map",
    "gap_growth_coefficient",
    "gronwall_gap",
    "holder_norm_estimate",
    "hull_property_suite",
    "hull_raster",
    "hull_trace_consistency",
    "injectivity_check",
    "integrate_backward",
    "integrate_forward",
    "load_driver",
    "main",
    "motion_grid",
    "motion_of_segment",
    "motion_sample",
    "nu_coefficient",
    "quasi_arc_constant",
    "raster_mismatch",
    "real_slice_matches",
    "right_hull_raster",
    "round_trip_check",
    "run_cli",
    "run_verification",
    "schedule_size",
    "tip_flow",
    "trace_curve",
    "trace_point",
    "transform_driver",
]
