"""Hitting-time laws of the winding of planar Brownian motion and complex
Ornstein-Uhlenbeck processes: closed-form densities, transforms and moments,
exact-in-law samplers, and a statistical verification suite.
"""

from ._backend import BACKEND_NAME, set_num_threads
from .errors import DomainError, NonConvergenceError, StepUnderflowError
from .laws import (
    ConeSpec,
    OuSpec,
    SeriesDensityValue,
    cauchy_cdf,
    cauchy_density,
    exit_cdf_symmetric,
    exit_charfn,
    exit_cone_cdf_fn,
    exit_cone_density,
    exit_cone_density_full,
    exit_density_symmetric,
    expected_log_exit,
    laplace_one_sided,
    laplace_range,
    laplace_two_sided,
    log_moment_finite,
    log_sinh_integral,
    ou_exit_from_bm_exit,
    ou_mean_exit_asymptotics,
    p_laplace_from_phi,
    q_laplace,
    range_density,
    sinh_moment2,
    sinh_moment2_integral,
    sinh_moment4,
    sinh_moment4_integral,
    spitzer_moment_finite,
    tail_constant,
)
from .numerics import (
    QuadResult,
    SeriesTruncation,
    arcsinh_a,
    m_half_series,
    quad_finite,
    quad_semi_infinite,
    whittaker_m_half,
)
from .paths import (
    RngStream,
    SampleBatch,
    WindingPath,
    exit_cone_batch,
    exp_functional,
    sample_exit_cone,
    sample_one_sided_hit,
    sample_ou_exit,
    sample_range_exit,
    sample_two_sided_hit,
    sample_winding_at_indep_hit,
    simulate_planar_winding,
)
from .verify import (
    CheckReport,
    KsReport,
    MomentReport,
    TrendReport,
    ks_one_sample,
    ks_two_sample,
    moment_check,
    run_suite,
    spitzer_limit_check,
    suite_names,
    tail_trend_check,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "CheckReport",
    "ConeSpec",
    "DomainError",
    "KsReport",
    "MomentReport",
    "NonConvergenceError",
    "OuSpec",
    "QuadResult",
    "RngStream",
    "SampleBatch",
    "SeriesDensityValue",
    "SeriesTruncation",
    "StepUnderflowError",
    "TrendReport",
    "WindingPath",
    "arcsinh_a",
    "cauchy_cdf",
    "cauchy_density",
    "exit_cdf_symmetric",
    "exit_charfn",
    "exit_cone_batch",
    "exit_cone_cdf_fn",
    "exit_cone_density",
    "exit_cone_density_full",
    "exit_density_symmetric",
    "exp_functional",
    "expected_log_exit",
    "ks_one_sample",
    "ks_two_sample",
    "laplace_one_sided",
    "laplace_range",
    "laplace_two_sided",
    "log_moment_finite",
    "log_sinh_integral",
    "m_half_series",
    "moment_check",
    "ou_exit_from_bm_exit",
    "ou_mean_exit_asymptotics",
    "p_laplace_from_phi",
    "q_laplace",
    "quad_finite",
    "quad_semi_infinite",
    "range_density",
    "run_suite",
    "sample_exit_cone",
    "sample_one_sided_hit",
    "sample_ou_exit",
    "sample_range_exit",
    "sample_two_sided_hit",
    "sample_winding_at_indep_hit",
    "set_num_threads",
    "simulate_planar_winding",
    "sinh_moment2",
    "sinh_moment2_integral",
    "sinh_moment4",
    "sinh_moment4_integral",
    "spitzer_limit_check",
    "spitzer_moment_finite",
    "suite_names",
    "tail_constant",
    "tail_trend_check",
    "whittaker_m_half",
    "__version__",
]
