"""Zeros of Hardy's Z function, the stationary points between them, and
numerical checks of the sums over zeros that control their asymmetry."""

from .errors import *  # noqa: F401,F403
from .root_atlas import (
    CriticalPoint,
    GapRecord,
    Zero,
    count_zeros,
    critical_points,
    find_zeros,
    gap_metrics,
    littlewood_statistic,
    locate_critical_point,
    refine_zero,
    scan_sign_changes,
)
from .spectral_sums import (
    TruncatedSum,
    cutoff_T,
    riemann_constant_sum,
    tail_bound_estimate,
    truncated_inverse_square_sum,
    verify_eighth_pi,
    verify_quarter_pi,
)
from .tables import ingest_zero_table, read_cache, write_cache
from .theorem_verifier import (
    VerificationReport,
    check_asymmetry_bound,
    decompose_sum,
    empirical_constants_report,
    verify_all,
)
from .zeta_core import EvalConfig, hardy_Z, hardy_Z_prime, theta_asymptotic, theta_exact

__version__ = "0.1.0"
