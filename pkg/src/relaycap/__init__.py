"""Capacity bounds for Gaussian two-hop relay networks with multicast."""
from relaycap._backend import BACKEND
from relaycap.bounds import (
    GapReport,
    bound_report,
    capacity_approx,
    cutset_upper_exhaustive,
    cutset_upper_prefix,
    ddf_lower,
    pdf_co_lower_diamond,
    pdf_dms_lower,
)
from relaycap.core import (
    BoundKind,
    BoundResult,
    Network,
    SnrProfile,
    build_snr_profile,
    capacity_n1,
    detect_best_relay_regime,
    detect_df_optimal,
    gaussian_capacity,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundKind",
    "BoundResult",
    "GapReport",
    "Network",
    "SnrProfile",
    "bound_report",
    "build_snr_profile",
    "capacity_approx",
    "capacity_n1",
    "cutset_upper_exhaustive",
    "cutset_upper_prefix",
    "ddf_lower",
    "detect_best_relay_regime",
    "detect_df_optimal",
    "gaussian_capacity",
    "pdf_co_lower_diamond",
    "pdf_dms_lower",
]
