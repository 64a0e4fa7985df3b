"""Largeness of representations: combinatorial verdicts for tori, symbolic
certificates for the moment ideal, Kempf-Ness numerics and known tables."""

from .errors import (
    LargenessError,
    ModulusError,
    PrimeDisagreementError,
    ResourceLimitError,
    RingMismatchError,
    SpecError,
)
from .kempfness import FlowConfig, MinimalVectorResult, kempf_ness_flow, membership_check, rank_sample
from .koszul import (
    component_analysis,
    euler_check,
    fd_condition_check,
    fd_report,
    graded_koszul_homology,
    homology_table,
    koszul_certificate,
    one_large_consistency,
    regular_sequence_check,
)
from .moment import jacobian_matrix, moment_components, real_moment
from .oracle import OracleVerdict, classical_verdict, sl2_verdict
from .repspec import LieAction, RepSpec, build_classical, build_sl2, build_torus, direct_sum, realize
from .torus import fpig_check, largeness_verdict, stability_check, stable_support, stratum_table

__version__ = "0.1.0"

__all__ = [
    "LargenessError", "ModulusError", "PrimeDisagreementError", "ResourceLimitError",
    "RingMismatchError", "SpecError",
    "FlowConfig", "MinimalVectorResult", "kempf_ness_flow", "membership_check", "rank_sample",
    "component_analysis", "euler_check", "fd_condition_check", "fd_report",
    "graded_koszul_homology", "homology_table", "koszul_certificate", "one_large_consistency",
    "regular_sequence_check",
    "jacobian_matrix", "moment_components", "real_moment",
    "OracleVerdict", "classical_verdict", "sl2_verdict",
    "LieAction", "RepSpec", "build_classical", "build_sl2", "build_torus", "direct_sum", "realize",
    "fpig_check", "largeness_verdict", "stability_check", "stable_support", "stratum_table",
]
