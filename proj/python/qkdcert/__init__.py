"""Secure-key-rate certification for BB84 with imperfect sources and detectors."""

from ._core import (
    DerivedImperfections,
    EstimatedStats,
    ImperfectionParams,
    InconsistentStatistics,
    InsufficientStatistics,
    PhaseErrorBound,
    RateCertificate,
    SimulationReport,
    apply_leakage,
    basis_dependence,
    binary_entropy,
    blinding_parameter,
    certify,
    closed_form_delta_ph,
    factor_common_loss,
    fidelity,
    rate_detector_only,
    rate_general,
    rate_ideal,
    rate_surface,
    rhs_g,
    simulate,
    simulate_report_json,
    solve_delta_ph,
    solve_delta_ph_symmetric,
    trace_boundary,
    trace_distance,
)

__all__ = [
    "DerivedImperfections",
    "EstimatedStats",
    "ImperfectionParams",
    "InconsistentStatistics",
    "InsufficientStatistics",
    "PhaseErrorBound",
    "RateCertificate",
    "SimulationReport",
    "apply_leakage",
    "basis_dependence",
    "binary_entropy",
    "blinding_parameter",
    "certify",
    "closed_form_delta_ph",
    "factor_common_loss",
    "fidelity",
    "rate_detector_only",
    "rate_general",
    "rate_ideal",
    "rate_surface",
    "rhs_g",
    "simulate",
    "simulate_report_json",
    "solve_delta_ph",
    "solve_delta_ph_symmetric",
    "trace_boundary",
    "trace_distance",
]
