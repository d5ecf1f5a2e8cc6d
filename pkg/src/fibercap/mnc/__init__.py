"""Memoryless zero-dispersion channel: conditional pdf, entropies, bounds, oracle."""

from .bounds import (
    CHI_ORDERS,
    ChiInputLaw,
    ChiLowerBound,
    MncUpperBound,
    chi_lower_bound,
    chi_output_pdf,
    max_chi_lower_bound,
    upper_bound,
    upper_bound_details,
    upper_objective,
)
from .entropies import CondEntropies, StatsTable, cond_entropies, shared_table
from .pdf import (
    MncPdfParams,
    PhaseSeries,
    amplitude_pdf,
    conditional_pdf,
    fourier_coeff,
    phase_entropy,
    phase_series,
)
from .ssf import model_bin_probs, simulate_ssf, tv_distance

__all__ = [
    "CHI_ORDERS",
    "ChiInputLaw",
    "ChiLowerBound",
    "CondEntropies",
    "MncPdfParams",
    "MncUpperBound",
    "PhaseSeries",
    "StatsTable",
    "amplitude_pdf",
    "chi_lower_bound",
    "chi_output_pdf",
    "cond_entropies",
    "conditional_pdf",
    "fourier_coeff",
    "max_chi_lower_bound",
    "model_bin_probs",
    "phase_entropy",
    "phase_series",
    "shared_table",
    "simulate_ssf",
    "tv_distance",
    "upper_bound",
    "upper_bound_details",
    "upper_objective",
]
