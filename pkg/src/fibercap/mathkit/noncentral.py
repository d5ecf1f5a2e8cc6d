"""Rician amplitudes and expectations under the noncentral chi-squared law.

Given an input power s, the output of the additive-distortion channel has
|y|^2 such that 2|y|^2/P_N is noncentral chi-squared with two degrees of
freedom and noncentrality 2(s + eta^2 s^3)/P_N.  Equivalently |y| is Rician
with centre sqrt(s + eta^2 s^3) and per-dimension variance P_N/2, which is
the form used for integration here.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import i0e

from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate


def rician_logpdf(r, r0, noise_power: float):
    """log of (2r/P_N) exp(-(r^2 + r0^2)/P_N) I_0(2 r r0 / P_N), overflow free."""
    r = np.asarray(r, dtype=float)
    z = 2.0 * r * r0 / noise_power
    with np.errstate(divide="ignore"):
        return (
            np.log(2.0 * r / noise_power)
            - (r - r0) ** 2 / noise_power
            + np.log(i0e(z))
        )


def rician_pdf(r, r0, noise_power: float):
    return np.exp(rician_logpdf(r, r0, noise_power))


def rician_pdf_offset(u, r0: float, noise_power: float):
    """Rician density at r = r0 + u, keeping (r - r0)^2 = u^2 exact."""
    u = np.asarray(u, dtype=float)
    r = r0 + u
    return (2.0 * r / noise_power) * np.exp(-u * u / noise_power) * i0e(2.0 * r * r0 / noise_power)


def rician_support(r0: float, noise_power: float, n_sigmas: float) -> tuple[float, float]:
    """Interval outside which the Rician density is below exp(-n_sigmas^2/2)."""
    sigma = math.sqrt(0.5 * noise_power)
    return max(0.0, r0 - n_sigmas * sigma), r0 + n_sigmas * sigma


def noncentral_expectation(f, s: float, params, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """E[f(|y|^2) | |x|^2 = s] for y = x + j eta |x|^2 x + n.

    Parameters
    ----------
    f : callable
        Vectorised function of the output power |y|^2.
    s : float
        Input power, >= 0.
    params : DiscreteChannelParams
        Supplies ``eta`` and ``noise_power_w``.
    spec : QuadratureSpec
        ``tail_cutoff_sigmas`` fixes the integration window around the
        Rician centre.

    Returns
    -------
    float
    """
    if s < 0:
        raise ValueError("s must be non-negative")
    eta, noise_power = params.eta, params.noise_power_w
    r0 = math.sqrt(s + eta * eta * s**3)
    lo, hi = rician_support(r0, noise_power, spec.tail_cutoff_sigmas)

    def integrand(u):
        r = r0 + u
        return f(r * r) * rician_pdf_offset(u, r0, noise_power)

    return integrate(integrand, lo - r0, hi - r0, spec).value
