"""Logarithmic perturbative channel y = x exp(j eta |x|^2) + n."""

from __future__ import annotations

import math

import numpy as np

from .params import DiscreteChannelParams
from .rpc import complex_noise


def awgn_capacity(p: float, noise_power: float) -> float:
    """log2(1 + P / P_N); the shared reference for every linear-limit check."""
    if p < 0:
        raise ValueError("power must be non-negative")
    return math.log2(1.0 + p / noise_power)


def capacity(p: float, params: DiscreteChannelParams) -> float:
    """Capacity in bits; the phase rotation leaves the AWGN value unchanged."""
    return awgn_capacity(p, params.noise_power_w)


def simulate(x, params: DiscreteChannelParams, seed=None, noise_power: float | None = None) -> np.ndarray:
    """y = x exp(j eta |x|^2) + n with n circular Gaussian of power P_N.

    The noise stream is drawn exactly as in :func:`fibercap.rpc.simulate`, so
    both simulators agree sample for sample when eta = 0 and seeds match.
    """
    x = np.asarray(x, dtype=complex)
    if not np.all(np.isfinite(x)):
        raise ValueError("inputs must be finite")
    rng = np.random.default_rng(seed)
    pn = params.noise_power_w if noise_power is None else noise_power
    return x * np.exp(1j * params.eta * np.abs(x) ** 2) + complex_noise(rng, x.shape, pn)


def histogram_entropy_polar(y, bins: int = 128) -> float:
    """Plug-in estimate of h(y) in nats from a bins x bins polar histogram.

    h(y) = h(r, theta) + E[log r]; the discrete entropy gets the Miller-Madow
    bias correction.
    """
    y = np.asarray(y, dtype=complex)
    r = np.abs(y)
    th = np.angle(y)
    r_max = float(np.max(r)) * (1.0 + 1e-12)
    counts, r_edges, th_edges = np.histogram2d(r, th, bins=bins, range=[[0.0, r_max], [-np.pi, np.pi]])
    n = counts.sum()
    p = counts[counts > 0] / n
    h_disc = -np.sum(p * np.log(p)) + (np.count_nonzero(counts) - 1) / (2.0 * n)
    cell = (r_edges[1] - r_edges[0]) * (th_edges[1] - th_edges[0])
    return h_disc + math.log(cell) + float(np.mean(np.log(r[r > 0])))


def mc_mutual_information(p: float, params: DiscreteChannelParams, n: int = 1_000_000, seed=None, bins: int = 128) -> float:
    """Monte Carlo I(x; y) in bits for a circular Gaussian input of power p.

    Uses I = h(y) - h(n) with h(n) = log(pi e P_N) and the polar histogram
    estimate of h(y).
    """
    rng = np.random.default_rng(seed)
    x = complex_noise(rng, n, p)
    y = simulate(x, params, seed=rng)
    h_y = histogram_entropy_polar(y, bins)
    return (h_y - math.log(math.pi * math.e * params.noise_power_w)) / math.log(2.0)
