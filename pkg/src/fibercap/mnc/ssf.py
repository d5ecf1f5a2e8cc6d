"""Split-step simulation with distributed noise, used as an oracle for the pdf."""

from __future__ import annotations

import math

import numpy as np

from ..mathkit.quadrature import gauss_legendre, panel_nodes
from ..params import DiscreteChannelParams
from .pdf import MncPdfParams, amplitude_pdf, conditional_pdf

CHUNK = 1 << 18


def simulate_ssf(x, segments: int, params: DiscreteChannelParams, seed=None) -> np.ndarray:
    """Propagate each sample through ``segments`` rotate-then-add-noise steps.

    a_{k+1} = a_k exp(j eta/segments |a_k|^2) + n_k with n_k circular
    Gaussian of power P_N/segments; the output is a_segments.
    """
    if segments < 1:
        raise ValueError("segments must be >= 1")
    x = np.asarray(x, dtype=complex)
    if not np.all(np.isfinite(x)):
        raise ValueError("inputs must be finite")
    rng = np.random.default_rng(seed)
    step = params.eta / segments
    scale = math.sqrt(0.5 * params.noise_power_w / segments)
    flat = x.ravel()
    out = np.empty_like(flat)
    for lo in range(0, flat.size, CHUNK):
        a = flat[lo : lo + CHUNK].copy()
        for _ in range(segments):
            a *= np.exp(1j * step * (a.real**2 + a.imag**2))
            noise = rng.standard_normal((2, a.size))
            a += scale * (noise[0] + 1j * noise[1])
        out[lo : lo + CHUNK] = a
    return out.reshape(x.shape)


def model_bin_probs(r_edges, th_edges, r0: float, params: DiscreteChannelParams, n_sub: int = 4) -> np.ndarray:
    """Probability of each (r, theta - theta0) bin under the conditional pdf.

    Each bin is integrated with an n_sub x n_sub Gauss-Legendre rule.
    """
    x, w = gauss_legendre(n_sub)

    def sub(edges):
        a, b = edges[:-1], edges[1:]
        pts = 0.5 * (b - a)[:, None] * x[None, :] + 0.5 * (b + a)[:, None]
        wts = 0.5 * (b - a)[:, None] * w[None, :]
        return pts, wts

    rp, rw = sub(np.asarray(r_edges, dtype=float))
    tp, tw = sub(np.asarray(th_edges, dtype=float))
    p = MncPdfParams.from_channel(r0, params)
    f = conditional_pdf(rp.ravel()[:, None], tp.ravel()[None, :], r0, 0.0, p)
    f = f.reshape(rp.shape[0], n_sub, tp.shape[0], n_sub)
    return np.einsum("ia,iajb,jb->ij", rw, f, tw)


def tv_distance(y, x0: complex, params: DiscreteChannelParams, bins: int = 64, n_sigmas: float = 6.0) -> float:
    """Total variation between the empirical (r, theta - theta0) law of y and the pdf.

    Radii run over [max(0, r0 - n_sigmas sigma), r0 + n_sigmas sigma]; the
    mass outside that range forms one extra cell on each side.
    """
    y = np.asarray(y, dtype=complex)
    r0 = abs(x0)
    sigma = math.sqrt(0.5 * params.noise_power_w)
    r_edges = np.linspace(max(0.0, r0 - n_sigmas * sigma), r0 + n_sigmas * sigma, bins + 1)
    th_edges = np.linspace(-math.pi, math.pi, bins + 1)
    r = np.abs(y)
    th = np.angle(y * np.exp(-1j * np.angle(x0)))
    counts, _, _ = np.histogram2d(r, th, bins=[r_edges, th_edges])
    n = y.size
    emp = counts / n
    model = model_bin_probs(r_edges, th_edges, r0, params)
    below_emp = np.count_nonzero(r < r_edges[0]) / n
    above_emp = np.count_nonzero(r >= r_edges[-1]) / n
    below_model = _amplitude_mass(0.0, r_edges[0], r0, params)
    above_model = _amplitude_mass(r_edges[-1], r0 + 14.0 * sigma, r0, params)
    tv = np.abs(emp - model).sum() + abs(below_emp - below_model) + abs(above_emp - above_model)
    return 0.5 * float(tv)


def _amplitude_mass(lo: float, hi: float, r0: float, params: DiscreteChannelParams) -> float:
    if hi <= lo:
        return 0.0
    r, w = panel_nodes(np.linspace(lo, hi, 9), 20)
    return float(np.sum(w * amplitude_pdf(r, r0, params)))
