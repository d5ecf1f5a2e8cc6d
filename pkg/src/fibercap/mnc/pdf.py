"""Conditional output law of the memoryless zero-dispersion channel.

In polar coordinates the output density given the input (r0, theta0) is the
Rician amplitude law times a Fourier series in theta - theta0:

    f(r, theta) = f_r(r)/(2 pi) + (1/pi) sum_m Re(C_m(r) exp(-j m (theta - theta0)))

with x_m = sqrt(2 j m eta r0^2 P_N / (2 r0^2 + P_N)), nu_m = x_m / (P_N sin x_m) and

    C_m(r) = 2 r nu_m exp(-(r^2 + r0^2) nu_m cos x_m) I_m(2 r r0 nu_m).

Everything is assembled in the log domain.  Most routines work with the
normalised coefficients c_m = C_m / f_r, which satisfy |c_m| <= 1 because
they are the conditional characteristic function of the output phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import i0e

from ..mathkit.bessel import ComplexLog, log_iv_array
from ..params import DiscreteChannelParams

TRUNCATION_TOL = 1e-12
M_MAX = 500
M_BLOCK = 16
SMALL_X = 1e-3


@dataclass(frozen=True)
class MncPdfParams:
    """Inputs of the conditional pdf for one input amplitude.

    Attributes
    ----------
    r0 : float
        Input amplitude in sqrt(W).
    gamma_l : float
        gamma*L, i.e. eta, in 1/W.
    noise_power_w : float
    truncation_tol : float
        Series stops once |c_m| falls below this.
    m_max : int
        Hard cap on the number of Fourier terms.
    """

    r0: float
    gamma_l: float
    noise_power_w: float
    truncation_tol: float = TRUNCATION_TOL
    m_max: int = M_MAX

    def __post_init__(self):
        if self.r0 < 0:
            raise ValueError("r0 must be non-negative")
        if self.gamma_l < 0 or self.noise_power_w <= 0:
            raise ValueError("invalid channel constants")

    @classmethod
    def from_channel(cls, r0: float, params: DiscreteChannelParams, **kw) -> "MncPdfParams":
        return cls(r0, params.eta, params.noise_power_w, **kw)


def _xm(m, p: MncPdfParams, branch: int = 1):
    m = np.asarray(m, dtype=float)
    r02 = p.r0 * p.r0
    c = p.gamma_l * r02 * p.noise_power_w / (2.0 * r02 + p.noise_power_w)
    return branch * np.sqrt(2j * m * c)


def _x_over_sin(x):
    x2 = x * x
    small = np.abs(x) < SMALL_X
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = x / np.sin(np.where(small, 1.0, x))
    return np.where(small, 1.0 + x2 / 6.0 + 7.0 * x2 * x2 / 360.0, direct)


def _x_cot_minus_one(x):
    """x cot x - 1, with a series for small |x| to keep relative accuracy."""
    x2 = x * x
    small = np.abs(x) < SMALL_X
    with np.errstate(invalid="ignore", divide="ignore"):
        xs = np.where(small, 1.0, x)
        direct = xs * np.cos(xs) / np.sin(xs) - 1.0
    return np.where(small, -x2 / 3.0 - x2 * x2 / 45.0, direct)


def log_amplitude_pdf(r, r0: float, noise_power: float):
    """log f_r(r | r0) for the Rician amplitude law."""
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(2.0 * r / noise_power) - (r - r0) ** 2 / noise_power + np.log(i0e(2.0 * r * r0 / noise_power))


def amplitude_pdf(r, r0: float, params: DiscreteChannelParams):
    """(2r/P_N) exp(-(r^2 + r0^2)/P_N) I_0(2 r r0 / P_N)."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("r must be non-negative")
    return np.exp(log_amplitude_pdf(r, r0, params.noise_power_w))


def log_coeff_ratio(m, r, p: MncPdfParams, branch: int = 1):
    """log(C_m(r) / f_r(r)) for integer m >= 1, broadcasting m against r.

    Written so that the large terms of log C_m and log f_r cancel
    analytically:

        log c_m = log(x/sin x) - (r^2 + r0^2)(x cot x - 1)/P_N
                  + log I_m(z0 x/sin x) - log I_0(z0),     z0 = 2 r r0 / P_N.
    """
    m = np.asarray(m)
    r = np.asarray(r, dtype=float)
    m_b, r_b = np.broadcast_arrays(m, r)
    pn = p.noise_power_w
    x = _xm(m_b, p, branch)
    xs = _x_over_sin(x)
    z0 = 2.0 * r_b * p.r0 / pn
    log_i0 = np.log(i0e(z0)) + z0
    log_im = log_iv_array(m_b.astype(np.int64), z0 * xs)
    with np.errstate(invalid="ignore"):
        out = np.log(xs) - (r_b * r_b + p.r0 * p.r0) * _x_cot_minus_one(x) / pn + log_im - log_i0
    # I_m(0) = 0 for m >= 1: the phase is uniform when r r0 = 0
    return np.where(z0 == 0, -np.inf + 0j, out)


def fourier_coeff(m: int, r: float, p: MncPdfParams, branch: int = 1) -> ComplexLog:
    """log C_m(r) as a :class:`ComplexLog`."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return ComplexLog.zero()
    val = complex(log_coeff_ratio(m, r, p, branch)) + float(log_amplitude_pdf(r, p.r0, p.noise_power_w))
    return ComplexLog.from_complex(val)


@dataclass
class PhaseSeries:
    """Normalised coefficients c_m(r) for m = 1..M on a set of radii.

    ``coeffs[i, m-1]`` is c_m(r_i); entries past each radius' own cut-off are
    zero.  ``truncated`` marks radii where m_max was reached first.
    """

    r: np.ndarray
    coeffs: np.ndarray
    m_used: np.ndarray
    truncated: np.ndarray

    @property
    def m_max_used(self) -> int:
        return int(self.m_used.max()) if self.m_used.size else 0


def phase_series(r, p: MncPdfParams) -> PhaseSeries:
    """Evaluate c_m(r) in blocks of m until every radius drops below the tolerance."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    n = r.size
    blocks = []
    m_used = np.zeros(n, dtype=int)
    done = r * p.r0 == 0
    m0 = 1
    while not done.all() and m0 <= p.m_max:
        ms = np.arange(m0, min(m0 + M_BLOCK, p.m_max + 1))
        with np.errstate(over="ignore", under="ignore"):
            c = np.exp(log_coeff_ratio(ms[None, :], r[:, None], p))
        c[done] = 0.0
        small = np.abs(c) < p.truncation_tol
        for i in np.flatnonzero(~done):
            hit = np.flatnonzero(small[i])
            if hit.size:
                k = hit[0]
                c[i, k:] = 0.0
                m_used[i] = ms[k] - 1
                done[i] = True
            else:
                m_used[i] = ms[-1]
        blocks.append(c)
        m0 += M_BLOCK
    coeffs = np.concatenate(blocks, axis=1) if blocks else np.zeros((n, 0), dtype=complex)
    return PhaseSeries(r, coeffs, m_used, ~done)


def conditional_pdf(r, theta, r0: float, theta0: float, p: MncPdfParams):
    """Joint density of (r, theta) given (r0, theta0), per sqrt(W) per radian.

    Broadcasts ``r`` against ``theta``.  Values in (-tol, 0) produced by
    truncation are clamped to zero.
    """
    if p.r0 != r0:
        p = MncPdfParams(r0, p.gamma_l, p.noise_power_w, p.truncation_tol, p.m_max)
    r_b, th_b = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(theta, dtype=float))
    if np.any(r_b < 0):
        raise ValueError("r must be non-negative")
    r_u, inv = np.unique(r_b, return_inverse=True)
    series = phase_series(r_u, p)
    f_r = np.exp(log_amplitude_pdf(r_u, r0, p.noise_power_w))
    c = series.coeffs[inv.ravel()]
    m = np.arange(1, c.shape[1] + 1)
    d = (th_b.ravel() - theta0)[:, None]
    phase = 1.0 + 2.0 * np.sum((c * np.exp(-1j * m[None, :] * d)).real, axis=1)
    out = f_r[inv.ravel()] * phase / (2.0 * np.pi)
    out = np.where((out < 0) & (out > -p.truncation_tol * f_r[inv.ravel()]), 0.0, out)
    return out.reshape(r_b.shape)


def phase_density_grid(series: PhaseSeries, n: int) -> np.ndarray:
    """f(theta | r) on theta_k = 2 pi k / n for every radius (rows)."""
    m = series.coeffs.shape[1]
    if n < 2 * m + 2:
        raise ValueError("grid too coarse for the number of terms")
    spec = np.zeros((series.r.size, n // 2 + 1), dtype=complex)
    spec[:, 0] = 1.0
    spec[:, 1 : m + 1] = np.conj(series.coeffs)
    return np.fft.irfft(spec, n, axis=1) * n / (2.0 * np.pi)


def phase_entropy(series: PhaseSeries, n_start: int = 512, n_cap: int = 8192, tol: float = 1e-6):
    """Entropy in nats of f(theta | r) per radius, by the periodic trapezoid rule.

    The grid starts at ``n_start`` points (raised to cover the series) and
    doubles until the largest change is below ``tol``.

    Returns
    -------
    h : ndarray
    n : int
        Final grid size.
    converged : bool
    """
    m = series.coeffs.shape[1]
    n = n_start
    while n < 4 * m + 4:
        n *= 2

    def ent(nn):
        f = phase_density_grid(series, nn)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(f > 0, f * np.log(np.where(f > 0, f, 1.0)), 0.0)
        return -(2.0 * np.pi / nn) * t.sum(axis=1)

    h = ent(n)
    while n < n_cap:
        h2 = ent(2 * n)
        n *= 2
        delta = np.max(np.abs(h2 - h)) if h.size else 0.0
        h = h2
        if delta < tol:
            return h, n, True
    return h, n, False
