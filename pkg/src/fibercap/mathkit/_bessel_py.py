"""Pure numpy kernel for log I_m(z), integer m >= 0, complex z.

Three evaluation routes are combined:

* ascending power series, for small |z| away from the imaginary axis;
* the Debye uniform expansion in s = sqrt(m^2 + z^2), whenever |s| is large,
  with the recessive exp(-z)-type contribution added near the imaginary axis;
* the trapezoid rule on I_m(z) = (1/2 pi) int exp(z cos t - i m t) dt over a
  period, with the contour shifted off the real axis to the saddle height, for
  the remaining pocket (moderate |s|, argument near the imaginary axis) where
  the series would cancel catastrophically.

Arguments are first folded into the closed first quadrant using
I_m(-z) = (-1)^m I_m(z) and I_m(conj z) = conj I_m(z).
"""

import numpy as np
from scipy.special import gammaln

from ._debye import DEBYE_TERMS, debye_table

DEBYE_MIN_S = 40.0
SERIES_MAX_TERMS = 160
RECESSIVE_CUTOFF = 20.0

LOG_2PI = np.log(2.0 * np.pi)


def _series(m, z):
    """log I_m(z) by the ascending series; z != 0."""
    q = 0.25 * z * z
    term = np.ones_like(z)
    total = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, SERIES_MAX_TERMS):
        term = term * q / (k * (m + k))
        total = total + np.where(active, term, 0.0)
        active &= np.abs(term) > 1e-17 * np.abs(total)
        if not active.any():
            break
    return m * np.log(0.5 * z) - gammaln(m + 1.0) + np.log(total)


def _debye(m, z, s):
    """log I_m(z) by the uniform expansion; z in the closed first quadrant."""
    table = debye_table(DEBYE_TERMS)
    p2 = (m / s) ** 2
    inv_s = 1.0 / s
    s_plus = np.zeros_like(z)
    s_minus = np.zeros_like(z)
    power = np.ones_like(z)
    for k in range(DEBYE_TERMS):
        row = table[k, : k + 1]
        vk = np.zeros_like(z)
        for c in row[::-1]:
            vk = vk * p2 + c
        w = vk * power
        s_plus = s_plus + w
        s_minus = s_minus + (w if k % 2 == 0 else -w)
        power = power * inv_s
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(m > 0, z / (m + s), 1.0)
        eta = s + m * np.log(ratio)
    head = eta - 0.5 * (LOG_2PI + np.log(s))
    recessive = (np.abs(z) > m) & (eta.real < RECESSIVE_CUTOFF)
    sign = np.where(m % 2 == 0, 1.0, -1.0)
    total = np.where(
        recessive,
        s_plus + 1j * sign * np.exp(-2.0 * np.where(recessive, eta, 0.0)) * s_minus,
        s_plus,
    )
    return head + np.log(total)


GOLDEN = 0.5 * (np.sqrt(5.0) - 1.0)
SADDLE_ITERS = 40


def _height(m, x, y, tau):
    return np.hypot(x * np.cosh(tau), y * np.sinh(tau)) + m * tau


def _contour_shift(m, z):
    """Imaginary shift tau minimising max_t |exp(z cos(t + i tau) - i m (t + i tau))|.

    The height is convex in tau, so a golden-section search on [-8, 8] is used.
    Works elementwise on arrays; returns (tau, height).
    """
    m = np.asarray(m, dtype=float)
    x = np.abs(np.real(z))
    y = np.abs(np.imag(z))
    lo = np.full(np.shape(x), -8.0)
    hi = np.full(np.shape(x), 8.0)
    a = hi - GOLDEN * (hi - lo)
    b = lo + GOLDEN * (hi - lo)
    fa = _height(m, x, y, a)
    fb = _height(m, x, y, b)
    for _ in range(SADDLE_ITERS):
        left = fa < fb
        hi = np.where(left, b, hi)
        lo = np.where(left, lo, a)
        a_new = np.where(left, hi - GOLDEN * (hi - lo), b)
        b_new = np.where(left, a, lo + GOLDEN * (hi - lo))
        fa_new = np.where(left, _height(m, x, y, a_new), fb)
        fb_new = np.where(left, fa, _height(m, x, y, b_new))
        a, b, fa, fb = a_new, b_new, fa_new, fb_new
    tau = 0.5 * (lo + hi)
    return tau, _height(m, x, y, tau)


def _trapezoid(m, z):
    out = np.empty(z.shape, dtype=complex)
    for idx in np.ndindex(z.shape):
        mi, zi = int(m[idx]), complex(z[idx])
        tau, height = _contour_shift(mi, zi)
        n = int(mi + abs(zi) * np.cosh(tau) + 10.0 * (abs(zi) + mi) ** (1.0 / 3.0) + 48)
        t = 2.0 * np.pi * np.arange(n) / n + 1j * tau
        vals = np.exp(zi * np.cos(t) - 1j * mi * t - height)
        out[idx] = height + np.log(vals.mean())
    return out


def log_iv(m, z):
    """Vectorised log I_m(z). Zeros of I_m (z = 0, m >= 1) map to -inf."""
    m = np.asarray(m, dtype=np.int64)
    z = np.asarray(z, dtype=complex)
    m, z = np.broadcast_arrays(m, z)
    shape = z.shape
    m = m.ravel()
    z = z.ravel()
    if np.any(m < 0):
        raise ValueError("order must be non-negative")

    flip = z.real < 0
    w = np.where(flip, -z, z)
    conj = w.imag < 0
    w = np.where(conj, np.conj(w), w)
    mf = m.astype(float)

    out = np.empty(w.shape, dtype=complex)
    zero = w == 0
    out[zero] = np.where(m[zero] == 0, 0.0, -np.inf)

    s = np.sqrt(mf * mf + w * w)
    aw = np.abs(w)
    abs_s = np.abs(s)
    # the Debye terms scale like (p^2 / s)^k with p = m / s, so the expansion
    # degrades near the turning points z = +-i m even when |s| is large
    reach = abs_s * np.minimum(1.0, (abs_s / np.maximum(mf, 1.0)) ** 2)
    debye = ~zero & (abs_s >= DEBYE_MIN_S) & (reach >= DEBYE_MIN_S)
    # outside the Debye zone the series is used unless it would cancel: it
    # loses about log I_m(|z|) - log|I_m(z)| digits, and the saddle height of
    # the shifted trapezoid contour is a sharp estimate of log|I_m(z)|
    rest = ~zero & ~debye
    series = np.zeros_like(rest)
    if rest.any():
        mr, wr = mf[rest], w[rest]
        ar = np.abs(wr)
        s_abs = np.sqrt(mr * mr + ar * ar)
        series_scale = s_abs + mr * np.log(ar / (mr + s_abs))
        series[rest] = (series_scale - _contour_shift(mr, wr)[1] <= 5.0) | (ar <= 2.0)
    trap = ~zero & ~debye & ~series

    if debye.any():
        out[debye] = _debye(mf[debye], w[debye], s[debye])
    if series.any():
        out[series] = _series(mf[series], w[series])
    if trap.any():
        out[trap] = _trapezoid(m[trap], w[trap])

    out = np.where(conj, np.conj(out), out)
    out = out + np.where(flip & (m % 2 == 1), 1j * np.pi, 0.0)
    return out.reshape(shape)
