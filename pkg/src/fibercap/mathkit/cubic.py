"""Real roots of cubics and the inverse of g(x) = x + eta^2 x^3."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class NoPositiveRootError(ValueError):
    """The cubic has no positive real root (coefficients outside the family)."""


class RootConvergenceError(ArithmeticError):
    """A positive root exists but polishing failed to reach the tolerance."""


@dataclass(frozen=True)
class CubicCoeffs:
    """Coefficients of ``c3 x^3 + c2 x^2 + c1 x + c0``."""

    c3: float
    c2: float
    c1: float
    c0: float

    def __post_init__(self):
        if self.c3 == 0:
            raise ValueError("leading coefficient must be non-zero")

    def __call__(self, x):
        return ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0

    def derivative(self, x):
        return (3.0 * self.c3 * x + 2.0 * self.c2) * x + self.c1

    def scale(self, x):
        """Magnitude of the largest monomial at ``x``; used to normalise residuals."""
        return max(abs(self.c3) * x**3, abs(self.c2) * x**2, abs(self.c1) * x, abs(self.c0))


def lambda_cubic(power: float, eta: float) -> CubicCoeffs:
    """P x^3 - x^2 + 6 P eta^2 x - 18 eta^2, whose root is the optimal input rate."""
    return CubicCoeffs(power, -1.0, 6.0 * power * eta * eta, -18.0 * eta * eta)


def real_roots(c: CubicCoeffs) -> list[float]:
    """All real roots of the cubic, by the numerically stable Cardano form."""
    a = c.c2 / c.c3
    b = c.c1 / c.c3
    d = c.c0 / c.c3
    shift = a / 3.0
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + d
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc >= 0:
        # one real root; A - p/(3A) avoids cancellation between the two cube roots
        big = -math.copysign(1.0, q) * np.cbrt(abs(q) / 2.0 + math.sqrt(disc))
        t = big - p / (3.0 * big) if big != 0 else 0.0
        return [t - shift]
    r = 2.0 * math.sqrt(-p / 3.0)
    phi = math.acos(max(-1.0, min(1.0, 3.0 * q / (p * r))))
    return sorted(r * math.cos((phi - 2.0 * math.pi * k) / 3.0) - shift for k in range(3))


def _polish(c: CubicCoeffs, x: float, steps: int = 1) -> float:
    for _ in range(steps):
        d = c.derivative(x)
        if d == 0:
            break
        x_new = x - c(x) / d
        if not math.isfinite(x_new) or x_new <= 0:
            break
        x = x_new
    return x


def unique_positive_root(c: CubicCoeffs, abs_tol: float = 1e-10) -> float:
    """The single positive root of a cubic with f(0) <= 0 and one sign change.

    Parameters
    ----------
    c : CubicCoeffs
    abs_tol : float
        Bound on ``|f(x*)| / scale(x*)``.

    Raises
    ------
    NoPositiveRootError
        If no positive real root exists.
    RootConvergenceError
        If the polished root still violates ``abs_tol``.
    """
    positive = [x for x in real_roots(c) if x > 0]
    if not positive:
        raise NoPositiveRootError(f"no positive root for {c}")
    x = _polish(c, max(positive), steps=1)
    if abs(c(x)) > abs_tol * c.scale(x):
        x = _polish(c, x, steps=4)
        if abs(c(x)) > abs_tol * c.scale(x):
            raise RootConvergenceError(f"residual {c(x):.3e} at x={x:.6e}")
    return x


def q_inverse(v, eta: float):
    """Unique s >= 0 with s + eta^2 s^3 = v (elementwise).

    The real Cardano branch is written in the cancellation-free form
    s = 2/(sqrt(3) eta) * sinh(asinh(3 sqrt(3) eta v / 2) / 3), followed by a
    Newton step.
    """
    v_arr = np.asarray(v, dtype=float)
    if np.any(v_arr < 0):
        raise ValueError("q_inverse requires v >= 0")
    if eta < 0:
        raise ValueError("eta must be non-negative")
    if eta == 0:
        return v_arr.copy() if v_arr.ndim else float(v_arr)
    k = math.sqrt(3.0) * eta
    s = (2.0 / k) * np.sinh(np.arcsinh(1.5 * k * v_arr) / 3.0)
    e2 = eta * eta
    s = s - (s + e2 * s**3 - v_arr) / (1.0 + 3.0 * e2 * s * s)
    s = np.maximum(s, 0.0)
    return s if s.ndim else float(s)
