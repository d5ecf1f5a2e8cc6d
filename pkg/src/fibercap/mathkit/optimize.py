"""Bounded scalar minimisation: Brent's method plus grid bracketing."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GOLDEN = 0.5 * (3.0 - math.sqrt(5.0))


@dataclass(frozen=True)
class OptResult:
    x: float
    fun: float
    at_boundary: bool
    n_evals: int
    converged: bool


def minimize_scalar(
    f, lo: float, hi: float, rel_tol: float = 1e-10, abs_tol: float = 1e-14, max_iter: int = 200
) -> OptResult:
    """Minimise a unimodal f on [lo, hi] by golden section with parabolic steps.

    The endpoints are evaluated as well, so a monotone f returns the better
    endpoint with ``at_boundary`` set; callers treat that as "bracket too
    small".
    """
    if not hi > lo:
        raise ValueError("need lo < hi")
    a, b = lo, hi
    x = w = v = a + GOLDEN * (b - a)
    fx = fw = fv = f(x)
    d = e = 0.0
    n = 1
    converged = False
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        tol = rel_tol * abs(x) + abs_tol
        tol2 = 2.0 * tol
        if abs(x - m) <= tol2 - 0.5 * (b - a):
            converged = True
            break
        use_golden = True
        if abs(e) > tol:
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0:
                p = -p
            q = abs(q)
            if abs(p) < abs(0.5 * q * e) and p > q * (a - x) and p < q * (b - x):
                e, d = d, p / q
                u = x + d
                if u - a < tol2 or b - u < tol2:
                    d = tol if x < m else -tol
                use_golden = False
        if use_golden:
            e = (b - x) if x < m else (a - x)
            d = GOLDEN * e
        u = x + (d if abs(d) >= tol else math.copysign(tol, d))
        fu = f(u)
        n += 1
        if fu <= fx:
            if u < x:
                b = x
            else:
                a = x
            v, fv, w, fw, x, fx = w, fw, x, fx, u, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, fv, w, fw = w, fw, u, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    f_lo, f_hi = f(lo), f(hi)
    n += 2
    at_boundary = False
    if f_lo <= fx:
        x, fx, at_boundary = lo, f_lo, True
    if f_hi < fx:
        x, fx, at_boundary = hi, f_hi, True
    span = hi - lo
    if abs(x - lo) <= 1e-9 * span or abs(hi - x) <= 1e-9 * span:
        at_boundary = True
    return OptResult(x, fx, at_boundary, n, converged)


def maximize_scalar(f, lo: float, hi: float, **kw) -> OptResult:
    res = minimize_scalar(lambda t: -f(t), lo, hi, **kw)
    return OptResult(res.x, -res.fun, res.at_boundary, res.n_evals, res.converged)


def grid_bracket(values, grid) -> tuple[float, float, int, bool]:
    """Bracket around the smallest grid value.

    Returns (lo, hi, index, on_edge) where ``on_edge`` is True if the best
    point is the first or last grid point.
    """
    values = np.asarray(values, dtype=float)
    j = int(np.nanargmin(values))
    last = len(grid) - 1
    lo = grid[max(j - 1, 0)]
    hi = grid[min(j + 1, last)]
    return float(lo), float(hi), j, j in (0, last)


def log_grid(lo: float, hi: float, n: int = 64) -> np.ndarray:
    return np.geomspace(lo, hi, n)
