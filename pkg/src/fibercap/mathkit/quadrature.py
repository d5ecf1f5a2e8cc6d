"""Adaptive Gauss-Legendre quadrature on finite and semi-infinite intervals."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

GL_ORDER = 20


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budget shared by the entropy and expectation integrals."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_nodes: int = 40_000
    tail_cutoff_sigmas: float = 12.0

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_nodes < 16:
            raise ValueError("max_nodes must be at least 16")

    def as_dict(self) -> dict:
        return {
            "abs_tol": self.abs_tol,
            "rel_tol": self.rel_tol,
            "max_nodes": self.max_nodes,
            "tail_cutoff_sigmas": self.tail_cutoff_sigmas,
        }


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    converged: bool
    n_evals: int

    def __float__(self):
        return float(self.value)


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def panel_nodes(edges, n: int = GL_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Flattened nodes and weights of an n-point rule on each panel of ``edges``."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(n)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _panel(f, a, b):
    x, w = gauss_legendre(GL_ORDER)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * float(np.dot(w, f(mid + half * x)))


def integrate(f, a: float, b: float, spec: QuadratureSpec = DEFAULT_SPEC) -> QuadResult:
    """Adaptive Gauss-Legendre on [a, b].

    Each panel is compared with the sum over its two halves; the panel with
    the largest discrepancy is split until the total estimate satisfies
    ``max(abs_tol, rel_tol*|I|)`` or the node budget is spent.

    Parameters
    ----------
    f : callable
        Vectorised integrand.
    a, b : float
        Finite limits.
    spec : QuadratureSpec

    Returns
    -------
    QuadResult
        ``converged`` is False when ``max_nodes`` ran out; ``value`` then holds
        the best estimate.
    """
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ValueError("use integrate_semi_infinite for unbounded domains")
    if a == b:
        return QuadResult(0.0, 0.0, True, 0)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0

    def refine(lo, hi):
        mid = 0.5 * (lo + hi)
        left, right = _panel(f, lo, mid), _panel(f, mid, hi)
        return left, right

    whole = _panel(f, a, b)
    left, right = refine(a, b)
    n_evals = 3 * GL_ORDER
    err0 = abs(left + right - whole)
    heap = [(-err0, a, b, left + right, err0)]
    total, err_total = left + right, err0
    while True:
        if err_total <= max(spec.abs_tol, spec.rel_tol * abs(total)):
            return QuadResult(sign * total, err_total, True, n_evals)
        if n_evals + 2 * GL_ORDER > spec.max_nodes:
            return QuadResult(sign * total, err_total, False, n_evals)
        _, lo, hi, val, err = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        parts = []
        for p, q in ((lo, mid), (mid, hi)):
            l2, r2 = refine(p, q)
            n_evals += 2 * GL_ORDER
            coarse = _panel(f, p, q)
            n_evals += GL_ORDER
            parts.append((p, q, l2 + r2, abs(l2 + r2 - coarse)))
        total -= val
        err_total -= err
        for p, q, v, e in parts:
            total += v
            err_total += e
            heapq.heappush(heap, (-e, p, q, v, e))


def integrate_semi_infinite(
    f, a: float, scale: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> QuadResult:
    """Integrate f over [a, inf) given its decay scale.

    The domain is truncated at ``a + tail_cutoff_sigmas*scale``; the next
    stretch of the same length is integrated as a tail check and, while it is
    not negligible, the cutoff is doubled (at most four times).
    """
    if scale <= 0:
        raise ValueError("decay scale must be positive")
    width = spec.tail_cutoff_sigmas * scale
    res = integrate(f, a, a + width, spec)
    value, error, ok, n = res.value, res.error, res.converged, res.n_evals
    lo = a + width
    for _ in range(4):
        tail = integrate(f, lo, lo + width, spec)
        value += tail.value
        error += tail.error
        ok = ok and tail.converged
        n += tail.n_evals
        if abs(tail.value) <= max(spec.abs_tol, spec.rel_tol * abs(value)):
            break
        lo += width
        width *= 2.0
    else:
        ok = False
    return QuadResult(value, error, ok, n)
