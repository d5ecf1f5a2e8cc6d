"""Capacity bounds for the memoryless zero-dispersion channel.

Upper bound (nats), for any lambda >= a > 0:

    U = a log((P + P_N)/a) + log(pi Gamma(a)) + lambda
        + sup_r0 [(a - lambda)(r0^2 + P_N)/(P + P_N) + (1 - 2a) E[log r | r0]
                  - h(r | r0) - h(theta | r, r0)].

For fixed a the minimum over lambda is a convex one-dimensional problem in
sigma = lambda - a >= 0, with the supremum taken over a dense r0 grid plus
an analytic tail; the outer problem in a is convex and solved by Brent's
method.

Lower bound: the mutual information of a chi-type input, |x|^2 ~ Gamma(k/2,
2P/k) with uniform phase, split into an amplitude and a phase term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import exp1, gammaln, i0e
from scipy.stats import gamma as gamma_dist

from ..mathkit.optimize import log_grid, minimize_scalar
from ..mathkit.quadrature import DEFAULT_SPEC, QuadratureSpec, gauss_legendre, panel_nodes
from ..params import LN2, DiscreteChannelParams
from .entropies import LOG_2PI, cond_entropies, phase_is_uniform, shared_table
from .pdf import MncPdfParams

R0_GRID_POINTS = 3000
R0_LO_FACTOR = 1e-3
# past R the statistics take their large-r0 form and the supremum is analytic
R_TAIL_POWER_FACTOR = 100.0
R_TAIL_NOISE_FACTOR = 1e6
SIGMA_RANGE = (1e-18, 1e3)
A_RANGE = (0.05, 20.0)
CHI_ORDERS = (0.5, 1.0, 1.5, 2.0, 2.5)
TIE_TOL_BITS = 1e-12


@dataclass(frozen=True)
class MncUpperBound:
    """Upper bound in bits with the optimising parameters."""

    bits: float
    lam: float
    a: float
    r0_star: tuple
    flags: tuple = ()


@dataclass(frozen=True)
class ChiInputLaw:
    """Input with |x|^2 ~ Gamma(k/2, scale 2P/k) and uniform phase.

    The amplitude |x| is chi distributed with k degrees of freedom, scaled so
    that E|x|^2 = P; k need not be an integer.
    """

    k: float
    power_w: float

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("k must be positive")
        if not self.power_w > 0:
            raise ValueError("power must be positive")

    @property
    def theta(self) -> float:
        return 2.0 * self.power_w / self.k

    def log_pdf(self, rho):
        """log density of |x|."""
        return _log_chi_pdf(np.asarray(rho, dtype=float), self.k, self.power_w)

    def amplitude_quantile_hi(self, tail: float = 1e-30) -> float:
        return math.sqrt(gamma_dist.isf(tail, 0.5 * self.k, scale=self.theta))

    def sample(self, n: int, seed=None) -> np.ndarray:
        rng = np.random.default_rng(seed)
        r0 = np.sqrt(rng.gamma(0.5 * self.k, self.theta, n))
        return r0 * np.exp(2j * np.pi * rng.random(n))


@dataclass(frozen=True)
class ChiLowerBound:
    """Chi-input mutual information in bits, split into its two terms."""

    total: float
    amplitude: float
    phase: float
    k: float


class _UpperProblem:
    """The bracket on a dense r0 grid up to R plus its analytic tail past R.

    Past R the phase is uniform, E[log r] = (log s + E1(s/P_N))/2 with
    s = r0^2, and h(r | r0) lies below its Gaussian limit by a gap that
    decreases in s; the gap measured at R bounds it on the whole tail.
    """

    def __init__(self, p: float, params: DiscreteChannelParams, spec: QuadratureSpec):
        self.p = p
        self.params = params
        self.spec = spec
        pn = params.noise_power_w
        self.total = p + pn
        self.flags = []
        r_tail = math.sqrt(max(R_TAIL_POWER_FACTOR * self.total, R_TAIL_NOISE_FACTOR * pn))
        for _ in range(8):
            if params.eta == 0 or phase_is_uniform(MncPdfParams.from_channel(r_tail, params)):
                break
            r_tail *= 10.0
        else:
            self.flags.append("phase not uniform at the tail radius")
        self.r_tail = r_tail
        self.r0 = np.geomspace(R0_LO_FACTOR * math.sqrt(self.total), r_tail, R0_GRID_POINTS)
        self.table = shared_table(params, spec)
        st = self.table.stats(self.r0)
        self.e_log_r, self.h_r, self.h_th = st[:, 0], st[:, 1], st[:, 2]
        self.t = (self.r0**2 + pn) / self.total
        end = cond_entropies(r_tail, params, spec)
        self.h_r_limit = 0.5 * math.log(math.pi * math.e * pn)
        self.gap = max(self.h_r_limit - end.h_r, 0.0)
        self.s_tail = r_tail * r_tail
        self.e1_tail = float(exp1(self.s_tail / pn))
        self.h_th_tail = end.h_theta

    def prefix(self, a: float) -> float:
        return a * math.log(self.total / a) + math.log(math.pi) + float(gammaln(a))

    def log_terms(self, a: float, e_log_r, h_r, h_th):
        """The bracket without its linear part a t."""
        return (1.0 - 2.0 * a) * e_log_r - h_r - h_th

    def tail_sup(self, a: float, sigma: float) -> tuple[float, float]:
        """Upper bound on sup over r0 >= R of the log terms minus sigma t.

        Returns (value, r0 at the supremum).
        """
        c = 0.5 * (1.0 - 2.0 * a)
        const = max(c, 0.0) * self.e1_tail - self.h_r_limit + self.gap - self.h_th_tail
        pn = self.params.noise_power_w
        if c > 0 and sigma <= 0:
            return math.inf, math.inf
        s = self.s_tail
        if c > 0 and c * self.total / sigma > s:
            s = c * self.total / sigma
        return -sigma * (s + pn) / self.total + c * math.log(s) + const, math.sqrt(s)

    def dual(self, a: float, h: np.ndarray, sigma: float) -> float:
        """sigma + sup over all r0 of the log terms minus sigma t."""
        grid = float(np.max(h - sigma * self.t))
        return sigma + max(grid, self.tail_sup(a, sigma)[0])

    def profile(self, a: float) -> tuple[float, float]:
        """min over lambda >= a for fixed a: (value, sigma = lambda - a).

        The log terms grow slower than t, so the supremum is finite only
        for lambda >= a; the dual is convex in sigma.
        """
        h = self.log_terms(a, self.e_log_r, self.h_r, self.h_th)
        sig = log_grid(*SIGMA_RANGE, 43)
        vals = np.array([self.dual(a, h, x) for x in sig])
        j = int(np.argmin(vals))
        lo, hi = sig[max(j - 1, 0)], sig[min(j + 1, sig.size - 1)]
        res = minimize_scalar(lambda x: self.dual(a, h, math.exp(x)), math.log(lo), math.log(hi), rel_tol=1e-10)
        best, sigma = res.fun, math.exp(res.x)
        zero = self.dual(a, h, 0.0)
        if zero <= best:
            best, sigma = zero, 0.0
        return self.prefix(a) + a + best, sigma

    def true_bracket(self, r0: float, a: float, sigma: float) -> float:
        """Log terms minus sigma t, from direct quadrature."""
        c = cond_entropies(r0, self.params, self.spec)
        t = (r0 * r0 + self.params.noise_power_w) / self.total
        return -sigma * t + self.log_terms(a, c.e_log_r, c.h_r, c.h_theta)

    def refine(self, a: float, sigma: float, idx: int) -> tuple[float, float]:
        """Maximise with true statistics around grid index idx."""
        lo = self.r0[max(idx - 2, 0)]
        hi = self.r0[min(idx + 2, self.r0.size - 1)]
        res = minimize_scalar(lambda x: -self.true_bracket(math.exp(x), a, sigma), math.log(lo), math.log(hi), rel_tol=1e-8)
        return math.exp(res.x), -res.fun


def upper_bound_details(
    p: float, params: DiscreteChannelParams, spec: QuadratureSpec = DEFAULT_SPEC
) -> MncUpperBound:
    """Upper bound in bits with optimiser diagnostics.

    The shape a is found by Brent's method on log a after a grid scan; the
    bound is then re-evaluated at the optimiser with the grid supremum
    refined by direct quadrature, so interpolation error cannot make it
    smaller than the true value of the objective at (lambda, a).
    """
    if not p > 0 or not math.isfinite(p):
        raise ValueError("power must be positive and finite")
    prob = _UpperProblem(p, params, spec)
    flags = list(prob.flags)
    grid = log_grid(*A_RANGE, 25)
    vals = [prob.profile(a)[0] for a in grid]
    j = int(np.argmin(vals))
    lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, grid.size - 1)]
    res = minimize_scalar(lambda la: prob.profile(math.exp(la))[0], math.log(lo), math.log(hi), rel_tol=1e-9)
    a = math.exp(res.x)
    if j in (0, grid.size - 1):
        flags.append(f"shape a at search edge ({a:.3g})")
    _, sigma = prob.profile(a)
    nats, r0_star = _evaluate(prob, a, sigma, flags)
    flags.extend(prob.table.flags())
    return MncUpperBound(nats / LN2, a + sigma, a, (r0_star,), tuple(flags))


def _evaluate(prob: _UpperProblem, a: float, sigma: float, flags: list) -> tuple[float, float]:
    """Objective in nats at (lambda = a + sigma, a), grid supremum refined by quadrature."""
    h = prob.log_terms(a, prob.e_log_r, prob.h_r, prob.h_th) - sigma * prob.t
    idx = int(np.argmax(h))
    r0_grid, best = prob.refine(a, sigma, idx)
    tail, r0_tail = prob.tail_sup(a, sigma)
    r0_star = r0_grid
    if tail > best:
        best, r0_star = tail, r0_tail
    if idx >= prob.r0.size - 2 and tail < best:
        flags.append("grid supremum at the tail radius")
    return prob.prefix(a) + a + sigma + best, r0_star


def upper_objective(
    p: float, lam: float, a: float, params: DiscreteChannelParams, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """The upper-bound objective in bits at a fixed (lambda, a), without minimising.

    Every feasible pair gives a valid bound; lambda < a gives +inf.
    """
    if not p > 0 or not math.isfinite(p):
        raise ValueError("power must be positive and finite")
    if not a > 0:
        raise ValueError("a must be positive")
    if lam < a:
        return math.inf
    prob = _UpperProblem(p, params, spec)
    nats, _ = _evaluate(prob, a, lam - a, [])
    return nats / LN2


def upper_bound(p: float, params: DiscreteChannelParams, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Upper bound on capacity in bits per channel use."""
    return upper_bound_details(p, params, spec).bits


def _log_chi_pdf(rho, k: float, p: float):
    """log density of |x| when |x|^2 ~ Gamma(k/2, scale 2P/k)."""
    theta = 2.0 * p / k
    with np.errstate(divide="ignore"):
        return math.log(2.0) + (k - 1.0) * np.log(rho) - rho * rho / theta - 0.5 * k * math.log(theta) - gammaln(0.5 * k)


def _log_rician_kernel(r, u, pn: float):
    """log f(r | rho) with rho = r + u, (r - rho)^2 = u^2 exact."""
    rho = r + u
    with np.errstate(divide="ignore"):
        return np.log(2.0 * r / pn) - u * u / pn + np.log(i0e(2.0 * r * rho / pn))


def chi_output_pdf(r, k: float, p: float, params: DiscreteChannelParams, n_sigmas: float = 12.0, n_inner: int = 16):
    """Density of |y| under the chi input, by smoothing with the Rician kernel.

    Windows that reach rho = 0 are integrated in v = sqrt(rho), which makes
    the rho^(k-1) factor smooth for half-integer k; geometric panels in v
    resolve inputs concentrated well inside a noise width.
    """
    pn = params.noise_power_w
    sigma = math.sqrt(0.5 * pn)
    rho_max = ChiInputLaw(k, p).amplitude_quantile_hi()
    r = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.zeros_like(r)
    x, w = gauss_legendre(n_inner)
    span = n_sigmas * sigma
    # graded panels in v for windows touching zero
    near = (r - span <= 0) & (r > 0)
    if near.any():
        rn = r[near]
        v_hi = np.sqrt(np.minimum(rn + span, rho_max))
        # graded panels near v = 0 plus uniform ones so that no panel spans
        # more than about one noise width in rho = v^2
        frac = np.unique(np.concatenate(([0.0], 2.0 ** -np.arange(30, -1, -1.0), np.linspace(0.0, 1.0, 33))))
        a_, b_ = frac[:-1], frac[1:]
        t = (0.5 * (b_ - a_)[:, None] * x[None, :] + 0.5 * (b_ + a_)[:, None]).ravel()
        tw = (0.5 * (b_ - a_)[:, None] * w[None, :]).ravel()
        v = v_hi[:, None] * t[None, :]
        rho = v * v
        u = rho - rn[:, None]
        log_in = _log_chi_pdf(rho, k, p) + np.log(2.0 * v)
        vals = np.exp(log_in + _log_rician_kernel(rn[:, None], u, pn))
        out[near] = v_hi * np.sum(tw[None, :] * np.where(v > 0, vals, 0.0), axis=1)
    far = r - span > 0
    if far.any():
        rf = r[far]
        u_hi = np.minimum(span, rho_max - rf)
        ok = u_hi > -span
        edges = np.linspace(-1.0, 1.0, 13)
        t, tw = panel_nodes(edges, n_inner)
        # map [-1, 1] onto [-span, u_hi]
        half = 0.5 * (u_hi + span)
        mid = 0.5 * (u_hi - span)
        u = mid[:, None] + half[:, None] * t[None, :]
        rho = rf[:, None] + u
        vals = np.exp(_log_chi_pdf(rho, k, p) + _log_rician_kernel(rf[:, None], u, pn))
        res = half * np.sum(tw[None, :] * vals, axis=1)
        out[far] = np.where(ok, res, 0.0)
    return out


def _outer_r_nodes(k: float, p: float, pn: float, spec: QuadratureSpec, n_outer: int = 24):
    sigma = math.sqrt(0.5 * pn)
    rho_max = ChiInputLaw(k, p).amplitude_quantile_hi()
    r_max = rho_max + spec.tail_cutoff_sigmas * sigma
    scale = min(sigma, math.sqrt(p)) / 8.0
    edges = [0.0, scale]
    while edges[-1] < r_max:
        edges.append(min(1.5 * edges[-1], r_max))
    fine = np.arange(0.0, min(r_max, 40.0 * sigma), 0.5 * sigma)
    edges = np.unique(np.concatenate((edges, fine)))
    return panel_nodes(edges, n_outer)


def _input_r0_nodes(k: float, p: float, n: int = 16):
    """Nodes in v = sqrt(r0) with weights already multiplied by the chi density."""
    v_hi = math.sqrt(ChiInputLaw(k, p).amplitude_quantile_hi())
    edges = np.concatenate(([0.0], v_hi * 2.0 ** -np.arange(40, -1, -1.0)))
    # uniform panels across the bulk of the input
    edges = np.unique(np.concatenate((edges, np.linspace(0.0, v_hi, 17))))
    v, w = panel_nodes(edges, n)
    v, w = v[v > 0], w[v > 0]
    rho = v * v
    dens = np.exp(_log_chi_pdf(rho, k, p)) * 2.0 * v
    return rho, w * dens


def chi_lower_bound(
    p: float, k: float, params: DiscreteChannelParams, spec: QuadratureSpec = DEFAULT_SPEC
) -> ChiLowerBound:
    """Mutual information in bits achieved by the chi input of order k.

    amplitude = h(r) - E[h(r | r0)],  phase = log(2 pi) - E[h(theta | r, r0)].
    """
    if not p > 0 or not math.isfinite(p):
        raise ValueError("power must be positive and finite")
    if not k > 0:
        raise ValueError("k must be positive")
    pn = params.noise_power_w
    nodes, weights = _outer_r_nodes(k, p, pn, spec)
    f = chi_output_pdf(nodes, k, p, params, spec.tail_cutoff_sigmas)
    pos = f > 0
    h_r = -float(np.sum(weights[pos] * f[pos] * np.log(f[pos])))
    rho, wr = _input_r0_nodes(k, p)
    stats = shared_table(params, spec).stats(rho)
    mass = float(np.sum(wr))
    e_h_r = float(np.sum(wr * stats[:, 1])) / mass
    e_h_th = float(np.sum(wr * stats[:, 2])) / mass
    amp = (h_r - e_h_r) / LN2
    phase = (LOG_2PI - e_h_th) / LN2
    return ChiLowerBound(amp + phase, amp, phase, k)


def max_chi_lower_bound(
    p: float, params: DiscreteChannelParams, spec: QuadratureSpec = DEFAULT_SPEC, orders=CHI_ORDERS
) -> tuple[float, float]:
    """Best chi lower bound over the given orders; ties go to the smaller k."""
    best, k_star = -math.inf, None
    for k in sorted(orders):
        v = chi_lower_bound(p, k, params, spec).total
        if v > best + TIE_TOL_BITS:
            best, k_star = v, k
    return best, k_star
