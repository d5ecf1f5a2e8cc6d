"""Regular perturbative channel y = x + j eta |x|^2 x + n.

Bounds are computed in nats internally and returned in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .mathkit.cubic import lambda_cubic, q_inverse, unique_positive_root
from .mathkit.noncentral import rician_pdf_offset
from .mathkit.optimize import grid_bracket, minimize_scalar
from .mathkit.quadrature import DEFAULT_SPEC, QuadratureSpec, gauss_legendre, integrate, panel_nodes
from .params import LN2, DiscreteChannelParams

CONSTRAINT_RTOL = 1e-9
S_GRID_POINTS = 64


@dataclass(frozen=True)
class RpcInputLaw:
    """Input power law f_s(s) = zeta (3 eta^2 s^2 + 1) exp(-lambda s).

    It is the mixture of Exp(lambda) with weight zeta/lambda and
    Gamma(3, lambda) with weight 6 zeta eta^2 / lambda^3.
    """

    lam: float
    zeta: float
    eta: float

    @classmethod
    def from_rate(cls, lam: float, eta: float) -> "RpcInputLaw":
        return cls(lam, lam**3 / (lam * lam + 6.0 * eta * eta), eta)

    @property
    def weights(self) -> tuple[float, float]:
        return self.zeta / self.lam, 6.0 * self.zeta * self.eta**2 / self.lam**3

    @property
    def mean(self) -> float:
        """E[s] = (18 eta^2 + lambda^2) / (lambda (6 eta^2 + lambda^2))."""
        e2, lam = self.eta**2, self.lam
        return (18.0 * e2 + lam * lam) / (lam * (6.0 * e2 + lam * lam))

    def pdf(self, s):
        s = np.asarray(s, dtype=float)
        return np.where(s >= 0, self.zeta * (3.0 * self.eta**2 * s * s + 1.0) * np.exp(-self.lam * s), 0.0)

    def pdf_t(self, t):
        """Density of t = s + eta^2 s^3, zeta exp(-lambda q(t))."""
        return self.zeta * np.exp(-self.lam * q_inverse(np.asarray(t, dtype=float), self.eta))

    def entropy_t(self) -> float:
        """Differential entropy of t in nats (closed form)."""
        return -math.log(self.zeta) + self.zeta * (1.0 / self.lam + 18.0 * self.eta**2 / self.lam**3)

    def s_quantile_hi(self, tail: float = 60.0) -> float:
        """A power beyond which the density is below exp(-tail) relative."""
        return (tail + 3.0 * math.log1p(tail)) / self.lam


@dataclass
class RpcUpperBound:
    bits: float
    mu_star: float
    lambda_star: float
    envelope: float
    flags: list = field(default_factory=list)
    n_evals: int = 0


def _check_power(p):
    if not (p > 0 and math.isfinite(p)):
        raise ValueError("power must be positive and finite")


def lower_bound_nats(p: float, params: DiscreteChannelParams) -> tuple[float, RpcInputLaw]:
    _check_power(p)
    eta, pn = params.eta, params.noise_power_w
    lam = unique_positive_root(lambda_cubic(p, eta))
    law = RpcInputLaw.from_rate(lam, eta)
    resid = law.mean / p - 1.0
    if abs(resid) > CONSTRAINT_RTOL:
        raise ArithmeticError(f"power constraint residual {resid:.3e} at P={p:.3e}")
    e2 = eta * eta
    den = lam * lam + 6.0 * e2
    log_ratio = math.log(den / (lam**3 * pn)) + 12.0 * e2 / den
    # log(exp(a) + 1) without overflow
    nats = log_ratio + math.log1p(math.exp(-log_ratio)) if log_ratio > 0 else math.log1p(math.exp(log_ratio))
    return nats, law


def lower_bound(p: float, params: DiscreteChannelParams) -> tuple[float, RpcInputLaw]:
    """Closed-form lower bound and the input law that attains it.

    The rate lambda solves P x^3 - x^2 + 6 P eta^2 x - 18 eta^2 = 0, which makes
    the power constraint tight; the constraint residual is checked.

    Returns
    -------
    bits : float
    law : RpcInputLaw
    """
    nats, law = lower_bound_nats(p, params)
    return nats / LN2, law


def power_constraint(lam: float, eta: float) -> float:
    """Average power (18 eta^2 + lambda^2) / (lambda (6 eta^2 + lambda^2)) of the law."""
    return RpcInputLaw.from_rate(lam, eta).mean


# ---------------------------------------------------------------------------
# upper bound with the noncentral expectation of q


class _QMean:
    """Memoised s -> E[q(|y|^2) | |x|^2 = s] - s for one parameter set."""

    def __init__(self, params: DiscreteChannelParams, spec: QuadratureSpec):
        self.eta = params.eta
        self.pn = params.noise_power_w
        self.sigma = math.sqrt(0.5 * self.pn)
        self.spec = spec
        self.cache: dict[float, float] = {}
        self.n_evals = 0

    def excess(self, s: float) -> float:
        """E[q(|y|^2)] - s, integrated as such to avoid cancellation."""
        s = float(s)
        hit = self.cache.get(s)
        if hit is not None:
            return hit
        eta, pn = self.eta, self.pn
        r0 = math.sqrt(s + eta * eta * s**3)
        c = self.spec.tail_cutoff_sigmas
        lo, hi = max(0.0, r0 - c * self.sigma), r0 + c * self.sigma

        def integrand(u):
            r = r0 + u
            return (q_inverse(r * r, eta) - s) * rician_pdf_offset(u, r0, pn)

        val = integrate(integrand, lo - r0, hi - r0, self.spec).value
        self.cache[s] = val
        self.n_evals += 1
        return val

    def mean(self, s: float) -> float:
        return s + self.excess(s)


def upper_objective_nats(
    mu: float, lam: float, p: float, params: DiscreteChannelParams, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """The noncentral-expectation objective at a fixed pair (mu, lambda), in nats.

    Any feasible pair gives a valid upper bound.  Returns +inf when lambda is
    below mu (P + P_N), where the inner supremum over s diverges.
    """
    pn = params.noise_power_w
    if mu <= 0 or lam < 0:
        raise ValueError("need mu > 0 and lambda >= 0")
    kappa = lam / (mu * (p + pn))
    if kappa < 1.0:
        return math.inf
    qm = _QMean(params, spec)
    inner, _, _ = _inner_max(qm, kappa, p, pn)
    head = math.log((mu * mu + 6.0 * params.eta**2) / (mu**3 * math.e * pn))
    return head + lam + mu * (inner - kappa * pn)


def _inner_max(qm: _QMean, kappa: float, p: float, pn: float) -> tuple[float, float, bool]:
    """max_s E[q] - kappa s on [0, S] with a log-grid pre-scan; S grows once if needed."""
    s_hi = 20.0 * (p + pn)
    flagged = False
    for attempt in range(2):
        grid = np.concatenate(([0.0], np.geomspace(1e-6 * (p + pn), s_hi, S_GRID_POINTS)))
        vals = np.array([qm.excess(s) + (1.0 - kappa) * s for s in grid])
        lo, hi, j, edge = grid_bracket(-vals, grid)
        if not (edge and j == len(grid) - 1):
            break
        if attempt == 0:
            s_hi *= 10.0
        else:
            flagged = True
    res = minimize_scalar(lambda s: -(qm.excess(s) + (1.0 - kappa) * s), lo, hi, rel_tol=1e-9)
    best = max(-res.fun, vals[j])
    s_star = res.x if -res.fun >= vals[j] else grid[j]
    return best, s_star, flagged


def _concave_envelope(qm: _QMean, p: float, pn: float) -> tuple[float, float, list]:
    """Upper concave envelope of s -> E[q(|y|^2)|s] at s = P.

    Computed as min over slopes kappa >= 1 of kappa P + max_s (E[q] - kappa s);
    the slope cannot drop below 1 because E[q] - s stays bounded.
    """
    flags = []
    cache: dict[float, float] = {}

    def dual(kappa):
        if kappa not in cache:
            val, _, edge = _inner_max(qm, kappa, p, pn)
            if edge:
                flags.append(f"inner max on s boundary at kappa={kappa:.6g}")
            cache[kappa] = kappa * p + val
        return cache[kappa]

    grid = 1.0 + np.concatenate(([0.0], np.geomspace(1e-9, 1e2, 24)))
    vals = [dual(k) for k in grid]
    lo, hi, j, edge = grid_bracket(vals, grid)
    if edge and j == len(grid) - 1:
        flags.append("envelope slope above grid")
    if j == 0:
        return vals[0], 1.0, flags
    res = minimize_scalar(dual, lo, hi, rel_tol=1e-10)
    if res.fun <= vals[j]:
        return res.fun, res.x, flags
    return vals[j], float(grid[j]), flags


def _mu_bound(coef: float, p_n: float, eta: float) -> tuple[float, float]:
    """min over mu of log((mu^2 + 6 eta^2)/(mu^3 e P_N)) + mu*coef; returns (nats, mu)."""
    if eta == 0:
        mu = 1.0 / coef
    else:
        mu = unique_positive_root(lambda_cubic(coef, eta))
    return simple_objective_nats(mu, coef, p_n, eta), mu


def simple_objective_nats(mu: float, coef: float, p_n: float, eta: float) -> float:
    return math.log((mu * mu + 6.0 * eta * eta) / (mu**3 * math.e * p_n)) + mu * coef


def upper_bound_details(
    p: float, params: DiscreteChannelParams, spec: QuadratureSpec = DEFAULT_SPEC
) -> RpcUpperBound:
    """Noncentral-expectation upper bound with optimiser diagnostics.

    For fixed mu the minimum over lambda equals mu times the concave envelope
    of E[q(|y|^2)|s] at P (a Lagrange-duality identity), so the outer search
    reduces to a one-dimensional dual over the slope and a cubic for mu.
    """
    _check_power(p)
    pn = params.noise_power_w
    qm = _QMean(params, spec)
    env, kappa, flags = _concave_envelope(qm, p, pn)
    nats, mu = _mu_bound(env, pn, params.eta)
    return RpcUpperBound(
        bits=nats / LN2,
        mu_star=mu,
        lambda_star=kappa * mu * (p + pn),
        envelope=env,
        flags=flags,
        n_evals=qm.n_evals,
    )


def upper_bound(p: float, params: DiscreteChannelParams, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Upper bound in bits from the noncentral chi-squared expectation of q."""
    return upper_bound_details(p, params, spec).bits


def simple_b(params: DiscreteChannelParams) -> float:
    """B = P_N + sqrt(pi P_N) / (12^(3/8) sqrt((sqrt 3 - 1) eta))."""
    if params.eta <= 0:
        raise ValueError("the closed-form upper bound needs eta > 0")
    pn = params.noise_power_w
    return pn + math.sqrt(math.pi * pn) / (12.0**0.375 * math.sqrt((math.sqrt(3.0) - 1.0) * params.eta))


def upper_bound_simple_details(p: float, params: DiscreteChannelParams) -> tuple[float, float]:
    """(bits, mu_star) of the closed-form upper bound."""
    _check_power(p)
    b = simple_b(params)
    nats, mu = _mu_bound(p + b, params.noise_power_w, params.eta)
    return nats / LN2, mu


def upper_bound_simple(p: float, params: DiscreteChannelParams) -> float:
    return upper_bound_simple_details(p, params)[0]


def prelog_constants(params: DiscreteChannelParams) -> tuple[float, float]:
    """High-power offsets of the lower and closed-form upper bounds, in bits.

    Returns (log2(2 eta^2 e^2 / (9 P_N)), log2(6 eta^2 / P_N)).
    """
    if params.eta <= 0:
        raise ValueError("pre-log constants need eta > 0")
    e2, pn = params.eta**2, params.noise_power_w
    return math.log2(2.0 * e2 * math.e**2 / (9.0 * pn)), math.log2(6.0 * e2 / pn)


# ---------------------------------------------------------------------------
# sampling, exact mutual information, simulation


def sample_input(law: RpcInputLaw, n: int, seed=None) -> np.ndarray:
    """Draw n input powers s from the two-component mixture."""
    rng = np.random.default_rng(seed)
    w_exp, _ = law.weights
    pick_exp = rng.random(n) < w_exp
    shape = np.where(pick_exp, 1.0, 3.0)
    return rng.gamma(shape, 1.0 / law.lam)


def sample_symbols(law: RpcInputLaw, n: int, seed=None) -> np.ndarray:
    """Complex inputs with power drawn from ``law`` and uniform phase."""
    rng = np.random.default_rng(seed)
    s = sample_input(law, n, rng)
    return np.sqrt(s) * np.exp(2j * np.pi * rng.random(n))


def complex_noise(rng: np.random.Generator, shape, noise_power: float) -> np.ndarray:
    """Circular complex Gaussian samples with E|n|^2 = noise_power."""
    sd = math.sqrt(0.5 * noise_power)
    return sd * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def simulate(x, params: DiscreteChannelParams, seed=None, noise_power: float | None = None) -> np.ndarray:
    """y = x + j eta |x|^2 x + n."""
    x = np.asarray(x, dtype=complex)
    if not np.all(np.isfinite(x)):
        raise ValueError("inputs must be finite")
    rng = np.random.default_rng(seed)
    pn = params.noise_power_w if noise_power is None else noise_power
    return x + 1j * params.eta * np.abs(x) ** 2 * x + complex_noise(rng, x.shape, pn)


def _radial_edges(lo_scale: float, hi: float) -> np.ndarray:
    """0, h, 2h, 4h, ... up to hi with h = lo_scale."""
    edges = [0.0, lo_scale]
    while edges[-1] < hi:
        edges.append(min(2.0 * edges[-1], hi))
    return np.array(edges)


def output_amplitude_pdf(law: RpcInputLaw, params: DiscreteChannelParams, r, n_inner: int = 64, n_sigmas: float = 12.0):
    """Density of |y| for the input law, by smoothing f_rho with the Rician kernel.

    rho = sqrt(t) has density 2 rho zeta exp(-lambda q(rho^2)).
    """
    pn = params.noise_power_w
    sigma = math.sqrt(0.5 * pn)
    t_max = law.s_quantile_hi() + params.eta**2 * law.s_quantile_hi() ** 3
    rho_max = math.sqrt(t_max)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    x, w = gauss_legendre(n_inner)
    # nodes are built as offsets u = rho - r so that (r - rho)^2 keeps full
    # precision even when r is many orders of magnitude above sigma
    u_lo = np.maximum(-r, -n_sigmas * sigma)
    u_hi = np.minimum(n_sigmas * sigma, rho_max - r)
    out = np.zeros_like(r)
    ok = u_hi > u_lo
    half = 0.5 * (u_hi[ok] - u_lo[ok])
    mid = 0.5 * (u_hi[ok] + u_lo[ok])
    u = mid[:, None] + half[:, None] * x[None, :]
    rr = r[ok][:, None]
    rho = rr + u
    f_rho = 2.0 * rho * law.pdf_t(rho * rho)
    # density of r given rho; the offset helper has the prefactor 2 rho / P_N
    kern = rician_pdf_offset(u, rr, pn) * (rr / np.where(rho > 0, rho, 1.0))
    out[ok] = half * np.sum(w[None, :] * f_rho * kern, axis=1)
    return out


def exact_mi_nats(
    p: float, params: DiscreteChannelParams, spec: QuadratureSpec = DEFAULT_SPEC, n_outer: int = 24
) -> float:
    """I(x; y) for the lower-bound input law, by quadrature.

    Uses h(y) = h(|y|^2) + log(pi) for circularly symmetric outputs, so
    I = h(|y|^2) - log(e P_N); h(|y|^2) = -int f_r log(f_r / (2r)) dr.
    """
    _, law = lower_bound_nats(p, params)
    pn = params.noise_power_w
    sigma = math.sqrt(0.5 * pn)
    s_hi = law.s_quantile_hi()
    r_max = math.sqrt(s_hi + params.eta**2 * s_hi**3) + spec.tail_cutoff_sigmas * sigma
    scale = min(sigma, math.sqrt(1.0 / law.lam)) / 8.0
    edges = _radial_edges(scale, r_max)
    # keep panels narrower than a noise width around the bulk of the output
    fine = np.arange(0.0, min(r_max, 40.0 * sigma), 0.5 * sigma)
    edges = np.unique(np.concatenate((edges, fine)))
    nodes, weights = panel_nodes(edges, n_outer)
    f = output_amplitude_pdf(law, params, nodes, n_sigmas=spec.tail_cutoff_sigmas)
    pos = f > 0
    h_v = -np.sum(weights[pos] * f[pos] * np.log(f[pos] / (2.0 * nodes[pos])))
    return h_v - math.log(math.e * pn)


def exact_mi(p: float, params: DiscreteChannelParams, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Mutual information in bits of the lower-bound input law."""
    return exact_mi_nats(p, params, spec) / LN2


def entropy_t_quadrature(law: RpcInputLaw, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """-int f_t log f_t dt over t = s + eta^2 s^3, in nats, by quadrature.

    Integrated in the s variable (dt = (1 + 3 eta^2 s^2) ds) on geometric panels.
    """
    s_hi = law.s_quantile_hi(80.0)
    log_zeta = math.log(law.zeta)

    def integrand(s):
        jac = 1.0 + 3.0 * law.eta**2 * s * s
        log_f = log_zeta - law.lam * s
        return -np.exp(log_f) * log_f * jac

    edges = _radial_edges(s_hi * 2.0**-30, s_hi)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total += integrate(integrand, a, b, spec).value
    return total
