"""Self-checks of every module, runnable from the command line.

The ``fast`` suite finishes in well under a minute; ``full`` adds the
split-step histogram oracle and the Monte Carlo checks with 10^7 draws.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import lpc, mnc, rpc
from .mathkit import minimize_scalar, noncentral_expectation, q_inverse
from .mathkit.quadrature import DEFAULT_SPEC
from .params import TABLE1, PhysicalParams, dbm_to_watt, derive_discrete, watt_to_dbm


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


_CHECKS = []


def check(name: str, full_only: bool = False):
    def deco(fn):
        _CHECKS.append((name, full_only, fn))
        return fn

    return deco


@check("params: eta and noise power from the physical constants")
def _params(phys, params):
    if phys != TABLE1:
        return True, "skipped (non-default constants)"
    pn_dbm = watt_to_dbm(params.noise_power_w)
    ok = abs(params.eta - 6350.0) < 1e-9 and abs(pn_dbm + 21.3) <= 0.05
    return ok, f"eta = {params.eta:.6g} 1/W, P_N = {pn_dbm:.4f} dBm"


@check("rpc: power constraint holds with equality at the root")
def _rpc_constraint(phys, params):
    worst = 0.0
    for d in (-30, 0, 30, 60):
        _, law = rpc.lower_bound(dbm_to_watt(d), params)
        worst = max(worst, abs(law.mean / dbm_to_watt(d) - 1.0))
    return worst <= 1e-9, f"max relative residual {worst:.2e}"


@check("rpc: cubic root agrees with direct minimisation of the simple bound")
def _rpc_two_route(phys, params):
    if params.eta == 0:
        return True, "skipped (eta = 0)"
    worst = 0.0
    pn, eta = params.noise_power_w, params.eta
    b = rpc.simple_b(params)
    for d in (-20, 0, 20, 40):
        p = dbm_to_watt(d)
        _, mu = rpc.upper_bound_simple_details(p, params)
        res = minimize_scalar(lambda x: rpc.simple_objective_nats(math.exp(x), p + b, pn, eta), math.log(mu) - 3, math.log(mu) + 3)
        worst = max(worst, abs(math.exp(res.x) / mu - 1.0))
    return worst <= 1e-6, f"max relative difference {worst:.2e}"


@check("rpc: closed-form output entropy matches quadrature")
def _rpc_entropy(phys, params):
    worst = 0.0
    for d in (-20, 10, 40):
        _, law = rpc.lower_bound(dbm_to_watt(d), params)
        a, b = law.entropy_t(), rpc.entropy_t_quadrature(law)
        worst = max(worst, abs(a - b) / abs(a))
    return worst <= 1e-6, f"max relative difference {worst:.2e}"


@check("rpc: lower bound <= exact MI <= upper bound")
def _rpc_sandwich(phys, params):
    rows = []
    ok = True
    for d in (-30, -10, 0, 20, 50):
        p = dbm_to_watt(d)
        lo, mi, hi = rpc.lower_bound(p, params)[0], rpc.exact_mi(p, params), rpc.upper_bound(p, params)
        ok &= lo <= mi + 1e-9 <= hi + 2e-9 and hi - lo <= 2.0
        rows.append(f"{d}: {lo:.4f}/{mi:.4f}/{hi:.4f}")
    return ok, ", ".join(rows)


@check("lpc: capacity formula and magnitude-preserving simulation")
def _lpc(phys, params):
    ok = lpc.awgn_capacity(params.noise_power_w, params.noise_power_w) == 1.0
    x = np.full(1000, 0.03 + 0.01j)
    y = lpc.simulate(x, params, seed=1, noise_power=1e-30)
    err = float(np.max(np.abs(np.abs(y) - np.abs(x))))
    return ok and err < 1e-10, f"|y| - |x| max {err:.1e}"


@check("mnc: conditional pdf integrates to one")
def _mnc_norm(phys, params):
    from .mnc.pdf import MncPdfParams, amplitude_pdf, phase_density_grid, phase_series
    from .mathkit.quadrature import panel_nodes

    worst = 0.0
    sigma = math.sqrt(0.5 * params.noise_power_w)
    for f in (0.1, 1.0, 10.0):
        r0 = math.sqrt(f * params.noise_power_w)
        r, w = panel_nodes(np.linspace(0.0, r0 + 14 * sigma, 57), 24)
        p = MncPdfParams.from_channel(r0, params)
        series = phase_series(r, p)
        n = 1024
        dens = phase_density_grid(series, n).sum(axis=1) * (2 * math.pi / n)
        total = float(np.sum(w * amplitude_pdf(r, r0, params) * dens))
        worst = max(worst, abs(total - 1.0))
    return worst <= 1e-6, f"max |mass - 1| = {worst:.2e}"


@check("mnc: bound consistency at -30 and 0 dBm")
def _mnc_bounds(phys, params):
    rows, ok = [], True
    for d in (-30, 0):
        p = dbm_to_watt(d)
        ub = mnc.upper_bound(p, params)
        lb, k = mnc.max_chi_lower_bound(p, params)
        awgn = lpc.awgn_capacity(p, params.noise_power_w)
        ok &= ub >= lb
        if d == -30:
            ok &= abs(ub - awgn) <= 0.1 and abs(lb - awgn) <= 0.1
        elif params.eta > 0:
            ok &= ub < awgn
        rows.append(f"{d} dBm: chi(k={k}) {lb:.4f} <= U {ub:.4f}, AWGN {awgn:.4f}")
    return ok, "; ".join(rows)


@check("all models collapse onto AWGN without nonlinearity")
def _linear_collapse(phys, params):
    p0 = params.with_eta(0.0)
    worst = 0.0
    for d in (-30, 0, 30):
        p = dbm_to_watt(d)
        ref = lpc.awgn_capacity(p, p0.noise_power_w)
        vals = [
            rpc.lower_bound(p, p0)[0],
            rpc.upper_bound(p, p0),
            rpc.exact_mi(p, p0),
            lpc.capacity(p, p0),
            mnc.upper_bound(p, p0),
            mnc.chi_lower_bound(p, 2.0, p0).total,
        ]
        worst = max(worst, max(abs(v - ref) for v in vals))
    return worst <= 1e-4, f"max deviation {worst:.2e} bits"


@check("mnc: split-step histogram matches the conditional pdf", full_only=True)
def _ssf_oracle(phys, params):
    r0 = math.sqrt(params.noise_power_w)
    x = np.full(1_000_000, r0 + 0j)
    y = mnc.simulate_ssf(x, 2000, params, seed=2024)
    tv = mnc.tv_distance(y, r0 + 0j, params)
    return tv <= 0.05, f"total variation {tv:.4f}"


@check("rpc: input sampler mean over 10^7 draws", full_only=True)
def _rpc_sampler(phys, params):
    p = 1e-3
    _, law = rpc.lower_bound(p, params)
    s = rpc.sample_input(law, 10_000_000, seed=7)
    se = float(np.std(s)) / math.sqrt(s.size)
    z = abs(float(np.mean(s)) - p) / se
    return z <= 3.0, f"{z:.2f} standard errors"


@check("mathkit: noncentral expectation of q against 10^7 draws", full_only=True)
def _noncentral_mc(phys, params):
    s = 1e-3
    exact = noncentral_expectation(lambda v: q_inverse(v, params.eta), s, params, DEFAULT_SPEC)
    rng = np.random.default_rng(11)
    x = math.sqrt(s)
    y = x + 1j * params.eta * s * x + rpc.complex_noise(rng, 10_000_000, params.noise_power_w)
    v = q_inverse(np.abs(y) ** 2, params.eta)
    se = float(np.std(v)) / math.sqrt(v.size)
    z = abs(float(np.mean(v)) - exact) / se
    return z <= 3.0, f"{z:.2f} standard errors"


@check("lpc: Monte Carlo mutual information near capacity", full_only=True)
def _lpc_mc(phys, params):
    p = dbm_to_watt(-10)
    mi = lpc.mc_mutual_information(p, params, n=1_000_000, seed=5)
    cap = lpc.capacity(p, params)
    return abs(mi - cap) <= 0.15, f"MC {mi:.4f} vs {cap:.4f} bits"


def run_verify(suite: str = "fast", physical: PhysicalParams = TABLE1, out=print) -> list[CheckResult]:
    """Run the checks of a suite and report each as it finishes."""
    if suite not in ("fast", "full"):
        raise ValueError("suite must be 'fast' or 'full'")
    params = derive_discrete(physical)
    results = []
    for name, full_only, fn in _CHECKS:
        if full_only and suite == "fast":
            continue
        t0 = time.perf_counter()
        try:
            ok, detail = fn(physical, params)
        except Exception as exc:  # report, never abort the suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        res = CheckResult(name, bool(ok), detail, time.perf_counter() - t0)
        results.append(res)
        if out is not None:
            out(f"[{'PASS' if res.passed else 'FAIL'}] {name} ({res.seconds:.1f} s): {detail}")
    return results


