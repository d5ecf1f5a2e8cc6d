import math

import numpy as np
import pytest
from scipy import stats

from fibercap import lpc, rpc
from fibercap.mathkit import integrate, minimize_scalar
from fibercap.params import LN2, DiscreteChannelParams, dbm_to_watt

GRID = [float(d) for d in range(-35, 51, 5)]


def test_linear_lower_bound_is_awgn(linear):
    for d in GRID:
        p = dbm_to_watt(d)
        bits, law = rpc.lower_bound(p, linear)
        assert bits == pytest.approx(math.log2(1 + p / linear.noise_power_w), abs=1e-12)
        assert law.lam == pytest.approx(1.0 / p, rel=1e-12)


def test_power_constraint_by_quadrature(table1):
    for d in (-30.0, 0.0, 30.0):
        p = dbm_to_watt(d)
        _, law = rpc.lower_bound(p, table1)
        hi = law.s_quantile_hi(80.0)
        mean = float(integrate(lambda s: s * law.pdf(s), 0.0, hi))
        mass = float(integrate(law.pdf, 0.0, hi))
        assert mass == pytest.approx(1.0, rel=1e-9)
        assert mean == pytest.approx(p, rel=1e-8)


def test_lower_bound_prelog_constant(table1):
    p = dbm_to_watt(60.0)
    low, _ = rpc.lower_bound(p, table1)
    assert low - 3 * math.log2(p) >= 43.03 - 0.2


def test_prelog_constants(table1):
    low, up = rpc.prelog_constants(table1)
    pn = table1.noise_power_w
    assert up == pytest.approx(44.90, abs=0.01)
    assert low == pytest.approx(43.03, abs=0.01)
    assert up == pytest.approx(math.log2(6 * 6350.0**2 / pn), rel=1e-14)
    rng = np.random.default_rng(0)
    for _ in range(3):
        params = DiscreteChannelParams(10 ** rng.uniform(0, 5), 10 ** rng.uniform(-9, -3))
        lo, hi = rpc.prelog_constants(params)
        assert hi - lo == pytest.approx(math.log2(27 / math.e**2), abs=1e-6)


def test_upper_bound_linear_limit(linear):
    for d in (-35.0, -10.0, 20.0, 50.0):
        p = dbm_to_watt(d)
        assert rpc.upper_bound(p, linear) == pytest.approx(math.log2(1 + p / linear.noise_power_w), abs=1e-4)


def test_upper_bounds_dominate_lower(table1):
    for d in GRID:
        p = dbm_to_watt(d)
        low, _ = rpc.lower_bound(p, table1)
        assert rpc.upper_bound(p, table1) >= low
        assert rpc.upper_bound_simple(p, table1) >= low
    p0 = dbm_to_watt(0.0)
    assert rpc.upper_bound(p0, table1) - rpc.lower_bound(p0, table1)[0] <= 2.0


def test_simple_bound_prelog(table1):
    p = dbm_to_watt(60.0)
    assert rpc.upper_bound_simple(p, table1) - 3 * math.log2(p) <= 44.90 + 0.2


def test_simple_bound_beats_fixed_mu(table1):
    b = rpc.simple_b(table1)
    for d in GRID:
        p = dbm_to_watt(d)
        fixed = rpc.simple_objective_nats(1.0 / p, p + b, table1.noise_power_w, table1.eta) / LN2
        assert fixed >= rpc.upper_bound_simple(p, table1) - 1e-12


def test_simple_bound_cubic_matches_direct_minimisation(table1):
    b = rpc.simple_b(table1)
    pn, eta = table1.noise_power_w, table1.eta
    for d in (-20.0, 0.0, 30.0):
        p = dbm_to_watt(d)
        _, mu = rpc.upper_bound_simple_details(p, table1)
        res = minimize_scalar(lambda x: rpc.simple_objective_nats(math.exp(x), p + b, pn, eta), math.log(mu) - 3, math.log(mu) + 3)
        assert math.exp(res.x) == pytest.approx(mu, rel=1e-6)


def test_entropy_of_t_two_routes(table1):
    for d in (-30.0, -5.0, 20.0, 45.0):
        _, law = rpc.lower_bound(dbm_to_watt(d), table1)
        assert rpc.entropy_t_quadrature(law) == pytest.approx(law.entropy_t(), rel=1e-6)


def test_mixture_weights():
    rng = np.random.default_rng(1)
    for _ in range(20):
        law = rpc.RpcInputLaw.from_rate(10 ** rng.uniform(-2, 6), 10 ** rng.uniform(-1, 4))
        assert sum(law.weights) == pytest.approx(1.0, rel=1e-13)


def test_linear_sampler_is_exponential():
    law = rpc.RpcInputLaw.from_rate(2.0, 0.0)
    assert law.weights[1] == 0.0
    s = rpc.sample_input(law, 200_000, seed=3)
    assert stats.kstest(s, stats.expon(scale=0.5).cdf).pvalue > 1e-3


def test_sampler_mean(table1):
    p = 1e-3
    _, law = rpc.lower_bound(p, table1)
    s = rpc.sample_input(law, 10_000_000, seed=7)
    se = float(np.std(s)) / math.sqrt(s.size)
    assert abs(float(np.mean(s)) - p) <= 3 * se


def test_exact_mi_linear(linear):
    for d in (-30.0, 0.0, 30.0):
        p = dbm_to_watt(d)
        assert rpc.exact_mi(p, linear) == pytest.approx(math.log2(1 + p / linear.noise_power_w), abs=1e-4)


def test_simulate_noiseless_is_identity(linear):
    x = np.array([1e-3 + 2e-3j, -0.5j, 0.0])
    y = rpc.simulate(x, linear, seed=0, noise_power=1e-30)
    assert np.max(np.abs(y - x)) <= 1e-10


def test_simulate_output_power(table1):
    x = np.full(1_000_000, 0.03 + 0.01j)
    y = rpc.simulate(x, table1, seed=4)
    target = abs(x[0] + 1j * table1.eta * abs(x[0]) ** 2 * x[0]) ** 2 + table1.noise_power_w
    p = np.abs(y) ** 2
    se = float(np.std(p)) / math.sqrt(p.size)
    assert abs(float(np.mean(p)) - target) <= 3 * se


def test_simulate_output_law_is_noncentral_chi2(table1):
    s = 1e-4
    x = np.full(200_000, math.sqrt(s) + 0j)
    y = rpc.simulate(x, table1, seed=9)
    pn = table1.noise_power_w
    law = stats.ncx2(df=2, nc=2 * (s + table1.eta**2 * s**3) / pn, scale=pn / 2)
    edges = law.ppf(np.linspace(0, 1, 51))
    counts, _ = np.histogram(np.abs(y) ** 2, bins=edges)
    assert stats.chisquare(counts).pvalue > 1e-3


def test_rejects_bad_power(table1):
    for p in (0.0, -1.0, math.inf):
        with pytest.raises(ValueError):
            rpc.lower_bound(p, table1)
        with pytest.raises(ValueError):
            rpc.upper_bound(p, table1)
    with pytest.raises(ValueError):
        rpc.simulate(np.array([np.nan]), table1)


def test_lpc_and_rpc_share_noise_stream(linear):
    x = np.linspace(0, 1e-2, 50) * (1 + 1j)
    assert np.array_equal(rpc.simulate(x, linear, seed=5), lpc.simulate(x, linear, seed=5))
