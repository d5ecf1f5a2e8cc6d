import math

import numpy as np
import pytest

from fibercap import mnc, rpc


def test_single_linear_segment_is_awgn(linear):
    x = np.linspace(0, 1e-2, 1000) * np.exp(0.3j)
    a = mnc.simulate_ssf(x, 1, linear, seed=8)
    b = rpc.simulate(x, linear, seed=8)
    assert np.array_equal(a, b)


def test_energy_bookkeeping(table1):
    r0 = math.sqrt(table1.noise_power_w)
    y = mnc.simulate_ssf(np.full(1_000_000, r0 + 0j), 20, table1, seed=3)
    p = np.abs(y) ** 2
    se = p.std() / math.sqrt(p.size)
    assert abs(p.mean() - (r0 * r0 + table1.noise_power_w)) <= 3 * se


def test_bin_probabilities_sum_to_window_mass(table1):
    r0 = math.sqrt(table1.noise_power_w)
    sigma = math.sqrt(table1.noise_power_w / 2)
    r_edges = np.linspace(0.0, r0 + 8 * sigma, 33)
    th_edges = np.linspace(-math.pi, math.pi, 33)
    probs = mnc.model_bin_probs(r_edges, th_edges, r0, table1)
    assert probs.min() >= 0
    assert probs.sum() == pytest.approx(1.0, abs=1e-8)


def test_rejects_bad_input(table1):
    with pytest.raises(ValueError):
        mnc.simulate_ssf(np.array([np.inf]), 10, table1)
    with pytest.raises(ValueError):
        mnc.simulate_ssf(np.array([0j]), 0, table1)
