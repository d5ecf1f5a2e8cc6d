import math

import numpy as np
import pytest

from fibercap import lpc
from fibercap.params import dbm_to_watt


def test_awgn_trivial_values():
    assert lpc.awgn_capacity(2e-6, 2e-6) == 1.0
    assert lpc.awgn_capacity(0.0, 2e-6) == 0.0
    with pytest.raises(ValueError):
        lpc.awgn_capacity(-1.0, 1.0)


def test_capacity_at_zero_dbm(table1):
    assert lpc.capacity(1e-3, table1) == pytest.approx(7.09, abs=0.02)


def test_rotation_preserves_magnitude(table1):
    rng = np.random.default_rng(0)
    x = 0.05 * (rng.standard_normal(1000) + 1j * rng.standard_normal(1000))
    y = lpc.simulate(x, table1, seed=1, noise_power=1e-30)
    assert np.max(np.abs(np.abs(y) - np.abs(x))) <= 1e-10


def test_linear_matches_awgn_simulator(linear):
    from fibercap import rpc

    x = np.exp(1j * np.linspace(0, 6, 100)) * 1e-3
    assert np.array_equal(lpc.simulate(x, linear, seed=2), rpc.simulate(x, linear, seed=2))


def test_monte_carlo_mutual_information(table1):
    p = dbm_to_watt(-10.0)
    mi = lpc.mc_mutual_information(p, table1, n=1_000_000, seed=5)
    assert abs(mi - lpc.capacity(p, table1)) <= 0.15


def test_histogram_entropy_of_gaussian():
    rng = np.random.default_rng(6)
    pn = 1e-4
    y = math.sqrt(pn / 2) * (rng.standard_normal(1_000_000) + 1j * rng.standard_normal(1_000_000))
    assert lpc.histogram_entropy_polar(y) == pytest.approx(math.log(math.pi * math.e * pn), abs=0.05)
