import math

import numpy as np
import pytest
from scipy.special import exp1

from fibercap import mnc
from fibercap.mnc.entropies import LOG_2PI, phase_is_uniform

EULER = 0.5772156649015329


def test_linear_limit_at_zero_input(table1):
    pn = table1.noise_power_w
    c = mnc.cond_entropies(0.0, table1.with_eta(1e-30))
    sigma = math.sqrt(pn / 2)
    assert c.h_theta == pytest.approx(LOG_2PI, abs=1e-8)
    assert c.e_log_r == pytest.approx(0.5 * (math.log(pn) - EULER), abs=1e-6)
    assert c.h_r == pytest.approx(1 + math.log(sigma / math.sqrt(2)) + EULER / 2, abs=1e-6)


@pytest.mark.parametrize("factor", [0.09, 1.0, 9.0, 900.0])
def test_mean_log_amplitude_identity(table1, factor):
    # E[log r | r0] = (log r0^2 + E1(r0^2 / P_N)) / 2 for the Rician law
    pn = table1.noise_power_w
    s = factor * pn
    c = mnc.cond_entropies(math.sqrt(s), table1)
    assert c.e_log_r == pytest.approx(0.5 * (math.log(s) + exp1(s / pn)), abs=1e-10)


@pytest.mark.parametrize("factor", [0.1, 1.0])
def test_phase_entropy_continuous_at_zero_nonlinearity(table1, factor):
    r0 = math.sqrt(factor * table1.noise_power_w)
    series_route = mnc.cond_entropies(r0, table1.with_eta(1e-30))
    identity_route = mnc.cond_entropies(r0, table1.with_eta(0.0))
    assert series_route.h_theta == pytest.approx(identity_route.h_theta, abs=1e-6)
    assert series_route.h_r == pytest.approx(identity_route.h_r, abs=1e-12)


def test_amplitude_entropy_approaches_gaussian(table1):
    pn = table1.noise_power_w
    limit = 0.5 * math.log(math.pi * math.e * pn)
    gaps = []
    for f in (10.0, 100.0, 1e3, 1e4):
        c = mnc.cond_entropies(math.sqrt(f * pn), table1)
        gaps.append(limit - c.h_r)
    assert all(g > 0 for g in gaps)
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] * 8e4 == pytest.approx(1.0, rel=1e-2)


def test_phase_entropy_range(table1):
    pn = table1.noise_power_w
    for f in (1e-4, 0.1, 1.0, 10.0, 100.0):
        c = mnc.cond_entropies(math.sqrt(f * pn), table1)
        assert -10 < c.h_theta <= LOG_2PI
        assert not c.flags


def test_phase_uniform_shortcut(table1):
    big = mnc.MncPdfParams(3.0, table1.eta, table1.noise_power_w)
    small = mnc.MncPdfParams(math.sqrt(table1.noise_power_w), table1.eta, table1.noise_power_w)
    assert phase_is_uniform(big)
    assert not phase_is_uniform(small)
    assert mnc.cond_entropies(3.0, table1).h_theta == LOG_2PI


def test_table_interpolation_matches_direct(table1):
    tab = mnc.shared_table(table1)
    rng = np.random.default_rng(2)
    r0 = np.sqrt(table1.noise_power_w * 10 ** rng.uniform(-3, 4, 8))
    got = tab.stats(r0)
    for i, x in enumerate(r0):
        c = mnc.cond_entropies(float(x), table1)
        assert got[i] == pytest.approx([c.e_log_r, c.h_r, c.h_theta], abs=1e-6)


def test_table_values_do_not_depend_on_extent(table1):
    a = mnc.StatsTable(table1)
    b = mnc.StatsTable(table1)
    r0 = np.sqrt(table1.noise_power_w) * np.array([0.02, 0.5, 3.0])
    first = a.stats(r0)
    b.entries.update(a.entries)
    b.ensure(30 * math.sqrt(table1.noise_power_w))
    assert b._values.shape[0] > a._values.shape[0]
    assert np.array_equal(first, b.stats(r0))


def test_negative_radius_rejected(table1):
    with pytest.raises(ValueError):
        mnc.cond_entropies(-1.0, table1)
