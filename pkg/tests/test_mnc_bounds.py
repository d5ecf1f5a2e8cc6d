import math

import numpy as np
import pytest

from fibercap import lpc, mnc
from fibercap.mathkit.quadrature import panel_nodes
from fibercap.params import dbm_to_watt


def test_chi_input_law_moments():
    law = mnc.ChiInputLaw(1.5, 2e-3)
    x = law.sample(400_000, seed=1)
    p = np.abs(x) ** 2
    assert abs(p.mean() - 2e-3) <= 4 * p.std() / math.sqrt(p.size)
    hi = law.amplitude_quantile_hi()
    # graded towards 0, where the density behaves like sqrt(rho)
    edges = np.unique(np.concatenate(([0.0], hi * 2.0 ** -np.arange(60.0, 0.0, -1.0), np.linspace(0, hi, 200))))
    rho, w = panel_nodes(edges, 20)
    assert float(np.sum(w * np.exp(law.log_pdf(rho)))) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        mnc.ChiInputLaw(0.0, 1.0)


@pytest.mark.parametrize("k", [0.5, 2.0])
def test_chi_output_pdf_normalises(table1, k):
    p = dbm_to_watt(0.0)
    sigma = math.sqrt(table1.noise_power_w / 2)
    hi = mnc.ChiInputLaw(k, p).amplitude_quantile_hi(1e-16) + 12 * sigma
    r, w = panel_nodes(np.linspace(0, hi, 400), 20)
    assert float(np.sum(w * mnc.chi_output_pdf(r, k, p, table1))) == pytest.approx(1.0, abs=1e-6)


def test_gaussian_input_output_is_rayleigh(linear):
    p = dbm_to_watt(-20.0)
    tot = p + linear.noise_power_w
    r = np.linspace(1e-5, 3 * math.sqrt(tot), 30)
    got = mnc.chi_output_pdf(r, 2.0, p, linear)
    assert np.allclose(got, 2 * r / tot * np.exp(-r * r / tot), rtol=1e-8)


def test_fixed_pair_dominates_optimum(table1):
    p = dbm_to_watt(-30.0)
    best = mnc.upper_bound(p, table1)
    assert mnc.upper_objective(p, 1.0, 1.0, table1) >= best
    assert mnc.upper_objective(p, 0.5, 1.0, table1) == math.inf


def test_upper_bound_diagnostics(table1):
    det = mnc.upper_bound_details(dbm_to_watt(10.0), table1)
    assert det.lam >= det.a > 0
    assert det.bits < lpc.awgn_capacity(dbm_to_watt(10.0), table1.noise_power_w)
    assert not [f for f in det.flags if "edge" in f]


def test_chi_terms_add_up(table1):
    b = mnc.chi_lower_bound(dbm_to_watt(5.0), 1.0, table1)
    assert b.total == pytest.approx(b.amplitude + b.phase, abs=1e-14)
    assert b.phase >= 0


def test_max_chi_dominates_members(table1):
    p = dbm_to_watt(10.0)
    best, k = mnc.max_chi_lower_bound(p, table1)
    assert k in mnc.CHI_ORDERS
    for kk in mnc.CHI_ORDERS:
        assert best >= mnc.chi_lower_bound(p, kk, table1).total


def test_max_chi_breaks_ties_towards_smaller_order(linear):
    # without nonlinearity k = 2 is optimal; offering it twice must keep it
    _, k = mnc.max_chi_lower_bound(dbm_to_watt(0.0), linear, orders=(2.0, 2.0, 2.5))
    assert k == 2.0


def test_bad_power_rejected(table1):
    with pytest.raises(ValueError):
        mnc.upper_bound(0.0, table1)
    with pytest.raises(ValueError):
        mnc.chi_lower_bound(-1.0, 2.0, table1)
