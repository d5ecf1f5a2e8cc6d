import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fibercap.mathkit import (
    ComplexLog,
    CubicCoeffs,
    NoPositiveRootError,
    integrate,
    integrate_semi_infinite,
    lambda_cubic,
    log_bessel_i,
    log_iv_array,
    log_iv_real,
    minimize_scalar,
    noncentral_expectation,
    q_inverse,
    rician_pdf,
    unique_positive_root,
)
from fibercap.mathkit import bessel
from fibercap.rpc import complex_noise

# -- cubic and q inverse ------------------------------------------------------


def _bisect(f, lo, hi, n=200):
    for _ in range(n):
        mid = 0.5 * (lo + hi)
        if (f(lo) < 0) == (f(mid) < 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_cubic_linear_case():
    assert unique_positive_root(lambda_cubic(1.0, 0.0)) == pytest.approx(1.0, rel=1e-14)


def test_cubic_matches_bisection():
    c = lambda_cubic(1.0, 1.0)
    ref = _bisect(c, 0.0, 10.0)
    root = unique_positive_root(c)
    assert abs(root - 2.136) <= 1e-3
    assert root == pytest.approx(ref, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(-12, 4), st.floats(-3, 5))
def test_cubic_root_is_unique_positive_zero(log_p, log_eta):
    p, eta = 10.0**log_p, 10.0**log_eta
    c = lambda_cubic(p, eta)
    x = unique_positive_root(c)
    assert x > 0
    assert abs(c(x)) <= 1e-9 * c.scale(x)


def test_cubic_without_positive_root():
    with pytest.raises(NoPositiveRootError):
        unique_positive_root(CubicCoeffs(1.0, 3.0, 3.0, 1.0))  # (x + 1)^3


def test_q_inverse_examples():
    assert q_inverse(0.0, 6350.0) == 0.0
    assert q_inverse(0.0, 0.0) == 0.0
    assert q_inverse(2.0, 1.0) == pytest.approx(1.0, rel=1e-14)
    eta = 6350.0
    s = q_inverse(1.0, eta)
    assert abs(s + eta**2 * s**3 - 1.0) <= 1e-12
    assert s < min(1.0, (1.0 / eta**2) ** (1.0 / 3.0))


@settings(max_examples=300, deadline=None)
@given(st.floats(-15, 6), st.floats(-3, 5))
def test_q_inverse_residual(log_v, log_eta):
    v, eta = 10.0**log_v, 10.0**log_eta
    s = q_inverse(v, eta)
    assert s >= 0
    assert abs(s + eta**2 * s**3 - v) <= 1e-12 * v


@settings(max_examples=100, deadline=None)
@given(st.floats(-10, 4), st.floats(-10, 4))
def test_q_inverse_monotone(a, b):
    lo, hi = sorted((10.0**a, 10.0**b))
    assert q_inverse(lo, 6350.0) <= q_inverse(hi, 6350.0)


def test_q_inverse_rejects_negative():
    with pytest.raises(ValueError):
        q_inverse(-1.0, 1.0)


# -- Bessel -------------------------------------------------------------------


def _series_i0(x, terms=80):
    mpmath.mp.dps = 40
    return mpmath.fsum((mpmath.mpf(x) / 2) ** (2 * k) / mpmath.factorial(k) ** 2 for k in range(terms))


def test_bessel_trivial_values():
    assert log_bessel_i(0, 0.0).re == 0.0
    assert log_bessel_i(1, 0.0).is_zero
    assert log_bessel_i(1, 0.0).exp() == 0j


def test_bessel_i0_of_ten_against_power_series():
    ref = float(mpmath.log(_series_i0(10.0)))
    assert abs(log_bessel_i(0, 10.0).re - ref) <= 1e-10
    assert abs(ref - math.log(2815.7166)) <= 1e-7


def test_bessel_order_bounds():
    with pytest.raises(ValueError):
        log_bessel_i(-1, 1.0)
    with pytest.raises(ValueError):
        log_bessel_i(201, 1.0)


def _mp_log_iv(m, z):
    mpmath.mp.dps = 50
    return complex(mpmath.log(mpmath.besseli(m, mpmath.mpc(z.real, z.imag))))


def _wrap(d):
    return (d + math.pi) % (2 * math.pi) - math.pi


def _bessel_points(n, seed):
    rng = np.random.default_rng(seed)
    m = rng.integers(0, 201, n)
    mag = 10.0 ** rng.uniform(-3, 3.5, n)
    ang = rng.uniform(-0.45 * math.pi, 0.45 * math.pi, n)
    return m, mag * np.exp(1j * ang)


@pytest.mark.parametrize("backend", ["compiled", "python"])
def test_bessel_against_mpmath(backend):
    if backend == "compiled" and bessel.BACKEND != "compiled":
        pytest.skip("compiled kernel not built")
    m, z = _bessel_points(150, seed=3)
    got = log_iv_array(m, z, backend=backend)
    for mi, zi, g in zip(m, z, got):
        ref = _mp_log_iv(int(mi), complex(zi))
        assert abs(g.real - ref.real) <= 1e-10 * max(1.0, abs(ref.real)), (mi, zi)
        assert abs(_wrap(g.imag - ref.imag)) <= 1e-9 * max(1.0, abs(ref.real)), (mi, zi)


def test_backends_agree():
    if bessel.BACKEND != "compiled":
        pytest.skip("compiled kernel not built")
    m, z = _bessel_points(5000, seed=4)
    a = log_iv_array(m, z, backend="compiled")
    b = log_iv_array(m, z, backend="python")
    scale = np.maximum(1.0, np.abs(b.real))
    assert np.max(np.abs(a.real - b.real) / scale) <= 1e-12
    assert np.max(np.abs(_wrap(a.imag - b.imag)) / scale) <= 1e-11


def test_bessel_real_overflow_free():
    x = np.array([1e-8, 1.0, 700.0, 1e5])
    v = log_iv_real(3, x)
    assert np.all(np.isfinite(v))
    for xi, vi in zip(x, v):
        mpmath.mp.dps = 40
        assert vi == pytest.approx(float(mpmath.log(mpmath.besseli(3, xi))), rel=1e-12)


def test_complex_log_algebra():
    a, b = ComplexLog(1.0, 0.5), ComplexLog(-2.0, 0.25)
    assert (a + b).exp() == pytest.approx(a.exp() * b.exp(), rel=1e-14)
    assert (a + ComplexLog.zero()).is_zero


# -- quadrature and optimisation ---------------------------------------------


def test_quadrature_trivial():
    assert float(integrate(lambda x: x, 0.0, 1.0)) == pytest.approx(0.5, abs=1e-14)
    assert float(integrate_semi_infinite(lambda x: np.exp(-x), 0.0, scale=1.0)) == pytest.approx(1.0, rel=1e-10)


def test_rician_normalisation():
    pn = 7.37e-6
    sigma = math.sqrt(pn / 2)
    r0 = 3 * sigma
    val = float(integrate_semi_infinite(lambda r: rician_pdf(r, r0, pn), 0.0, scale=sigma))
    assert val == pytest.approx(1.0, abs=1e-8)


def test_minimize_quadratic():
    res = minimize_scalar(lambda x: (x - 2.0) ** 2, 0.0, 5.0)
    assert res.x == pytest.approx(2.0, abs=1e-8)
    assert not res.at_boundary


def test_minimize_monotone_flags_endpoint():
    res = minimize_scalar(lambda x: x, 1.0, 3.0)
    assert res.at_boundary
    assert res.x == pytest.approx(1.0, abs=1e-6)


# -- noncentral expectations --------------------------------------------------


def test_noncentral_mean(table1):
    s = 1e-3
    got = noncentral_expectation(lambda v: v, s, table1)
    assert got == pytest.approx(s + table1.eta**2 * s**3 + table1.noise_power_w, rel=1e-9)
    assert noncentral_expectation(lambda v: v, 0.0, table1) == pytest.approx(table1.noise_power_w, rel=1e-9)


def test_noncentral_q_inverse_against_monte_carlo(table1):
    s = 1e-3
    exact = noncentral_expectation(lambda v: q_inverse(v, table1.eta), s, table1)
    rng = np.random.default_rng(11)
    x = math.sqrt(s)
    y = x + 1j * table1.eta * s * x + complex_noise(rng, 10_000_000, table1.noise_power_w)
    v = q_inverse(np.abs(y) ** 2, table1.eta)
    se = float(np.std(v)) / math.sqrt(v.size)
    assert abs(float(np.mean(v)) - exact) <= 3 * se
