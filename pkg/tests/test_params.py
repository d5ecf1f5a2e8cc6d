import math

import pytest

from fibercap.params import (
    TABLE1,
    DiscreteChannelParams,
    PhysicalParams,
    db_per_km_to_per_m,
    dbm_to_watt,
    derive_discrete,
    load_physical,
    per_m_to_db_per_km,
    watt_to_dbm,
)


def test_table1_eta_matches_reported_value(table1):
    assert table1.eta == pytest.approx(6350.0, abs=1e-9)


def test_table1_noise_power_in_dbm(table1):
    assert abs(watt_to_dbm(table1.noise_power_w) + 21.3) <= 0.05


def test_noise_power_independent_oracle(table1):
    # 2 alpha n_sp h nu W_N L with alpha in nepers per metre
    alpha = 0.2 / (10.0 * math.log10(math.e)) / 1e3
    expected = 2.0 * 1.28e-19 * 125e9 * alpha * 5000e3
    assert table1.noise_power_w == pytest.approx(expected, rel=1e-12)


def test_zero_nonlinearity_keeps_noise():
    lin = derive_discrete(PhysicalParams(nonlinearity=0.0))
    assert lin.eta == 0.0
    assert lin.noise_power_w == derive_discrete(TABLE1).noise_power_w


def test_homogeneous_in_length(table1):
    double = derive_discrete(PhysicalParams(length_km=2 * TABLE1.length_km))
    assert double.eta == pytest.approx(2 * table1.eta, rel=1e-15)
    assert double.noise_power_w == pytest.approx(2 * table1.noise_power_w, rel=1e-15)


def test_dbm_conversions():
    assert dbm_to_watt(0.0) == pytest.approx(1e-3, rel=1e-15)
    assert dbm_to_watt(-21.33) == pytest.approx(7.36e-6, rel=0.01)
    for w in (1e-9, 3.3e-5, 1.0, 250.0):
        assert dbm_to_watt(watt_to_dbm(w)) == pytest.approx(w, rel=1e-12)


def test_attenuation_round_trip():
    assert per_m_to_db_per_km(db_per_km_to_per_m(0.2)) == pytest.approx(0.2, rel=1e-14)


@pytest.mark.parametrize("field", ["attenuation_db_per_km", "length_km", "noise_bandwidth_hz", "emission_factor", "photon_energy_j"])
def test_non_positive_constants_rejected(field):
    with pytest.raises(ValueError):
        PhysicalParams(**{field: 0.0})


def test_negative_nonlinearity_and_nan_rejected():
    with pytest.raises(ValueError):
        PhysicalParams(nonlinearity=-1.0)
    with pytest.raises(ValueError):
        PhysicalParams(length_km=float("nan"))
    with pytest.raises(ValueError):
        DiscreteChannelParams(eta=1.0, noise_power_w=0.0)


def test_load_physical_toml(tmp_path):
    path = tmp_path / "p.toml"
    path.write_text("[physical]\nnonlinearity = 0.0\nlength_km = 1000\n")
    phys = load_physical(path)
    assert phys.nonlinearity == 0.0 and phys.length_km == 1000.0
    assert phys.attenuation_db_per_km == TABLE1.attenuation_db_per_km
    bad = tmp_path / "bad.toml"
    bad.write_text("gamma = 1.0\n")
    with pytest.raises(ValueError):
        load_physical(bad)


def test_digest_tracks_values():
    assert TABLE1.digest() == PhysicalParams().digest()
    assert TABLE1.digest() != PhysicalParams(length_km=4000.0).digest()
