"""Physical fiber constants, the derived per-sample channel constants, and units.

Powers are kept in watts and information in nats inside the library; dBm and
bits only appear at the edges.
"""

from __future__ import annotations

import hashlib
import json
import math
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

LN2 = math.log(2.0)
DB_PER_NEPER = 10.0 / math.log(10.0)


@dataclass(frozen=True)
class PhysicalParams:
    """Fiber and amplifier constants.

    Attributes
    ----------
    attenuation_db_per_km : float
        Power attenuation alpha in dB/km.
    nonlinearity : float
        Kerr coefficient gamma in 1/(W km); zero gives the linear channel.
    length_km : float
        Fiber length L.
    noise_bandwidth_hz : float
        Noise bandwidth W_N.
    emission_factor : float
        Spontaneous emission factor n_sp.
    photon_energy_j : float
        Photon energy h*nu (stored as the product).
    """

    attenuation_db_per_km: float = 0.2
    nonlinearity: float = 1.27
    length_km: float = 5000.0
    noise_bandwidth_hz: float = 125e9
    emission_factor: float = 1.0
    photon_energy_j: float = 1.28e-19

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValueError(f"{f.name} must be a finite number, got {v!r}")
            if f.name == "nonlinearity":
                if v < 0:
                    raise ValueError("nonlinearity must be >= 0")
            elif v <= 0:
                raise ValueError(f"{f.name} must be > 0")

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class DiscreteChannelParams:
    """Per-sample model constants.

    Attributes
    ----------
    eta : float
        Nonlinear strength gamma*L in 1/W.
    noise_power_w : float
        Total noise power P_N in W.
    """

    eta: float
    noise_power_w: float

    def __post_init__(self):
        if not (math.isfinite(self.eta) and self.eta >= 0):
            raise ValueError("eta must be finite and >= 0")
        if not (math.isfinite(self.noise_power_w) and self.noise_power_w > 0):
            raise ValueError("noise_power_w must be finite and > 0")

    def with_eta(self, eta: float) -> "DiscreteChannelParams":
        return DiscreteChannelParams(eta, self.noise_power_w)


TABLE1 = PhysicalParams()


def db_per_km_to_per_m(alpha_db_per_km: float) -> float:
    """Power attenuation in dB/km to 1/m: alpha*ln(10)/(10*1000)."""
    return alpha_db_per_km / DB_PER_NEPER / 1000.0


def per_m_to_db_per_km(alpha_per_m: float) -> float:
    return alpha_per_m * 1000.0 * DB_PER_NEPER


def derive_discrete(phys: PhysicalParams) -> DiscreteChannelParams:
    """eta = gamma*L and P_N = 2 alpha n_sp h nu L W_N with SI units throughout."""
    alpha = db_per_km_to_per_m(phys.attenuation_db_per_km)
    length_m = phys.length_km * 1000.0
    eta = phys.nonlinearity * phys.length_km
    p_n = (
        2.0
        * alpha
        * phys.emission_factor
        * phys.photon_energy_j
        * length_m
        * phys.noise_bandwidth_hz
    )
    return DiscreteChannelParams(eta=eta, noise_power_w=p_n)


def dbm_to_watt(p_dbm):
    """10^(p/10) mW."""
    try:
        return 10.0 ** (p_dbm / 10.0) * 1e-3
    except TypeError:
        raise ValueError("power must be numeric") from None


def watt_to_dbm(p_w):
    """Inverse of :func:`dbm_to_watt`; p must be positive."""
    arr = np.asarray(p_w, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("watt_to_dbm needs a positive power")
    out = 10.0 * np.log10(arr * 1e3)
    return float(out) if out.ndim == 0 else out


def nats_to_bits(x):
    return x / LN2


def bits_to_nats(x):
    return x * LN2


def load_physical(path) -> PhysicalParams:
    """Read a TOML file holding the six PhysicalParams keys.

    Keys may sit at the top level or inside a ``[physical]`` table; missing
    keys fall back to the defaults in TABLE1 and unknown keys are rejected.
    """
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    if "physical" in data:
        return physical_from_mapping(data["physical"])
    return physical_from_mapping({k: v for k, v in data.items() if not isinstance(v, dict)})


def physical_from_mapping(data: dict) -> PhysicalParams:
    names = {f.name for f in fields(PhysicalParams)}
    unknown = set(data) - names
    if unknown:
        raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
    return PhysicalParams(**{k: float(v) for k, v in data.items()})
