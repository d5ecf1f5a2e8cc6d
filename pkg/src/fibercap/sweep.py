"""Power sweeps over any subset of the bounds, with a resumable result cache."""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import __version__, lpc, rpc
from . import mnc
from .mathkit.quadrature import DEFAULT_SPEC, QuadratureSpec
from .params import TABLE1, PhysicalParams, dbm_to_watt, derive_discrete

MODEL_NAMES = ("rpc-lb", "rpc-ub", "rpc-ub-simple", "rpc-exact-mi", "lpc", "mnc-ub", "mnc-max-chi")
CHI_PREFIX = "mnc-chi:"


def parse_models(text: str) -> tuple[str, ...]:
    """Split a comma-separated model list and validate each name."""
    out = []
    for name in (t.strip() for t in text.split(",")):
        if not name:
            continue
        validate_model(name)
        out.append(name)
    if not out:
        raise ValueError("no models given")
    return tuple(out)


def validate_model(name: str) -> None:
    if name in MODEL_NAMES:
        return
    if name.startswith(CHI_PREFIX):
        try:
            k = float(name[len(CHI_PREFIX) :])
        except ValueError:
            raise ValueError(f"bad chi order in {name!r}") from None
        if k > 0 and math.isfinite(k):
            return
    raise ValueError(f"unknown model {name!r}; choose from {', '.join(MODEL_NAMES)} or {CHI_PREFIX}<k>")


def is_cached_model(name: str) -> bool:
    return name.startswith("mnc")


@dataclass(frozen=True)
class SweepConfig:
    """What to evaluate and where.

    Attributes
    ----------
    p_min_dbm, p_max_dbm, step_db : float
        Power grid, inclusive of both ends when they fall on the grid.
    models : tuple of str
    threads : int
        Worker threads over power points.
    seed : int
        Recorded in the header; the bounds themselves are deterministic.
    physical : PhysicalParams
    spec : QuadratureSpec
        Tolerance overrides.
    """

    p_min_dbm: float = -35.0
    p_max_dbm: float = 50.0
    step_db: float = 1.0
    models: tuple = ("rpc-lb", "rpc-ub", "lpc")
    threads: int = 1
    seed: int = 0
    physical: PhysicalParams = TABLE1
    spec: QuadratureSpec = DEFAULT_SPEC

    def __post_init__(self):
        if not self.p_min_dbm < self.p_max_dbm:
            raise ValueError("p_min must be below p_max")
        if not self.step_db > 0:
            raise ValueError("step must be positive")
        if not self.models:
            raise ValueError("models must be non-empty")
        for m in self.models:
            validate_model(m)
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def powers_dbm(self) -> list[float]:
        n = int(math.floor((self.p_max_dbm - self.p_min_dbm) / self.step_db + 1e-9)) + 1
        return [round(self.p_min_dbm + i * self.step_db, 10) for i in range(n)]


@dataclass
class BoundCurve:
    """Sweep output: one row per power, one column per model, plus flags."""

    powers_dbm: list
    models: tuple
    values: dict
    flags: list
    header: dict = field(default_factory=dict)

    def column(self, model: str) -> list:
        return self.values[model]

    def rows(self):
        for i, p in enumerate(self.powers_dbm):
            yield p, [self.values[m][i] for m in self.models], self.flags[i]


class ResultCache:
    """JSON file of cached cell values keyed by a content hash.

    Written by one thread at a time, always by replacing the whole file.
    """

    def __init__(self, path: str | None):
        self.path = path
        self.lock = threading.Lock()
        self.data = {}
        if path and os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                try:
                    self.data = json.load(fh)
                except json.JSONDecodeError:
                    self.data = {}

    @staticmethod
    def key(params_digest: str, model: str, power_dbm: float, spec: QuadratureSpec) -> str:
        blob = json.dumps(
            {"params": params_digest, "model": model, "power_dbm": repr(float(power_dbm)), "spec": spec.as_dict(), "version": __version__},
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode()).hexdigest()

    def get(self, key: str):
        with self.lock:
            return self.data.get(key)

    def put(self, key: str, value) -> None:
        with self.lock:
            self.data[key] = value

    def commit(self) -> None:
        if not self.path:
            return
        with self.lock:
            text = json.dumps(self.data, sort_keys=True, indent=0)
            folder = os.path.dirname(os.path.abspath(self.path))
            fd, tmp = tempfile.mkstemp(dir=folder, prefix=".cache-", suffix=".json")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, self.path)


def evaluate_model(model: str, p_w: float, params, spec: QuadratureSpec) -> tuple[float, list]:
    """One cell of the sweep: (bits, flags)."""
    if model == "lpc":
        return lpc.capacity(p_w, params), []
    if model == "rpc-lb":
        return rpc.lower_bound(p_w, params)[0], []
    if model == "rpc-ub":
        det = rpc.upper_bound_details(p_w, params, spec)
        return det.bits, list(det.flags)
    if model == "rpc-ub-simple":
        if params.eta == 0:
            return lpc.awgn_capacity(p_w, params.noise_power_w), ["eta = 0: AWGN value"]
        return rpc.upper_bound_simple(p_w, params), []
    if model == "rpc-exact-mi":
        return rpc.exact_mi(p_w, params, spec), []
    if model == "mnc-ub":
        det = mnc.upper_bound_details(p_w, params, spec)
        return det.bits, list(det.flags)
    if model == "mnc-max-chi":
        bits, k = mnc.max_chi_lower_bound(p_w, params, spec)
        return bits, []
    if model.startswith(CHI_PREFIX):
        k = float(model[len(CHI_PREFIX) :])
        return mnc.chi_lower_bound(p_w, k, params, spec).total, []
    raise ValueError(f"unknown model {model!r}")


def run_sweep(config: SweepConfig, cache_path: str | None = None) -> BoundCurve:
    """Evaluate every model at every power; failures become flags."""
    params = derive_discrete(config.physical)
    digest = config.physical.digest()
    cache = ResultCache(cache_path)
    powers = config.powers_dbm()

    def row(p_dbm: float):
        p_w = dbm_to_watt(p_dbm)
        vals, flags = [], []
        for m in config.models:
            key = ResultCache.key(digest, m, p_dbm, config.spec) if is_cached_model(m) else None
            hit = cache.get(key) if key else None
            if hit is not None:
                v, fl = hit["bits"], hit["flags"]
            else:
                try:
                    v, fl = evaluate_model(m, p_w, params, config.spec)
                except (ArithmeticError, ValueError) as exc:
                    v, fl = None, [f"failed: {exc}"]
                if key and v is not None:
                    cache.put(key, {"bits": v, "flags": fl})
                    cache.commit()
            vals.append(v)
            flags.extend(f"{m}: {f}" for f in fl)
        return vals, flags

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(row, powers))
    else:
        results = [row(p) for p in powers]
    values = {m: [r[0][j] for r in results] for j, m in enumerate(config.models)}
    header = {
        "code_version": __version__,
        "physical": config.physical.to_dict(),
        "derived": {"eta_per_w": params.eta, "noise_power_w": params.noise_power_w},
        "tolerances": config.spec.as_dict(),
        "seed": config.seed,
        "models": list(config.models),
    }
    return BoundCurve(powers, tuple(config.models), values, [r[1] for r in results], header)
