"""Conditional output statistics for a fixed input amplitude r0.

For every r0 three numbers enter both bounds: E[log r | r0], h(r | r0) and
h(theta | r, r0, theta0 = 0).  They do not depend on the power constraint,
so they are tabulated once per parameter set on the grid
r0_j = sqrt(P_N) 10^(j/32) and interpolated in log r0.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from ..mathkit.quadrature import DEFAULT_SPEC, QuadratureSpec, panel_nodes
from ..params import DiscreteChannelParams
from .pdf import MncPdfParams, _xm, log_amplitude_pdf, phase_entropy, phase_series

LOG_2PI = math.log(2.0 * math.pi)
TABLE_STEPS_PER_DECADE = 32
TABLE_J_MIN = -128
INTERP_ORDER = 8
GL_NODES = 16


@dataclass(frozen=True)
class CondEntropies:
    """Statistics of the output amplitude and phase given r0, in nats."""

    e_log_r: float
    h_r: float
    h_theta: float
    m_used: int = 0
    flags: tuple = ()

    def __post_init__(self):
        if self.h_theta > LOG_2PI + 1e-9:
            raise ArithmeticError(f"phase entropy {self.h_theta} exceeds log(2 pi)")


def radial_nodes(r0: float, noise_power: float, n_sigmas: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quadrature nodes for integrals against the Rician law centred at r0.

    Panels are two noise widths wide; when the window reaches r = 0 the first
    panels are graded geometrically so that r log r and similar terms are
    integrated accurately.
    """
    sigma = math.sqrt(0.5 * noise_power)
    hi = r0 + n_sigmas * sigma
    lo = r0 - n_sigmas * sigma
    if lo > 0:
        # offsets keep (r - r0) exact when r0 >> sigma
        n_pan = int(math.ceil(2 * n_sigmas / 2.0))
        edges = np.linspace(-n_sigmas * sigma, n_sigmas * sigma, n_pan + 1)
        u, w = panel_nodes(edges, GL_NODES)
        return r0 + u, w, u
    knee = min(hi, 2.0 * sigma)
    graded = knee * 2.0 ** -np.arange(24, -1, -1)
    uniform = np.arange(knee, hi, 2.0 * sigma)[1:]
    edges = np.concatenate(([0.0], graded, uniform, [hi]))
    edges = np.unique(edges)
    r, w = panel_nodes(edges, GL_NODES)
    return r, w, r - r0


def phase_is_uniform(p: MncPdfParams, log_threshold: float = -60.0) -> bool:
    """True when |c_1| is far below any truncation tolerance for every r.

    Uses the leading exponent of c_1 at r = r0, 2 r0^2 Re(x tan(x/2)) / P_N,
    which is free of the cancellation that affects the full expression when
    r0^2 / P_N is huge.  It decreases like -r0^2 eta^2 P_N / 12.
    """
    if p.gamma_l == 0 or p.r0 == 0:
        return False
    x = complex(_xm(1, p))
    expo = 2.0 * p.r0 * p.r0 * (x * np.tan(0.5 * x)).real / p.noise_power_w
    return expo < log_threshold


def cond_entropies(
    r0: float, params: DiscreteChannelParams, spec: QuadratureSpec = DEFAULT_SPEC, tol: float = 1e-12
) -> CondEntropies:
    """E[log r | r0], h(r | r0) and h(theta | r, r0, theta0 = 0) by quadrature.

    The phase entropy is averaged over r with weight f_r(r | r0); for each r
    the conditional phase density comes from the Fourier series on a periodic
    grid (see :func:`phase_entropy`).
    """
    if r0 < 0:
        raise ValueError("r0 must be non-negative")
    pn = params.noise_power_w
    r, w, u = radial_nodes(r0, pn, spec.tail_cutoff_sigmas)
    # log-density with the Gaussian factor written through the offset u
    with np.errstate(divide="ignore"):
        log_f = log_amplitude_pdf(r, r0, pn) + ((r - r0) ** 2 - u * u) / pn
    f = np.exp(log_f)
    wf = w * f
    e_log_r = float(np.sum(wf * np.log(r)))
    h_r = float(-np.sum(wf * log_f))
    if params.eta == 0:
        # without rotation h(r, theta | x) = log(pi e P_N) - E[log r]; the
        # phase series would need ~r0/sigma terms here
        h_theta = math.log(math.pi * math.e * pn) - e_log_r - h_r
        return CondEntropies(e_log_r, h_r, min(h_theta, LOG_2PI), 0, ())
    p = MncPdfParams.from_channel(r0, params, truncation_tol=tol)
    if phase_is_uniform(p):
        return CondEntropies(e_log_r, h_r, LOG_2PI, 0, ())
    series = phase_series(r, p)
    h_th_r, n_grid, ok = phase_entropy(series)
    h_theta = float(np.sum(wf * h_th_r) / np.sum(wf))
    flags = []
    if series.truncated.any():
        flags.append("series reached m_max")
    if not ok:
        flags.append(f"phase grid capped at {n_grid}")
    return CondEntropies(e_log_r, h_r, min(h_theta, LOG_2PI), series.m_max_used, tuple(flags))


def _table_r0(j, noise_power: float):
    return math.sqrt(noise_power) * 10.0 ** (np.asarray(j, dtype=float) / TABLE_STEPS_PER_DECADE)


def _lagrange_weights(frac: np.ndarray, order: int) -> np.ndarray:
    """Weights of the ``order`` nodes i0, ..., i0 + order - 1 at offset frac.

    ``frac`` is measured from i0 in units of the node spacing.
    """
    w = np.ones((frac.size, order))
    for n in range(order):
        for m in range(order):
            if m != n:
                w[:, n] *= (frac - m) / (n - m)
    return w


@dataclass
class StatsTable:
    """Lazily extended table of :class:`CondEntropies` on the r0 grid.

    Values between nodes come from local Lagrange interpolation in log r0,
    so an interpolated value depends only on its neighbouring nodes and not
    on how far the table has been extended.  This keeps results identical
    whatever order power points are evaluated in.  Safe to share between
    threads.
    """

    params: DiscreteChannelParams
    spec: QuadratureSpec = DEFAULT_SPEC
    entries: dict = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _values: np.ndarray | None = field(default=None, repr=False)

    def j_index(self, r0):
        return TABLE_STEPS_PER_DECADE * np.log10(np.asarray(r0, dtype=float) / math.sqrt(self.params.noise_power_w))

    def ensure(self, r0_max: float) -> None:
        """Make sure the table covers [r0_{J_MIN}, r0_max] plus the stencil."""
        j_hi = max(int(math.ceil(float(self.j_index(r0_max)))) + INTERP_ORDER, TABLE_J_MIN + INTERP_ORDER)
        with self._lock:
            if self._values is not None and self._values.shape[0] > j_hi - TABLE_J_MIN:
                return
            for j in range(TABLE_J_MIN, j_hi + 1):
                if j not in self.entries:
                    r0 = float(_table_r0(j, self.params.noise_power_w))
                    self.entries[j] = cond_entropies(r0, self.params, self.spec)
            self._values = np.array(
                [[self.entries[j].e_log_r, self.entries[j].h_r, self.entries[j].h_theta] for j in range(TABLE_J_MIN, j_hi + 1)]
            )

    def flags(self) -> list[str]:
        with self._lock:
            items = sorted(self.entries.items())
        out = []
        for j, e in items:
            out.extend(f"r0 grid {j}: {fl}" for fl in e.flags)
        return out

    def stats(self, r0) -> np.ndarray:
        """Interpolated (e_log_r, h_r, h_theta) for an array of r0, shape (n, 3).

        Below the first node the first node's values are used; the
        statistics differ from their r0 = 0 limits by O(r0^2 / P_N) there.
        """
        r0 = np.atleast_1d(np.asarray(r0, dtype=float))
        if r0.size == 0:
            return np.zeros((0, 3))
        self.ensure(float(np.max(r0)))
        values = self._values
        with np.errstate(divide="ignore"):
            x = self.j_index(np.maximum(r0, 1e-300)) - TABLE_J_MIN
        x = np.clip(x, 0.0, None)
        half = INTERP_ORDER // 2
        i0 = np.clip(np.floor(x).astype(int) - half + 1, 0, values.shape[0] - INTERP_ORDER)
        w = _lagrange_weights(x - i0, INTERP_ORDER)
        idx = i0[:, None] + np.arange(INTERP_ORDER)[None, :]
        out = np.einsum("nk,nkc->nc", w, values[idx])
        out[:, 2] = np.minimum(out[:, 2], LOG_2PI)
        return out


_TABLES: dict = {}
_TABLES_LOCK = threading.Lock()


def shared_table(params: DiscreteChannelParams, spec: QuadratureSpec = DEFAULT_SPEC) -> StatsTable:
    """Process-wide table for a parameter set."""
    key = (params.eta, params.noise_power_w, spec)
    with _TABLES_LOCK:
        tab = _TABLES.get(key)
        if tab is None:
            tab = _TABLES[key] = StatsTable(params, spec)
        return tab
