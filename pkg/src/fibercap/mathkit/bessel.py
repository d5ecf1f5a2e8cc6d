"""Log-domain modified Bessel functions of the first kind, integer order.

The heavy lifting is done by a compiled kernel when available
(``_bessel_ext``) and by an equivalent numpy kernel otherwise.  Set the
environment variable ``FIBERCAP_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.special import ive

from . import _bessel_py

M_MAX_DEFAULT = 200

BACKEND = "python"
_kernel = _bessel_py.log_iv
if os.environ.get("FIBERCAP_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _bessel_ext

        _kernel = _bessel_ext.log_iv
        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        pass


@dataclass(frozen=True)
class ComplexLog:
    """A complex logarithm ``re + 1j*im``; ``is_zero`` marks log(0)."""

    re: float
    im: float = 0.0
    is_zero: bool = False

    @classmethod
    def zero(cls) -> "ComplexLog":
        return cls(-math.inf, 0.0, True)

    @classmethod
    def from_complex(cls, w: complex) -> "ComplexLog":
        if np.isneginf(w.real):
            return cls.zero()
        return cls(float(w.real), float(w.imag))

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def exp(self) -> complex:
        if self.is_zero:
            return 0j
        return complex(np.exp(self.to_complex()))

    def __add__(self, other: "ComplexLog") -> "ComplexLog":
        if self.is_zero or other.is_zero:
            return ComplexLog.zero()
        return ComplexLog(self.re + other.re, self.im + other.im)


def log_iv_array(m, z, *, backend: str | None = None) -> np.ndarray:
    """Vectorised complex log I_m(z).

    Parameters
    ----------
    m : array_like of int
        Non-negative orders.
    z : array_like of complex
        Arguments; broadcast against ``m``.
    backend : {"compiled", "python"}, optional
        Override the module-level choice (used by the benchmark).

    Returns
    -------
    ndarray of complex
        ``log I_m(z)`` with the imaginary part in (-pi, pi] up to the
        branch bookkeeping of the kernels; exact zeros give ``-inf``.
    """
    if backend is None:
        kernel = _kernel
    elif backend == "python":
        kernel = _bessel_py.log_iv
    elif backend == "compiled":
        from . import _bessel_ext

        kernel = _bessel_ext.log_iv
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return kernel(m, z)


def log_bessel_i(m: int, z: complex, m_max: int = M_MAX_DEFAULT) -> ComplexLog:
    """log I_m(z) for a single order and complex argument.

    Raises
    ------
    ValueError
        If ``m`` is negative or exceeds ``m_max``.
    """
    m = int(m)
    if m < 0 or m > m_max:
        raise ValueError(f"order {m} outside [0, {m_max}]")
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("argument must be finite")
    return ComplexLog.from_complex(complex(log_iv_array(m, z)))


def log_iv_real(m, x) -> np.ndarray:
    """log I_m(x) for real x >= 0, overflow free for any x.

    Uses the exponentially scaled ``ive`` and adds ``x`` back; where ``ive``
    underflows (tiny x at high order) the complex kernel is used instead.
    """
    m = np.asarray(m, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be non-negative")
    m, x = np.broadcast_arrays(m, x)
    with np.errstate(divide="ignore"):
        out = np.log(ive(m, x)) + x
    bad = ~np.isfinite(out) & ((x > 0) | (m == 0))
    if np.any(bad):
        out = np.array(out, dtype=float)
        out[bad] = log_iv_array(m[bad].astype(np.int64), x[bad]).real
    return out
