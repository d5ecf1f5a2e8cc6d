"""Capacity bounds for zero-dispersion optical fiber channel models.

Subpackages and modules:

- ``params``: physical constants, the derived per-sample channel and units
- ``mathkit``: Bessel functions, cubic roots, quadrature and scalar search
- ``rpc``, ``lpc``, ``mnc``: the three discrete-time channel models
- ``sweep``, ``export``, ``verify``, ``cli``: power sweeps and their outputs
"""

__version__ = "0.1.0"
