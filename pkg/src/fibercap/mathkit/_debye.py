"""Coefficients of the Debye (uniform) expansion of I_nu.

The polynomials u_k(p) follow the recurrence

    u_{k+1}(p) = p^2 (1 - p^2) u_k'(p) / 2 + (1/8) int_0^p (1 - 5 t^2) u_k(t) dt

and contain only the powers p^k, p^(k+2), ..., p^(3k).  Dividing by p^k leaves
an even polynomial v_k of degree 2k; with p = nu / s and s = sqrt(nu^2 + z^2),
the k-th correction term u_k(p) / nu^k equals v_k(p) / s^k, which stays finite
at nu = 0 (where it reduces to the Hankel expansion).
"""

from fractions import Fraction
from functools import lru_cache

import numpy as np

DEBYE_TERMS = 16


def _u_polys(n_terms):
    polys = [[Fraction(1)]]
    for _ in range(n_terms - 1):
        u = polys[-1]
        deg = len(u) - 1
        out = [Fraction(0)] * (deg + 4)
        # p^2 (1 - p^2) u'(p) / 2
        for i in range(1, deg + 1):
            c = u[i] * i / 2
            out[i + 1] += c
            out[i + 3] -= c
        # (1/8) int_0^p (1 - 5 t^2) u(t) dt
        for i in range(deg + 1):
            out[i + 1] += u[i] / (8 * (i + 1))
            out[i + 3] -= 5 * u[i] / (8 * (i + 3))
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        polys.append(out)
    return polys


@lru_cache(maxsize=None)
def debye_table(n_terms=DEBYE_TERMS):
    """Return a (n_terms, n_terms) float array; row k holds the coefficients of
    v_k in powers of p^2 (ascending), zero-padded."""
    table = np.zeros((n_terms, n_terms))
    for k, u in enumerate(_u_polys(n_terms)):
        for j in range(k + 1):
            idx = k + 2 * j
            if idx < len(u):
                table[k, j] = float(u[idx])
    return table
