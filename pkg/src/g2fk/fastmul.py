"""Compiled inner loops for id-level multiplication.

Each kernel mirrors a numpy routine that stays the reference implementation;
tables audit the kernels against the reference when they are built.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def poly_mul_ids(a, b, coords, lookup, shear, beta, p):
    """Id products in the semidirect model: (a1,q1)(a2,q2) = (a1+a2, q1^x1(a2) q2)."""
    n = a.shape[0]
    out = np.empty(n, dtype=np.int64)
    moved = np.empty(4, dtype=np.int64)
    for idx in range(n):
        i1 = a[idx]
        i2 = b[idx]
        a2 = coords[i2, 0]
        for l in range(4):
            s = 0
            for k in range(4):
                s += coords[i1, 1 + k] * shear[a2, k, l]
            moved[l] = s % p
        cross = 0
        for k in range(4):
            for l in range(4):
                cross += moved[k] * beta[k, l] * coords[i2, 1 + l]
        code = (coords[i1, 0] + a2) % p
        radix = p
        for l in range(4):
            code += ((moved[l] + coords[i2, 1 + l]) % p) * radix
            radix *= p
        code += ((coords[i1, 5] + coords[i2, 5] + cross) % p) * radix
        out[idx] = lookup[code]
    return out


@njit(cache=True)
def chain_mul_ids(a, b, words, right):
    """a*b by applying right-multiplication-by-generator permutations along b's word."""
    n = a.shape[0]
    out = np.empty(n, dtype=np.int64)
    gens = right.shape[0]
    for idx in range(n):
        cur = a[idx]
        j = b[idx]
        for i in range(gens):
            for _ in range(words[j, i]):
                cur = right[i, cur]
        out[idx] = cur
    return out
