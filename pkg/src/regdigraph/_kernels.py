"""Compiled inner loops (numba).

Two hot paths live here: the 2x2 switching Markov chain and modular Gaussian
elimination for exact determinants.  Both take pre-drawn randomness / plain
arrays so that all RNG state stays in numpy Generators owned by the callers.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def chain_steps(a, draws, n):  # pragma: no cover - exercised via sampler tests
    """Advance the switching chain by ``len(draws)`` proposal steps in place.

    ``draws`` is an int64 array of length T; each entry encodes one proposal
    (i, j_offset, k, l_offset) in mixed radix (n, n-1, n, n-1), offsets in
    [0, n-1) turning into j != i and l != k.  A proposal is accepted iff the
    2x2 minor on rows i, j and columns k, l is an alternating rectangle;
    acceptance swaps it.
    """
    m = n - 1
    for t in range(draws.shape[0]):
        v = draws[t]
        i = v % n
        v //= n
        j = (i + 1 + v % m) % n
        v //= m
        k = v % n
        l = (k + 1 + v // n) % n
        if a[i, k] == 1 and a[j, l] == 1 and a[i, l] == 0 and a[j, k] == 0:
            a[i, k] = 0
            a[j, l] = 0
            a[i, l] = 1
            a[j, k] = 1


@njit(cache=True, nogil=True)
def det_mod_p(mat, p):  # pragma: no cover - exercised via harness tests
    """Determinant of an int64 matrix modulo prime ``p`` (p < 2**31).

    Plain Gaussian elimination over GF(p); products stay below 2**62 so all
    arithmetic fits in int64.  Returns the determinant residue in [0, p).
    """
    n = mat.shape[0]
    m = mat % p
    det = 1
    for col in range(n):
        pivot = -1
        for r in range(col, n):
            if m[r, col] != 0:
                pivot = r
                break
        if pivot == -1:
            return 0
        if pivot != col:
            for c in range(col, n):
                tmp = m[col, c]
                m[col, c] = m[pivot, c]
                m[pivot, c] = tmp
            det = (p - det) % p
        pv = m[col, col]
        det = (det * pv) % p
        # inverse of pivot via Fermat
        inv = 1
        base = pv % p
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for r in range(col + 1, n):
            f = (m[r, col] * inv) % p
            if f != 0:
                for c in range(col, n):
                    m[r, c] = (m[r, c] - f * m[col, c]) % p
    return det % p
