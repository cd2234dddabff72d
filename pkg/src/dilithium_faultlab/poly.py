"""Arithmetic in R_q = Z_q[x]/(x^n + 1) on numpy coefficient arrays.

Polynomials are int64 arrays whose last axis has length n = 256; leading
axes hold vectors (l or k polynomials) or matrices (k x l).  Values may be
stored either reduced to [0, q) or as small signed integers; helpers here
normalise where it matters.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .params import N, Q

_HALF_Q = (Q - 1) // 2


def centered(a: np.ndarray) -> np.ndarray:
    """Representative of a mod q in [-(q-1)/2, (q-1)/2]."""
    c = np.asarray(a, dtype=np.int64) % Q
    return np.where(c > _HALF_Q, c - Q, c)


def infinity_norm(a: np.ndarray) -> int:
    """Max absolute value of the centered representatives."""
    arr = np.asarray(a, dtype=np.int64)
    if arr.size == 0:
        return 0
    return int(np.max(np.abs(centered(arr))))


def ntt(a: np.ndarray) -> np.ndarray:
    return kernels.ntt(np.asarray(a, dtype=np.int64) % Q)


def intt(a: np.ndarray) -> np.ndarray:
    return kernels.intt(a)


def pointwise(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return kernels.pointwise(a, b)


def polymul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Negacyclic product, coefficient domain in, coefficient domain out."""
    return intt(pointwise(ntt(a), ntt(b)))


def matrix_pointwise(a_hat: np.ndarray, v_hat: np.ndarray) -> np.ndarray:
    """Transformed matrix (k, l, n) times transformed vector (l, n) -> (k, n)."""
    prod = (a_hat * v_hat[None, :, :]) % Q
    return prod.sum(axis=1) % Q


def monomial_shift(p: np.ndarray, shift: int, scale: int = 1) -> np.ndarray:
    """scale * x^shift * p in the negacyclic ring, exact over the integers.

    The wrapped-around block picks up a sign from x^n = -1.
    """
    shift %= 2 * N
    sign = 1
    if shift >= N:
        shift -= N
        sign = -1
    out = np.roll(np.asarray(p, dtype=np.int64), shift, axis=-1)
    if shift:
        out[..., :shift] = -out[..., :shift]
    return sign * scale * out


def negacyclic_matrix(p: np.ndarray) -> np.ndarray:
    """Matrix whose row r is x^r * p, so row r times a scalar shifts p."""
    p = np.asarray(p, dtype=np.int64)
    rows = np.empty((N, N), dtype=np.int64)
    for r in range(N):
        rows[r] = monomial_shift(p, r)
    return rows
