"""Rounding, decomposition, and hint functions.

All functions are vectorized over numpy arrays and also accept scalars.
Residue inputs are expected in [0, Q); decompose handles the q-1 boundary
case explicitly so the high part always lies in [0, (Q-1)/alpha - 1].
"""

from __future__ import annotations

import numpy as np

from .params import D, Q


def power2round(r: np.ndarray, d: int = D):
    """Split r = r1 * 2^d + r0 with r0 centered in (-2^(d-1), 2^(d-1)]."""
    r = np.asarray(r, dtype=np.int64) % Q
    half = 1 << (d - 1)
    r0 = ((r + half - 1) % (1 << d)) - (half - 1)
    r1 = (r - r0) >> d
    return r1, r0


def decompose(r: np.ndarray, alpha: int):
    """Split r = high * alpha + low with low centered in (-alpha/2, alpha/2].

    When r - low would equal q - 1 the high part wraps to 0 and low absorbs
    the difference, keeping high within [0, (q-1)/alpha - 1].
    """
    gamma2 = alpha // 2
    r = np.asarray(r, dtype=np.int64) % Q
    low = ((r + gamma2 - 1) % alpha) - (gamma2 - 1)
    high = (r - low) // alpha
    wrap = (r - low) == Q - 1
    high = np.where(wrap, 0, high)
    low = np.where(wrap, low - 1, low)
    return high, low


def highbits(r: np.ndarray, alpha: int) -> np.ndarray:
    return decompose(r, alpha)[0]


def lowbits(r: np.ndarray, alpha: int) -> np.ndarray:
    return decompose(r, alpha)[1]


def make_hint(z: np.ndarray, r: np.ndarray, alpha: int) -> np.ndarray:
    """Hint bit: does adding z to r change the high part?"""
    changed = highbits(r, alpha) != highbits((np.asarray(r) + np.asarray(z)) % Q, alpha)
    return changed.astype(np.uint8)


def use_hint(h: np.ndarray, r: np.ndarray, alpha: int) -> np.ndarray:
    """Recover the high part of the hinted value from r alone."""
    m = (Q - 1) // alpha
    high, low = decompose(r, alpha)
    up = (high + 1) % m
    down = (high - 1) % m
    corrected = np.where(low > 0, up, down)
    return np.where(np.asarray(h) != 0, corrected, high)
