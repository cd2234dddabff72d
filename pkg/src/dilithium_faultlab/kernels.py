"""Transform kernels with a compiled fast path and a numpy fallback.

The compiled extension is preferred when it imported cleanly; set the
environment variable ``FAULTLAB_PURE_PYTHON=1`` before import to force the
numpy implementation.  Both backends expose the same three functions and
are checked against each other in the test suite and the benchmark module.
"""

from __future__ import annotations

import os

import numpy as np

from .params import N, Q, ROOT_OF_UNITY


def _bitrev8(x: int) -> int:
    r = 0
    for i in range(8):
        r = (r << 1) | ((x >> i) & 1)
    return r


ZETAS = np.array([pow(ROOT_OF_UNITY, _bitrev8(i), Q) for i in range(N)], dtype=np.int64)
N_INV = pow(N, -1, Q)


def _as_rows(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=np.int64).reshape(-1, N)
    return out


def ntt_numpy(a: np.ndarray) -> np.ndarray:
    """Forward transform along the last axis; input coefficients in [0, Q)."""
    shape = a.shape
    v = _as_rows(a).copy()
    k = 1
    length = 128
    while length >= 1:
        nblocks = N // (2 * length)
        z = ZETAS[k:k + nblocks]
        k += nblocks
        blocks = v.reshape(-1, nblocks, 2, length)
        t = z[None, :, None] * blocks[:, :, 1, :] % Q
        hi = (blocks[:, :, 0, :] - t) % Q
        lo = (blocks[:, :, 0, :] + t) % Q
        blocks[:, :, 0, :] = lo
        blocks[:, :, 1, :] = hi
        length >>= 1
    return v.reshape(shape)


def intt_numpy(a: np.ndarray) -> np.ndarray:
    """Inverse transform along the last axis, including the 1/N scaling."""
    shape = a.shape
    v = _as_rows(a).copy()
    k = N
    length = 1
    while length < N:
        nblocks = N // (2 * length)
        # the scalar loop walks k downward, so the block order is reversed
        z = (Q - ZETAS[k - nblocks:k])[::-1].copy()
        k -= nblocks
        blocks = v.reshape(-1, nblocks, 2, length)
        t = blocks[:, :, 0, :].copy()
        blocks[:, :, 0, :] = (t + blocks[:, :, 1, :]) % Q
        blocks[:, :, 1, :] = (t - blocks[:, :, 1, :]) * z[None, :, None] % Q
        length <<= 1
    v = v * N_INV % Q
    return v.reshape(shape)


def pointwise_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Coefficient-wise product mod Q of two transformed arrays."""
    return (a.astype(np.int64) * b.astype(np.int64)) % Q


BACKEND = "numpy"
ntt = ntt_numpy
intt = intt_numpy
pointwise = pointwise_numpy

if os.environ.get("FAULTLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ntt_core

        def _ntt_compiled(a: np.ndarray) -> np.ndarray:
            shape = a.shape
            v = _as_rows(a).copy()
            _ntt_core.ntt_batch(v)
            return v.reshape(shape)

        def _intt_compiled(a: np.ndarray) -> np.ndarray:
            shape = a.shape
            v = _as_rows(a).copy()
            _ntt_core.intt_batch(v)
            return v.reshape(shape)

        def _pointwise_compiled(a: np.ndarray, b: np.ndarray) -> np.ndarray:
            a2, b2 = np.broadcast_arrays(a, b)
            ar = _as_rows(a2)
            br = _as_rows(b2)
            out = np.empty_like(ar)
            _ntt_core.pointwise_batch(ar, br, out)
            return out.reshape(a2.shape)

        BACKEND = "compiled"
        ntt = _ntt_compiled
        intt = _intt_compiled
        pointwise = _pointwise_compiled
    except ImportError:
        pass
