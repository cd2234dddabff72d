"""Seed expansion and sampling via SHAKE-128/256.

Domain separation follows the round-3 conventions: the public matrix comes
from SHAKE-128 over rho plus a 16-bit row/column nonce, secrets and masks
from SHAKE-256 over their seed plus a 16-bit counter, and the challenge
ball from SHAKE-256 over the challenge seed alone.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .packing import unpack_bits
from .params import CRH_BYTES, N, Q, ParameterSet


class _XofStream:
    """Incremental reader over a SHAKE object, growing the squeeze on demand."""

    def __init__(self, hasher) -> None:
        self._h = hasher
        self._buf = b""
        self._off = 0

    def read(self, n: int) -> bytes:
        while self._off + n > len(self._buf):
            self._buf = self._h.digest(max(2 * len(self._buf), 840))
        out = self._buf[self._off:self._off + n]
        self._off += n
        return out


def shake128_stream(seed: bytes) -> _XofStream:
    return _XofStream(hashlib.shake_128(seed))


def shake256_stream(seed: bytes) -> _XofStream:
    return _XofStream(hashlib.shake_256(seed))


def crh(data: bytes) -> bytes:
    """Collision-resistant hash: 384-bit SHAKE-256 output."""
    return hashlib.shake_256(data).digest(CRH_BYTES)


def _nonce(value: int) -> bytes:
    return value.to_bytes(2, "little")


def expand_matrix(rho: bytes, k: int, l: int) -> np.ndarray:
    """Public matrix in the transform domain, coefficients in [0, Q)."""
    a_hat = np.empty((k, l, N), dtype=np.int64)
    for i in range(k):
        for j in range(l):
            a_hat[i, j] = _uniform_poly(rho, (i << 8) + j)
    return a_hat


def _uniform_poly(rho: bytes, nonce: int) -> np.ndarray:
    stream = shake128_stream(rho + _nonce(nonce))
    coeffs = np.empty(0, dtype=np.int64)
    while coeffs.size < N:
        raw = np.frombuffer(stream.read(840), dtype=np.uint8).reshape(-1, 3)
        t = (
            raw[:, 0].astype(np.int64)
            | raw[:, 1].astype(np.int64) << 8
            | (raw[:, 2].astype(np.int64) & 0x7F) << 16
        )
        coeffs = np.concatenate([coeffs, t[t < Q]])
    return coeffs[:N]


def sample_eta_vector(seed: bytes, eta: int, count: int, nonce_base: int) -> np.ndarray:
    """count polynomials with coefficients uniform in [-eta, eta]."""
    out = np.empty((count, N), dtype=np.int64)
    for i in range(count):
        out[i] = _eta_poly(seed, eta, nonce_base + i)
    return out


def _eta_poly(seed: bytes, eta: int, nonce: int) -> np.ndarray:
    stream = shake256_stream(seed + _nonce(nonce))
    coeffs = np.empty(0, dtype=np.int64)
    while coeffs.size < N:
        raw = np.frombuffer(stream.read(136), dtype=np.uint8)
        nibbles = np.empty(2 * raw.size, dtype=np.int64)
        nibbles[0::2] = raw & 0x0F
        nibbles[1::2] = raw >> 4
        if eta == 2:
            kept = nibbles[nibbles < 15]
            vals = 2 - kept % 5
        elif eta == 4:
            kept = nibbles[nibbles < 9]
            vals = 4 - kept
        else:
            raise ValueError(f"unsupported eta {eta}")
        coeffs = np.concatenate([coeffs, vals])
    return coeffs[:N]


def expand_mask(seed: bytes, kappa: int, l: int, gamma1: int) -> np.ndarray:
    """Mask vector y with coefficients in (-gamma1, gamma1]."""
    bits = {1 << 17: 18, 1 << 19: 20}[gamma1]
    out = np.empty((l, N), dtype=np.int64)
    for i in range(l):
        stream = shake256_stream(seed + _nonce(kappa + i))
        raw = stream.read(N * bits // 8)
        out[i] = gamma1 - unpack_bits(raw, bits, N)
    return out


def sample_in_ball(c_tilde: bytes, tau: int) -> np.ndarray:
    """Sparse challenge: exactly tau coefficients in {-1, +1}, rest zero."""
    stream = shake256_stream(c_tilde)
    signs = int.from_bytes(stream.read(8), "little")
    c = np.zeros(N, dtype=np.int64)
    for i in range(N - tau, N):
        while True:
            j = stream.read(1)[0]
            if j <= i:
                break
        c[i] = c[j]
        c[j] = 1 - 2 * (signs & 1)
        signs >>= 1
    return c


def challenge(mu: bytes, w1_packed: bytes) -> bytes:
    """Challenge seed: 256-bit hash of the message digest and packed w1."""
    return hashlib.shake_256(mu + w1_packed).digest(32)


def sample_secrets(sigma: bytes, params: ParameterSet) -> tuple[np.ndarray, np.ndarray]:
    s1 = sample_eta_vector(sigma, params.eta, params.l, 0)
    s2 = sample_eta_vector(sigma, params.eta, params.k, params.l)
    return s1, s2
