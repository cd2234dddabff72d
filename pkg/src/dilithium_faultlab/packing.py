"""Byte-level wire formats for keys and signatures (round-3 conventions).

All fields are little-endian bit streams: value 0's least significant bit
lands in bit 0 of byte 0.  Every polynomial field in use here packs a
whole number of bytes (256 * bits is divisible by 8), so vectors pack as
plain concatenation.
"""

from __future__ import annotations

import numpy as np

from .params import D, N, SEED_BYTES, TR_BYTES, ParameterSet


class PackingError(ValueError):
    """Malformed or out-of-range packed encoding."""


def pack_bits(values: np.ndarray, bits: int) -> bytes:
    v = np.asarray(values, dtype=np.int64).ravel()
    if v.size and (v.min() < 0 or v.max() >= 1 << bits):
        raise PackingError(f"value out of range for {bits}-bit field")
    expanded = ((v[:, None] >> np.arange(bits)) & 1).astype(np.uint8)
    return np.packbits(expanded.ravel(), bitorder="little").tobytes()


def unpack_bits(data: bytes, bits: int, count: int) -> np.ndarray:
    need = bits * count
    if len(data) * 8 != need:
        raise PackingError(f"expected {need // 8} bytes, got {len(data)}")
    stream = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    chunks = stream[:need].reshape(count, bits).astype(np.int64)
    return (chunks << np.arange(bits)).sum(axis=1)


# -- per-field encodings ----------------------------------------------------

def pack_t1(t1: np.ndarray) -> bytes:
    return pack_bits(t1, 23 - D)


def unpack_t1(data: bytes, k: int) -> np.ndarray:
    return unpack_bits(data, 23 - D, k * N).reshape(k, N)


def pack_t0(t0: np.ndarray) -> bytes:
    half = 1 << (D - 1)
    return pack_bits(half - np.asarray(t0, dtype=np.int64), D)


def unpack_t0(data: bytes, k: int) -> np.ndarray:
    half = 1 << (D - 1)
    return half - unpack_bits(data, D, k * N).reshape(k, N)


def pack_eta(s: np.ndarray, eta: int) -> bytes:
    bits = {2: 3, 4: 4}[eta]
    return pack_bits(eta - np.asarray(s, dtype=np.int64), bits)


def unpack_eta(data: bytes, eta: int, count: int) -> np.ndarray:
    bits = {2: 3, 4: 4}[eta]
    raw = unpack_bits(data, bits, count * N)
    if raw.size and raw.max() > 2 * eta:
        raise PackingError("secret coefficient encoding out of range")
    return (eta - raw).reshape(count, N)


def pack_z(z: np.ndarray, gamma1: int) -> bytes:
    bits = {1 << 17: 18, 1 << 19: 20}[gamma1]
    return pack_bits(gamma1 - np.asarray(z, dtype=np.int64), bits)


def unpack_z(data: bytes, gamma1: int, l: int) -> np.ndarray:
    bits = {1 << 17: 18, 1 << 19: 20}[gamma1]
    return gamma1 - unpack_bits(data, bits, l * N).reshape(l, N)


def pack_w1(w1: np.ndarray, gamma2: int) -> bytes:
    from .params import Q

    bits = {(Q - 1) // 88: 6, (Q - 1) // 32: 4}[gamma2]
    return pack_bits(w1, bits)


def pack_hint(h: np.ndarray, omega: int) -> bytes:
    k = h.shape[0]
    buf = bytearray(omega + k)
    idx = 0
    for i in range(k):
        positions = np.flatnonzero(h[i])
        for j in positions:
            if idx >= omega:
                raise PackingError("hint weight exceeds omega")
            buf[idx] = int(j)
            idx += 1
        buf[omega + i] = idx
    return bytes(buf)


def unpack_hint(data: bytes, omega: int, k: int) -> np.ndarray:
    if len(data) != omega + k:
        raise PackingError("hint block has wrong length")
    h = np.zeros((k, N), dtype=np.uint8)
    idx = 0
    for i in range(k):
        cnt = data[omega + i]
        if cnt < idx or cnt > omega:
            raise PackingError("hint counts not monotone within omega")
        for j in range(idx, cnt):
            if j > idx and data[j] <= data[j - 1]:
                raise PackingError("hint positions not strictly increasing")
            h[i, data[j]] = 1
        idx = cnt
    if any(data[j] != 0 for j in range(idx, omega)):
        raise PackingError("nonzero padding after hint positions")
    return h


# -- aggregate formats ------------------------------------------------------

def pack_pk(rho: bytes, t1: np.ndarray) -> bytes:
    return rho + pack_t1(t1)


def unpack_pk(data: bytes, params: ParameterSet) -> tuple[bytes, np.ndarray]:
    if len(data) != params.pk_bytes:
        raise PackingError(f"public key must be {params.pk_bytes} bytes")
    rho = data[:SEED_BYTES]
    t1 = unpack_t1(data[SEED_BYTES:], params.k)
    return rho, t1


def pack_sk(rho: bytes, key: bytes, tr: bytes, s1: np.ndarray, s2: np.ndarray,
            t0: np.ndarray, params: ParameterSet) -> bytes:
    return (
        rho + key + tr
        + pack_eta(s1, params.eta)
        + pack_eta(s2, params.eta)
        + pack_t0(t0)
    )


def unpack_sk(data: bytes, params: ParameterSet):
    if len(data) != params.sk_bytes:
        raise PackingError(f"secret key must be {params.sk_bytes} bytes")
    off = 0
    rho = data[off:off + SEED_BYTES]; off += SEED_BYTES
    key = data[off:off + SEED_BYTES]; off += SEED_BYTES
    tr = data[off:off + TR_BYTES]; off += TR_BYTES
    n1 = params.l * params.poly_eta_bytes
    s1 = unpack_eta(data[off:off + n1], params.eta, params.l); off += n1
    n2 = params.k * params.poly_eta_bytes
    s2 = unpack_eta(data[off:off + n2], params.eta, params.k); off += n2
    t0 = unpack_t0(data[off:], params.k)
    return rho, key, tr, s1, s2, t0


def pack_sig(c_tilde: bytes, z: np.ndarray, h: np.ndarray,
             params: ParameterSet) -> bytes:
    return c_tilde + pack_z(z, params.gamma1) + pack_hint(h, params.omega)


def unpack_sig(data: bytes, params: ParameterSet):
    if len(data) != params.sig_bytes:
        raise PackingError(f"signature must be {params.sig_bytes} bytes")
    c_tilde = data[:SEED_BYTES]
    off = SEED_BYTES
    nz = params.l * params.poly_z_bytes
    z = unpack_z(data[off:off + nz], params.gamma1, params.l)
    h = unpack_hint(data[off + nz:], params.omega, params.k)
    return c_tilde, z, h
