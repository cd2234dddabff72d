import numpy as np
import pytest

from dilithium_faultlab import packing, rounding, scheme, xof
from dilithium_faultlab.packing import PackingError
from dilithium_faultlab.params import (DILITHIUM2, DILITHIUM3, DILITHIUM5, D,
                                       N, Q, get_params)


def test_bits_roundtrip(rng):
    for bits in (3, 4, 6, 10, 13, 18, 20):
        vals = rng.integers(0, 1 << bits, size=512, dtype=np.int64)
        data = packing.pack_bits(vals, bits)
        assert len(data) == 512 * bits // 8
        assert np.array_equal(packing.unpack_bits(data, bits, 512), vals)


def test_bits_range_and_length_errors():
    with pytest.raises(PackingError):
        packing.pack_bits(np.array([1 << 10]), 10)
    with pytest.raises(PackingError):
        packing.pack_bits(np.array([-1]), 10)
    with pytest.raises(PackingError):
        packing.unpack_bits(b"\x00" * 3, 10, 256)


def test_t1_t0_roundtrip(rng):
    t1 = rng.integers(0, 1 << 10, size=(4, N), dtype=np.int64)
    assert np.array_equal(packing.unpack_t1(packing.pack_t1(t1), 4), t1)
    half = 1 << (D - 1)
    t0 = rng.integers(-half + 1, half + 1, size=(4, N), dtype=np.int64)
    assert np.array_equal(packing.unpack_t0(packing.pack_t0(t0), 4), t0)
    # boundary values survive
    t0[0, 0] = -half + 1
    t0[0, 1] = half
    assert np.array_equal(packing.unpack_t0(packing.pack_t0(t0), 4), t0)


def test_eta_roundtrip_both_widths(rng):
    for eta in (2, 4):
        s = rng.integers(-eta, eta + 1, size=(5, N), dtype=np.int64)
        data = packing.pack_eta(s, eta)
        assert np.array_equal(packing.unpack_eta(data, eta, 5), s)
    # encodings above 2*eta are rejected, not wrapped
    bad = packing.pack_eta(np.full((1, N), 4, dtype=np.int64), 4)
    with pytest.raises(PackingError):
        packing.unpack_eta(bad, 2, 1)


def test_z_roundtrip_both_gammas(rng):
    for gamma1 in (1 << 17, 1 << 19):
        z = rng.integers(-gamma1 + 1, gamma1 + 1, size=(4, N), dtype=np.int64)
        data = packing.pack_z(z, gamma1)
        assert np.array_equal(packing.unpack_z(data, gamma1, 4), z)


def test_w1_width_per_level(rng):
    for params in (DILITHIUM2, DILITHIUM3):
        m = (Q - 1) // (2 * params.gamma2)
        w1 = rng.integers(0, m, size=(params.k, N), dtype=np.int64)
        data = packing.pack_w1(w1, params.gamma2)
        bits = 6 if m == 44 else 4
        assert len(data) == params.k * N * bits // 8


def test_hint_roundtrip(rng):
    omega, k = 80, 4
    h = np.zeros((k, N), dtype=np.uint8)
    flat = rng.choice(k * N, size=omega - 3, replace=False)
    h.reshape(-1)[flat] = 1
    data = packing.pack_hint(h, omega)
    assert len(data) == omega + k
    assert np.array_equal(packing.unpack_hint(data, omega, k), h)
    # empty hint
    zero = np.zeros((k, N), dtype=np.uint8)
    assert np.array_equal(
        packing.unpack_hint(packing.pack_hint(zero, omega), omega, k), zero)


def test_hint_weight_cap():
    h = np.ones((4, N), dtype=np.uint8)
    with pytest.raises(PackingError):
        packing.pack_hint(h, 80)


def test_hint_strict_unpack(rng):
    omega, k = 80, 4
    h = np.zeros((k, N), dtype=np.uint8)
    h[0, 5] = h[0, 9] = h[2, 30] = 1
    data = bytearray(packing.pack_hint(h, omega))
    # counts must be non-decreasing across rows
    bad = data.copy()
    bad[omega + 0], bad[omega + 1] = 3, 1
    with pytest.raises(PackingError):
        packing.unpack_hint(bytes(bad), omega, k)
    # positions inside a row must strictly increase
    bad = data.copy()
    bad[0], bad[1] = 9, 5
    with pytest.raises(PackingError):
        packing.unpack_hint(bytes(bad), omega, k)
    # padding after the used positions must be zero
    bad = data.copy()
    bad[5] = 17
    with pytest.raises(PackingError):
        packing.unpack_hint(bytes(bad), omega, k)
    # row count above omega
    bad = data.copy()
    bad[omega + k - 1] = omega + 1
    with pytest.raises(PackingError):
        packing.unpack_hint(bytes(bad), omega, k)
    with pytest.raises(PackingError):
        packing.unpack_hint(bytes(data[:-1]), omega, k)


def test_pk_sk_roundtrip(rng):
    for params in (DILITHIUM2, DILITHIUM3, DILITHIUM5):
        rho, key, tr = rng.bytes(32), rng.bytes(32), rng.bytes(48)
        t1 = rng.integers(0, 1 << 10, size=(params.k, N), dtype=np.int64)
        half = 1 << (D - 1)
        t0 = rng.integers(-half + 1, half + 1, size=(params.k, N), dtype=np.int64)
        s1 = rng.integers(-params.eta, params.eta + 1, size=(params.l, N), dtype=np.int64)
        s2 = rng.integers(-params.eta, params.eta + 1, size=(params.k, N), dtype=np.int64)
        pk = packing.pack_pk(rho, t1)
        assert len(pk) == params.pk_bytes
        rho2, t1_2 = packing.unpack_pk(pk, params)
        assert rho2 == rho and np.array_equal(t1_2, t1)
        sk = packing.pack_sk(rho, key, tr, s1, s2, t0, params)
        assert len(sk) == params.sk_bytes
        rho3, key3, tr3, s1_3, s2_3, t0_3 = packing.unpack_sk(sk, params)
        assert (rho3, key3, tr3) == (rho, key, tr)
        assert np.array_equal(s1_3, s1)
        assert np.array_equal(s2_3, s2)
        assert np.array_equal(t0_3, t0)


def test_pk_sk_length_errors():
    with pytest.raises(PackingError):
        packing.unpack_pk(b"\x00" * 100, DILITHIUM2)
    with pytest.raises(PackingError):
        packing.unpack_sk(b"\x00" * 100, DILITHIUM2)
    with pytest.raises(PackingError):
        packing.unpack_sig(b"\x00" * 100, DILITHIUM2)


def test_sig_roundtrip(rng):
    for params in (DILITHIUM2, DILITHIUM5):
        c_tilde = rng.bytes(32)
        z = rng.integers(-params.gamma1 + 1, params.gamma1 + 1,
                         size=(params.l, N), dtype=np.int64)
        h = np.zeros((params.k, N), dtype=np.uint8)
        h[0, :10] = 1
        sig = packing.pack_sig(c_tilde, z, h, params)
        assert len(sig) == params.sig_bytes
        c2, z2, h2 = packing.unpack_sig(sig, params)
        assert c2 == c_tilde
        assert np.array_equal(z2, z)
        assert np.array_equal(h2, h)
