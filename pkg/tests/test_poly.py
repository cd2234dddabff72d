import numpy as np
import pytest

from dilithium_faultlab import kernels, poly
from dilithium_faultlab.params import N, Q


def conv_negacyclic(a, b):
    """Independent oracle: linear convolution folded with x^N = -1.

    Accumulated magnitude stays below 256 * (Q-1)^2 ~ 1.8e16, inside int64.
    """
    full = np.convolve(a, b)
    folded = full[:N].copy()
    folded[: len(full) - N] -= full[N:]
    return folded % Q


def test_polymul_against_convolution_oracle(rng):
    pairs = 1000
    a = rng.integers(0, Q, size=(pairs, N), dtype=np.int64)
    b = rng.integers(0, Q, size=(pairs, N), dtype=np.int64)
    for i in range(pairs):
        want = conv_negacyclic(a[i], b[i])
        assert np.array_equal(poly.polymul(a[i], b[i]) % Q, want), i


def test_ntt_roundtrip_batches(rng):
    x = rng.integers(0, Q, size=(64, N), dtype=np.int64)
    assert np.array_equal(poly.intt(poly.ntt(x)), x)
    assert np.array_equal(kernels.intt_numpy(kernels.ntt_numpy(x)), x)


def test_backends_agree(rng):
    x = rng.integers(0, Q, size=(16, N), dtype=np.int64)
    y = rng.integers(0, Q, size=(16, N), dtype=np.int64)
    assert np.array_equal(kernels.ntt_numpy(x), poly.ntt(x))
    assert np.array_equal(kernels.intt_numpy(x), poly.intt(x))
    assert np.array_equal(kernels.pointwise_numpy(poly.ntt(x), poly.ntt(y)),
                          poly.pointwise(poly.ntt(x), poly.ntt(y)))


def test_pointwise_broadcasts(rng):
    one = rng.integers(0, Q, size=N, dtype=np.int64)
    many = rng.integers(0, Q, size=(4, N), dtype=np.int64)
    out = poly.pointwise(one[None, :], many)
    assert out.shape == (4, N)
    for r in range(4):
        assert np.array_equal(out[r], poly.pointwise(one, many[r]))


def test_monomial_identity(rng):
    # multiplying by x^s in coefficient space == monomial_shift
    a = rng.integers(0, Q, size=N, dtype=np.int64)
    for s in (0, 1, 7, 255):
        mono = np.zeros(N, dtype=np.int64)
        mono[s] = 1
        assert np.array_equal(poly.polymul(a, mono) % Q,
                              poly.monomial_shift(a, s) % Q)


def test_monomial_shift_wraps_with_negation():
    a = np.zeros(N, dtype=np.int64)
    a[N - 1] = 3
    out = poly.monomial_shift(a, 1)
    assert out[0] == -3 or out[0] % Q == Q - 3
    out2 = poly.monomial_shift(a, 2, scale=5)
    assert out2[1] % Q == Q - 15


def test_negacyclic_matrix_rows(rng):
    a = rng.integers(0, Q, size=N, dtype=np.int64)
    mat = poly.negacyclic_matrix(a)
    for r in (0, 1, 100, 255):
        assert np.array_equal(mat[r] % Q, poly.monomial_shift(a, r) % Q)
    # product identity: a*b = sum_j b_j x^j a = b @ mat
    b = rng.integers(0, Q, size=N, dtype=np.int64)
    assert np.array_equal((b @ mat) % Q, poly.polymul(a, b) % Q)


def test_centered_and_norm():
    x = np.array([0, 1, Q - 1, Q // 2, (Q + 1) // 2], dtype=np.int64)
    c = poly.centered(x)
    assert c.tolist() == [0, 1, -1, Q // 2, -(Q // 2)]
    assert poly.infinity_norm(x) == Q // 2
    assert poly.infinity_norm(np.array([3, -7, 2])) == 7
