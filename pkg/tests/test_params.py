import pytest

from dilithium_faultlab.params import (
    DILITHIUM2, DILITHIUM3, DILITHIUM5, N, PARAMETER_SETS, Q, get_params,
)


def test_modulus_structure():
    assert Q == 2**23 - 2**13 + 1
    assert (Q - 1) % (2 * N) == 0


def test_level2_constants():
    p = DILITHIUM2
    assert (p.k, p.l, p.eta, p.tau, p.omega) == (4, 4, 2, 39, 80)
    assert p.gamma1 == 2**17
    assert p.gamma2 == (Q - 1) // 88
    assert p.beta == p.tau * p.eta == 78


def test_level3_level5_constants():
    assert (DILITHIUM3.k, DILITHIUM3.l, DILITHIUM3.eta) == (6, 5, 4)
    assert DILITHIUM3.gamma2 == (Q - 1) // 32
    assert (DILITHIUM5.k, DILITHIUM5.l, DILITHIUM5.eta) == (8, 7, 2)
    assert DILITHIUM5.beta == 120


def test_packed_sizes_match_round3():
    for p, pk, sk, sig in (
        (DILITHIUM2, 1312, 2544, 2420),
        (DILITHIUM3, 1952, 4016, 3293),
        (DILITHIUM5, 2592, 4880, 4595),
    ):
        assert p.pk_bytes == pk
        assert p.sk_bytes == sk
        assert p.sig_bytes == sig


def test_derived_bounds():
    assert DILITHIUM2.z_bound == DILITHIUM2.gamma1 - DILITHIUM2.beta
    assert DILITHIUM2.w1_levels == 44  # values 0..43
    assert DILITHIUM3.w1_levels == 16


def test_get_params():
    assert get_params("dilithium2") is DILITHIUM2
    assert get_params("dilithium5") is DILITHIUM5
    with pytest.raises(KeyError):
        get_params("dilithium4")
    assert set(PARAMETER_SETS) == {"dilithium2", "dilithium3", "dilithium5"}


def test_frozen():
    with pytest.raises(Exception):
        DILITHIUM2.tau = 40
