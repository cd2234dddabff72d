import numpy as np
import pytest

from dilithium_faultlab import faults, scheme
from dilithium_faultlab.faults import (DIRECTIONS, ONE_TO_ZERO, ZERO_TO_ONE,
                                       FaultSpec, NoOpFlip)
from dilithium_faultlab.keys import coeffs_to_words


def _sk_with(keypair, row, col, value):
    _, sk = keypair
    out = sk.copy()
    out.s1[row, col] = value
    return out


def test_low_bit_clear_on_one(keypair):
    # coefficient 1 = word 0x00000001; clearing bit 0 gives 0
    sk = _sk_with(keypair, 0, 0, 1)
    faulted = faults.inject(sk, FaultSpec(0, 0, 0, ONE_TO_ZERO))
    assert faulted.s1[0, 0] == 0


def test_high_region_clear_on_minus_one(keypair):
    # coefficient -1 = 0xFFFFFFFF; clearing bit 5 gives 0xFFFFFFDF = -33
    sk = _sk_with(keypair, 1, 7, -1)
    faulted = faults.inject(sk, FaultSpec(1, 7, 5, ONE_TO_ZERO))
    assert int(coeffs_to_words(faulted.s1)[1, 7]) == 0xFFFFFFDF
    assert faulted.s1[1, 7] == -33


def test_set_bit_on_zero(keypair):
    sk = _sk_with(keypair, 2, 100, 0)
    faulted = faults.inject(sk, FaultSpec(2, 100, 17, ZERO_TO_ONE))
    assert faulted.s1[2, 100] == 1 << 17


def test_flip_changes_exactly_one_word_bit(keypair, rng):
    _, sk = keypair
    before = coeffs_to_words(sk.s1)
    for _ in range(50):
        row = int(rng.integers(0, 4))
        col = int(rng.integers(0, 256))
        pos = int(rng.integers(0, 32))
        bit = int(before[row, col]) >> pos & 1
        spec = FaultSpec(row, col, pos, ONE_TO_ZERO if bit else ZERO_TO_ONE)
        after = coeffs_to_words(faults.inject(sk, spec).s1)
        diff = before ^ after
        assert diff[row, col] == 1 << pos
        diff[row, col] = 0
        assert not diff.any()


def test_inject_is_pure(keypair):
    _, sk = keypair
    snap = sk.s1.copy()
    spec = FaultSpec(0, 3, 1, ONE_TO_ZERO if (int(coeffs_to_words(sk.s1)[0, 3]) >> 1) & 1 else ZERO_TO_ONE)
    faulted = faults.inject(sk, spec)
    assert np.array_equal(sk.s1, snap)
    assert not np.array_equal(faulted.s1, snap)
    # other components untouched and independent
    assert np.array_equal(faulted.s2, sk.s2)
    assert np.array_equal(faulted.t0, sk.t0)
    assert (faulted.rho, faulted.key, faulted.tr) == (sk.rho, sk.key, sk.tr)


def test_flip_is_involutive(keypair):
    sk = _sk_with(keypair, 3, 200, 2)
    down = faults.inject(sk, FaultSpec(3, 200, 1, ONE_TO_ZERO))
    back = faults.inject(down, FaultSpec(3, 200, 1, ZERO_TO_ONE))
    assert np.array_equal(back.s1, sk.s1)


def test_noop_flip_rejected(keypair):
    sk = _sk_with(keypair, 0, 0, 0)
    with pytest.raises(NoOpFlip):
        faults.inject(sk, FaultSpec(0, 0, 0, ONE_TO_ZERO))
    sk2 = _sk_with(keypair, 0, 0, 1)
    with pytest.raises(NoOpFlip):
        faults.inject(sk2, FaultSpec(0, 0, 0, ZERO_TO_ONE))


def test_applicable_matches_inject(keypair):
    sk = _sk_with(keypair, 0, 0, 1)
    assert faults.applicable(sk, FaultSpec(0, 0, 0, ONE_TO_ZERO))
    assert not faults.applicable(sk, FaultSpec(0, 0, 0, ZERO_TO_ONE))
    # sign bits of a negative coefficient are ones
    sk2 = _sk_with(keypair, 0, 0, -2)
    assert faults.applicable(sk2, FaultSpec(0, 0, 31, ONE_TO_ZERO))


def test_spec_validation():
    with pytest.raises(ValueError):
        FaultSpec(0, 0, 32, ONE_TO_ZERO)
    with pytest.raises(ValueError):
        FaultSpec(0, 256, 0, ONE_TO_ZERO)
    with pytest.raises(ValueError):
        FaultSpec(-1, 0, 0, ONE_TO_ZERO)
    with pytest.raises(ValueError):
        FaultSpec(0, 0, 0, "flip")
    assert FaultSpec(0, 0, 0, ONE_TO_ZERO).original_bit == 1
    assert FaultSpec(0, 0, 0, ZERO_TO_ONE).original_bit == 0


def test_row_bound_checked_against_key(keypair):
    _, sk = keypair
    with pytest.raises(ValueError):
        faults.inject(sk, FaultSpec(4, 0, 0, ZERO_TO_ONE))


def test_spec_json_roundtrip():
    spec = FaultSpec(2, 71, 22, ZERO_TO_ONE)
    assert FaultSpec.from_json(spec.to_json()) == spec
    assert set(spec.to_json()) == {"row", "col", "bit_pos", "direction"}


def test_faulted_signature_fails_clean_verify(keypair):
    pk, sk = keypair
    spec = FaultSpec(0, 10, 1, ONE_TO_ZERO if (int(coeffs_to_words(sk.s1)[0, 10]) >> 1) & 1 else ZERO_TO_ONE)
    faulted = faults.inject(sk, spec)
    out = scheme.sign(faulted, b"faulted signer")
    assert not out.is_exhausted
    assert not scheme.verify(pk, b"faulted signer", out.signature)
