"""Structured key and signature containers with packed wire forms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import packing
from .params import ParameterSet

_WORD = 1 << 32
_SIGN = 1 << 31


def coeffs_to_words(coeffs: np.ndarray) -> np.ndarray:
    """Two's-complement 32-bit word image of a coefficient array."""
    return (np.asarray(coeffs, dtype=np.int64) % _WORD).astype(np.uint32)


def words_to_coeffs(words: np.ndarray) -> np.ndarray:
    """Signed coefficients from their 32-bit two's-complement words."""
    w = np.asarray(words, dtype=np.int64)
    return np.where(w >= _SIGN, w - _WORD, w)


@dataclass
class PublicKey:
    params: ParameterSet
    rho: bytes
    t1: np.ndarray

    def pack(self) -> bytes:
        return packing.pack_pk(self.rho, self.t1)

    @classmethod
    def unpack(cls, data: bytes, params: ParameterSet) -> "PublicKey":
        rho, t1 = packing.unpack_pk(data, params)
        return cls(params, rho, t1)


@dataclass
class SecretKey:
    """Secret key with s1 kept word-addressable for fault injection.

    A faulted s1 coefficient can leave the packable range, so pack() only
    works on clean keys; faulted keys travel as (clean bytes, fault list).
    """

    params: ParameterSet
    rho: bytes
    key: bytes
    tr: bytes
    s1: np.ndarray
    s2: np.ndarray
    t0: np.ndarray

    def pack(self) -> bytes:
        return packing.pack_sk(self.rho, self.key, self.tr,
                               self.s1, self.s2, self.t0, self.params)

    @classmethod
    def unpack(cls, data: bytes, params: ParameterSet) -> "SecretKey":
        rho, key, tr, s1, s2, t0 = packing.unpack_sk(data, params)
        return cls(params, rho, key, tr, s1, s2, t0)

    def copy(self) -> "SecretKey":
        return SecretKey(self.params, self.rho, self.key, self.tr,
                         self.s1.copy(), self.s2.copy(), self.t0.copy())

    def s1_words(self) -> np.ndarray:
        return coeffs_to_words(self.s1)


@dataclass
class Signature:
    c_tilde: bytes
    z: np.ndarray
    h: np.ndarray

    def pack(self, params: ParameterSet) -> bytes:
        return packing.pack_sig(self.c_tilde, self.z, self.h, params)

    @classmethod
    def unpack(cls, data: bytes, params: ParameterSet) -> "Signature":
        c_tilde, z, h = packing.unpack_sig(data, params)
        return cls(c_tilde, z, h)
