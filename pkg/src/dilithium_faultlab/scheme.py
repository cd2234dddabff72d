"""Key generation, signing with rejection sampling, and verification."""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from . import packing, poly, rounding, xof
from .keys import PublicKey, SecretKey, Signature
from .packing import PackingError
from .params import D, DILITHIUM2, Q, SEED_BYTES, ParameterSet

DEFAULT_KAPPA_CAP = 1000


@lru_cache(maxsize=64)
def _matrix_for(rho: bytes, k: int, l: int) -> np.ndarray:
    a_hat = xof.expand_matrix(rho, k, l)
    a_hat.setflags(write=False)
    return a_hat


def expand_a(pk_or_sk) -> np.ndarray:
    """Cached public matrix in the transform domain for a key's rho."""
    p = pk_or_sk.params
    return _matrix_for(pk_or_sk.rho, p.k, p.l)


def keygen(seed: bytes, params: ParameterSet = DILITHIUM2) -> tuple[PublicKey, SecretKey]:
    if len(seed) != SEED_BYTES:
        raise ValueError(f"seed must be {SEED_BYTES} bytes")
    buf = hashlib.shake_256(seed).digest(3 * SEED_BYTES)
    rho, sigma, key = buf[:32], buf[32:64], buf[64:96]

    a_hat = _matrix_for(rho, params.k, params.l)
    s1, s2 = xof.sample_secrets(sigma, params)
    t = (poly.intt(poly.matrix_pointwise(a_hat, poly.ntt(s1))) + s2) % Q
    t1, t0 = rounding.power2round(t)

    pk = PublicKey(params, rho, t1)
    tr = xof.crh(pk.pack())
    sk = SecretKey(params, rho, key, tr, s1, s2, t0)
    return pk, sk


@dataclass
class SignOutcome:
    """Either a released signature or a rejection-loop exhaustion record."""

    signature: Optional[Signature]
    kappa_used: int

    @property
    def is_exhausted(self) -> bool:
        return self.signature is None


def sign(sk: SecretKey, msg: bytes, mode: str = "deterministic",
         kappa_cap: int = DEFAULT_KAPPA_CAP,
         rng: Optional[np.random.Generator] = None) -> SignOutcome:
    """Sign msg with the stored (possibly faulted) secret key words.

    kappa_used counts rejection-loop iterations; the outcome is exhausted
    once kappa_cap iterations all rejected.
    """
    if kappa_cap < 1:
        raise ValueError("kappa_cap must be at least 1")
    params = sk.params
    a_hat = _matrix_for(sk.rho, params.k, params.l)
    mu = xof.crh(sk.tr + msg)

    if mode == "deterministic":
        rho_prime = xof.crh(sk.key + mu)
    elif mode == "randomized":
        rho_prime = rng.bytes(48) if rng is not None else os.urandom(48)
    else:
        raise ValueError(f"unknown signing mode {mode!r}")

    s1_hat = poly.ntt(sk.s1)
    s2_hat = poly.ntt(sk.s2)
    t0_hat = poly.ntt(sk.t0)
    alpha = 2 * params.gamma2

    kappa = 0
    for attempt in range(1, kappa_cap + 1):
        y = xof.expand_mask(rho_prime, kappa, params.l, params.gamma1)
        kappa += params.l
        w = poly.intt(poly.matrix_pointwise(a_hat, poly.ntt(y)))
        w1 = rounding.highbits(w, alpha)
        c_tilde = xof.challenge(mu, packing.pack_w1(w1, params.gamma2))
        c_hat = poly.ntt(xof.sample_in_ball(c_tilde, params.tau))

        z = y + poly.centered(poly.intt(poly.pointwise(c_hat[None, :], s1_hat)))
        if poly.infinity_norm(z) >= params.gamma1 - params.beta:
            continue
        r = (w - poly.intt(poly.pointwise(c_hat[None, :], s2_hat))) % Q
        if poly.infinity_norm(rounding.lowbits(r, alpha)) >= params.gamma2 - params.beta:
            continue
        ct0 = poly.centered(poly.intt(poly.pointwise(c_hat[None, :], t0_hat)))
        if poly.infinity_norm(ct0) >= params.gamma2:
            continue
        h = rounding.make_hint((-ct0) % Q, (r + ct0) % Q, alpha)
        if int(h.sum()) > params.omega:
            continue
        return SignOutcome(Signature(c_tilde, poly.centered(z), h), attempt)
    return SignOutcome(None, kappa_cap)


def verify(pk: PublicKey, msg: bytes, sig: Union[Signature, bytes, bytearray]) -> bool:
    """Total verification: malformed or out-of-range input returns False."""
    params = pk.params
    if isinstance(sig, (bytes, bytearray)):
        try:
            sig = Signature.unpack(bytes(sig), params)
        except PackingError:
            return False
    if poly.infinity_norm(sig.z) >= params.gamma1 - params.beta:
        return False
    if int(sig.h.sum()) > params.omega:
        return False
    a_hat = _matrix_for(pk.rho, params.k, params.l)
    mu = xof.crh(xof.crh(pk.pack()) + msg)
    c_hat = poly.ntt(xof.sample_in_ball(sig.c_tilde, params.tau))
    t1_hat = poly.ntt(pk.t1 << D)
    u = (poly.matrix_pointwise(a_hat, poly.ntt(sig.z))
         - poly.pointwise(c_hat[None, :], t1_hat)) % Q
    w1 = rounding.use_hint(sig.h, poly.intt(u), 2 * params.gamma2)
    return xof.challenge(mu, packing.pack_w1(w1, params.gamma2)) == sig.c_tilde
