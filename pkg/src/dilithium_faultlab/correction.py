"""Locating a flipped secret-key bit from a faulty signature alone.

A single-bit fault at word position p of s1[row][col] shifts the released
response by +-2^p * c * x^col in exactly one vector component.  Scanning
candidate corrections under the verification oracle finds the unique
(row, col, bit position, original value) that repairs the signature.

Two interchangeable scan backends: "faithful" repacks every candidate and
runs full verification; "fast" maintains the verification equation
incrementally, since a candidate changes the recomputed commitment by one
shifted, scaled column product.  Both count one oracle call per candidate
checked and must return identical outcomes.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from . import packing, poly, rounding, scheme, xof
from .campaign import FaultEvent
from .keys import PublicKey, Signature
from .packing import PackingError
from .params import D, N, Q


@dataclass(frozen=True)
class RecoveredBit:
    """One located bit of s1: position plus its pre-fault value."""

    row: int
    col: int
    bit_index: int  # 1-based: the fault multiplier is 2^(bit_index - 1)
    value: int

    @property
    def bit_pos(self) -> int:
        return self.bit_index - 1

    def to_json(self) -> dict:
        return {"row": self.row, "col": self.col,
                "bit_index": self.bit_index, "value": self.value}

    @classmethod
    def from_json(cls, obj: dict) -> "RecoveredBit":
        return cls(obj["row"], obj["col"], obj["bit_index"], obj["value"])


@dataclass(frozen=True)
class NoFaultDetected:
    """The signature already verifies; there is nothing to correct."""


@dataclass(frozen=True)
class NotFound:
    """Scan exhausted: multi-bit fault, fault outside s1, or cap too low."""

    attempts: int


@dataclass(frozen=True)
class Skipped:
    """Batch marker for events carrying no correctable signature."""

    reason: str


CorrectionOutcome = Union[RecoveredBit, NoFaultDetected, NotFound]


@dataclass
class OracleCounter:
    """Observable cost: candidate verifications plus the validity pre-check."""

    scan_calls: int = 0
    prechecks: int = 0

    def merge(self, other: "OracleCounter") -> None:
        self.scan_calls += other.scan_calls
        self.prechecks += other.prechecks


def correction_term(c: np.ndarray, col: int, bit_index: int) -> np.ndarray:
    """2^(bit_index-1) * c * x^col, centered mod q."""
    if not 0 <= col < N:
        raise ValueError(f"col {col} outside [0, {N})")
    if not 1 <= bit_index <= 32:
        raise ValueError(f"bit_index {bit_index} outside [1, 32]")
    scale = pow(2, bit_index - 1, Q)
    return poly.centered(poly.monomial_shift(c, col, scale))


def correct(sig_data: Union[bytes, bytearray, Signature], msg: bytes,
            pk: PublicKey, bit_cap: int = 18, mode: str = "fast",
            counter: Optional[OracleCounter] = None) -> CorrectionOutcome:
    """Run the correction scan over bit_index, row, col, and sign.

    Scan order is lexicographic (bit_index, row, col, sign) with the
    addition branch first; the first verifying candidate wins.  Candidates
    whose corrected response leaves the release range are skipped without
    an oracle call.  At most 2 * bit_cap * l * n oracle calls.
    """
    params = pk.params
    if not 1 <= bit_cap <= 32:
        raise ValueError("bit_cap must lie in [1, 32]")
    if mode not in ("fast", "faithful"):
        raise ValueError(f"unknown scan mode {mode!r}")
    sig = (Signature.unpack(bytes(sig_data), params)
           if isinstance(sig_data, (bytes, bytearray)) else sig_data)
    if counter is None:
        counter = OracleCounter()

    counter.prechecks += 1
    if scheme.verify(pk, msg, sig):
        return NoFaultDetected()

    c = xof.sample_in_ball(sig.c_tilde, params.tau)
    shift_rows = poly.negacyclic_matrix(c)  # row r = c * x^r
    z_bound = params.gamma1 - params.beta
    check = _make_checker(pk, msg, sig, mode)

    attempts = 0
    for bit_index in range(1, bit_cap + 1):
        scale = pow(2, bit_index - 1, Q)
        deltas = poly.centered(scale * shift_rows)  # indexed by col
        for row in range(params.l):
            plus_ok = np.max(np.abs(poly.centered(sig.z[row] + deltas)), axis=1) < z_bound
            minus_ok = np.max(np.abs(poly.centered(sig.z[row] - deltas)), axis=1) < z_bound
            for col in range(N):
                for sign, ok in ((1, plus_ok[col]), (-1, minus_ok[col])):
                    if not ok:
                        continue
                    counter.scan_calls += 1
                    attempts += 1
                    if check(row, col, sign, scale, deltas[col]):
                        return RecoveredBit(row, col, bit_index,
                                            1 if sign > 0 else 0)
    return NotFound(attempts)


def _make_checker(pk: PublicKey, msg: bytes, sig: Signature, mode: str):
    """Candidate oracle: does the signature verify with sign * delta added
    to row `row` of z?  delta is centered scale * c * x^col."""
    params = pk.params
    alpha = 2 * params.gamma2

    if mode == "faithful":
        def check(row: int, col: int, sign: int, scale: int,
                  delta: np.ndarray) -> bool:
            z_cand = sig.z.copy()
            z_cand[row] = poly.centered(z_cand[row] + sign * delta)
            try:
                packed = packing.pack_sig(sig.c_tilde, z_cand, sig.h, params)
            except PackingError:
                return False
            return scheme.verify(pk, msg, packed)
        return check

    a_hat = scheme.expand_a(pk)
    mu = xof.crh(xof.crh(pk.pack()) + msg)
    c_hat = poly.ntt(xof.sample_in_ball(sig.c_tilde, params.tau))
    w_base = poly.intt(
        (poly.matrix_pointwise(a_hat, poly.ntt(sig.z))
         - poly.pointwise(c_hat[None, :], poly.ntt(pk.t1 << D))) % Q
    )
    col_products = [
        poly.intt(poly.pointwise(c_hat[None, :],
                                 np.ascontiguousarray(a_hat[:, row, :])))
        for row in range(params.l)
    ]  # per row: c * A[:, row] in the coefficient domain

    # full verification also bounds the rows a candidate leaves untouched
    # and the total hint weight; mirror both so the backends agree exactly
    row_norms_ok = np.array([
        poly.infinity_norm(sig.z[r]) < params.gamma1 - params.beta
        for r in range(params.l)
    ])
    hint_ok = int(sig.h.sum()) <= params.omega

    def check(row: int, col: int, sign: int, scale: int,
              delta: np.ndarray) -> bool:
        if not hint_ok or not all(row_norms_ok[r] for r in range(params.l) if r != row):
            return False
        shifted = poly.monomial_shift(col_products[row], col, sign * scale)
        w = (w_base + shifted) % Q
        w1 = rounding.use_hint(sig.h, w, alpha)
        return xof.challenge(mu, packing.pack_w1(w1, params.gamma2)) == sig.c_tilde

    return check


def batch_correct(events: list[FaultEvent], pk: PublicKey, parallelism: int = 1,
                  bit_cap: int = 18, mode: str = "fast",
                  counter: Optional[OracleCounter] = None) -> list[tuple[int, object]]:
    """Correct every event of a fault log.

    Events without a released signature map to Skipped markers.  The
    result order and outcomes are independent of the parallelism degree.
    """

    def one(event: FaultEvent):
        if event.kind == "dos":
            return event.event_id, Skipped("dos"), None
        if event.sig is None:
            return event.event_id, Skipped("no_signature"), None
        local = OracleCounter()
        outcome = correct(event.sig, event.msg, pk, bit_cap, mode, local)
        return event.event_id, outcome, local

    if parallelism <= 1:
        raw = [one(ev) for ev in events]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            raw = list(pool.map(one, events))

    results = []
    for event_id, outcome, local in raw:
        if local is not None and counter is not None:
            counter.merge(local)
        results.append((event_id, outcome))
    return results


def write_recovered(results: list[tuple[int, object]], path: Path) -> None:
    """Recovered-bit records only, one JSON object per line."""
    with open(path, "w") as f:
        for event_id, outcome in results:
            if isinstance(outcome, RecoveredBit):
                obj = {"event_id": event_id, **outcome.to_json()}
                f.write(json.dumps(obj) + "\n")


def read_recovered(path: Path) -> list[tuple[int, RecoveredBit]]:
    out = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            obj = json.loads(line)
            out.append((obj["event_id"], RecoveredBit.from_json(obj)))
    return out
