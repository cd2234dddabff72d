"""Aggregating recovered bits into per-coefficient knowledge.

Secret coefficients in [-eta, eta] sit in 32-bit two's-complement words,
so every bit at or above the sign position repeats the sign bit.  Folding
recoveries onto the three effective positions (z = bit 0, y = bit 1,
x = sign) and filtering the five valid encodings against the known bits
turns scattered single-bit recoveries into candidate-value sets, group
tallies, and the reduced dimension / norm-proxy pair for the estimator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .params import N

POSITIONS = ("z", "y", "x")
_UNKNOWN = -1


class ConflictingObservation(ValueError):
    """Contradictory recoveries for one coefficient (e.g. both 0 and 1 at
    one folded position, or a bit pattern no valid encoding satisfies)."""


def _encoding(value: int) -> tuple[int, int, int]:
    """(z, y, x) bits of the 3-bit two's-complement encoding."""
    word = value & 0b111
    return (word & 1, (word >> 1) & 1, (word >> 2) & 1)


VALID_VALUES = (-2, -1, 0, 1, 2)
ENCODINGS = {v: _encoding(v) for v in VALID_VALUES}


def fold_position(bit_pos: int) -> str:
    """Effective position of a word-bit recovery: 0 -> z, 1 -> y, else x."""
    if not 0 <= bit_pos < 32:
        raise ValueError(f"bit_pos {bit_pos} outside [0, 32)")
    return "z" if bit_pos == 0 else "y" if bit_pos == 1 else "x"


@dataclass(frozen=True)
class BitObservation:
    row: int
    col: int
    bit_pos: int
    value: int

    def folded(self) -> tuple[str, int]:
        return fold_position(self.bit_pos), self.value


def candidate_set(x: Optional[int] = None, y: Optional[int] = None,
                  z: Optional[int] = None) -> frozenset:
    """Values whose encoding matches every known bit; empty means conflict."""
    known = {"z": z, "y": y, "x": x}
    out = []
    for value, bits in ENCODINGS.items():
        if all(known[p] is None or known[p] == bits[i]
               for i, p in enumerate(POSITIONS)):
            out.append(value)
    return frozenset(out)


@dataclass
class GroupTally:
    """Coefficient counts by how much the candidate set pins down."""

    none: int = 0
    one_bit: int = 0
    two_bit: int = 0
    full: int = 0

    @property
    def total(self) -> int:
        return self.none + self.one_bit + self.two_bit + self.full

    def to_json(self) -> dict:
        return {"none": self.none, "one_bit": self.one_bit,
                "two_bit": self.two_bit, "full": self.full}


_SIZE_TO_GROUP = {5: "none", 3: "one_bit", 2: "two_bit", 1: "full"}


@dataclass(frozen=True)
class ReducedParams:
    n_bar: int
    zeta: float
    degenerate: bool = False


class KnowledgeMap:
    """Per-coefficient folded bits over the l x n secret grid."""

    def __init__(self, l: int, n: int = N) -> None:
        self.l = l
        self.n = n
        self.bits = {p: np.full((l, n), _UNKNOWN, dtype=np.int8) for p in POSITIONS}

    def known(self, row: int, col: int) -> dict:
        return {p: (None if self.bits[p][row, col] == _UNKNOWN
                    else int(self.bits[p][row, col]))
                for p in POSITIONS}

    def candidates(self, row: int, col: int) -> frozenset:
        k = self.known(row, col)
        return candidate_set(x=k["x"], y=k["y"], z=k["z"])

    def add(self, obs: BitObservation) -> None:
        if not (0 <= obs.row < self.l and 0 <= obs.col < self.n):
            raise ValueError(f"observation ({obs.row}, {obs.col}) out of range")
        if obs.value not in (0, 1):
            raise ValueError(f"bit value must be 0 or 1, got {obs.value}")
        pos, value = obs.folded()
        current = self.bits[pos][obs.row, obs.col]
        if current != _UNKNOWN and current != value:
            raise ConflictingObservation(
                f"s1[{obs.row}][{obs.col}] position {pos}: "
                f"observed both {int(current)} and {value}"
            )
        k = self.known(obs.row, obs.col)
        k[pos] = value
        if not candidate_set(x=k["x"], y=k["y"], z=k["z"]):
            raise ConflictingObservation(
                f"s1[{obs.row}][{obs.col}]: pattern "
                f"x={k['x']} y={k['y']} z={k['z']} matches no valid encoding"
            )
        self.bits[pos][obs.row, obs.col] = value

    def known_positions(self, row: int, col: int) -> int:
        return sum(self.bits[p][row, col] != _UNKNOWN for p in POSITIONS)

    def equals(self, other: "KnowledgeMap") -> bool:
        return self.l == other.l and self.n == other.n and all(
            np.array_equal(self.bits[p], other.bits[p]) for p in POSITIONS
        )


def ingest(observations: Iterable[BitObservation], l: int, n: int = N) -> KnowledgeMap:
    """Fold and intersect all observations; duplicates are idempotent."""
    kmap = KnowledgeMap(l, n)
    for obs in observations:
        kmap.add(obs)
    return kmap


def classify(kmap: KnowledgeMap) -> tuple[GroupTally, list[GroupTally]]:
    """Total and per-polynomial tallies by candidate-set size."""
    total = GroupTally()
    per_row = []
    for row in range(kmap.l):
        tally = GroupTally()
        for col in range(kmap.n):
            size = len(kmap.candidates(row, col))
            group = _SIZE_TO_GROUP.get(size)
            if group is None:
                raise ConflictingObservation(
                    f"s1[{row}][{col}] has conflicting candidate set"
                )
            setattr(tally, group, getattr(tally, group) + 1)
        per_row.append(tally)
        for name in ("none", "one_bit", "two_bit", "full"):
            setattr(total, name, getattr(total, name) + getattr(tally, name))
    return total, per_row


def reduced_params(kmap: KnowledgeMap) -> ReducedParams:
    """Reduced dimension and the remaining-unknown-bits norm proxy.

    Fully recovered coefficients leave the lattice; the rest are weighted
    by their remaining unknown bit count (3 / 2 / 1), averaged.
    """
    tally, _ = classify(kmap)
    n_bar = tally.total - tally.full
    if n_bar == 0:
        return ReducedParams(0, 0.0, degenerate=True)
    weight = 3 * tally.none + 2 * tally.one_bit + 1 * tally.two_bit
    return ReducedParams(n_bar, weight / n_bar)


def entropy_bits(kmap: KnowledgeMap) -> float:
    """Information-theoretic bits actually recovered, summed over the grid."""
    total = 0.0
    for row in range(kmap.l):
        for col in range(kmap.n):
            total += float(np.log2(5 / len(kmap.candidates(row, col))))
    return total


def export_bitmap(kmap: KnowledgeMap) -> str:
    """CSV grid of folded bit states, with a totals header."""
    tally, _ = classify(kmap)
    lines = [
        f"# coefficients={tally.total} none={tally.none} "
        f"one_bit={tally.one_bit} two_bit={tally.two_bit} full={tally.full}",
        "poly,coeff,z,y,x",
    ]
    for row in range(kmap.l):
        for col in range(kmap.n):
            k = kmap.known(row, col)
            cells = ["unknown" if k[p] is None else str(k[p]) for p in POSITIONS]
            lines.append(f"{row},{col}," + ",".join(cells))
    return "\n".join(lines) + "\n"


def groups_json(kmap: KnowledgeMap) -> dict:
    """Group tallies, raw known-bit distribution, and reduced parameters."""
    tally, per_row = classify(kmap)
    raw = [0, 0, 0, 0]
    for row in range(kmap.l):
        for col in range(kmap.n):
            raw[kmap.known_positions(row, col)] += 1
    reduced = reduced_params(kmap)
    return {
        "groups": tally.to_json(),
        "per_poly": [t.to_json() for t in per_row],
        "raw_known_bits": {str(i): raw[i] for i in range(4)},
        "n_bar": reduced.n_bar,
        "zeta": reduced.zeta,
        "degenerate": reduced.degenerate,
        "entropy_bits": entropy_bits(kmap),
    }


def observations_from_recovered(records) -> list[BitObservation]:
    """Unique observations from (event_id, RecoveredBit) pairs."""
    seen = set()
    out = []
    for _, bit in records:
        key = (bit.row, bit.col, bit.bit_pos, bit.value)
        if key not in seen:
            seen.add(key)
            out.append(BitObservation(bit.row, bit.col, bit.bit_pos, bit.value))
    return out


def write_groups(kmap: KnowledgeMap, path: Path) -> None:
    with open(path, "w") as f:
        json.dump(groups_json(kmap), f, indent=2, sort_keys=True)
        f.write("\n")
