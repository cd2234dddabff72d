"""Single-bit fault injection into the stored s1 coefficient words."""

from __future__ import annotations

from dataclasses import dataclass

from .keys import SecretKey, coeffs_to_words, words_to_coeffs
from .params import N

ZERO_TO_ONE = "zero_to_one"
ONE_TO_ZERO = "one_to_zero"
DIRECTIONS = (ZERO_TO_ONE, ONE_TO_ZERO)


class NoOpFlip(ValueError):
    """The target bit already holds the flip's destination value."""


@dataclass(frozen=True)
class FaultSpec:
    """One bit flip inside the 32-bit two's-complement image of s1."""

    row: int
    col: int
    bit_pos: int
    direction: str

    def __post_init__(self) -> None:
        if not 0 <= self.bit_pos < 32:
            raise ValueError(f"bit_pos {self.bit_pos} outside [0, 32)")
        if not 0 <= self.col < N:
            raise ValueError(f"col {self.col} outside [0, {N})")
        if self.row < 0:
            raise ValueError("row must be nonnegative")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")

    @property
    def original_bit(self) -> int:
        """The pre-fault bit value this flip's direction implies."""
        return 1 if self.direction == ONE_TO_ZERO else 0

    def to_json(self) -> dict:
        return {"row": self.row, "col": self.col,
                "bit_pos": self.bit_pos, "direction": self.direction}

    @classmethod
    def from_json(cls, obj: dict) -> "FaultSpec":
        return cls(obj["row"], obj["col"], obj["bit_pos"], obj["direction"])


def inject(sk: SecretKey, spec: FaultSpec) -> SecretKey:
    """Return a copy of sk with exactly one s1 word bit flipped."""
    if spec.row >= sk.params.l:
        raise ValueError(f"row {spec.row} outside [0, {sk.params.l})")
    words = coeffs_to_words(sk.s1)
    current = int(words[spec.row, spec.col]) >> spec.bit_pos & 1
    expected = 0 if spec.direction == ZERO_TO_ONE else 1
    if current != expected:
        raise NoOpFlip(
            f"bit {spec.bit_pos} of s1[{spec.row}][{spec.col}] is already "
            f"{current}; {spec.direction} flip has no effect"
        )
    words[spec.row, spec.col] ^= 1 << spec.bit_pos
    out = sk.copy()
    out.s1 = words_to_coeffs(words)
    return out


def applicable(sk: SecretKey, spec: FaultSpec) -> bool:
    """Would this flip actually change the stored word?"""
    word = int(coeffs_to_words(sk.s1)[spec.row, spec.col])
    current = word >> spec.bit_pos & 1
    return current == (0 if spec.direction == ZERO_TO_ONE else 1)
