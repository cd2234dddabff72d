"""Statistical DRAM flip-template model with victim placement.

The template stands in for a profiled stretch of physical memory: a sparse
set of cells known to flip under hammering, each with a fixed direction.
Placing the victim maps the secret-key word array onto that region at some
word-aligned offset; re-placing with a fresh seed models forcing the key
to relocate once a placement's usable flips are exhausted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .faults import DIRECTIONS, ONE_TO_ZERO, ZERO_TO_ONE, FaultSpec
from .params import N, ParameterSet

DEFAULT_PAGE_SIZE = 4096


@dataclass(frozen=True)
class DramTemplate:
    """Profiled flip sites over a region of pages.

    vulnerable_cells holds (byte_offset, bit, direction) triples with
    byte_offset relative to the region start; each cell flips in exactly
    one direction.
    """

    page_size: int
    pages: int
    vulnerable_cells: frozenset
    flip_density: float
    seed: int

    @property
    def region_bytes(self) -> int:
        return self.page_size * self.pages


def template_generate(seed: int, flip_density: float, direction_ratio: float = 0.5,
                      page_size: int = DEFAULT_PAGE_SIZE, pages: int = 8) -> DramTemplate:
    """Deterministically draw a flip template.

    The cell count is the rounded expectation density * region bits, so the
    realized density is exact up to rounding; direction_ratio is the
    fraction of cells flipping zero-to-one.
    """
    if not 0 <= flip_density < 1:
        raise ValueError("flip_density must lie in [0, 1)")
    if not 0 <= direction_ratio <= 1:
        raise ValueError("direction_ratio must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    total_bits = page_size * pages * 8
    count = round(flip_density * total_bits)
    positions = rng.choice(total_bits, size=count, replace=False)
    towards_one = rng.random(count) < direction_ratio
    cells = frozenset(
        (int(p) // 8, int(p) % 8, ZERO_TO_ONE if up else ONE_TO_ZERO)
        for p, up in zip(positions, towards_one)
    )
    return DramTemplate(page_size, pages, cells, flip_density, seed)


def place_victim(template: DramTemplate, placement_seed: int,
                 params: ParameterSet) -> list[FaultSpec]:
    """Flippable s1 positions for one placement of the key in the region.

    The s1 word array lands at a word-aligned offset drawn from the
    placement seed; cells inside its span translate to (row, col, bit_pos)
    coordinates assuming little-endian 32-bit words in row-major order.
    """
    s1_bytes = params.l * N * 4
    if s1_bytes > template.region_bytes:
        raise ValueError("secret key span exceeds the templated region")
    rng = np.random.default_rng(placement_seed)
    max_words = (template.region_bytes - s1_bytes) // 4
    offset = int(rng.integers(0, max_words + 1)) * 4
    flippable = []
    for byte_offset, bit, direction in template.vulnerable_cells:
        if not offset <= byte_offset < offset + s1_bytes:
            continue
        rel = byte_offset - offset
        word, byte_in_word = divmod(rel, 4)
        row, col = divmod(word, N)
        flippable.append(FaultSpec(row, col, byte_in_word * 8 + bit, direction))
    flippable.sort(key=lambda f: (f.row, f.col, f.bit_pos, f.direction))
    return flippable
