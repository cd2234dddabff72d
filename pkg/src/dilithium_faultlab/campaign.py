"""Reproducible fault-injection campaigns producing signed event logs.

All randomness (template, placements, messages, flip choices, randomized
signing) derives from the single campaign seed through labeled children,
so a campaign replays bit-for-bit from its config and key seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import scheme
from .dram import DEFAULT_PAGE_SIZE, place_victim, template_generate
from .faults import FaultSpec, NoOpFlip, inject
from .keys import PublicKey, SecretKey, coeffs_to_words
from .params import get_params

MAX_RELOCATIONS_PER_ROUND = 50


@dataclass
class CampaignConfig:
    level: str = "dilithium2"
    mode: str = "deterministic"
    num_signatures: int = 100
    flip_density: float = 0.0003
    direction_ratio: float = 0.5
    page_size: int = DEFAULT_PAGE_SIZE
    pages: int = 8
    bit_positions: Optional[list[int]] = None
    relocate_policy: str = "exhaust"
    kappa_cap: int = scheme.DEFAULT_KAPPA_CAP
    verify_after_sign: bool = False
    spatial_redundancy: bool = False
    log_ground_truth: bool = True
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_signatures < 1:
            raise ValueError("num_signatures must be positive")
        if self.relocate_policy not in ("exhaust", "never"):
            raise ValueError(f"unknown relocate_policy {self.relocate_policy!r}")
        get_params(self.level)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "mode": self.mode,
            "num_signatures": self.num_signatures,
            "flip_density": self.flip_density,
            "direction_ratio": self.direction_ratio,
            "page_size": self.page_size,
            "pages": self.pages,
            "bit_positions": self.bit_positions,
            "relocate_policy": self.relocate_policy,
            "kappa_cap": self.kappa_cap,
            "verify_after_sign": self.verify_after_sign,
            "spatial_redundancy": self.spatial_redundancy,
            "log_ground_truth": self.log_ground_truth,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CampaignConfig":
        return cls(**obj)


@dataclass
class FaultEvent:
    event_id: int
    kind: str  # clean | released | dos | suppressed
    msg: bytes
    sig: Optional[bytes]
    kappa_used: int
    ground_truth: Optional[FaultSpec] = None
    value: Optional[int] = None

    def to_json(self) -> dict:
        obj: dict = {
            "event_id": self.event_id,
            "kind": self.kind,
            "msg_hex": self.msg.hex(),
            "dos": self.kind == "dos",
            "kappa_used": self.kappa_used,
        }
        if self.sig is not None:
            obj["sig_hex"] = self.sig.hex()
        if self.ground_truth is not None:
            gt = self.ground_truth.to_json()
            gt["value"] = self.value
            obj["ground_truth"] = gt
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "FaultEvent":
        gt = obj.get("ground_truth")
        spec = value = None
        if gt is not None:
            spec = FaultSpec.from_json(gt)
            value = gt.get("value")
        return cls(
            event_id=obj["event_id"],
            kind=obj["kind"],
            msg=bytes.fromhex(obj["msg_hex"]),
            sig=bytes.fromhex(obj["sig_hex"]) if "sig_hex" in obj else None,
            kappa_used=obj["kappa_used"],
            ground_truth=spec,
            value=value,
        )


def write_events(events: list[FaultEvent], path: Path) -> None:
    with open(path, "w") as f:
        for ev in events:
            f.write(json.dumps(ev.to_json()) + "\n")


def read_events(path: Path) -> list[FaultEvent]:
    out = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            out.append(FaultEvent.from_json(json.loads(line)))
    return out


class _PlacementCursor:
    """Walks placements of the key in the template, tracking used cells."""

    def __init__(self, template, placement_seed: int, params, config) -> None:
        self._template = template
        self._seed = placement_seed
        self._params = params
        self._config = config
        self._index = 0
        self._used: set = set()
        self._load()

    def _load(self) -> None:
        seed = np.random.SeedSequence((self._seed, self._index))
        self._available = [
            spec for spec in place_victim(self._template, seed, self._params)
            if self._config.bit_positions is None
            or spec.bit_pos in self._config.bit_positions
        ]

    def _candidates(self) -> list[FaultSpec]:
        return [s for s in self._available if s not in self._used]

    def draw(self, rng: np.random.Generator) -> Optional[FaultSpec]:
        """Pick an unused eligible cell, relocating per policy when exhausted."""
        relocations = 0
        while True:
            candidates = self._candidates()
            if candidates:
                spec = candidates[int(rng.integers(0, len(candidates)))]
                self._used.add(spec)
                return spec
            if (self._config.relocate_policy != "exhaust"
                    or relocations >= MAX_RELOCATIONS_PER_ROUND):
                return None
            self._index += 1
            self._used.clear()
            self._load()
            relocations += 1


def run_campaign(config: CampaignConfig, sk: SecretKey,
                 pk: PublicKey) -> list[FaultEvent]:
    params = get_params(config.level)
    if params is not sk.params:
        raise ValueError("config level does not match the supplied key")

    root = np.random.SeedSequence(config.seed)
    t_seed, p_seed, m_seed, f_seed, s_seed = (int(x) for x in root.generate_state(5))
    template = template_generate(
        t_seed, config.flip_density, config.direction_ratio,
        config.page_size, config.pages,
    )
    cursor = _PlacementCursor(template, p_seed, params, config)
    rng_msg = np.random.default_rng(m_seed)
    rng_flip = np.random.default_rng(f_seed)
    rng_sign = np.random.default_rng(s_seed)
    clean_words = coeffs_to_words(sk.s1)

    events: list[FaultEvent] = []
    for event_id in range(config.num_signatures):
        msg = rng_msg.bytes(32)
        spec = cursor.draw(rng_flip)

        faulted = sk
        applied: Optional[FaultSpec] = None
        if spec is not None:
            try:
                faulted = inject(sk, spec)
                applied = spec
            except NoOpFlip:
                faulted = sk  # hammering a cell already at its target value

        gt = applied if config.log_ground_truth else None
        value = applied.original_bit if gt is not None else None

        if (config.spatial_redundancy and applied is not None
                and not np.array_equal(coeffs_to_words(faulted.s1), clean_words)):
            events.append(FaultEvent(event_id, "suppressed", msg, None, 0, gt, value))
            continue

        outcome = scheme.sign(faulted, msg, config.mode, config.kappa_cap,
                              rng=rng_sign)
        if outcome.is_exhausted:
            events.append(FaultEvent(event_id, "dos", msg, None,
                                     outcome.kappa_used, gt, value))
            continue

        sig = outcome.signature.pack(params)
        if config.verify_after_sign and not scheme.verify(pk, msg, sig):
            events.append(FaultEvent(event_id, "suppressed", msg, None,
                                     outcome.kappa_used, gt, value))
            continue

        kind = "released" if applied is not None else "clean"
        events.append(FaultEvent(event_id, kind, msg, sig,
                                 outcome.kappa_used, gt, value))
    return events
