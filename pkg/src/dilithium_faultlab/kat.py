"""Known-answer-test harness: NIST DRBG seed schedule and .rsp files.

Vectors are produced with the same AES-256-CTR DRBG and per-count seed
schedule the NIST submission harness uses, so output files are directly
comparable against published .rsp files when those are supplied.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterator, Optional

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from . import scheme
from .params import DILITHIUM2, ParameterSet

KAT_ENTROPY = bytes(range(48))


class NistDrbg:
    """AES-256-CTR DRBG from the NIST KAT generator (randombytes_init)."""

    def __init__(self, entropy: bytes, personalization: bytes = b"") -> None:
        if len(entropy) != 48:
            raise ValueError("entropy input must be 48 bytes")
        seed = bytearray(entropy)
        if personalization:
            if len(personalization) != 48:
                raise ValueError("personalization string must be 48 bytes")
            for i in range(48):
                seed[i] ^= personalization[i]
        self._key = bytes(32)
        self._v = bytes(16)
        self._update(bytes(seed))

    def _aes_blocks(self, count: int) -> bytes:
        enc = Cipher(algorithms.AES(self._key), modes.ECB()).encryptor()
        out = bytearray()
        v = int.from_bytes(self._v, "big")
        for _ in range(count):
            v = (v + 1) % (1 << 128)
            out += enc.update(v.to_bytes(16, "big"))
        self._v = v.to_bytes(16, "big")
        return bytes(out)

    def _update(self, provided: Optional[bytes]) -> None:
        temp = bytearray(self._aes_blocks(3))
        if provided is not None:
            for i in range(48):
                temp[i] ^= provided[i]
        self._key = bytes(temp[:32])
        self._v = bytes(temp[32:])

    def random_bytes(self, n: int) -> bytes:
        blocks = self._aes_blocks((n + 15) // 16)
        self._update(None)
        return blocks[:n]


def kat_records(params: ParameterSet = DILITHIUM2, count: int = 100,
                entropy: bytes = KAT_ENTROPY) -> Iterator[dict]:
    """Generate KAT records with the standard seed/message schedule."""
    top = NistDrbg(entropy)
    seeds = []
    for i in range(count):
        seed = top.random_bytes(48)
        msg = top.random_bytes(33 * (i + 1))
        seeds.append((seed, msg))
    for i, (seed, msg) in enumerate(seeds):
        drbg = NistDrbg(seed)
        pk, sk = scheme.keygen(drbg.random_bytes(32), params)
        outcome = scheme.sign(sk, msg)
        sig = outcome.signature.pack(params)
        yield {
            "count": i,
            "seed": seed,
            "mlen": len(msg),
            "msg": msg,
            "pk": pk.pack(),
            "sk": sk.pack(),
            "smlen": len(sig) + len(msg),
            "sm": sig + msg,
        }


def write_rsp(records, path: Path, name: str) -> None:
    with open(path, "w") as f:
        f.write(f"# {name}\n\n")
        for r in records:
            f.write(f"count = {r['count']}\n")
            f.write(f"seed = {r['seed'].hex().upper()}\n")
            f.write(f"mlen = {r['mlen']}\n")
            f.write(f"msg = {r['msg'].hex().upper()}\n")
            f.write(f"pk = {r['pk'].hex().upper()}\n")
            f.write(f"sk = {r['sk'].hex().upper()}\n")
            f.write(f"smlen = {r['smlen']}\n")
            f.write(f"sm = {r['sm'].hex().upper()}\n\n")


def parse_rsp(path: Path) -> list[dict]:
    records: list[dict] = []
    current: dict = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = re.match(r"^(\w+)\s*=\s*(.*)$", line)
        if not m:
            continue
        field, value = m.group(1), m.group(2).strip()
        if field == "count" and current:
            records.append(current)
            current = {}
        if field in ("count", "mlen", "smlen"):
            current[field] = int(value)
        else:
            current[field] = bytes.fromhex(value)
    if current:
        records.append(current)
    return records


def check_against_rsp(path: Path, params: ParameterSet = DILITHIUM2,
                      limit: Optional[int] = None) -> tuple[int, int]:
    """Regenerate each record of an .rsp file; returns (matched, total)."""
    reference = parse_rsp(path)
    if limit is not None:
        reference = reference[:limit]
    matched = 0
    ours = kat_records(params, count=len(reference))
    for ref, mine in zip(reference, ours):
        same = all(
            ref.get(field) == mine[field]
            for field in ("seed", "msg", "pk", "sk", "sm")
            if field in ref
        )
        matched += int(same)
    return matched, len(reference)
