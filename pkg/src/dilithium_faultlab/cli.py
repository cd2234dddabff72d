"""Command-line pipeline: keygen -> campaign -> correct -> aggregate -> estimate.

Each stage reads and writes only its declared files, so later stages can
be rerun without touching earlier artifacts.  Exit codes: 0 success,
1 domain error (verification failure, missing artifact, conflict),
2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, campaign, correction, estimator, knowledge, scheme
from .faults import DIRECTIONS, FaultSpec, inject
from .keys import PublicKey, SecretKey
from .packing import PackingError
from .params import PARAMETER_SETS, get_params

_KEY_SEED_LABEL = 0x6B6579  # 'key'


class CliError(Exception):
    """Domain error: prints one line to stderr and exits 1."""


def _params_for_blob(data: bytes, attr: str, kind: str):
    for params in PARAMETER_SETS.values():
        if len(data) == getattr(params, attr):
            return params
    raise CliError(f"{kind} has unrecognized length {len(data)}")


def _read(path: str, kind: str) -> bytes:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"missing {kind} file {path}")
    return p.read_bytes()


def _load_pk(path: str) -> PublicKey:
    data = _read(path, "public-key")
    return PublicKey.unpack(data, _params_for_blob(data, "pk_bytes", "public key"))


def _load_sk(path: str) -> SecretKey:
    """Packed secret key, or a faulted-key JSON sidecar.

    Faulted coefficients leave the packed coefficient range, so a faulted
    key is stored as the clean packed key plus the flips to reapply.
    """
    data = _read(path, "secret-key")
    if not data.lstrip().startswith(b"{"):
        return SecretKey.unpack(data, _params_for_blob(data, "sk_bytes", "secret key"))
    obj = json.loads(data)
    blob = bytes.fromhex(obj["sk_hex"])
    sk = SecretKey.unpack(blob, _params_for_blob(blob, "sk_bytes", "secret key"))
    for entry in obj.get("faults", []):
        sk = inject(sk, FaultSpec.from_json(entry))
    return sk


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _cmd_keygen(args) -> int:
    params = get_params(args.level)
    seed = bytes.fromhex(args.seed) if args.seed else os.urandom(32)
    if len(seed) != 32:
        raise CliError(f"seed must be 32 bytes, got {len(seed)}")
    pk, sk = scheme.keygen(seed, params)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "pk.bin").write_bytes(pk.pack())
    (out / "sk.bin").write_bytes(sk.pack())
    print(f"{params.name}: wrote pk.bin ({params.pk_bytes} bytes), "
          f"sk.bin ({params.sk_bytes} bytes) to {out}")
    return 0


def _cmd_sign(args) -> int:
    sk = _load_sk(args.sk)
    msg = _read(args.msg, "message")
    outcome = scheme.sign(sk, msg, mode=args.mode, kappa_cap=args.kappa_cap)
    if outcome.is_exhausted:
        raise CliError(f"rejection loop exhausted after {outcome.kappa_used} rounds")
    Path(args.out).write_bytes(outcome.signature.pack(sk.params))
    print(f"signed in {outcome.kappa_used} round(s) -> {args.out}")
    return 0


def _cmd_verify(args) -> int:
    pk = _load_pk(args.pk)
    msg = _read(args.msg, "message")
    sig = _read(args.sig, "signature")
    if scheme.verify(pk, msg, sig):
        print("ok")
        return 0
    print("verification failed", file=sys.stderr)
    return 1


def _cmd_inject(args) -> int:
    data = _read(args.sk, "secret-key")
    if data.lstrip().startswith(b"{"):
        obj = json.loads(data)
        faults = list(obj.get("faults", []))
        blob = bytes.fromhex(obj["sk_hex"])
    else:
        faults = []
        blob = data
    sk = SecretKey.unpack(blob, _params_for_blob(blob, "sk_bytes", "secret key"))
    for entry in faults:
        sk = inject(sk, FaultSpec.from_json(entry))
    spec = FaultSpec(args.row, args.col, args.bit_pos, args.direction)
    inject(sk, spec)  # validates applicability against the current word
    faults.append(spec.to_json())
    level = next(p.name for p in PARAMETER_SETS.values()
                 if p.sk_bytes == len(blob))
    out = {"level": level, "sk_hex": blob.hex(), "faults": faults}
    Path(args.out).write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    print(f"fault ({spec.row}, {spec.col}, bit {spec.bit_pos}, "
          f"{spec.direction}) -> {args.out} ({len(faults)} total)")
    return 0


def _cmd_campaign(args) -> int:
    try:
        config = campaign.CampaignConfig.from_json(
            json.loads(_read(args.config, "config")))
    except TypeError as exc:
        raise CliError(f"bad config: {exc}") from exc
    params = get_params(config.level)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    key_rng = np.random.default_rng(
        np.random.SeedSequence((config.seed, _KEY_SEED_LABEL)))
    key_seed = key_rng.bytes(32)
    pk, sk = scheme.keygen(key_seed, params)
    (out / "pk.bin").write_bytes(pk.pack())
    (out / "sk.bin").write_bytes(sk.pack())

    events = campaign.run_campaign(config, sk, pk)
    campaign.write_events(events, out / "faults.jsonl")

    manifest = {
        "tool": "faultlab",
        "version": __version__,
        "config": config.to_json(),
        "key_seed_hex": key_seed.hex(),
        "artifacts": {name: _digest(out / name)
                      for name in ("pk.bin", "sk.bin", "faults.jsonl")},
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    kinds = {k: sum(1 for e in events if e.kind == k)
             for k in ("clean", "released", "dos", "suppressed")}
    print(f"campaign: {len(events)} events " +
          " ".join(f"{k}={v}" for k, v in kinds.items()) + f" -> {out}")
    return 0


def _cmd_correct(args) -> int:
    pk = _load_pk(args.pk)
    events = campaign.read_events(Path(args.events))
    counter = correction.OracleCounter()
    start = time.perf_counter()
    results = correction.batch_correct(events, pk, parallelism=args.jobs,
                                       bit_cap=args.bit_cap, mode=args.mode,
                                       counter=counter)
    elapsed = time.perf_counter() - start
    correction.write_recovered(results, Path(args.out))
    tallies = {"recovered": 0, "no_fault": 0, "not_found": 0, "skipped": 0}
    for _, outcome in results:
        if isinstance(outcome, correction.RecoveredBit):
            tallies["recovered"] += 1
        elif isinstance(outcome, correction.NoFaultDetected):
            tallies["no_fault"] += 1
        elif isinstance(outcome, correction.NotFound):
            tallies["not_found"] += 1
        else:
            tallies["skipped"] += 1
    print(f"correct: {len(results)} events " +
          " ".join(f"{k}={v}" for k, v in tallies.items()) +
          f" oracle_calls={counter.scan_calls} prechecks={counter.prechecks} "
          f"wall={elapsed:.2f}s -> {args.out}")
    return 0


def _cmd_aggregate(args) -> int:
    records = correction.read_recovered(Path(args.recovered)) \
        if Path(args.recovered).is_file() else None
    if records is None:
        raise CliError(f"missing recovered-bit file {args.recovered}")
    params = get_params(args.level)
    obs = knowledge.observations_from_recovered(records)
    try:
        kmap = knowledge.ingest(obs, l=params.l)
    except knowledge.ConflictingObservation as exc:
        raise CliError(f"aggregation conflict: {exc}") from exc
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "bitmap.csv").write_text(knowledge.export_bitmap(kmap))
    knowledge.write_groups(kmap, out / "groups.json")
    tally, _ = knowledge.classify(kmap)
    reduced = knowledge.reduced_params(kmap)
    print(f"aggregate: {len(records)} records, {len(obs)} unique bits; "
          f"none={tally.none} one_bit={tally.one_bit} two_bit={tally.two_bit} "
          f"full={tally.full}; n_bar={reduced.n_bar} zeta={reduced.zeta:.5f}")
    return 0


def _format_estimate(result: estimator.SecurityEstimate) -> str:
    p, d = result.primal, result.dual
    return (f"n_bar={result.n_bar} zeta={result.zeta:.5f}\n"
            f"primal: m={p.m} b={p.b} classical={p.classical_bits} "
            f"quantum={p.quantum_bits}\n"
            f"dual:   m={d.m} b={d.b} classical={d.classical_bits} "
            f"quantum={d.quantum_bits}")


def _cmd_estimate(args) -> int:
    if args.groups:
        obj = json.loads(_read(args.groups, "groups"))
        n_bar, zeta = obj["n_bar"], obj["zeta"]
        if obj.get("degenerate"):
            raise CliError("all coefficients recovered; nothing left to estimate")
    else:
        if args.n_bar is None or args.zeta is None:
            raise CliError("provide either --groups or both --n-bar and --zeta")
        n_bar, zeta = args.n_bar, args.zeta
    try:
        inp = estimator.EstimatorInput(n_bar=n_bar, zeta=zeta, m_max=args.m_max)
        result = estimator.estimate(inp)
    except (ValueError, estimator.Infeasible) as exc:
        raise CliError(str(exc)) from exc
    print(_format_estimate(result))
    if args.out:
        estimator.write_estimate(result, Path(args.out))
    return 0


def _cmd_report(args) -> int:
    run = Path(args.run)
    needed = {
        "faults.jsonl": "campaign",
        "recovered.jsonl": "correct",
        "groups.json": "aggregate",
        "estimate.json": "estimate",
    }
    for name, stage in needed.items():
        if not (run / name).is_file():
            raise CliError(f"missing {name}; run the {stage} stage first")

    events = campaign.read_events(run / "faults.jsonl")
    records = correction.read_recovered(run / "recovered.jsonl")
    groups = json.loads((run / "groups.json").read_text())
    est = json.loads((run / "estimate.json").read_text())

    kinds = {k: sum(1 for e in events if e.kind == k)
             for k in ("clean", "released", "dos", "suppressed")}
    unique = {(b.row, b.col, b.bit_pos, b.value) for _, b in records}
    summary = {
        "events": {"total": len(events), **kinds},
        "recoveries": {
            "records": len(records),
            "unique_bits": len(unique),
            "duplicates": len(records) - len(unique),
        },
        "groups": groups["groups"],
        "reduced": {"n_bar": groups["n_bar"], "zeta": groups["zeta"]},
        "estimate": est,
    }
    lines = [
        f"events: total={len(events)} " +
        " ".join(f"{k}={v}" for k, v in kinds.items()),
        f"recoveries: records={len(records)} unique={len(unique)} "
        f"duplicates={len(records) - len(unique)}",
        "groups: " + " ".join(f"{k}={v}" for k, v in sorted(groups["groups"].items())),
        f"reduced: n_bar={groups['n_bar']} zeta={groups['zeta']:.5f}",
        "estimate: primal {m} {b} {classical_bits} {quantum_bits}".format(**est["primal"]),
        "estimate: dual   {m} {b} {classical_bits} {quantum_bits}".format(**est["dual"]),
    ]
    print("\n".join(lines))
    if args.json:
        Path(args.json).write_text(
            json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="faultlab",
        description="fault-attack laboratory for the Dilithium signature scheme",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a key pair")
    p.add_argument("--level", default="dilithium2", choices=sorted(PARAMETER_SETS))
    p.add_argument("--seed", help="32-byte hex seed (random if omitted)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_keygen)

    p = sub.add_parser("sign", help="sign a message file")
    p.add_argument("--sk", required=True, help="packed key or faulted-key JSON")
    p.add_argument("--msg", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", default="deterministic",
                   choices=("deterministic", "randomized"))
    p.add_argument("--kappa-cap", type=int, default=scheme.DEFAULT_KAPPA_CAP)
    p.set_defaults(func=_cmd_sign)

    p = sub.add_parser("verify", help="verify a signature file")
    p.add_argument("--pk", required=True)
    p.add_argument("--msg", required=True)
    p.add_argument("--sig", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("inject", help="flip one bit of s1 in a key")
    p.add_argument("--sk", required=True)
    p.add_argument("--row", type=int, required=True)
    p.add_argument("--col", type=int, required=True)
    p.add_argument("--bit-pos", type=int, required=True)
    p.add_argument("--direction", default="one_to_zero", choices=sorted(DIRECTIONS))
    p.add_argument("--out", required=True, help="faulted-key JSON path")
    p.set_defaults(func=_cmd_inject)

    p = sub.add_parser("campaign", help="run a seeded fault campaign")
    p.add_argument("--config", required=True, help="campaign config JSON")
    p.add_argument("--out", required=True, help="run directory")
    p.set_defaults(func=_cmd_campaign)

    p = sub.add_parser("correct", help="recover fault locations from a log")
    p.add_argument("--events", required=True, help="faults.jsonl")
    p.add_argument("--pk", required=True)
    p.add_argument("--out", required=True, help="recovered.jsonl")
    p.add_argument("--bit-cap", type=int, default=18)
    p.add_argument("--mode", default="fast", choices=("fast", "faithful"))
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_correct)

    p = sub.add_parser("aggregate", help="fold recovered bits into knowledge")
    p.add_argument("--recovered", required=True, help="recovered.jsonl")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--level", default="dilithium2", choices=sorted(PARAMETER_SETS))
    p.set_defaults(func=_cmd_aggregate)

    p = sub.add_parser("estimate", help="cost the reduced lattice instance")
    p.add_argument("--n-bar", type=int)
    p.add_argument("--zeta", type=float)
    p.add_argument("--groups", help="groups.json to read n_bar/zeta from")
    p.add_argument("--m-max", type=int, default=estimator.DEFAULT_M_MAX)
    p.add_argument("--out", help="estimate.json path")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("report", help="summarize a completed run directory")
    p.add_argument("--run", required=True)
    p.add_argument("--json", help="also write a JSON summary")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"faultlab: {exc}", file=sys.stderr)
        return 1
    except (PackingError, ValueError, OSError) as exc:
        print(f"faultlab: {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
