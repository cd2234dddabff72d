"""Backend comparison: compiled transform core vs the numpy fallback.

Micro benches time the raw kernels in-process; macro benches (sign,
verify, correction) run in subprocesses so each backend's import-time
binding is exercised exactly as a user would see it.

    python3 -m dilithium_faultlab.bench [--quick]
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import subprocess
import sys
import time

import numpy as np

from . import kernels


def _time_of(fn, reps: int) -> float:
    """Median seconds per call."""
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def bench_kernels(reps: int = 30) -> list[tuple[str, float, float]]:
    rng = np.random.default_rng(7)
    rows = []
    for label, batch in (("4x256", 4), ("64x256", 64)):
        a = rng.integers(0, kernels.Q, size=(batch, 256), dtype=np.int64)
        b = rng.integers(0, kernels.Q, size=(batch, 256), dtype=np.int64)
        pairs = [
            (f"ntt {label}", lambda: kernels.ntt_numpy(a),
             (lambda: kernels._ntt_compiled(a)) if kernels.BACKEND == "compiled" else None),
            (f"intt {label}", lambda: kernels.intt_numpy(a),
             (lambda: kernels._intt_compiled(a)) if kernels.BACKEND == "compiled" else None),
            (f"pointwise {label}", lambda: kernels.pointwise_numpy(a, b),
             (lambda: kernels._pointwise_compiled(a, b)) if kernels.BACKEND == "compiled" else None),
        ]
        for name, numpy_fn, compiled_fn in pairs:
            t_numpy = _time_of(numpy_fn, reps)
            t_compiled = _time_of(compiled_fn, reps) if compiled_fn else float("nan")
            rows.append((name, t_compiled, t_numpy))
    return rows


def _macro_payload(signs: int) -> dict:
    """Timings for one backend; runs inside the subprocess."""
    from . import correction, scheme
    from .faults import FaultSpec, inject
    from .params import DILITHIUM2

    pk, sk = scheme.keygen(bytes(range(32)), DILITHIUM2)
    msgs = [bytes([i]) * 24 for i in range(signs)]

    t0 = time.perf_counter()
    sigs = [scheme.sign(sk, m).signature.pack(DILITHIUM2) for m in msgs]
    sign_s = (time.perf_counter() - t0) / signs

    t0 = time.perf_counter()
    ok = all(scheme.verify(pk, m, s) for m, s in zip(msgs, sigs))
    verify_s = (time.perf_counter() - t0) / signs
    assert ok

    faulted = inject(sk, FaultSpec(1, 77, 1, "one_to_zero"))
    bad = scheme.sign(faulted, b"macro bench").signature.pack(DILITHIUM2)
    t0 = time.perf_counter()
    outcome = correction.correct(bad, b"macro bench", pk, bit_cap=18)
    correct_s = time.perf_counter() - t0
    assert isinstance(outcome, correction.RecoveredBit)

    return {"backend": kernels.BACKEND, "sign_s": sign_s,
            "verify_s": verify_s, "correct_s": correct_s}


def _run_macro(pure: bool, signs: int) -> dict:
    env = dict(os.environ)
    env["FAULTLAB_PURE_PYTHON"] = "1" if pure else ""
    out = subprocess.run(
        [sys.executable, "-m", "dilithium_faultlab.bench", "--inner", str(signs)],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def _fmt(seconds: float) -> str:
    if seconds != seconds:  # nan: backend unavailable
        return "n/a"
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    if seconds < 1.0:
        return f"{seconds * 1e3:8.2f} ms"
    return f"{seconds:8.2f} s "


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="fewer repetitions")
    parser.add_argument("--inner", type=int, metavar="SIGNS",
                        help="internal: emit one backend's macro timings as JSON")
    args = parser.parse_args(argv)

    if args.inner is not None:
        print(json.dumps(_macro_payload(args.inner)))
        return 0

    reps = 10 if args.quick else 30
    signs = 8 if args.quick else 32

    print(f"active backend: {kernels.BACKEND}")
    header = f"{'benchmark':<22} {'compiled':>12} {'numpy':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, t_c, t_n in bench_kernels(reps):
        ratio = f"{t_n / t_c:8.1f}x" if t_c == t_c and t_c > 0 else "      n/a"
        print(f"{name:<22} {_fmt(t_c):>12} {_fmt(t_n):>12} {ratio:>9}")

    if kernels.BACKEND != "compiled":
        print("compiled extension unavailable; macro comparison skipped")
        return 0

    fast = _run_macro(pure=False, signs=signs)
    slow = _run_macro(pure=True, signs=signs)
    assert fast["backend"] == "compiled" and slow["backend"] == "numpy"
    for key, label in (("sign_s", "sign (det)"), ("verify_s", "verify"),
                       ("correct_s", "correction p=1")):
        ratio = slow[key] / fast[key]
        print(f"{label:<22} {_fmt(fast[key]):>12} {_fmt(slow[key]):>12} {ratio:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
