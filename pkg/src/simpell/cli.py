"""Command line: ``simpell verify --b 24`` and ``simpell sweep --from 1 --to 200``.

Exit codes: 0 unique, 2 pairs found, 3 not certified, 1 usage or internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction
from pathlib import Path

from mpmath import mp

from .verifier import NOT_CERTIFIED, PAIRS, UNIQUE, Config, VerificationReport, verify_b

SCHEMA = 1
EXIT = {UNIQUE: 0, PAIRS: 2, NOT_CERTIFIED: 3}


def _dec(x: int | None) -> str | None:
    return None if x is None else str(x)


def _decimal(x: Fraction | None, digits: int = 20) -> str | None:
    if x is None:
        return None
    with mp.workdps(digits + 10):
        return mp.nstr(mp.mpf(x.numerator) / x.denominator, digits)


def to_record(report: VerificationReport) -> dict:
    """The versioned JSON record for one b."""
    eps = report.epsilon
    bs = report.bounds
    rec = {
        "schema": SCHEMA,
        "b": report.b,
        "status": report.status,
        "reason": report.reason,
        "epsilon": None if eps is None else
        {"u": _dec(eps.u), "v": _dec(eps.v), "denom": eps.denom, "norm": eps.norm()},
        "c_m": None if bs is None else _dec(bs.c_m),
        "c_n1": None if bs is None else bs.c_n1,
        "c_n1_witness": None if bs is None else
        {"index": bs.witness_index, "q_k": _dec(bs.witness_q), "A": bs.witness_A},
        "candidates": [
            {"n": c.n, "x": _dec(c.x), "z": _dec(c.z), "skipped": c.skipped, "c_l": c.c_l,
             "pi_fallback": c.pi_fallback, "c_n2": c.c_n2}
            for c in report.candidates
        ],
        "reductions": [
            {"n": r.n, "l": r.l, "q_k": _dec(r.q_k), "kappa": _decimal(r.kappa),
             "bound": r.bound, "initial_bound": _dec(r.initial_bound), "reason": r.reason}
            for r in report.reductions
        ],
        "pairs": [
            {"n": p.n, "n_prime": p.n_prime, "x": _dec(p.x), "x_prime": _dec(p.x_prime),
             "partial": p.partial,
             "recovered": [{k: _dec(v) for k, v in vars(s).items()} for s in p.recovered]}
            for p in report.pairs
        ],
        "timings_ms": {k: round(v, 3) for k, v in report.timings_ms.items()},
    }
    return rec


def dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def _text(report: VerificationReport) -> str:
    lines = [f"b = {report.b}: {report.status}" + (f" ({report.reason})" if report.reason else "")]
    if report.epsilon is not None:
        lines.append(f"  fundamental unit  {report.epsilon}  (norm {report.epsilon.norm()})")
    bs = report.bounds
    if bs is not None:
        lines.append(f"  c_m = {bs.c_m:.4e}   c_n1 = {bs.c_n1}   witness q_{bs.witness_index} = {bs.witness_q}")
    kept = [str(c.x) for c in report.kept]
    lines.append(f"  candidates: {len(report.candidates)} examined, {len(kept)} kept")
    if kept:
        lines.append("  kept x: " + ", ".join(kept[:8]) + (" ..." if len(kept) > 8 else ""))
    for p in report.pairs:
        lines.append(f"  PAIR x={p.x} x'={p.x_prime}: " +
                     ", ".join(f"a={s.a} y={s.y} y'={s.y_prime}" for s in p.recovered))
    lines.append(f"  {report.timings_ms.get('total', 0):.1f} ms")
    return "\n".join(lines)


def _config(args) -> Config:
    return Config(
        precision_bits=args.precision_bits,
        precision_ceiling_bits=args.precision_ceiling_bits,
        factor_budget_ms=args.factor_budget_ms,
        scan_cap=args.scan_cap,
        seed=args.seed,
    )


def cmd_verify(args) -> int:
    if args.b < 1:
        print("error: --b must be at least 1", file=sys.stderr)
        return 1
    report = verify_b(args.b, _config(args))
    print(_text(report) if args.text else dumps(to_record(report)))
    return EXIT[report.status]


# ------------------------------------------------------------------ sweep

def _work(b: int, config: Config) -> tuple[int, str]:
    return b, dumps(to_record(verify_b(b, config)))


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def _load_records(out: Path) -> dict[int, dict]:
    """Whole records already in ``out``; a torn final line is cut off."""
    records: dict[int, dict] = {}
    if not out.exists():
        return records
    good = 0
    with open(out, "rb") as fh:
        for raw in fh:
            if not raw.endswith(b"\n"):
                break
            try:
                rec = json.loads(raw)
            except json.JSONDecodeError:
                break
            records[rec["b"]] = rec
            good += len(raw)
    if good != out.stat().st_size:
        with open(out, "r+b") as fh:
            fh.truncate(good)
    return records


def sweep(lo: int, hi: int, out: Path, checkpoint: Path, config: Config, jobs: int = 1) -> dict:
    """Verify every b in [lo, hi], appending one JSON line per b to ``out``.

    Resumes from ``checkpoint`` when it exists; raises ``ValueError`` when the
    checkpoint belongs to a different range or configuration.
    """
    fp = config.fingerprint()
    if checkpoint.exists():
        state = json.loads(checkpoint.read_text())
        if state["fingerprint"] != fp:
            raise ValueError("checkpoint was written with a different configuration")
        if state["range"] != [lo, hi]:
            raise ValueError(f"checkpoint covers range {state['range']}, not {[lo, hi]}")
    elif out.exists() and out.stat().st_size:
        raise ValueError(f"{out} exists without a checkpoint; remove it or pass its checkpoint")
    records = _load_records(out)
    done = set(records)

    def save_state() -> None:
        _write_atomic(checkpoint, json.dumps(
            {"range": [lo, hi], "completed": sorted(done), "out": str(out), "fingerprint": fp}))

    save_state()
    todo = [b for b in range(lo, hi + 1) if b not in done]
    with open(out, "a") as fh:
        def emit(b: int, line: str) -> None:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())
            records[b] = json.loads(line)
            done.add(b)
            save_state()

        if jobs <= 1:
            for b in todo:
                emit(*_work(b, config))
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(_work, b, config) for b in todo]
                for fut in as_completed(futures):
                    emit(*fut.result())
    return summarize(records.values())


def summarize(records) -> dict:
    records = list(records)
    counts = {UNIQUE: 0, PAIRS: 0, NOT_CERTIFIED: 0}
    times = []
    for rec in records:
        counts[rec["status"]] += 1
        times.append(rec["timings_ms"].get("total", 0.0))
    total = sum(times)
    return {
        "summary": True,
        "records": len(records),
        "counts": counts,
        "total_ms": round(total, 1),
        "mean_ms": round(total / len(times), 1) if times else 0.0,
        "max_ms": round(max(times), 1) if times else 0.0,
    }


def cmd_sweep(args) -> int:
    lo, hi = args.from_, args.to
    if lo < 1 or hi < lo:
        print("error: need 1 <= --from <= --to", file=sys.stderr)
        return 1
    out = Path(args.out or f"sweep_{lo}_{hi}.jsonl")
    ckpt = Path(args.checkpoint or f"{out}.ckpt.json")
    try:
        summary = sweep(lo, hi, out, ckpt, _config(args), args.jobs)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(summary, sort_keys=True))
    counts = summary["counts"]
    if counts[PAIRS]:
        return 2
    if counts[NOT_CERTIFIED]:
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=argparse.SUPPRESS,
                        help="initial working precision (default 192)")
    common.add_argument("--precision-ceiling-bits", type=int, default=argparse.SUPPRESS,
                        help="give up certifying beyond this precision (default 32768)")
    common.add_argument("--factor-budget-ms", type=int, default=argparse.SUPPRESS,
                        help="time budget per factorization (default 5000)")
    common.add_argument("--scan-cap", type=int, default=argparse.SUPPRESS,
                        help="largest second-solution range scanned without a reduction (default 10^7)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized primality rounds (default 0)")

    parser = argparse.ArgumentParser(
        prog="simpell", parents=[common],
        description="Certify that x^2 - a y^2 = 1, z^2 - b x^2 = 1 has at most one solution.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="check a single b")
    v.add_argument("--b", type=int, required=True)
    fmt = v.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON record (default)")
    fmt.add_argument("--text", action="store_true", help="human readable summary")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", parents=[common], help="check every b in a range")
    s.add_argument("--from", dest="from_", type=int, required=True)
    s.add_argument("--to", type=int, required=True)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", default=None, help="JSONL output (default sweep_FROM_TO.jsonl)")
    s.add_argument("--checkpoint", default=None, help="checkpoint file (default OUT.ckpt.json)")
    s.set_defaults(func=cmd_sweep)
    return parser


_DEFAULTS = {"precision_bits": 192, "precision_ceiling_bits": 1 << 15,
             "factor_budget_ms": 5000, "scan_cap": 10**7, "seed": 0}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    for key, value in _DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - report and map to exit code 1
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
