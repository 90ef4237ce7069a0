"""Command-line front end: generate | sweep | grover | fit.

Every run echoes its full configuration into each output file, so a repeated
invocation with the same flags reproduces the data sections byte for byte.
Exit code 0 means zero instance failures and all outputs written.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .entanglement import Bipartition
from .grover import grover_dense_oracle, grover_effective, grover_entropy, grover_gap
from .instances import generate_instance, instance_from_json, instance_to_json, validate_instance
from .reports import load_summary, write_grover_csv, write_summary_json, write_sweep_csv
from .sweep import aggregate, fit_peak_asymmetry, fit_linear, run_ensemble, s_grid

logger = logging.getLogger(__name__)

ORACLE_MATCH_TOL = 1e-10


def _parse_n_range(text: str) -> list[int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected A:B:STEP, got {text!r}")
    a, b, step = (int(p) for p in parts)
    if step < 1 or b < a:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return list(range(a, b + 1, step))


def _add_common(p: argparse.ArgumentParser, with_count: bool = True) -> None:
    sizes = p.add_mutually_exclusive_group(required=True)
    sizes.add_argument("--n", type=int, help="qubit count")
    sizes.add_argument("--n-range", type=_parse_n_range, help="qubit counts A:B:STEP (inclusive)")
    if with_count:
        p.add_argument("--count", type=int, default=1, help="instances per size")
        p.add_argument("--seed", type=int, default=0, help="master RNG seed")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")


def _sizes(args) -> list[int]:
    return args.n_range if args.n_range else [args.n]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adiasweep",
        description="Ground-state entanglement and gap sweeps for Exact Cover interpolating Hamiltonians",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log per-instance progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write instance JSON files")
    _add_common(p_gen)

    p_sweep = sub.add_parser("sweep", help="sweep ensembles over the s grid; write CSV + summary JSON")
    _add_common(p_sweep)
    p_sweep.add_argument("--step", type=float, default=0.01, help="s-grid step")
    p_sweep.add_argument("--block", type=str, default=None, help="comma-separated block qubits (default: first half)")
    p_sweep.add_argument("--tol", type=float, default=1e-10, help="eigensolver residual tolerance")
    p_sweep.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="parallel instance workers")

    p_grover = sub.add_parser("grover", help="closed-form search-Hamiltonian scan; write CSV")
    _add_common(p_grover, with_count=False)
    p_grover.add_argument("--step", type=float, default=0.01, help="s-grid step")
    p_grover.add_argument("--block", type=int, default=None, help="block size (default n//2)")
    p_grover.add_argument("--verify", action="store_true", help="cross-check against the dense oracle (n <= 12)")

    p_fit = sub.add_parser("fit", help="fit scaling laws across summary JSON files")
    p_fit.add_argument("summaries", type=Path, nargs="+", help="summary JSON files from sweep runs")
    p_fit.add_argument("--out", type=Path, default=Path("."), help="output directory")
    return parser


def cmd_generate(args) -> int:
    config = {
        "command": "generate",
        "version": __version__,
        "n": _sizes(args),
        "count": args.count,
        "seed": args.seed,
    }
    args.out.mkdir(parents=True, exist_ok=True)
    for n in _sizes(args):
        children = np.random.SeedSequence((args.seed, n)).spawn(args.count)
        for i in range(args.count):
            inst = generate_instance(n, children[i])
            path = args.out / f"instance_n{n:02d}_{i:04d}.json"
            path.write_text(instance_to_json(inst))
            validate_instance(instance_from_json(path.read_text()))
            print(f"{path}: n={inst.n} clauses={inst.num_clauses} solution={inst.solution:#0{inst.n + 2}b}")
    print(f"config: {json.dumps(config, sort_keys=True)}")
    return 0


def cmd_sweep(args) -> int:
    block = tuple(int(q) for q in args.block.split(",")) if args.block else None
    part = Bipartition(block=block) if block else None
    config = {
        "command": "sweep",
        "version": __version__,
        "n": _sizes(args),
        "count": args.count,
        "seed": args.seed,
        "step": args.step,
        "block": list(block) if block else None,
        "tol": args.tol,
    }
    args.out.mkdir(parents=True, exist_ok=True)
    runs, failures = {}, {}
    for n in _sizes(args):
        run = run_ensemble(
            n, args.count, seed=(args.seed, n), grid_step=args.step, part=part, tol=args.tol, jobs=args.jobs
        )
        runs[n] = run
        failures[n] = len(run.failures)
        for instance_id, message in run.failures:
            print(f"instance {instance_id} (n={n}) failed: {message}", file=sys.stderr)

    all_results = [r for run in runs.values() for r in run.results]
    if not all_results:
        print("all instances failed; nothing to aggregate", file=sys.stderr)
        return 1
    summary = aggregate(all_results)
    write_sweep_csv(args.out / "sweep.csv", runs, config)
    write_summary_json(args.out / "summary.json", summary, config, failures)
    for g in summary.groups:
        print(
            f"n={g.n}: mean peak entropy {g.entropy_max_mean:.4f} bits at s={g.s_peak_mean:.3f}, "
            f"mean min gap {g.gap_min_mean:.4f} at s={g.s_gapmin_mean:.3f} ({g.count} instances)"
        )
    print(f"wrote {args.out / 'sweep.csv'} and {args.out / 'summary.json'}")
    return 0 if sum(failures.values()) == 0 else 1


def cmd_grover(args) -> int:
    config = {
        "command": "grover",
        "version": __version__,
        "n": _sizes(args),
        "step": args.step,
        "block": args.block,
        "verify": args.verify,
    }
    args.out.mkdir(parents=True, exist_ok=True)
    grid = s_grid(args.step)
    rows = []
    worst = 0.0
    for n in _sizes(args):
        block = args.block if args.block is not None else n // 2
        for s in grid:
            gap = grover_gap(float(s), n)
            entropy = grover_entropy(float(s), n, block)
            rows.append((n, float(s), gap, entropy))
            if args.verify:
                evals, _ = grover_dense_oracle(float(s), n)
                eff = np.linalg.eigvalsh(grover_effective(float(s), n))
                worst = max(worst, abs(evals[0] - eff[0]), abs((evals[-1] if s in (0.0, 1.0) else 1.0) - 1.0))
                worst = max(worst, abs(gap - (eff[1] - eff[0])))
    write_grover_csv(args.out / "grover.csv", rows, config)
    print(f"wrote {args.out / 'grover.csv'} ({len(rows)} rows)")
    if args.verify:
        print(f"oracle max deviation: {worst:.3e}")
        if worst > ORACLE_MATCH_TOL:
            print(f"oracle deviation exceeds {ORACLE_MATCH_TOL}", file=sys.stderr)
            return 1
    return 0


def cmd_fit(args) -> int:
    groups = {}
    configs = []
    for path in args.summaries:
        doc = load_summary(path)
        configs.append({"path": str(path), "config": doc.get("config")})
        for g in doc["groups"]:
            groups[g["n"]] = g
    if len(groups) < 3:
        print(f"need summaries covering at least 3 sizes, got {sorted(groups)}", file=sys.stderr)
        return 1
    ns = np.array(sorted(groups), dtype=np.float64)
    entropy_means = np.array([groups[int(n)]["entropy_max"]["mean"] for n in ns])
    gap_means = np.array([groups[int(n)]["gap_min"]["mean"] for n in ns])
    entropy_fit = fit_linear(ns, entropy_means)
    gap_fit = fit_linear(1.0 / ns, gap_means)

    top = groups[int(ns[-1])]
    curve_s = np.array(top["mean_entropy_curve"]["s"])
    curve_e = np.array(top["mean_entropy_curve"]["entropy_bits"])
    peak = None
    if curve_s.size >= 3:
        s_c = float(curve_s[int(np.argmax(curve_e))])
        try:
            peak = fit_peak_asymmetry(curve_s, curve_e, s_c, float(curve_s[1] - curve_s[0]))
        except ValueError as exc:
            print(f"peak fit skipped: {exc}", file=sys.stderr)

    from dataclasses import asdict

    report = {
        "config": {"command": "fit", "version": __version__, "inputs": configs},
        "sizes": [int(n) for n in ns],
        "entropy_vs_n": asdict(entropy_fit),
        "gap_vs_inverse_n": asdict(gap_fit),
        "peak_shape": asdict(peak) if peak else None,
    }
    args.out.mkdir(parents=True, exist_ok=True)
    out = args.out / "fit.json"
    out.write_text(json.dumps(report, indent=2) + "\n")
    print(
        f"entropy slope {entropy_fit.slope:.4f} bits/qubit (rms {entropy_fit.rms_residual:.4f}); "
        f"gap slope {gap_fit.slope:.4f} vs 1/n (rms {gap_fit.rms_residual:.4f})"
    )
    print(f"wrote {out}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    handlers = {"generate": cmd_generate, "sweep": cmd_sweep, "grover": cmd_grover, "fit": cmd_fit}
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
