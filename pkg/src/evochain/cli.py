"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 configuration or parse
error, 3 domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .canonical import Label, canonical_matrix
from .chains import chain_classify, chain_label, chain_matrix, ck_scale, verify_ck
from .classifier import ClassificationError, classify_general
from .config import BUILTIN, ConfigError, RunConfig, builtin, load_config
from .expr import DomainError, ExprError
from .oracle import iso_search, verify_witness
from .partition import Partition, scan_1d, scan_2d

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_DOMAIN = 0, 1, 2, 3


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


# --- expected tables for the built-in examples ------------------------------

# (location, point label); cells between them carry the listed labels
EXPECTED_1D = {
    "example1": (["E8", "E9", "E7", "E8", "E9"], [(11 / 4, "E6"), (3.0, "E4"), (4.0, "E5"), (17 / 3, "E6")]),
    "example2": (["E9", "E7", "E8", "E9"], [(2.0, "E4"), (9 / 4, "E5"), (6.0, "E6")]),
}

# s-band (lo, hi, lo_closed, hi_closed) -> t-runs as (start or None for the diagonal, label)
EXPECTED_2D = {
    "example3": [
        ((0, 1, True, False), [(None, "E3"), (1, "E8"), (3, "E9"), (6, "E8")]),
        ((1, 2, True, False), [(None, "E1"), (2, "E6")]),
        ((2, 3, True, False), [(None, "E2"), (3, "E8"), (6, "E9")]),
        ((3, 4, True, False), [(None, "E6"), (6, "E12")]),
        ((4, 4, True, True), [(None, "E4"), (6, "E10")]),
        ((4, 5, False, True), [(None, "E5"), (6, "E11")]),
        ((5, 5.7, False, False), [(None, "E8"), (6, "E9")]),
        ((5.7, 5.7, True, True), [(None, "E5"), (6, "E11")]),
        ((5.7, 8, False, True), [(None, "E7")]),
    ],
}

NEAR = 1e-6


def check_1d(part: Partition, name: str) -> list[str]:
    labels, points = EXPECTED_1D[name]
    problems = []
    got = [str(c.label) for c in part.cells]
    if got != labels:
        problems.append(f"cell labels {got} != {labels}")
    bps = part.breakpoints
    if len(bps) != len(points):
        problems.append(f"{len(bps)} breakpoints, expected {len(points)}")
    for bp, (x, lab) in zip(bps, points):
        if abs(bp.value - x) > NEAR:
            problems.append(f"breakpoint {bp.value!r} not within {NEAR} of {x!r}")
        if str(bp.point) != lab:
            problems.append(f"point label {bp.point} at {x!r}, expected {lab}")
    return problems


def check_2d(part: Partition, name: str) -> list[str]:
    expected = EXPECTED_2D[name]
    problems = []
    if len(part.bands) != len(expected):
        return [f"{len(part.bands)} s-bands, expected {len(expected)}"]
    for band, ((lo, hi, lc, hc), runs) in zip(part.bands, expected):
        s = band.s
        if abs(s.lo - lo) > NEAR or abs(s.hi - hi) > NEAR or s.lo_closed != lc or s.hi_closed != hc:
            problems.append(f"s-band [{s.lo}, {s.hi}] closed=({s.lo_closed},{s.hi_closed}), expected {(lo, hi, lc, hc)}")
            continue
        got = [str(r.label) for r in band.runs]
        if got != [lab for _, lab in runs]:
            problems.append(f"s-band [{lo}, {hi}]: labels {got} != {[lab for _, lab in runs]}")
            continue
        for r, (start, _) in zip(band.runs, runs):
            if start is not None and abs(r.lo - start) > NEAR:
                problems.append(f"s-band [{lo}, {hi}]: run starts at {r.lo!r}, expected {start}")
    return problems


def check_zero_regime(part: Partition, a: float) -> list[str]:
    """Every t-run reaching past a must be E0 from a on."""
    problems = []
    for band in part.bands:
        for r in band.runs:
            if r.hi > a + NEAR and (r.lo < a - NEAR and band.s.lo < a - NEAR):
                problems.append(f"run [{r.lo}, {r.hi}] straddles t = {a}")
            if r.lo >= a - NEAR and str(r.label) != "E0":
                problems.append(f"label {r.label} at t >= {a}")
    return problems


# --- output files ----------------------------------------------------------

def write_partition(parts: dict[str, Partition], out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    doc = {k: p.to_dict() for k, p in parts.items()}
    (out / "partition.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    with open(out / "grid.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["mode", "s", "t", "label"])
        for k, p in parts.items():
            for s, t, lab in p.grid:
                w.writerow([k, fmt(s), fmt(t), fmt(lab) or "undefined"])
    with open(out / "breakpoints.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["mode", "axis", "value", "exact", "width", "left", "point", "right", "fixed_other"])
        rows = [(k, b) for k, p in parts.items() for b in p.breakpoints]
        rows += [(k, b) for k, p in parts.items() for band in p.bands for b in band.t_breakpoints]
        for k, b in rows:
            w.writerow([k, b.axis, fmt(b.value), fmt(b.exact), fmt(b.width), fmt(b.left), fmt(b.point),
                        fmt(b.right), fmt(b.fixed_other)])


def write_report(doc: dict, out: Optional[str]) -> None:
    if out is None:
        return
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    (path / "report.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def run_partitions(cfg: RunConfig) -> dict[str, Partition]:
    c = cfg.chain()
    parts = {}
    if cfg.mode in ("1d", "both"):
        parts["1d"] = scan_1d(c, (cfg.s_min, cfg.s_max), cfg.resolution, cfg.tol_zero, cfg.tol_bisect)
    if cfg.mode in ("2d", "both"):
        parts["2d"] = scan_2d(c, cfg.s_min, cfg.t_max, cfg.resolution_2d, cfg.tol_zero, cfg.tol_bisect)
    return parts


# --- subcommands -----------------------------------------------------------

def cmd_classify(cfg: RunConfig, args) -> int:
    if args.s is None or args.t is None:
        raise ConfigError("classify needs --s and --t")
    r = chain_classify(cfg.chain(), args.s, args.t, cfg.tol_zero)
    print(r.label)
    print(f"branch {r.branch}  residual {fmt(r.residual)}")
    write_report({"s": args.s, "t": args.t, **r.to_dict()}, args.out)
    return EXIT_OK


def sample_triples(cfg: RunConfig, n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.sort(rng.uniform(cfg.s_min, cfg.t_max, size=(n, 3)), axis=1)


def cmd_ck_check(cfg: RunConfig, args) -> int:
    c = cfg.chain()
    worst, worst_at, skipped = 0.0, None, 0
    for s, tau, t in sample_triples(cfg, args.triples, cfg.seed):
        try:
            rel = verify_ck(c, s, tau, t, cfg.tol_zero) / ck_scale(c, s, tau, t, cfg.tol_zero)
        except DomainError:
            skipped += 1
            continue
        if rel > worst:
            worst, worst_at = rel, (float(s), float(tau), float(t))
    ok = worst <= cfg.tol_ck
    print(f"max relative residual {fmt(worst)} over {args.triples - skipped} triples"
          f" ({skipped} skipped)  {'PASS' if ok else 'FAIL'}")
    write_report({"max_relative_residual": worst, "worst_triple": worst_at, "triples": args.triples,
                  "skipped": skipped, "tol_ck": cfg.tol_ck, "pass": ok}, args.out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_partition(cfg: RunConfig, args) -> int:
    parts = run_partitions(cfg)
    out = Path(args.out or cfg.out)
    write_partition(parts, out)
    for k, p in parts.items():
        print(f"[{k}]")
        for b in p.breakpoints:
            exact = f" (= {b.exact})" if b.exact is not None else ""
            print(f"  {b.axis} = {fmt(b.value)}{exact}: {b.left} | {b.point} | {b.right}")
    print(f"wrote {out}/partition.json, grid.csv, breakpoints.csv")
    return EXIT_OK


def example_problems(name: str, cfg: RunConfig) -> list[str]:
    parts = run_partitions(cfg)
    problems = []
    if name in EXPECTED_1D:
        problems += check_1d(parts["1d"], name)
    if name in EXPECTED_2D:
        problems += check_2d(parts["2d"], name)
    if cfg.family == "M2" and "2d" in parts:
        problems += check_zero_regime(parts["2d"], cfg.threshold)
    return problems


def cmd_examples(args) -> int:
    verdicts = []
    for name in BUILTIN:
        cfg = apply_flags(builtin(name), args)
        try:
            problems = example_problems(name, cfg)
        except (DomainError, ClassificationError) as exc:
            problems = [f"{type(exc).__name__}: {exc}"]
        verdicts.append(not problems)
        print(f"{name} {'PASS' if not problems else 'FAIL'}")
        for p in problems:
            print(f"  {p}")
    return EXIT_OK if all(verdicts) else EXIT_VERIFY


def parse_matrix(text: str) -> np.ndarray:
    try:
        vals = [float(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad matrix {text!r}: {exc}") from exc
    if len(vals) != 9:
        raise ConfigError("a matrix needs 9 comma-separated entries, row by row")
    return np.array(vals).reshape(3, 3)


def cmd_iso_search(cfg: Optional[RunConfig], args) -> int:
    tol = args.tol_zero if args.tol_zero is not None else 1e-9
    if args.source is not None:
        source = parse_matrix(args.source)
    elif cfg is not None and args.s is not None and args.t is not None:
        source = chain_matrix(cfg.chain(), args.s, args.t, cfg.tol_zero)
    else:
        raise ConfigError("iso-search needs --source, or a config with --s and --t")
    if args.target is not None:
        label = Label(args.target)
    else:
        label = classify_general(source, tol).label
    seed = args.seed if args.seed is not None else (cfg.seed if cfg else 0)
    rep = iso_search(source, canonical_matrix(label), args.restarts, tol, seed)
    doc = {"target": str(label), **rep.to_dict()}
    if rep.found:
        doc["verified_residual"] = verify_witness(source, rep.witness, label, tol)
    print(f"{label}: {'found' if rep.found else 'not found'} after {rep.restarts_used} restarts,"
          f" residual {fmt(rep.residual)}")
    write_report(doc, args.out)
    return EXIT_OK if rep.found else EXIT_VERIFY


# --- argument handling -----------------------------------------------------

def apply_flags(cfg: RunConfig, args) -> RunConfig:
    return cfg.with_overrides(resolution=args.resolution, tol_zero=args.tol_zero, tol_bisect=args.tol_bisect,
                              tol_ck=args.tol_ck, seed=args.seed)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--config", help="path to a configuration file")
    src.add_argument("--example", choices=sorted(BUILTIN), help="use a built-in configuration")
    common.add_argument("--s", type=float)
    common.add_argument("--t", type=float)
    common.add_argument("--resolution", type=int)
    common.add_argument("--tol-zero", type=float)
    common.add_argument("--tol-bisect", type=float)
    common.add_argument("--tol-ck", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output directory")

    parser = argparse.ArgumentParser(prog="evochain", description="Classify chains of three-dimensional evolution algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="label of the algebra at (s, t)")
    ck = sub.add_parser("ck-check", parents=[common], help="Chapman-Kolmogorov residual on random triples")
    ck.add_argument("--triples", type=int, default=1000)
    sub.add_parser("partition", parents=[common], help="partition of the time set by label")
    sub.add_parser("examples", parents=[common], help="reproduce the built-in examples")
    iso = sub.add_parser("iso-search", parents=[common], help="numeric search for a basis change")
    iso.add_argument("--source", help="nine entries, row by row, separated by commas")
    iso.add_argument("--target", choices=[str(x) for x in Label], help="canonical label (default: classify the source)")
    iso.add_argument("--restarts", type=int, default=64)
    return parser


def load(args) -> Optional[RunConfig]:
    if args.config:
        return apply_flags(load_config(args.config), args)
    if args.example:
        return apply_flags(builtin(args.example), args)
    return None


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "examples":
            return cmd_examples(args)
        cfg = load(args)
        if args.command == "iso-search":
            return cmd_iso_search(cfg, args)
        if cfg is None:
            raise ConfigError(f"{args.command} needs --config or --example")
        handler = {"classify": cmd_classify, "ck-check": cmd_ck_check, "partition": cmd_partition}[args.command]
        return handler(cfg, args)
    except (DomainError, ClassificationError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConfigError, ExprError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
