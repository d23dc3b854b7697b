"""Rebuild the partitions of the three built-in chains and print them."""

import argparse
import time
from pathlib import Path

from evochain.cli import check_1d, check_2d, run_partitions, write_partition
from evochain.config import builtin


def show(name, parts):
    for mode, part in parts.items():
        print(f"{name} [{mode}]")
        if mode == "1d":
            for c in part.cells:
                print(f"  {'[' if c.lo_closed else '('}{c.lo:.6g}, {c.hi:.6g}{']' if c.hi_closed else ')'}  {c.label}")
            for b in part.breakpoints:
                print(f"  breakpoint {b.exact if b.exact is not None else b.value}: {b.left} | {b.point} | {b.right}")
        else:
            for band in part.bands:
                s = band.s
                runs = ", ".join(f"{r.label}@{r.lo:.6g}" for r in band.runs)
                print(f"  s in {'[' if s.lo_closed else '('}{s.lo:.6g}, {s.hi:.6g}{']' if s.hi_closed else ')'}: {runs}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/examples")
    args = ap.parse_args()
    for name in ("example1", "example2", "example3"):
        cfg = builtin(name)
        start = time.perf_counter()
        parts = run_partitions(cfg)
        elapsed = time.perf_counter() - start
        show(name, parts)
        problems = check_2d(parts["2d"], name) if name == "example3" else check_1d(parts["1d"], name)
        print(f"{name}: {'FAIL ' + str(problems) if problems else 'PASS'} in {elapsed:.2f} s\n")
        write_partition(parts, Path(args.out) / name)


if __name__ == "__main__":
    main()
