"""Compare classifier labels with a blind numeric basis-change search."""

import argparse
import time
from collections import Counter

import numpy as np

from evochain.canonical import canonical_matrix
from evochain.classifier import classify_equal_rows, classify_proportional_rows
from evochain.oracle import iso_search, verify_witness

from _paths import tests_on_path

tests_on_path()
from _draws import clear_of_boundaries, far, proportional_quantities, targeted_proportional  # noqa: E402


def instances(rng, n):
    out = []
    while len(out) < n:
        kind = len(out) % 4
        if kind == 0:
            x = tuple(rng.uniform(-5, 5, 3))
            if far([sum(x)], 1e-6):
                out.append((np.outer(x, [1.0, 1.0, 1.0]), classify_equal_rows(x).label))
        else:
            x = targeted_proportional(rng) if kind == 3 else tuple(rng.uniform(-5, 5, 5))
            if clear_of_boundaries(proportional_quantities(*x), 1e-8):
                out.append((np.outer([1.0, x[3], x[4]], x[:3]), classify_proportional_rows(x).label))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=500)
    ap.add_argument("--restarts", type=int, default=64)
    ap.add_argument("--seed", type=int, default=8)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    found, failures, unsound = 0, Counter(), 0
    start = time.perf_counter()
    todo = instances(rng, args.instances)
    for k, (m, label) in enumerate(todo):
        rep = iso_search(m, canonical_matrix(label), args.restarts, 1e-9, seed=k)
        if rep.found:
            found += 1
            unsound += verify_witness(m, rep.witness, label) > 1e-9
        else:
            failures[str(label)] += 1
            print(f"  no witness for {label} after {rep.restarts_used} restarts ({rep.reason}):",
                  np.array2string(m, precision=4, separator=",").replace("\n", ""))
    n = len(todo)
    print(f"{found}/{n} found ({found / n:.1%}) in {time.perf_counter() - start:.1f} s; "
          f"{unsound} unsound; failures by label {dict(failures) or 'none'}")


if __name__ == "__main__":
    main()
