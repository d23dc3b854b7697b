"""Long soak of the classifiers: random and boundary-targeted draws, every
witness checked independently against the canonical matrix."""

import argparse
import time
from collections import Counter

import numpy as np

from evochain.algebra import det3
from evochain.classifier import UncoveredBranch, witness_residual, classify_equal_rows, classify_proportional_rows
from evochain.oracle import verify_witness

from _paths import tests_on_path

tests_on_path()
from _draws import (  # noqa: E402
    clear_of_boundaries, equal_rows_quantities, far, proportional_quantities, targeted_equal_rows,
    targeted_proportional,
)


def draw(rng, family, targeted):
    while True:
        if family == "equal":
            x = targeted_equal_rows(rng) if targeted else tuple(rng.uniform(-5, 5, 3))
            if far([sum(x)], 1e-8) and clear_of_boundaries(equal_rows_quantities(*x), 1e-8):
                return x, np.outer(x, [1.0, 1.0, 1.0])
        else:
            x = targeted_proportional(rng) if targeted else tuple(rng.uniform(-5, 5, 5))
            if clear_of_boundaries(proportional_quantities(*x), 1e-8):
                return x, np.outer([1.0, x[3], x[4]], x[:3])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    labels, problems = Counter(), Counter()
    worst_rel = worst_abs = 0.0
    start = time.perf_counter()
    for k in range(args.draws):
        family = "equal" if k % 2 == 0 else "proportional"
        x, m = draw(rng, family, targeted=(k % 4) >= 2)
        classify = classify_equal_rows if family == "equal" else classify_proportional_rows
        try:
            c = classify(x)
        except UncoveredBranch:
            problems["uncovered"] += 1
            continue
        labels[str(c.label)] += 1
        if c.witness is None:
            continue
        # absolute error is informational: witnesses with entries near 1e3
        # cannot be absolutely accurate to 1e-9 in double precision
        worst_abs = max(worst_abs, verify_witness(m, c.witness, c.label, tol=1e-12))
        r = witness_residual(m, c.witness, c.label)
        worst_rel = max(worst_rel, r)
        if r > 1e-9 or abs(det3(c.witness)) <= 1e-12:
            problems["bad witness"] += 1
    print(f"{args.draws} draws in {time.perf_counter() - start:.1f} s")
    print(f"labels: {dict(sorted(labels.items(), key=lambda kv: int(kv[0][1:])))}")
    print(f"worst relative residual {worst_rel:.2e} (absolute {worst_abs:.2e}); problems {dict(problems) or 'none'}")


if __name__ == "__main__":
    main()
