#!/usr/bin/env python3
"""Regenerate the committed regression baselines.

Two pinned artifacts: the primitive-character ratio table at matched
(N, Q = floor(N^(1/2.2))) pairs with all-ones coefficients, and the
smoothed pairwise character table at Q=3, R=2 for growing N.  Run from
the repository root; output lands in baselines/.
"""

import json
import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from charsieve import harness


def ratio_table(out_path: str) -> None:
    rows = []
    for N in (10**3, 10**4, 10**5):
        Q = math.floor(N ** (1 / 2.2))
        config = harness.SweepConfig(
            ineq="primitive-ls", grids={"N": (N,), "Q": (Q,)}, profile="ones", seed=0
        )
        status, cell_rows = harness.run_verify(config)
        assert status == 0 and len(cell_rows) == 1
        rows.append(cell_rows[0].to_dict())
    with open(out_path, "w") as fh:
        fh.write(json.dumps(rows, indent=1) + "\n")
    print(f"wrote {out_path}: {len(rows)} rows")


def gram_decay(out_path: str) -> None:
    tables = harness.run_gram(Q=3, N_values=(10**3, 10**4), R=2)
    with open(out_path, "w") as fh:
        fh.write(harness.gram_json(tables))
    print(f"wrote {out_path}: {len(tables)} tables")


def main() -> None:
    base = os.path.join(os.path.dirname(__file__), "..", "baselines")
    os.makedirs(base, exist_ok=True)
    ratio_table(os.path.join(base, "primitive_ls_ratios.json"))
    gram_decay(os.path.join(base, "gram_decay.json"))


if __name__ == "__main__":
    main()
