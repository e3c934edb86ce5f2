#!/usr/bin/env python3
"""Run a representative set of sweeps and print a short digest.

Covers each inequality once at modest sizes; everything finishes in
well under a minute.  Useful as a smoke run after changes.
"""

import os
import subprocess
import sys
import tempfile

SWEEPS = [
    ["verify", "--ineq", "classical-large-sieve", "--N", "1000", "--Q", "10,20",
     "--profile", "random", "--seed", "7"],
    ["verify", "--ineq", "elliott", "--N", "10000", "--Q", "10", "--profile", "ones"],
    ["verify", "--ineq", "primitive-ls", "--N", "10000", "--Q", "65", "--profile", "ones"],
    ["verify", "--ineq", "halasz", "--N", "10000", "--q", "5,8,13", "--R", "2,3,5",
     "--profile", "random", "--seed", "1"],
    ["verify", "--ineq", "motohashi", "--x", "10000", "--Q", "10"],
    ["verify", "--ineq", "single-char", "--q", "5,7,13", "--x", "100000"],
    ["verify", "--ineq", "bombieri", "--N", "12", "--q", "6", "--instances", "5",
     "--seed", "3"],
    ["census", "--D", "2", "--x", "1000", "--Q", "50"],
    ["gram", "--Q", "3", "--N", "1000", "--R", "2"],
]


def main() -> int:
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for i, argv in enumerate(SWEEPS):
            out = os.path.join(tmp, f"sweep_{i}.out")
            cmd = [sys.executable, "-m", "charsieve.cli", *argv, "--out", out]
            proc = subprocess.run(cmd, capture_output=True, text=True)
            with open(out) as fh:
                lines = fh.read().splitlines()
            tag = " ".join(argv[:4])
            print(f"[exit {proc.returncode}] {tag}: {len(lines) - 1} data lines")
            if proc.returncode != 0:
                failures += 1
                print(proc.stderr, file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
