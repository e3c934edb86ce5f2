"""Command line front end: verify / census / regression / gram.

Exit codes: 0 clean, 1 violation or regression mismatch, 2 usage
error, 3 infeasible grid (every cell skipped or empty).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from exc


def _bool(text: object) -> bool:
    return str(text).lower() in ("1", "true", "yes")


_AXES = ("N", "Q", "R", "k", "x", "D", "q")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", default=None, help="output file path (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default=None)
    sub.add_argument("--workers", type=int, default=None,
                     help="parallel workers (default: CHARSIEVE_WORKERS or 1)")
    sub.add_argument("--seed", type=int, default=None,
                     help="u64 seed for coefficient profiles (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="charsieve",
        description="verify explicit character-sum inequalities and emit reports",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    verify = subs.add_parser("verify", help="run an inequality sweep")
    _add_common(verify)
    verify.add_argument("--ineq", default=None, choices=harness.INEQUALITIES,
                        help="required here or in the --config file")
    for axis in _AXES:
        verify.add_argument(f"--{axis}", type=_int_list, default=None,
                            help=f"comma-separated grid for {axis}")
    verify.add_argument("--profile", default=None,
                        help="coefficients: ones | random | indicator:a:m (default ones)")
    verify.add_argument("--mean-convention", choices=("inverse-phi", "q-over-phi"),
                        default=None)
    verify.add_argument("--eps-prime", type=float, default=None,
                        help="exponent parameter for the displayed R column (default 0.5)")
    verify.add_argument("--instances", type=int, default=None,
                        help="random instances per cell (bombieri; default 1)")
    verify.add_argument("--config", default=None, help="key=value file; flags override")
    verify.add_argument("--timings", action="store_const", const=True, default=None,
                        help="fill runtime_ms (makes output nondeterministic)")
    verify.add_argument("--allow-long", action="store_const", const=True, default=None,
                        help="run sweeps beyond the default cost budget")

    census = subs.add_parser("census", help="missing character value census")
    _add_common(census)
    census.add_argument("--D", type=int, required=True)
    census.add_argument("--x", type=int, required=True)
    census.add_argument("--Q", type=int, required=True)

    regression = subs.add_parser("regression", help="recompute pinned baselines")
    _add_common(regression)
    regression.add_argument("--baseline-dir", default="baselines")

    gram = subs.add_parser("gram", help="smoothed pairwise character table")
    _add_common(gram)
    gram.add_argument("--Q", type=int, required=True)
    gram.add_argument("--N", type=_int_list, required=True)
    gram.add_argument("--R", type=int, required=True)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


_FILE_KEYS = set(_AXES) | {
    "ineq", "profile", "seed", "mean_convention", "eps_prime", "instances",
    "timings", "allow_long", "format", "out", "workers",
}


def _cmd_verify(args: argparse.Namespace) -> int:
    file_vals = {}
    if args.config:
        raw = harness.load_config_file(args.config)
        file_vals = {k.replace("-", "_"): v for k, v in raw.items()}
        unknown = set(file_vals) - _FILE_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")

    def pick(dest, cast, fallback):
        cli = getattr(args, dest, None)
        if cli is not None:
            return cli
        if dest in file_vals:
            return cast(file_vals[dest])
        return fallback

    ineq = pick("ineq", str, None)
    if ineq not in harness.INEQUALITIES:
        raise ValueError(f"--ineq is required (flag or config file); got {ineq!r}")
    grids = {}
    for axis in _AXES:
        values = pick(axis, _int_list, None)
        if values:
            grids[axis] = tuple(values)
    convention = pick("mean_convention", str, "inverse-phi")
    if convention not in ("inverse-phi", "q-over-phi"):
        raise ValueError(f"bad mean_convention {convention!r}")
    config = harness.SweepConfig(
        ineq=ineq,
        grids=grids,
        profile=pick("profile", str, "ones"),
        seed=pick("seed", int, 0),
        mean_convention=convention,
        eps_prime=pick("eps_prime", float, 0.5),
        instances=pick("instances", int, 1),
        timings=pick("timings", _bool, False),
        allow_long=pick("allow_long", _bool, False),
    )
    fmt = pick("format", str, "csv")
    out = pick("out", str, None)
    workers = harness.resolve_workers(pick("workers", int, None))
    status, rows = harness.run_verify(config, workers=workers)
    if status == 3 and not rows:
        print("infeasible grid: no cells to run", file=sys.stderr)
        return status
    if fmt == "csv":
        text = ",".join(harness.CSV_COLUMNS) + "\n"
        text += "".join(",".join(row.csv_fields()) + "\n" for row in rows)
    else:
        text = json.dumps([row.to_dict() for row in rows], indent=1) + "\n"
    _emit(text, out)
    if status == 3:
        print("infeasible grid: every cell skipped", file=sys.stderr)
    return status


def _cmd_census(args: argparse.Namespace) -> int:
    record = harness.run_census(args.D, args.x, args.Q)
    fmt = args.format or "csv"
    text = harness.census_json(record) if fmt == "json" else harness.census_csv(record)
    _emit(text, args.out)
    return 0


def _cmd_regression(args: argparse.Namespace) -> int:
    return harness.run_regression(args.baseline_dir)


def _cmd_gram(args: argparse.Namespace) -> int:
    tables = harness.run_gram(args.Q, args.N, args.R)
    fmt = args.format or "csv"
    text = harness.gram_json(tables) if fmt == "json" else harness.gram_csv(tables)
    _emit(text, args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "verify": _cmd_verify,
        "census": _cmd_census,
        "regression": _cmd_regression,
        "gram": _cmd_gram,
    }[args.command]
    try:
        return handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
