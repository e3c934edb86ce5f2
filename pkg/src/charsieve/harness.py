"""Sweep execution, report serialization, and golden-file regression.

A sweep is a cartesian grid of parameter values for one named
inequality.  Every cell becomes one row of a fixed CSV schema; rows
are computed (possibly in parallel), sorted by parameter tuple, and
written byte-identically for a given config and seed.  JSON output is
an array of the same row objects, and prior JSON outputs serve
verbatim as regression baselines.
"""

from __future__ import annotations

import concurrent.futures
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field, replace

from . import arith, characters, inequality_lab as lab, sieve

__all__ = [
    "CSV_COLUMNS",
    "SweepConfig",
    "ReportRow",
    "plan_cells",
    "evaluate_cell",
    "run_verify",
    "run_census",
    "run_gram",
    "run_regression",
    "write_rows",
    "load_config_file",
    "resolve_workers",
]

CSV_COLUMNS = [
    "ineq",
    "N",
    "Q",
    "R",
    "k",
    "x",
    "D",
    "q",
    "profile",
    "seed",
    "lhs",
    "rhs_main",
    "rhs_pv",
    "rhs_burgess_norm",
    "rhs_total",
    "ratio",
    "verdict",
    "runtime_ms",
]

_PARAM_COLUMNS = ("N", "Q", "R", "k", "x", "D", "q")

INEQUALITIES = (
    "classical-large-sieve",
    "elliott",
    "primitive-ls",
    "halasz",
    "motohashi",
    "motohashi-explicit",
    "single-char",
    "bombieri",
)

# coarse per-cell cost units; sweeps above the budget need --allow-long
_COST_BUDGET = 2_000_000_000


@dataclass(frozen=True)
class SweepConfig:
    ineq: str
    grids: dict[str, tuple[int, ...]] = field(default_factory=dict)
    profile: str = "ones"
    seed: int = 0
    mean_convention: str = "inverse-phi"
    eps_prime: float = 0.5
    instances: int = 1
    timings: bool = False
    allow_long: bool = False

    def grid(self, name: str) -> tuple[int, ...]:
        return self.grids.get(name, ())


@dataclass(frozen=True)
class ReportRow:
    """One sweep cell, flattened onto the fixed CSV schema."""

    ineq: str
    N: int | None = None
    Q: int | None = None
    R: int | None = None
    k: int | None = None
    x: int | None = None
    D: int | None = None
    q: int | None = None
    profile: str | None = None
    seed: int | None = None
    lhs: float | None = None
    rhs_main: float | None = None
    rhs_pv: float | None = None
    rhs_burgess_norm: float | None = None
    rhs_total: float | None = None
    ratio: float | None = None
    verdict: str = lab.REPORT_ONLY
    runtime_ms: float | None = None

    def sort_key(self):
        def mark(v):
            return (0, "") if v is None else (1, v)

        return tuple(mark(getattr(self, c)) for c in ("N", "Q", "R", "k", "x", "D", "q")) + (
            mark(self.profile),
            mark(self.seed),
        )

    def to_dict(self) -> dict[str, object]:
        out: dict[str, object] = {}
        for col in CSV_COLUMNS:
            out[col] = getattr(self, col)
        return out

    def csv_fields(self) -> list[str]:
        fields = []
        for col in CSV_COLUMNS:
            v = getattr(self, col)
            if v is None:
                fields.append("")
            elif isinstance(v, float):
                fields.append(repr(v))
            else:
                fields.append(str(v))
        return fields


def _skip_row(ineq: str, reason: str, **params) -> ReportRow:
    return ReportRow(ineq=ineq, verdict=f"SKIPPED:{reason}", **params)


def _cell_cost(ineq: str, cell: dict[str, int]) -> int:
    n = cell.get("N") or cell.get("x") or 0
    q = cell.get("Q") or cell.get("q") or 1
    if ineq == "classical-large-sieve":
        return n * q
    if ineq in ("elliott", "primitive-ls", "motohashi", "motohashi-explicit"):
        return n + q**3
    if ineq == "halasz":
        return n + q * q
    if ineq == "single-char":
        return n + q * q
    if ineq == "bombieri":
        return (cell.get("N") or 10) * (cell.get("q") or 10)
    return n


def plan_cells(config: SweepConfig) -> list[dict[str, int]]:
    """Cartesian product of the grids each inequality consumes."""
    ineq = config.ineq
    if ineq not in INEQUALITIES:
        raise ValueError(f"unknown inequality {ineq!r}")
    if ineq in ("classical-large-sieve", "elliott", "primitive-ls"):
        axes = [("N", True), ("Q", True)]
    elif ineq == "halasz":
        axes = [("N", True), ("q", True), ("R", True), ("k", False)]
    elif ineq in ("motohashi", "motohashi-explicit"):
        axes = [("x", True), ("Q", True)]
    elif ineq == "single-char":
        axes = [("q", True), ("x", True)]
    else:  # bombieri
        axes = [("N", False), ("q", False)]
    cells: list[dict[str, int]] = [{}]
    for name, required in axes:
        values = config.grid(name)
        if not values:
            if required:
                return []
            defaults = {"k": (2,), "N": (10,), "q": (5,)}
            values = defaults[name]
        cells = [dict(c, **{name: v}) for c in cells for v in values]
    if ineq == "bombieri":
        cells = [dict(c, instance=i) for c in cells for i in range(config.instances)]
    return cells


def evaluate_cell(config: SweepConfig, cell: dict[str, int]) -> ReportRow:
    """Compute one sweep cell; pure in (config, cell)."""
    start = time.perf_counter()
    row = _evaluate(config, cell)
    if config.timings:
        row = replace(row, runtime_ms=round(1000.0 * (time.perf_counter() - start), 3))
    return row


def _from_report(
    rep: lab.InequalityReport,
    *,
    main_key: str | None = None,
    pv_key: str | None = None,
    burgess_key: str | None = None,
    **fields,
) -> ReportRow:
    terms = rep.rhs_terms
    return ReportRow(
        lhs=rep.lhs,
        rhs_main=terms.get(main_key) if main_key else None,
        rhs_pv=terms.get(pv_key) if pv_key else None,
        rhs_burgess_norm=terms.get(burgess_key) if burgess_key else None,
        rhs_total=rep.rhs_total,
        ratio=rep.ratio,
        verdict=rep.verdict,
        **fields,
    )


def _evaluate(config: SweepConfig, cell: dict[str, int]) -> ReportRow:
    ineq = config.ineq
    seed = config.seed
    if ineq == "classical-large-sieve":
        N, Q = cell["N"], cell["Q"]
        a = lab.integer_profile(config.profile, N, seed)
        rep = lab.classical_large_sieve(a, Q)
        return _from_report(
            rep, main_key="dispersion_bound",
            ineq=ineq, N=N, Q=Q, profile=config.profile, seed=seed,
        )
    if ineq == "elliott":
        N, Q = cell["N"], cell["Q"]
        a = lab.prime_profile(config.profile, N, seed)
        rep = lab.elliott_variance(a, Q, config.mean_convention)
        return _from_report(
            rep, main_key="reference",
            ineq=ineq, N=N, Q=Q, profile=config.profile, seed=seed,
        )
    if ineq == "primitive-ls":
        N, Q = cell["N"], cell["Q"]
        a = lab.prime_profile(config.profile, N, seed)
        rep = lab.primitive_ls_report(a, Q)
        # R is the proof-side parameter ceil(Q^(eps'/4)); surfaced for
        # orientation only, the computed sum does not depend on it
        r_col = math.ceil(Q ** (config.eps_prime / 4.0))
        return _from_report(
            rep, main_key="reference",
            ineq=ineq, N=N, Q=Q, R=r_col, profile=config.profile, seed=seed,
        )
    if ineq == "halasz":
        N, q, R, k = cell["N"], cell["q"], cell["R"], cell["k"]
        base = dict(ineq=ineq, N=N, R=R, k=k, q=q, profile=config.profile, seed=seed)
        if R * R >= N:
            return _skip_row(reason="r2-ge-n", **base)
        if k >= 4 and not arith.is_cubefree(q):
            return _skip_row(reason="k-needs-cubefree", **base)
        a = lab.prime_profile(config.profile, N, seed)
        group = characters.character_group(q)
        C = characters.enumerate_characters(group)
        rep = lab.halasz_bounds(a, C, R, k)
        return _from_report(
            rep, main_key="main", pv_key="pv_term", burgess_key="burgess_term", **base
        )
    if ineq in ("motohashi", "motohashi-explicit"):
        x, Q = cell["x"], cell["Q"]
        base = dict(ineq=ineq, Q=Q, x=x)
        if ineq == "motohashi-explicit" and x <= Q**3:
            return _skip_row(reason="x-le-q3", **base)
        rep = lab.motohashi_report(x, Q)
        main = "explicit" if rep.rhs_total is not None else "generic"
        return _from_report(rep, main_key=main, **base)
    if ineq == "single-char":
        q, x = cell["q"], cell["x"]
        base = dict(ineq=ineq, x=x, q=q)
        group = characters.character_group(q)
        complex_chars = [
            c for c in characters.enumerate_characters(group) if characters.char_order(c) > 2
        ]
        if not complex_chars:
            return _skip_row(reason="no-complex-character", **base)
        phi_exp = 0.25 if arith.is_cubefree(q) else 1.0 / 3.0
        if 2.0 - 2.0 * phi_exp * math.log(q) / math.log(x) <= 0:
            return _skip_row(reason="alpha-le-phi", **base)
        # the cell reports the worst character of the modulus
        reports = [lab.single_char_bound(c, x) for c in complex_chars]
        rep = max(reports, key=lambda r: r.ratio)
        return _from_report(rep, main_key="bound", **base)
    if ineq == "bombieri":
        dim = cell["N"]
        m = cell["q"]
        inst_seed = seed + cell.get("instance", 0)
        rng = lab.SplitMix64(inst_seed)
        vectors = [[rng.next_unit() for _ in range(dim)] for _ in range(m)]
        phi = [rng.next_unit() for _ in range(dim)]
        rep = lab.bombieri_check(vectors, phi)
        return _from_report(
            rep, main_key="norm_sq_times_row_max",
            ineq=ineq, N=dim, q=m, profile="random", seed=inst_seed,
        )
    raise ValueError(f"unknown inequality {ineq!r}")


def _evaluate_star(args: tuple[SweepConfig, dict[str, int]]) -> ReportRow:
    return evaluate_cell(*args)


def resolve_workers(cli_value: int | None) -> int:
    """CLI flag wins; else the CHARSIEVE_WORKERS variable; else serial."""
    if cli_value is not None:
        if cli_value < 1:
            raise ValueError("workers must be >= 1")
        return cli_value
    env = os.environ.get("CHARSIEVE_WORKERS")
    if env:
        n = int(env)
        if n < 1:
            raise ValueError("CHARSIEVE_WORKERS must be >= 1")
        return n
    return 1


def _compute_rows(config: SweepConfig, cells: list[dict[str, int]], workers: int) -> list[ReportRow]:
    if workers <= 1 or len(cells) <= 1:
        rows = [evaluate_cell(config, cell) for cell in cells]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_star, [(config, c) for c in cells]))
    return sorted(rows, key=ReportRow.sort_key)


def run_verify(config: SweepConfig, workers: int = 1) -> tuple[int, list[ReportRow]]:
    """Execute the sweep; exit status 0 unless a cell is VIOLATED (1) or
    the whole grid is empty or skipped (3)."""
    cells = plan_cells(config)
    if not cells:
        return 3, []
    total_cost = sum(_cell_cost(config.ineq, c) for c in cells)
    if total_cost > _COST_BUDGET and not config.allow_long:
        raise ValueError(
            f"estimated sweep cost {total_cost} exceeds the default budget; "
            "pass --allow-long to run it anyway"
        )
    rows = _compute_rows(config, cells, workers)
    if all(row.verdict.startswith("SKIPPED") for row in rows):
        return 3, rows
    warned = [row for row in rows if row.verdict == lab.WARN]
    for row in warned:
        print(f"WARN: {row.ineq} cell {row.csv_fields()[:10]}", file=sys.stderr)
    status = 1 if any(row.verdict == lab.VIOLATED for row in rows) else 0
    return status, rows


def write_rows(rows: list[ReportRow], path: str, fmt: str) -> None:
    if fmt == "csv":
        lines = [",".join(CSV_COLUMNS)]
        lines += [",".join(row.csv_fields()) for row in rows]
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        text = json.dumps([row.to_dict() for row in rows], indent=1) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w") as fh:
        fh.write(text)


# census


def run_census(D: int, x: int, Q: int) -> lab.CensusRecord:
    return lab.missing_value_census(D, x, Q)


def census_json(record: lab.CensusRecord) -> str:
    obj = {
        "D": record.D,
        "x": record.x,
        "Q": record.Q,
        "count": record.count,
        "witnesses": [
            {
                "q": w.q,
                "exponents": list(w.exponents),
                "order": w.order,
                "zeta": f"{w.zeta_numerator}/{w.order}",
            }
            for w in record.witnesses
        ],
    }
    return json.dumps(obj, indent=1) + "\n"


def census_csv(record: lab.CensusRecord) -> str:
    header = "D,x,Q,count,q,exponents,order,zeta"
    lines = [header]
    if not record.witnesses:
        lines.append(f"{record.D},{record.x},{record.Q},{record.count},,,,")
    for w in record.witnesses:
        exps = ";".join(map(str, w.exponents))
        lines.append(
            f"{record.D},{record.x},{record.Q},{record.count},"
            f"{w.q},{exps},{w.order},{w.zeta_numerator}/{w.order}"
        )
    return "\n".join(lines) + "\n"


# gram tables


def run_gram(Q: int, N_values: tuple[int, ...], R: int) -> list[lab.GramTable]:
    return [lab.gram_diagnostic(Q, N, R) for N in N_values]


def gram_to_obj(table: lab.GramTable) -> dict[str, object]:
    return {
        "Q": table.Q,
        "N": table.N,
        "R": table.R,
        "labels": [[q, list(exps)] for q, exps in table.labels],
        "entries": [list(row) for row in table.entries],
        "diagonal_reference": table.diagonal_reference,
        "off_diagonal_max": table.off_diagonal_max(),
    }


def gram_json(tables: list[lab.GramTable]) -> str:
    return json.dumps([gram_to_obj(t) for t in tables], indent=1) + "\n"


def gram_csv(tables: list[lab.GramTable]) -> str:
    lines = ["Q,N,R,i,j,q_i,chi_i,q_j,chi_j,value"]
    for t in tables:
        for i, (qi, ei) in enumerate(t.labels):
            for j, (qj, ej) in enumerate(t.labels):
                lines.append(
                    f"{t.Q},{t.N},{t.R},{i},{j},{qi},{';'.join(map(str, ei))},"
                    f"{qj},{';'.join(map(str, ej))},{t.entries[i][j]!r}"
                )
    return "\n".join(lines) + "\n"


# regression against committed baselines


_NUMERIC_ROW_KEYS = ("lhs", "rhs_main", "rhs_pv", "rhs_burgess_norm", "rhs_total", "ratio")
_REL_TOL = 1e-9


def _close(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return math.isclose(float(a), float(b), rel_tol=_REL_TOL, abs_tol=1e-300)


def _row_config(obj: dict[str, object]) -> SweepConfig:
    grids: dict[str, tuple[int, ...]] = {}
    for name in _PARAM_COLUMNS:
        v = obj.get(name)
        if v is None:
            continue
        if name == "R" and obj["ineq"] == "primitive-ls":
            continue  # derived display column, not a grid axis
        grids[name] = (int(v),)
    return SweepConfig(
        ineq=str(obj["ineq"]),
        grids=grids,
        profile=str(obj.get("profile") or "ones"),
        seed=int(obj.get("seed") or 0),
    )


def _check_row_baseline(objs: list[dict[str, object]], label: str) -> list[str]:
    diffs = []
    for obj in objs:
        config = _row_config(obj)
        cells = plan_cells(config)
        if len(cells) != 1:
            diffs.append(f"{label}: cannot rebuild cell for {obj.get('ineq')}")
            continue
        row = evaluate_cell(config, cells[0]).to_dict()
        for key in _NUMERIC_ROW_KEYS:
            if not _close(row.get(key), obj.get(key)):
                diffs.append(
                    f"{label}: {obj['ineq']} {key} baseline={obj.get(key)} now={row.get(key)}"
                )
        if str(row.get("verdict")) != str(obj.get("verdict")):
            diffs.append(
                f"{label}: {obj['ineq']} verdict baseline={obj.get('verdict')} "
                f"now={row.get('verdict')}"
            )
    return diffs


def _check_gram_baseline(objs: list[dict[str, object]], label: str) -> list[str]:
    diffs = []
    for obj in objs:
        table = lab.gram_diagnostic(int(obj["Q"]), int(obj["N"]), int(obj["R"]))
        new = gram_to_obj(table)
        base_entries = obj["entries"]
        for i, row in enumerate(new["entries"]):
            for j, v in enumerate(row):
                b = base_entries[i][j]
                if not math.isclose(v, b, rel_tol=_REL_TOL, abs_tol=1e-300):
                    diffs.append(
                        f"{label}: gram N={obj['N']} entry ({i},{j}) baseline={b} now={v}"
                    )
        if not math.isclose(
            new["off_diagonal_max"], float(obj["off_diagonal_max"]),
            rel_tol=_REL_TOL, abs_tol=1e-300,
        ):
            diffs.append(f"{label}: gram N={obj['N']} off_diagonal_max drifted")
    return diffs


def run_regression(baseline_dir: str) -> int:
    """Recompute every pinned value; 0 clean, 1 mismatch, 2 no baselines."""
    if not os.path.isdir(baseline_dir):
        print(f"baseline directory {baseline_dir!r} does not exist", file=sys.stderr)
        return 2
    files = sorted(
        f for f in os.listdir(baseline_dir) if f.endswith(".json")
    )
    if not files:
        print(f"no baseline files in {baseline_dir!r}", file=sys.stderr)
        return 2
    diffs: list[str] = []
    for fname in files:
        path = os.path.join(baseline_dir, fname)
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, list) or not data:
            diffs.append(f"{fname}: unreadable baseline shape")
            continue
        if "entries" in data[0]:
            diffs.extend(_check_gram_baseline(data, fname))
        else:
            diffs.extend(_check_row_baseline(data, fname))
    for d in diffs:
        print(d)
    return 1 if diffs else 0


# key=value config files; CLI flags override these


def load_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line {line!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out
