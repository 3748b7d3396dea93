"""Command line driver: ``symmid {gen,verify,betti,series,chain}``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
errors and unmet preconditions.  With ``--out DIR`` each command writes its
JSON report (plus CSV tables and PNG figures where relevant) into DIR;
otherwise the JSON report goes to stdout.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .chains import (
    betti_coefficients,
    chain_alpha_info,
    chain_stability_check,
    equivariant_hilbert_series,
    equivariant_poincare_series,
    hilbert_coefficients,
    hilbert_series_variants,
    multiplicity_limit_check,
    poincare_vs_formula,
    series_n_min,
)
from .construction import (
    build_f_alpha,
    certify_general,
    lift_alpha,
    min_vars_for_construction,
    orbit_span,
    random_alpha,
    tau_of,
)
from .invariants import (
    ArtinianQuotient,
    CostGuardError,
    betti_formula,
    betti_oracle,
    expected_multiplicity,
    full_hilbert_function,
)
from .partitions import P
from .polyring import monomial

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

DEFAULT_GRID: Tuple[Tuple[int, int, int], ...] = (
    (3, 2, 1), (4, 2, 1), (5, 2, 1), (3, 2, 2),
    (5, 3, 1), (5, 3, 2), (5, 3, 3), (6, 3, 1),
)

CSV_VERSION = "1"
CSV_COLUMNS = ("n", "hf", "betti_totals", "e_over_n_pow_d_minus_1")


class UsageError(Exception):
    """Bad arguments or an unmet precondition (exit code 2)."""


@dataclass
class RunConfig:
    command: str
    n: Optional[int] = None
    d: Optional[int] = None
    r: Optional[int] = None
    seed: int = 0
    coeff_bound: int = 100
    mode: str = "exact"
    out: Optional[str] = None
    grid: Optional[List[Tuple[int, int, int]]] = None
    n_list: Optional[List[int]] = None
    orders: int = 8
    seeds: int = 1
    adversarial: bool = False


# -- helpers ------------------------------------------------------------------------
def threads() -> int:
    try:
        return max(1, int(os.environ.get("SYMMID_THREADS", "1")))
    except ValueError:
        return 1


def header(cfg: RunConfig) -> dict:
    return {
        "tool": "symmid",
        "version": __version__,
        "command": cfg.command,
        "seed": cfg.seed,
        "mode": cfg.mode,
        "config": {k: v for k, v in asdict(cfg).items() if k not in ("command", "out")},
    }


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dump_json(data) -> str:
    return json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n"


def emit(cfg: RunConfig, name: str, report: dict) -> Optional[Path]:
    """Write report to DIR/name when --out is set, else print it."""
    text = dump_json(report)
    if cfg.out is None:
        sys.stdout.write(text)
        return None
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text)
    return path


def write_csv(path: Path, columns: Sequence[str], rows: Sequence[Sequence]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["# csv_version", CSV_VERSION])
        w.writerow(columns)
        for row in rows:
            w.writerow(row)
    return path


def _vec(xs) -> str:
    return " ".join(str(x) for x in xs)


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [x for x in names if getattr(cfg, x) is None]
    if missing:
        raise UsageError(f"{cfg.command} needs {', '.join('--' + m.replace('_', '-') for m in missing)}")
    if cfg.d is not None and cfg.d < 1:
        raise UsageError("--d must be positive")
    if cfg.r is not None and cfg.d is not None and not 1 <= cfg.r <= P(cfg.d):
        raise UsageError(f"--r must lie in [1, P(d)] = [1, {P(cfg.d)}]")
    if cfg.n is not None and cfg.n < 1:
        raise UsageError("--n must be positive")


def _alpha(cfg: RunConfig, seed: Optional[int] = None) -> List[List[int]]:
    return random_alpha(cfg.d, cfg.r, cfg.seed if seed is None else seed, cfg.coeff_bound)


def _generators(alpha, n: int, d: int, seed: int, bound: int):
    V, kinds = [], []
    for k, row in enumerate(alpha):
        f, kind = lift_alpha(row, n, seed=seed + k, bound=bound, d=d)
        V.append(f)
        kinds.append(kind)
    return V, kinds


# -- commands -----------------------------------------------------------------------
def cmd_gen(cfg: RunConfig) -> int:
    _require(cfg, "n", "d", "r")
    alpha = _alpha(cfg)
    need = max(min_vars_for_construction(cfg.d, tau_of(row, cfg.d)) for row in alpha)
    if cfg.n < need:
        raise UsageError(f"construction of f_alpha for d={cfg.d} requires n ≥ {need} (got n={cfg.n})")
    gens = [build_f_alpha(row, cfg.n, cfg.d) for row in alpha]
    report = header(cfg)
    report.update({
        "alpha": alpha,
        "generators": [g.to_json() for g in gens],
        "tau": [list(g.tau) for g in gens],
    })
    emit(cfg, "gen.json", report)
    return EXIT_OK


def _verify_one(n: int, d: int, r: int, seed: int, bound: int, mode: str, adversarial: bool = False) -> dict:
    if adversarial:
        alpha = None
        V = [monomial((d,) + (0,) * (n - 1))]
        kinds = ["orbit_of_x1^d"]
    else:
        alpha = random_alpha(d, r, seed, bound)
        V, kinds = _generators(alpha, n, d, seed, bound)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cert, A = certify_general(V, n, d, seed=seed, mode=mode, return_quotient=True)
        totals = betti_formula(n, d, cert.r).totals()
    hf = full_hilbert_function(A) if cert.checks.get("hf_at_d_plus_1") else None
    return {
        "n": n, "d": d, "r": r, "seed": seed,
        "alpha": alpha,
        "lift_kinds": kinds,
        "certificate": cert.to_json(),
        "passed": cert.passed,
        "hf": hf,
        "betti_totals_formula": totals,
        "e_ratio": float(Fraction(expected_multiplicity(n, d, r), n ** (d - 1))),
    }


def _run_jobs(fn, jobs: List[tuple]) -> List[dict]:
    k = threads()
    if k <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.grid is not None:
        jobs = [(n, d, r, cfg.seed + k, cfg.coeff_bound, cfg.mode)
                for (n, d, r) in cfg.grid for k in range(cfg.seeds)]
        results = _run_jobs(_verify_one, jobs)
        passed = all(x["passed"] for x in results)
        report = header(cfg)
        report.update({"passed": passed, "certified": passed and cfg.mode == "exact", "results": results})
        emit(cfg, "verify_grid.json", report)
        if cfg.out:
            rows = [(x["n"], x["d"], x["r"], x["seed"], x["passed"], _vec(x["hf"] or []),
                     _vec(x["betti_totals_formula"]), f"{x['e_ratio']:.6f}") for x in results]
            write_csv(Path(cfg.out) / "verify_grid.csv",
                      ("n", "d", "r", "seed", "passed", "hf", "betti_totals", "e_over_n_pow_d_minus_1"), rows)
        for x in results:
            status = "PASS" if x["passed"] else "FAIL " + ",".join(
                k for k, v in x["certificate"]["checks"].items() if not v["passed"])
            print(f"(n,d,r)=({x['n']},{x['d']},{x['r']}) seed={x['seed']}: {status}", file=sys.stderr)
        return EXIT_OK if passed else EXIT_FAIL
    _require(cfg, "n", "d", "r")
    result = _verify_one(cfg.n, cfg.d, cfg.r, cfg.seed, cfg.coeff_bound, cfg.mode, cfg.adversarial)
    report = header(cfg)
    report.update(result)
    report["certified"] = result["passed"] and cfg.mode == "exact"
    emit(cfg, "verify.json", report)
    if not result["passed"]:
        failed = [k for k, v in result["certificate"]["checks"].items() if not v["passed"]]
        print(f"failed checks: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_betti(cfg: RunConfig) -> int:
    _require(cfg, "n", "d", "r")
    alpha = _alpha(cfg)
    V, kinds = _generators(alpha, cfg.n, cfg.d, cfg.seed, cfg.coeff_bound)
    I = orbit_span(V, cfg.n, cfg.d, seed=cfg.seed, mode=cfg.mode)
    A = ArtinianQuotient(I, mode=cfg.mode)
    oracle = betti_oracle(A)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        formula = betti_formula(cfg.n, cfg.d, cfg.r)
    same = oracle.entries_equal(formula)
    verdict = "formula == oracle" if same else "formula != oracle"
    print(oracle.to_text(), file=sys.stderr)
    print(verdict, file=sys.stderr)
    report = header(cfg)
    report.update({
        "alpha": alpha, "lift_kinds": kinds,
        "oracle": oracle.to_json(), "formula": formula.to_json(),
        "verdict": verdict, "passed": same,
        "table_text": oracle.to_text(),
    })
    emit(cfg, "betti.json", report)
    if cfg.out:
        from .plotting import plot_betti_table

        plot_betti_table(oracle.beta, Path(cfg.out) / "betti.png",
                         title=f"Betti table, (n,d,r)=({cfg.n},{cfg.d},{cfg.r})")
    return EXIT_OK if same else EXIT_FAIL


def cmd_series(cfg: RunConfig) -> int:
    _require(cfg, "d", "r")
    d, r, top = cfg.d, cfg.r, cfg.orders
    H = equivariant_hilbert_series(d, r)
    variants = hilbert_series_variants(d, r, n_max=top)
    n_lo = series_n_min(d, r)
    p_max = min(top, 6)
    poincare = poincare_vs_formula(d, r, n_max=p_max) if p_max >= n_lo else None
    mult = multiplicity_limit_check(d, r, range(max(1, n_lo), top + 1))
    reduced_rows = [x for x in variants["rows"] if x["variant"] == "reduced"]
    passed = variants["matches"]["reduced"] and (poincare is None or poincare["all_match"])
    report = header(cfg)
    report.update({
        "hilbert_series": H.reduced().to_json(),
        "poincare_series": equivariant_poincare_series(d, r).to_json(),
        "n_min": n_lo,
        "variants": variants["matches"],
        "hilbert_rows": reduced_rows,
        "poincare_vs_formula": None if poincare is None else
        [{"n": x["n"], "match": x["match"]} for x in poincare["rows"]],
        "multiplicity": mult,
        "passed": passed,
    })
    emit(cfg, "series.json", report)
    if cfg.out:
        from .plotting import plot_hilbert_functions, plot_multiplicity_ratio

        out = Path(cfg.out)
        ser = H.series({"s": top, "t": d + 2})
        pser = equivariant_poincare_series(d, r).series({"s": top, "t": top, "u": top + d})
        rows, hfs = [], {}
        for n in range(1, top + 1):
            hf = hilbert_coefficients(ser, n)
            hfs[n] = hf
            beta = betti_coefficients(pser, n)
            totals = [sum(v for (i, _), v in beta.items() if i == k) for k in range(n + 1)]
            e = sum(hf)
            rows.append((n, _vec(hf), _vec(totals), f"{float(Fraction(e, n ** (d - 1))):.6f}"))
        write_csv(out / "series.csv", CSV_COLUMNS, rows)
        plot_hilbert_functions({n: h for n, h in hfs.items() if n >= n_lo}, out / "series_hf.png",
                               title=f"Series coefficients, d={d}, r={r}")
        plot_multiplicity_ratio([x["n"] for x in mult["rows"]], [x["ratio"] for x in mult["rows"]],
                                mult["limit"], out / "series_multiplicity.png")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_chain(cfg: RunConfig) -> int:
    _require(cfg, "d", "r", "n_list")
    alpha = _alpha(cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        chain = chain_stability_check(alpha, cfg.d, cfg.r, cfg.n_list, seed=cfg.seed,
                                      mode=cfg.mode, bound=cfg.coeff_bound)
    report = header(cfg)
    report.update({"alpha_info": chain_alpha_info(alpha, cfg.d), "chain": chain.to_json(),
                   "passed": chain.passed, "certified": chain.passed and cfg.mode == "exact"})
    emit(cfg, "chain.json", report)
    for n, checks in sorted(chain.checks.items()):
        bad = [k for k, v in checks.items() if not v]
        print(f"n={n}: {'PASS' if not bad else 'FAIL ' + ','.join(bad)}", file=sys.stderr)
    if cfg.out:
        from .plotting import plot_betti_totals, plot_hilbert_functions

        out = Path(cfg.out)
        rows = []
        for n, (cert, hf, table) in sorted(chain.per_n.items()):
            e = sum(hf)
            rows.append((n, _vec(hf), _vec(table.totals()), f"{float(Fraction(e, n ** (cfg.d - 1))):.6f}"))
        write_csv(out / "chain.csv", CSV_COLUMNS, rows)
        plot_hilbert_functions({n: v[1] for n, v in chain.per_n.items()}, out / "chain_hf.png",
                               title=f"Chain Hilbert functions, d={cfg.d}, r={cfg.r}")
        plot_betti_totals({n: v[2].totals() for n, v in chain.per_n.items()}, out / "chain_betti.png")
    return EXIT_OK if chain.passed else EXIT_FAIL


COMMANDS = {
    "gen": cmd_gen,
    "verify": cmd_verify,
    "betti": cmd_betti,
    "series": cmd_series,
    "chain": cmd_chain,
}


# -- argument parsing ---------------------------------------------------------------
def parse_grid(text: str) -> List[Tuple[int, int, int]]:
    """'default' or 'n,d,r;n,d,r;...'."""
    if text in ("", "default"):
        return list(DEFAULT_GRID)
    out = []
    for chunk in text.split(";"):
        parts = [int(x) for x in chunk.split(",")]
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"grid entry {chunk!r} is not n,d,r")
        out.append(tuple(parts))
    return out


def parse_n_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --n-list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symmid", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"symmid {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--r", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--coeff-bound", type=int, default=100)
    common.add_argument("--mode", choices=("exact", "fast"), default="exact")
    common.add_argument("--out", help="output directory for JSON, CSV and figures")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="build f_alpha generators")
    v = sub.add_parser("verify", parents=[common], help="certify generality")
    v.add_argument("--grid", nargs="?", const="default", type=parse_grid,
                   help="run a grid; bare --grid uses the acceptance grid, or pass 'n,d,r;n,d,r'")
    v.add_argument("--seeds", type=int, default=1, help="seeds per grid point")
    v.add_argument("--adversarial", action="store_true", help="use V = span(x1^d) instead")
    sub.add_parser("betti", parents=[common], help="Betti table: formula against oracle")
    s = sub.add_parser("series", parents=[common], help="expand the equivariant series")
    s.add_argument("--orders", type=int, default=8, help="largest n to expand")
    c = sub.add_parser("chain", parents=[common], help="certify a fixed V along n")
    c.add_argument("--n-list", type=parse_n_list)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("n", "d", "r", "seed", "coeff_bound", "mode", "out", "grid", "n_list", "orders",
                 "seeds", "adversarial"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        if cfg.coeff_bound < 1:
            raise UsageError("--coeff-bound must be at least 1")
        return COMMANDS[cfg.command](cfg)
    except (UsageError, CostGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
