"""Command-line front end.

Subcommands: ``audit`` (bounds for one regression, JSON report), ``gen``
(synthetic CSV), ``allpairs`` (every ordered feature pair of a CSV),
``oracle`` (brute-force references) and ``check-ac`` (anti-concentration
falsifier).

Exit codes: 0 success, 2 input error, 3 solver failure, 4 Bottom from
``lpapprox``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from importlib import resources
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .bounds import LOWER, UPPER
from .datagen import FAMILIES, check_anti_concentration, generate
from .greedy import greedy_upper_bound
from .lower_bound import LowerBoundConfig, lp_lower_bound
from .lp import SolverError
from .lp_approx import LpApproxConfig, lp_approx_stability
from .net import NetConfig, net_upper_bound
from .ols import Dataset, treatment_coefficient
from .oracle import MAX_BRUTE_N, brute_force_integral, default_grid, fractional_upper_via_grid

log = logging.getLogger("olsaudit")

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_BOTTOM = 0, 2, 3, 4
METHODS = ("greedy", "net", "lower", "lpapprox", "oracle")
LONG_COLUMNS = ("dataset", "method", "bound_kind", "value", "param")


class InputError(ValueError):
    """Bad user input (missing column, non-numeric cell, too few rows)."""


# --------------------------------------------------------------------------
# CSV ingestion
# --------------------------------------------------------------------------


def read_table(path: str):
    """Header plus a float matrix; every cell must parse as a number."""
    try:
        fh = sys.stdin if path == "-" else open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise InputError(f"{path}: empty file, a header row is required") from None
        if len(set(header)) != len(header):
            raise InputError(f"{path}: duplicate column names in header")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise InputError(f"{path}:{lineno}: expected {len(header)} fields, found {len(row)}")
            vals = []
            for col, cell in zip(header, row):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise InputError(f"{path}:{lineno}: column {col!r} has non-numeric value {cell!r}") from None
            rows.append(vals)
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    if not np.all(np.isfinite(data)):
        bad = np.argwhere(~np.isfinite(data))[0]
        raise InputError(f"{path}:{bad[0] + 2}: column {header[bad[1]]!r} is not finite")
    return header, data


def build_dataset(header, data, response, treatment=None, controls=None, add_intercept=False, standardize=False):
    def col(name):
        if name not in header:
            raise InputError(f"column {name!r} not found; available: {', '.join(header)}")
        return header.index(name)

    ry = col(response)
    if treatment is None:
        rest = [h for h in header if h != response]
        if not rest:
            raise InputError("need at least one column besides the response")
        treatment = rest[0]
    if controls is None:
        controls = [h for h in header if h not in (response, treatment)]
    names = [treatment] + list(controls)
    if len(set(names)) != len(names) or response in names:
        raise InputError("treatment, controls and response must be distinct columns")
    X = data[:, [col(c) for c in names]]
    if standardize:
        sd = X.std(axis=0)
        sd[sd == 0] = 1.0
        X = (X - X.mean(axis=0)) / sd
    if add_intercept:
        X = np.column_stack([X, np.ones(X.shape[0])])
        names.append("intercept")
    if X.shape[0] < X.shape[1]:
        raise InputError(f"need at least d={X.shape[1]} rows, found n={X.shape[0]}")
    return Dataset(X, data[:, ry], names)


# --------------------------------------------------------------------------
# report helpers
# --------------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _weights_summary(w, lam) -> Dict:
    w = np.asarray(w, dtype=float)
    return {
        "removed_weight": float(len(w) - w.sum()),
        "fully_removed": [int(i) for i in np.flatnonzero(w <= 1e-9)],
        "partially_removed": [int(i) for i in np.flatnonzero((w > 1e-9) & (w < 1 - 1e-9))],
        "lambda": _jsonable(np.asarray(lam, dtype=float)),
    }


def _resolve_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return int(seed)
    return int(np.random.SeedSequence().entropy % (2**63))


def load_schema() -> Dict:
    return json.loads(resources.files("olsaudit").joinpath("report_schema.json").read_text(encoding="utf-8"))


def run_methods(ds: Dataset, methods: Sequence[str], args, seed: int) -> List[Dict]:
    """Run each requested method; one report entry per method."""
    entries = []
    for name in methods:
        t0 = time.perf_counter()
        entry = {"method": name, "seed": seed, "status": "ok"}
        if name == "greedy":
            res = greedy_upper_bound(ds, args.max_steps)
            b = res.as_bound(ds.n)
            entry.update(bound_kind=UPPER, value=b.value, config={"max_steps": args.max_steps})
            entry["certificate"] = {
                "flipped": res.flipped,
                "removed_indices": res.removed_indices,
                "final_beta1": res.final_beta1,
            }
        elif name == "net":
            cfg = NetConfig(args.directions, seed)
            b = net_upper_bound(ds, cfg, args.lp_method, n_jobs=args.threads)
            entry.update(bound_kind=UPPER, value=b.value, config={"num_directions": args.directions})
            entry["certificate"] = _weights_summary(b.certificate["w"], b.certificate["lambda"])
        elif name == "lower":
            cfg = LowerBoundConfig(tuple(args.thresholds), args.subsample, seed)
            b = lp_lower_bound(ds, cfg, args.lp_method)
            entry.update(
                bound_kind=LOWER,
                value=b.value,
                config={"thresholds": list(args.thresholds), "m": args.subsample},
            )
            entry["certificate"] = {
                "num_regions": b.certificate.get("num_regions", 0),
                "binding_region": b.certificate.get("binding_region"),
            }
        elif name == "lpapprox":
            cfg = LpApproxConfig(args.eps, args.delta, args.eta, args.c_vc, seed, args.lpapprox_m)
            res = lp_approx_stability(ds, cfg, args.lp_method)
            entry["config"] = {"eps": args.eps, "delta": args.delta, "eta": args.eta, "C_vc": args.c_vc, "m": cfg.subsample_size(ds.n, ds.d)}
            if res.is_bottom:
                entry.update(bound_kind=None, value=None, status="bottom")
                entry["certificate"] = {
                    "witness_lambda": _jsonable(res.certificate["witness_lambda"]),
                    "small_residuals": res.certificate["small_residuals"],
                    "region": res.best_region_id,
                }
            else:
                entry.update(bound_kind=UPPER, value=res.S_hat)
                entry["certificate"] = _weights_summary(res.certificate["w"], res.certificate["lambda"])
        elif name == "oracle":
            if ds.n > MAX_BRUTE_N:
                entry.update(bound_kind=None, value=None, status="skipped", config={"max_n": MAX_BRUTE_N})
                entry["certificate"] = {"reason": f"n={ds.n} exceeds {MAX_BRUTE_N}"}
            else:
                res = brute_force_integral(ds, args.max_k)
                entry.update(bound_kind=UPPER, value=None if res.integral_stability is None else float(res.integral_stability))
                entry["config"] = {"max_k": res.max_k}
                entry["certificate"] = {"witness_subset": res.witness_subset, "exceeds_max_k": res.exceeds_max_k}
                if res.exceeds_max_k:
                    entry["status"] = "exceeds_max_k"
        else:
            raise InputError(f"unknown method {name!r}")
        entry["wall_time"] = time.perf_counter() - t0
        entries.append(entry)
    return entries


def consistency(entries) -> Dict:
    ups = [e["value"] for e in entries if e.get("bound_kind") == UPPER and e.get("value") is not None]
    lows = [e["value"] for e in entries if e.get("bound_kind") == LOWER and e.get("value") is not None]
    min_up = min(ups) if ups else None
    max_low = max(lows) if lows else None
    ok = min_up is None or max_low is None or max_low <= min_up + 1e-6
    return {"ok": bool(ok), "min_upper": min_up, "max_lower": max_low}


def _long_rows(label, entries):
    for e in entries:
        if e.get("value") is None:
            continue
        param = ";".join(f"{k}={v}" for k, v in sorted(e.get("config", {}).items()))
        yield [label, e["method"], e["bound_kind"], repr(float(e["value"])), param]


def _write_long_csv(path, rows, append=False):
    exists = append and os.path.exists(path) and os.path.getsize(path) > 0
    with open(path, "a" if append else "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        if not exists:
            wr.writerow(LONG_COLUMNS)
        wr.writerows(rows)


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_audit(args) -> int:
    header, data = read_table(args.csv)
    ds = build_dataset(header, data, args.response, args.treatment, args.controls, args.add_intercept, args.standardize)
    seed = _resolve_seed(args.seed)
    methods = args.methods or ["greedy", "net", "lower"]
    entries = run_methods(ds, methods, args, seed)
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "olsaudit", "version": __version__},
        "seed": seed,
        "dataset": {
            "source": args.csv,
            "n": ds.n,
            "d": ds.d,
            "response": args.response,
            "columns": list(ds.column_names),
            "add_intercept": bool(args.add_intercept),
            "standardized": bool(args.standardize),
            "beta1_full": treatment_coefficient(ds),
        },
        "methods": entries,
        "consistency": consistency(entries),
    }
    if not report["consistency"]["ok"]:
        log.error("internal consistency error: a lower bound exceeds an upper bound")
    _emit(json.dumps(_jsonable(report), indent=2) + "\n", args.out)
    if args.long_csv:
        _write_long_csv(args.long_csv, _long_rows(args.label or args.csv, entries), append=True)
    if any(e["status"] == "bottom" for e in entries):
        return EXIT_BOTTOM
    return EXIT_OK


def cmd_gen(args) -> int:
    params = {}
    if args.family == "heterogeneous":
        params = dict(n=args.n or 1000, k=10 if args.k is None else args.k, sigma=1.0 if args.sigma is None else args.sigma)
    elif args.family == "isotropic":
        params = dict(n=args.n or 1000, d=args.d or 2, sigma=1.0 if args.sigma is None else args.sigma)
    else:
        params = dict(n=args.n or 1000, k=30 if args.k is None else args.k, c=args.c, C=args.C)
    try:
        ds = generate(args.family, seed=_resolve_seed(args.seed), **params)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow([f"x{j + 1}" for j in range(ds.d)] + ["y"])
    for xi, yi in zip(ds.X, ds.y):
        wr.writerow(["%.17g" % v for v in xi] + ["%.17g" % yi])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


ALLPAIRS_COLUMNS = ("treatment", "control", "n", "beta1", "net_upper", "greedy_upper", "lp_lower", "error")


def cmd_allpairs(args) -> int:
    header, data = read_table(args.csv)
    if args.response not in header:
        raise InputError(f"column {args.response!r} not found; available: {', '.join(header)}")
    features = [h for h in header if h != args.response]
    if len(features) < 2:
        raise InputError("allpairs needs at least two feature columns besides the response")
    seed = _resolve_seed(args.seed)
    rows = []
    for t in features:
        for c in features:
            if t == c:
                continue
            row = {"treatment": t, "control": c}
            try:
                ds = build_dataset(header, data, args.response, t, [c], args.add_intercept, args.standardize)
                row["n"] = ds.n
                row["beta1"] = treatment_coefficient(ds)
                row["net_upper"] = net_upper_bound(ds, NetConfig(args.directions, seed), args.lp_method, args.threads).value
                g = greedy_upper_bound(ds)
                row["greedy_upper"] = g.as_bound(ds.n).value
                row["lp_lower"] = lp_lower_bound(ds, LowerBoundConfig(tuple(args.thresholds), args.subsample, seed), args.lp_method).value
            except (SolverError, ValueError, np.linalg.LinAlgError) as exc:
                row["error"] = f"{type(exc).__name__}: {exc}"
                log.warning("pair (%s, %s) failed: %s", t, c, exc)
            rows.append(row)
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=ALLPAIRS_COLUMNS, lineterminator="\n")
    wr.writeheader()
    for row in rows:
        wr.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    _emit(buf.getvalue(), args.out)
    if args.long_csv:
        long = []
        for row in rows:
            label = f"{args.label or args.csv}:{row['treatment']}~{row['control']}"
            for key, method, kind in (("net_upper", "net", UPPER), ("greedy_upper", "greedy", UPPER), ("lp_lower", "lower", LOWER)):
                if row.get(key) is not None:
                    long.append([label, method, kind, repr(float(row[key])), f"seed={seed}"])
        _write_long_csv(args.long_csv, long, append=True)
    return EXIT_OK


def cmd_oracle(args) -> int:
    header, data = read_table(args.csv)
    ds = build_dataset(header, data, args.response, args.treatment, args.controls, args.add_intercept, args.standardize)
    if ds.n > MAX_BRUTE_N:
        raise InputError(f"oracle enumeration is limited to n <= {MAX_BRUTE_N}, got n={ds.n}")
    integral = brute_force_integral(ds, args.max_k)
    grid = None
    if ds.d <= 3:
        grid = fractional_upper_via_grid(ds, default_grid(ds, args.grid_points), method=args.lp_method)
    out = {
        "schema_version": SCHEMA_VERSION,
        "n": ds.n,
        "d": ds.d,
        "integral_stability": integral.integral_stability,
        "exceeds_max_k": integral.exceeds_max_k,
        "max_k": integral.max_k,
        "witness_subset": integral.witness_subset,
        "fractional_upper_grid": None if grid is None else grid.fractional_upper,
        "grid_lambda": None if grid is None else grid.witness_lambda,
    }
    _emit(json.dumps(_jsonable(out), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_check_ac(args) -> int:
    header, data = read_table(args.csv)
    ds = build_dataset(header, data, args.response, args.treatment, args.controls, args.add_intercept, args.standardize)
    seed = _resolve_seed(args.seed)
    rep = check_anti_concentration(ds, args.variant, args.eps, args.delta, args.trials, seed)
    out = {
        "schema_version": SCHEMA_VERSION,
        "assumption": rep.assumption,
        "eps": rep.eps,
        "delta": rep.delta,
        "seed": seed,
        "worst_fraction_found": rep.worst_fraction_found,
        "verdict": rep.verdict,
        "witness_beta": rep.witness_beta,
    }
    _emit(json.dumps(_jsonable(out), indent=2) + "\n", args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _add_dataset_args(p):
    p.add_argument("csv", help="input CSV with a header row ('-' for stdin)")
    p.add_argument("--response", "-y", required=True)
    p.add_argument("--treatment", "-t", help="audited column (default: first non-response column)")
    p.add_argument("--controls", "-c", nargs="*", help="control columns (default: all remaining)")
    p.add_argument("--add-intercept", action="store_true", help="append a column of ones to the controls")
    p.add_argument("--standardize", action="store_true", help="rescale covariates to mean 0, variance 1")


def _add_solver_args(p):
    p.add_argument("--seed", type=int, help="random seed (default: fresh OS entropy, echoed in the output)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--lp-method", choices=("auto", "simplex", "highs"), default="auto")
    p.add_argument("--directions", type=int, default=1000, help="net size for the net upper bound")
    p.add_argument("--thresholds", type=float, nargs="+", default=[0.0], help="residual thresholds for the LP lower bound")
    p.add_argument("--subsample", type=int, default=None, help="subsample size for the LP lower bound (default min(n, 30))")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="olsaudit", description="Bounds on how many samples must be dropped to zero an OLS coefficient.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", help="bound the stability of one regression")
    _add_dataset_args(p)
    _add_solver_args(p)
    p.add_argument("--methods", nargs="+", choices=METHODS)
    p.add_argument("--max-steps", type=int, default=None, help="greedy step limit (default n - d)")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--c-vc", type=float, default=1.0, help="constant in the lpapprox subsample size")
    p.add_argument("--lpapprox-m", type=int, default=None, help="override the lpapprox subsample size")
    p.add_argument("--max-k", type=int, default=None, help="largest subset size the oracle tries")
    p.add_argument("--out", "-o")
    p.add_argument("--long-csv", help="append plot-ready rows (dataset, method, bound_kind, value, param)")
    p.add_argument("--label", help="dataset label for --long-csv rows")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("gen", help="write a synthetic dataset as CSV")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--sigma", type=float)
    p.add_argument("--c", type=float, default=0.2)
    p.add_argument("--C", type=float, default=300.0)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("allpairs", help="net, greedy and LP bounds for every ordered feature pair")
    p.add_argument("csv")
    p.add_argument("--response", "-y", required=True)
    p.add_argument("--add-intercept", action="store_true")
    p.add_argument("--standardize", action="store_true")
    _add_solver_args(p)
    p.add_argument("--out", "-o")
    p.add_argument("--long-csv")
    p.add_argument("--label")
    p.set_defaults(func=cmd_allpairs)

    p = sub.add_parser("oracle", help="brute-force integral stability and grid upper bound (small n)")
    _add_dataset_args(p)
    p.add_argument("--max-k", type=int, default=None)
    p.add_argument("--grid-points", type=int, default=200, help="grid points per control axis")
    p.add_argument("--lp-method", choices=("auto", "simplex", "highs"), default="auto")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("check-ac", help="search for anti-concentration violations")
    _add_dataset_args(p)
    p.add_argument("--variant", choices=("A", "B"), default="A")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_check_ac)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
