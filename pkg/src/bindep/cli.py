"""Command-line interface: ``bindep {measure,matrix,simulate,surface,limit-law}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .core import ContingencyTable, DomainError
from .estimation import (
    BoundaryError,
    MomentEstimates,
    PairedBinarySample,
    SampleMode,
    SingularityError,
    default_bandwidth,
    omega_hac,
    omega_iid,
)
from .inference import DEFAULT_GRID_STEP, DEFAULT_N_MC, EmptyAcceptanceWarning, Method, Strategy, ci, ci_c
from .measures import all_measures, cole, phi, yule_q
from .simulation import (
    SURFACE_COLUMNS,
    CoverageConfig,
    comparison_surface,
    derived_seed,
    replicate_limit_law,
    run_coverage,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

DEFAULT_NA = ("NA", "", ".")


class UsageError(Exception):
    pass


# --- formatting ------------------------------------------------------------

class Fmt:
    def __init__(self, full: bool):
        self.digits = 17 if full else 6

    def num(self, x: Any) -> str:
        if x is None:
            return ""
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            return str(int(x))
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.{self.digits}g}"

    def round(self, obj: Any) -> Any:
        """Round floats inside ``obj`` to the configured significant digits (JSON output)."""
        if isinstance(obj, bool) or obj is None or isinstance(obj, str):
            return obj
        if isinstance(obj, (int, np.integer)):
            return int(obj)
        if isinstance(obj, (float, np.floating)):
            x = float(obj)
            if math.isnan(x):
                return None
            if math.isinf(x):
                return x
            return float(f"{x:.{self.digits}g}")
        if isinstance(obj, dict):
            return {k: self.round(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [self.round(v) for v in obj]
        if isinstance(obj, np.ndarray):
            return self.round(obj.tolist())
        return obj


def _dump_json(doc: Any, fmt: Fmt) -> str:
    return json.dumps(fmt.round(doc), sort_keys=True, indent=2) + "\n"


# --- input -----------------------------------------------------------------

def read_dataset(path: str, na_tokens: Sequence[str] = DEFAULT_NA) -> tuple[list[str], np.ndarray]:
    """Read a comma-separated 0/1 dataset with a header row; missing cells become NaN."""
    na = set(na_tokens)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise UsageError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            raise UsageError(f"{path}: duplicate column names")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise UsageError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            vals = []
            for col, tok in zip(header, row):
                t = tok.strip()
                if t in na:
                    vals.append(math.nan)
                elif t == "0":
                    vals.append(0.0)
                elif t == "1":
                    vals.append(1.0)
                else:
                    raise UsageError(f"{path}:{lineno}: column {col!r} has non-binary value {tok!r}")
            rows.append(vals)
    data = np.array(rows, dtype=np.float64).reshape(len(rows), len(header))
    return header, data


def _table_from_args(args) -> tuple[ContingencyTable, PairedBinarySample | None, list[str]]:
    notes: list[str] = []
    flags = [args.n11, args.n10, args.n01, args.n00]
    have_flags = any(v is not None for v in flags)
    sources = sum([have_flags, args.table is not None, args.data is not None])
    if sources != 1:
        raise UsageError("give exactly one of --n11/--n10/--n01/--n00, --table, or --data")
    mode = SampleMode(args.mode)
    if have_flags:
        if any(v is None for v in flags):
            raise UsageError("all four of --n11 --n10 --n01 --n00 are required")
        table = ContingencyTable(*flags)
        sample = None
    elif args.table is not None:
        table = ContingencyTable.parse(args.table)
        sample = None
    else:
        header, data = read_dataset(args.data, args.na_tokens)
        cols = [args.x or header[0], args.y or (header[1] if len(header) > 1 else None)]
        if cols[1] is None:
            raise UsageError("dataset needs two columns")
        for c in cols:
            if c not in header:
                raise UsageError(f"column {c!r} not in dataset")
        xi, yi = header.index(cols[0]), header.index(cols[1])
        keep = ~np.isnan(data[:, xi]) & ~np.isnan(data[:, yi])
        dropped = int((~keep).sum())
        if dropped:
            notes.append(f"dropped {dropped} rows with missing values")
        if keep.sum() < 1:
            raise UsageError("no complete pairs in dataset")
        sample = PairedBinarySample(data[keep, xi], data[keep, yi], mode)
        table = sample.table()
    if mode is SampleMode.TIME_SERIES and sample is None:
        raise UsageError("--mode timeseries needs raw data (--data), not counts")
    if args.hac_bandwidth is not None and mode is not SampleMode.TIME_SERIES:
        raise UsageError("--hac-bandwidth only applies with --mode timeseries")
    return table, sample, notes


# --- commands --------------------------------------------------------------

_LABELS = {
    "covariance": "Covariance",
    "phi": "Phi coefficient",
    "cole": "Cole's C",
    "yule_q": "Yule's Q",
    "yule_y": "Yule's Y",
    "odds_ratio": "Odds ratio",
    "msc": "Mean square contingency",
    "cramers_v": "Cramer's V",
    "tschuprow_t": "Tschuprow's T",
    "pearson_cc": "Pearson's contingency coef.",
    "distance_cor": "Distance correlation",
    "chatterjee_xi": "Chatterjee's xi",
    "uncertainty": "Uncertainty coefficient",
    "tetrachoric": "Tetrachoric correlation",
}
_CI_KEYS = {"q": "yule_q", "c": "cole", "phi": "phi"}


def _intervals(m, omega, args, seed) -> list:
    ivs = [
        ci("q", m, omega, args.level, args.method),
        ci_c(m, omega, args.level, args.method, args.grid_step, strategy=args.strategy, n_mc=args.n_mc, seed=seed),
        ci("phi", m, omega, args.level, args.method),
    ]
    return ivs


def _omega(m, sample, args):
    if SampleMode(args.mode) is SampleMode.TIME_SERIES:
        bw = args.hac_bandwidth if args.hac_bandwidth is not None else default_bandwidth(m.n)
        return omega_hac(sample, bw)
    return omega_iid(m)


def cmd_measure(args, out) -> int:
    fmt = Fmt(args.full_precision)
    table, sample, notes = _table_from_args(args)
    m = MomentEstimates.from_table(table)
    diagnostics = list(notes)
    if m.boundary_flags and ("p_hat_degenerate" in m.boundary_flags or "q_hat_degenerate" in m.boundary_flags):
        raise UsageError("a margin is degenerate (all observations equal); measures are undefined")
    d = table.to_distribution()
    vals = all_measures(d)
    intervals = []
    if m.is_interior:
        omega = _omega(m, sample, args)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", EmptyAcceptanceWarning)
            intervals = _intervals(m, omega, args, args.seed)
        diagnostics.extend(str(w.message) for w in caught)
    else:
        omega = None
        diagnostics.append("table has a zero cell: measures are at their bounds and confidence intervals are suppressed")
    if SampleMode(args.mode) is SampleMode.TIME_SERIES:
        diagnostics.append("time-series mode: mixing conditions for HAC inference are assumed, not checked")

    by_measure = {_CI_KEYS[iv.measure]: iv for iv in intervals}
    doc = {
        "n": table.n,
        "counts": {"n11": table.n11, "n10": table.n10, "n01": table.n01, "n00": table.n00},
        "estimates": {"p_hat": m.p_hat, "q_hat": m.q_hat, "r_hat": m.r_hat, "sigma_hat": m.sigma_hat},
        "measures": vals,
        "intervals": [
            {"measure": k, "point": iv.point, "lower": iv.lower, "upper": iv.upper, "non_interval": iv.non_interval_flag}
            for k, iv in by_measure.items()
        ],
        "level": args.level,
        "method": args.method,
        "mode": args.mode,
        "omega_source": None if omega is None else omega.source.value,
        "hac_bandwidth": None if omega is None else omega.bandwidth,
        "strategy": Strategy.parse(args.strategy).value,
        "n_mc": args.n_mc,
        "grid_step": args.grid_step,
        "seed": args.seed,
        "diagnostics": diagnostics,
    }
    if args.format == "json":
        out.write(_dump_json(doc, fmt))
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["measure", "value", "lower", "upper"])
        for k, v in vals.items():
            iv = by_measure.get(k)
            w.writerow([k, fmt.num(v), fmt.num(iv.lower) if iv else "", fmt.num(iv.upper) if iv else ""])
    else:
        out.write(f"n = {table.n}   counts (n11 n10 n01 n00) = {table.n11} {table.n10} {table.n01} {table.n00}\n")
        out.write(f"{'measure':<30}{'value':>14}   {int(round(args.level * 100))}% CI ({args.method})\n")
        for k, v in vals.items():
            line = f"{_LABELS.get(k, k):<30}{fmt.num(v):>14}"
            iv = by_measure.get(k)
            if iv is not None:
                line += f"   [{fmt.num(iv.lower)}, {fmt.num(iv.upper)}]"
                if iv.non_interval_flag:
                    line += " *"
            out.write(line + "\n")
        for dmsg in diagnostics:
            out.write(f"note: {dmsg}\n")
    return EXIT_OK


def _pair_job(args_tuple):
    xi, yi, x, y, opts = args_tuple
    level, method, strategy, n_mc, grid_step, seed, want_all, want_ci = opts
    table = ContingencyTable.from_pairs(x, y)
    d = table.to_distribution() if 0 < table.n11 + table.n10 < table.n and 0 < table.n11 + table.n01 < table.n else None
    res: dict[str, Any] = {"n": table.n, "values": {}, "ci": {}}
    if d is None:
        res["warning"] = "degenerate margin"
        return xi, yi, res
    res["values"] = all_measures(d) if want_all else {"cole": cole(d), "yule_q": yule_q(d), "phi": phi(d)}
    m = MomentEstimates.from_table(table)
    if want_ci and m.is_interior:
        om = omega_iid(m)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EmptyAcceptanceWarning)
            res["ci"]["yule_q"] = ci("q", m, om, level, method)
            res["ci"]["phi"] = ci("phi", m, om, level, method)
            res["ci"]["cole"] = ci_c(m, om, level, method, grid_step, strategy=strategy, n_mc=n_mc, seed=derived_seed(seed, xi, yi))
    return xi, yi, res


def cmd_matrix(args, out) -> int:
    fmt = Fmt(args.full_precision)
    if args.mode != "iid":
        raise UsageError("matrix supports --mode iid only")
    header, data = read_dataset(args.data, args.na_tokens)
    k = len(header)
    if k < 2:
        raise UsageError("matrix needs at least two binary columns")
    obs = ~np.isnan(data)
    neff = (obs.T.astype(np.int64) @ obs.astype(np.int64))
    opts = (args.level, args.method, args.strategy, args.n_mc, args.grid_step, args.seed, args.all, not args.no_ci)
    jobs = []
    warn: list[str] = []
    for i in range(k):
        for j in range(i + 1, k):
            keep = obs[:, i] & obs[:, j]
            if keep.sum() < 2:
                warn.append(f"skipped pair ({header[i]}, {header[j]}): fewer than 2 overlapping rows")
                continue
            jobs.append((i, j, data[keep, i].astype(np.int8), data[keep, j].astype(np.int8), opts))
    if args.workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            results = list(ex.map(_pair_job, jobs))
    else:
        results = [_pair_job(j) for j in jobs]

    names = ["cole", "yule_q", "phi"]
    if args.all:
        names = list(results[0][2]["values"]) if results and results[0][2]["values"] else names
    unit_diag = {"cole", "yule_q", "phi", "cramers_v", "tschuprow_t", "distance_cor", "chatterjee_xi", "uncertainty", "msc", "tetrachoric"}
    mats = {nm: np.full((k, k), np.nan) for nm in names}
    lows = {nm: np.full((k, k), np.nan) for nm in ("cole", "yule_q", "phi")}
    ups = {nm: np.full((k, k), np.nan) for nm in ("cole", "yule_q", "phi")}
    for nm in names:
        if nm in unit_diag:
            np.fill_diagonal(mats[nm], 1.0)
    for i, j, res in results:
        if "warning" in res:
            warn.append(f"pair ({header[i]}, {header[j]}): {res['warning']}")
        for nm, v in res["values"].items():
            if nm in mats:
                mats[nm][i, j] = mats[nm][j, i] = v
        for nm, iv in res["ci"].items():
            lows[nm][i, j] = lows[nm][j, i] = iv.lower
            ups[nm][i, j] = ups[nm][j, i] = iv.upper

    if args.format == "json":
        doc = {
            "columns": header,
            "n_eff": neff,
            "measures": {nm: mats[nm] for nm in names},
            "lower": {} if args.no_ci else lows,
            "upper": {} if args.no_ci else ups,
            "level": args.level,
            "method": args.method,
            "seed": args.seed,
            "warnings": warn,
        }
        out.write(_dump_json(doc, fmt))
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["measure", "row", "col", "value", "lower", "upper", "n_eff"])
        for nm in names:
            for i in range(k):
                for j in range(k):
                    lv = lows[nm][i, j] if (nm in lows and not args.no_ci) else math.nan
                    uv = ups[nm][i, j] if (nm in ups and not args.no_ci) else math.nan
                    w.writerow([nm, header[i], header[j], fmt.num(mats[nm][i, j]),
                                "" if math.isnan(lv) else fmt.num(lv), "" if math.isnan(uv) else fmt.num(uv), int(neff[i, j])])
    else:
        width = max(10, max(len(h) for h in header) + 2)

        def block(title, mat, integer=False):
            out.write(f"{title}\n")
            out.write(" " * width + "".join(f"{h:>{width}}" for h in header) + "\n")
            for i, h in enumerate(header):
                cells = []
                for j in range(k):
                    v = mat[i, j]
                    cells.append(f"{int(v) if integer else fmt.num(v):>{width}}")
                out.write(f"{h:<{width}}" + "".join(cells) + "\n")
            out.write("\n")

        block("effective n", neff, integer=True)
        for nm in names:
            block(_LABELS.get(nm, nm), mats[nm])
        if not args.no_ci:
            for nm in ("cole", "yule_q", "phi"):
                block(f"{_LABELS[nm]} lower {args.level:g}", lows[nm])
                block(f"{_LABELS[nm]} upper {args.level:g}", ups[nm])
        for wmsg in warn:
            out.write(f"warning: {wmsg}\n")
    for wmsg in warn:
        print(f"warning: {wmsg}", file=sys.stderr)
    return EXIT_OK


def _parse_pairs(text: str) -> tuple[tuple[float, float], ...]:
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            a, b = (float(v) for v in chunk.split(","))
        except ValueError:
            raise UsageError(f"cannot parse marginal pair {chunk!r}; use 'p,q;p,q'") from None
        pairs.append((a, b))
    return tuple(pairs)


def _load_config(args) -> CoverageConfig:
    base: dict[str, Any] = {}
    if args.config:
        try:
            base = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.config}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        if not isinstance(base, dict):
            raise UsageError(f"{args.config}: top level must be an object")
    overrides = {
        "marginal_pairs": _parse_pairs(args.pairs) if args.pairs else None,
        "sample_sizes": tuple(int(v) for v in args.sizes.split(",")) if args.sizes else None,
        "replications": args.replications,
        "r_count": args.r_count,
        "measures": tuple(args.measures.split(",")) if args.measures else None,
        "methods": tuple(args.methods.split(",")) if args.methods else None,
        "n_mc": args.n_mc_sim,
        "level": args.level if args.level_set else None,
        "seed": args.seed,
        "persistence": args.persistence,
    }
    for key, val in overrides.items():
        if val is not None:
            base[key] = val
    if args.strategy_compare:
        base["strategies"] = [s.value for s in Strategy]
    elif args.strategy_set:
        base["strategies"] = [Strategy.parse(args.strategy).value]
    if args.mode == "timeseries":
        base["omega"] = "hac"
        if args.hac_bandwidth is not None:
            base["hac_bandwidth"] = args.hac_bandwidth
    if args.method_set and not args.methods:
        base["methods"] = [args.method]
    try:
        return CoverageConfig.from_dict(base)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid simulation config: {exc}") from None


def cmd_simulate(args, out) -> int:
    fmt = Fmt(args.full_precision)
    cfg = _load_config(args)
    if args.dry_run:
        pairs = len(cfg.marginal_pairs)
        out.write(f"cells: {pairs} marginal pairs x {cfg.r_count} r-values x {len(cfg.sample_sizes)} sample sizes = {len(cfg.cells())}\n")
        return EXIT_OK
    report = run_coverage(cfg, workers=args.workers)
    if args.out_csv:
        Path(args.out_csv).write_text(report.to_csv(), encoding="utf-8")
    if args.out_json:
        Path(args.out_json).write_text(report.to_json() + "\n", encoding="utf-8")
    if args.format == "json":
        out.write(report.to_json() + "\n")
    elif args.format == "csv":
        out.write(report.to_csv())
    else:
        out.write(f"{'p':>6}{'q':>6}{'r':>10}{'n':>7}  {'measure':<8}{'method':<10}{'strategy':<10}{'cover':>8}{'low':>8}{'up':>8}{'length':>10}\n")
        for c in report.cells:
            out.write(
                f"{c.p:>6g}{c.q:>6g}{fmt.num(c.r):>10}{c.n:>7}  {c.measure:<8}{c.method:<10}{(c.strategy or '-'):<10}"
                f"{fmt.num(c.coverage):>8}{fmt.num(c.lower_violation):>8}{fmt.num(c.upper_violation):>8}{fmt.num(c.mean_length):>10}\n"
            )
    return EXIT_OK


def cmd_surface(args, out) -> int:
    fmt = Fmt(args.full_precision)
    try:
        kind, val = args.fix.split("=")
        value = float(val)
    except ValueError:
        raise UsageError("--fix expects MEASURE=VALUE, e.g. cole=0.7") from None
    aliases = {"c": "cole", "q": "yule_q", "cole": "cole", "yule_q": "yule_q", "phi": "phi"}
    if kind not in aliases:
        raise UsageError(f"unknown measure {kind!r}; choose cole, yule_q or phi")
    rows = comparison_surface(aliases[kind], value, args.grid)
    if args.format == "json":
        text = _dump_json({"fixed": {"measure": aliases[kind], "value": value}, "grid": args.grid, "columns": list(SURFACE_COLUMNS), "rows": rows}, fmt)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SURFACE_COLUMNS)
        for row in rows:
            w.writerow([fmt.num(v) for v in row])
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    else:
        out.write(text)
    return EXIT_OK


def cmd_limit_law(args, out) -> int:
    fmt = Fmt(args.full_precision)
    rep = replicate_limit_law(args.p, args.q, args.c, args.n, args.replications, args.seed, n_mc=args.n_mc)
    centers, counts = rep.histogram(args.bins)
    lcenters, lcounts = rep.histogram(args.bins, of="law")
    if args.out_law:
        Path(args.out_law).write_text("\n".join(["value"] + [fmt.num(v) for v in rep.law_samples]) + "\n", encoding="utf-8")
    if args.format == "json":
        doc = {
            "p": rep.p, "q": rep.q, "c": rep.c_true, "r": rep.r, "n": rep.n, "case": rep.case, "seed": args.seed,
            "median_error": float(np.median(rep.estimates - rep.c_true)),
            "histogram": {"bin_center": centers, "count": counts},
            "law_histogram": {"bin_center": lcenters, "count": lcounts},
        }
        out.write(_dump_json(doc, fmt))
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["bin_center", "count"])
        for c, k in zip(centers, counts):
            w.writerow([fmt.num(c), int(k)])
    return EXIT_OK


# --- parser ----------------------------------------------------------------

def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=0, help="master seed for every random stream (default 0)")
    g.add_argument("--format", choices=("text", "json", "csv"), default="text")
    g.add_argument("--level", type=float, default=None, help="confidence level (default 0.90)")
    g.add_argument("--method", choices=[m.value for m in Method], default=None, help="interval method (default fisher)")
    g.add_argument("--mode", choices=("iid", "timeseries"), default="iid")
    g.add_argument("--hac-bandwidth", type=int, default=None, help="Newey-West lag truncation (time-series mode)")
    g.add_argument("--full-precision", action="store_true", help="print 17 significant digits instead of 6")
    g.add_argument("--strategy", default=None, help="C test combination: full, no_sigma, no_pq, basic")
    g.add_argument("--n-mc", type=int, default=DEFAULT_N_MC, help="Monte Carlo draws for non-Gaussian C laws")
    g.add_argument("--grid-step", type=float, default=DEFAULT_GRID_STEP)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bindep", description="Dependence measures and inference for two binary events.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="all measures and intervals for one 2x2 table or two data columns")
    _common(p)
    for name in ("n11", "n10", "n01", "n00"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--table", help="2x2 block, e.g. '197 2; 139 19'")
    p.add_argument("--data", help="CSV with header and 0/1/NA cells")
    p.add_argument("--x", help="first column name (default: first column)")
    p.add_argument("--y", help="second column name (default: second column)")
    p.add_argument("--na-tokens", nargs="*", default=list(DEFAULT_NA))
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("matrix", help="pairwise measure matrices over many binary columns")
    _common(p)
    p.add_argument("--data", required=True)
    p.add_argument("--na-tokens", nargs="*", default=list(DEFAULT_NA))
    p.add_argument("--all", action="store_true", help="include every measure, not only C, Q and phi")
    p.add_argument("--no-ci", action="store_true", help="skip confidence intervals")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("simulate", help="coverage experiment")
    _common(p)
    p.add_argument("--config", help="JSON file with CoverageConfig fields")
    p.add_argument("--pairs", help="marginal pairs 'p,q;p,q;...'")
    p.add_argument("--sizes", help="sample sizes, comma-separated")
    p.add_argument("--replications", type=int)
    p.add_argument("--r-count", type=int)
    p.add_argument("--measures", help="subset of q,c,phi")
    p.add_argument("--methods", help="subset of standard,fisher")
    p.add_argument("--n-mc-sim", type=int, help="Monte Carlo draws per C interval (default 10000)")
    p.add_argument("--persistence", type=float, help="Markov persistence for time-series data")
    p.add_argument("--strategy-compare", action="store_true", help="run all four C combination strategies")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-csv")
    p.add_argument("--out-json")
    p.add_argument("--dry-run", action="store_true", help="print grid dimensions only")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("surface", help="measures over a (p, q) grid with one measure held fixed")
    _common(p)
    p.add_argument("--fix", required=True, help="MEASURE=VALUE with MEASURE in cole, yule_q, phi")
    p.add_argument("--grid", type=int, default=99)
    p.add_argument("--out")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("limit-law", help="simulated distribution of the C estimator with its limit law")
    _common(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--replications", type=int, default=10_000)
    p.add_argument("--bins", type=int, default=60)
    p.add_argument("--out-law", help="write law samples as one-column CSV")
    p.set_defaults(func=cmd_limit_law)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    args.level_set = args.level is not None
    args.method_set = args.method is not None
    args.strategy_set = args.strategy is not None
    if args.level is None:
        args.level = 0.9
    if args.method is None:
        args.method = Method.FISHER.value
    if args.strategy is None:
        args.strategy = Strategy.FULL.value
    try:
        if not (0.0 < args.level < 1.0):
            raise UsageError("--level must lie in (0, 1)")
        try:
            Strategy.parse(args.strategy)
        except ValueError:
            raise UsageError(f"unknown --strategy {args.strategy!r}") from None
        if args.n_mc < 1:
            raise UsageError("--n-mc must be positive")
        return args.func(args, out)
    except (UsageError, BoundaryError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularityError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
