"""Command-line entry point: ``friable <subcommand> [options]``.

Options resolve as command-line flag, then the ``--config`` JSON file, then
the documented default.  A config file holds global keys (threads,
segment_size, format, seed, out) and one block per subcommand, e.g.
``{"format": "json", "scan": {"X": 100000, "y": 100, "h": 50}}``; unknown
keys are rejected.

Exit codes: 0 success, 1 a checked inequality failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, is_dataclass

import numpy as np

from . import __version__
from .errors import CheckFailure, FriableError, DomainError, RangeError, CapacityError

GLOBAL_DEFAULTS = {"threads": 1, "segment_size": 1 << 22, "format": "text", "seed": 0,
                   "out": None}

TOY = {"X": 1e4, "y": 60.0, "epsilon": 0.1, "eta": 0.01, "C": 1.0, "A_vk": 0.05,
       "J": 1, "P1": 2.0, "P2": 4.0, "P3": 7.5, "derived": False}

DEFAULTS = {
    "params": {"X": 1e6, "y": 1e3, "epsilon": 0.1, "eta": 0.01, "C": 2.0, "A_vk": 0.05,
               "A": 2.0, "J": None, "P1": None, "P2": None, "P3": None},
    "rho": {"u": None, "log": False, "table_dump": None, "u_max": 50.0, "degree": 32,
            "tol": 1e-13, "step": 0.1, "ratio_v": None},
    "psi": {"x": 10 ** 6, "y": 10 ** 3, "h": None},
    "gaps": {"lo": 1, "hi": 10 ** 4, "y": 5},
    "pairwise": {"x": 10 ** 5, "y": 100, "a": 1, "b": 1},
    "weights": dict(TOY, window=None, tilde=False, R=None),
    "meanvalue": dict(TOY, t0=1.0, t1=100.0, tol=1e-8, primes=None),
    "regions": dict(TOY, beta=None, t0=None, t1=200.0),
    "checks": dict(TOY, lemma="mvt", T=1000.0, C_check=8.0, count=50),
    "mellin": {"xi": 0.1, "kappa": 0.1, "invert": None, "t_max": None, "t_grid": None},
    "scan": {"X": 10 ** 5, "y": 100, "h": 50, "sample": None},
    "thresholds": {"X": 10 ** 6, "ys": "50,100,200,400", "target": 0.99, "epsilon": 0.1,
                   "sample": None},
    "verify-all": {"quick": False},
}


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument parsing

def _global_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--out", default=argparse.SUPPRESS, help="write the report here instead of stdout")
    g.add_argument("--format", choices=["csv", "json", "text"], default=argparse.SUPPRESS,
                   help="report format (default: text)")
    g.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help="sieve worker threads (default: 1)")
    g.add_argument("--config", default=argparse.SUPPRESS, help="JSON config file")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed (default: 0)")
    g.add_argument("--segment-size", type=int, default=argparse.SUPPRESS,
                   help="sieve segment length (default: 4194304)")
    g.add_argument("--dump-config", action="store_true", default=argparse.SUPPRESS,
                   help="print the resolved configuration as JSON and exit")
    return p


def _opt(sub, name, type=None, help="", **kw):
    cmd = sub.prog.split()[-1]
    default = DEFAULTS[cmd].get(name.lstrip("-").replace("-", "_"))
    text = f"{help} (default: {default})" if help else f"(default: {default})"
    sub.add_argument(name, type=type, default=None, help=text, **kw)


def _flag(sub, name, help):
    sub.add_argument(name, action="store_true", default=None, help=help)


def _toy_opts(sub):
    for name, typ in [("--X", float), ("--y", float), ("--epsilon", float), ("--eta", float),
                      ("--C", float), ("--A-vk", float), ("--J", int), ("--P1", float),
                      ("--P2", float), ("--P3", float)]:
        _opt(sub, name, typ)
    _flag(sub, "--derived", "derive J, P1, P2, P3 from the formulas instead of the toy values")


def build_parser() -> argparse.ArgumentParser:
    parent = _global_parent()
    parser = argparse.ArgumentParser(
        prog="friable", parents=[parent],
        description="Desk-scale experiments on smooth numbers in short intervals.")
    parser.add_argument("--version", action="version", version=f"friable {__version__}")
    subs = parser.add_subparsers(dest="command", metavar="command")
    subs.required = True

    def add(name, help):
        return subs.add_parser(name, parents=[parent], help=help, description=help)

    s = add("params", "derive and validate the parameter ledger")
    for n in ("--X", "--y", "--epsilon", "--eta", "--C", "--A-vk", "--A", "--P1", "--P2", "--P3"):
        _opt(s, n, float)
    _opt(s, "--J", int, "toy override")

    s = add("rho", "Dickman function values, table dumps and the ratio law")
    _opt(s, "--u", float, "evaluate rho(u)")
    _flag(s, "--log", "print log rho instead")
    _opt(s, "--table-dump", str, "write u, rho, log_rho rows to this CSV path")
    _opt(s, "--u-max", float)
    _opt(s, "--degree", int)
    _opt(s, "--tol", float)
    _opt(s, "--step", float, "grid step for --table-dump")
    _opt(s, "--ratio-v", float, "also compare rho(u-v)/rho(u) with exp(v xi(u))")

    s = add("psi", "count smooth numbers up to x, or in [x, x+h]")
    _opt(s, "--x", int)
    _opt(s, "--y", float)
    _opt(s, "--h", int, "count in [x, x+h] instead")

    s = add("gaps", "largest gap between consecutive smooth numbers")
    _opt(s, "--lo", int)
    _opt(s, "--hi", int)
    _opt(s, "--y", float)

    s = add("pairwise", "count n in (x, 2x] with n and an+b both smooth")
    _opt(s, "--x", int)
    _opt(s, "--y", float)
    _opt(s, "--a", int)
    _opt(s, "--b", int)

    s = add("weights", "enumerate the weights w_n on a window")
    _toy_opts(s)
    _opt(s, "--window", int, "half-open window lo hi; defaults to the support interval", nargs=2, metavar=("LO", "HI"))
    _flag(s, "--tilde", "include the extra factor r in (R, 2R]")
    _opt(s, "--R", int, "r-range parameter for --tilde; defaults to sqrt(X / P1)")

    s = add("meanvalue", "mean value of |F(1+it)|^2 over [t0, t1]")
    _toy_opts(s)
    _opt(s, "--t0", float)
    _opt(s, "--t1", float)
    _opt(s, "--tol", float)
    _opt(s, "--primes", float, "use the prime polynomial on (LO, HI] instead of F",
         nargs=2, metavar=("LO", "HI"))

    s = add("regions", "split the mean value of F over the regions T1, T2, T3")
    _toy_opts(s)
    _opt(s, "--beta", float, "region parameter; defaults to 8 eta")
    _opt(s, "--t0", float, "start of the t-range; defaults to y^(1/8)")
    _opt(s, "--t1", float)

    s = add("checks", "run one of the Dirichlet-polynomial lemma checks")
    _toy_opts(s)
    s.add_argument("--lemma", default=None,
                   choices=["mvt", "imvt", "moment", "large", "hm", "pointwise", "parseval"],
                   help="which check (default: mvt)")
    _opt(s, "--T", float)
    _opt(s, "--C-check", float)
    _opt(s, "--count", int, "random instances for mvt/hm")

    s = add("mellin", "Mellin transform of the trapezoidal smoothing and its inversion")
    _opt(s, "--xi", float)
    _opt(s, "--kappa", float)
    _opt(s, "--invert", float, "reconstruct eta(z) at this z")
    _opt(s, "--t-max", float, "inversion cut-off; defaults to 1000/xi")
    _opt(s, "--t-grid", float, "tabulate on linspace(START, STOP, NUM)", nargs=3,
         metavar=("START", "STOP", "NUM"))

    s = add("scan", "fraction of x in [X, 2X] with a smooth number in [x, x+h]")
    _opt(s, "--X", int)
    _opt(s, "--y", float)
    _opt(s, "--h", int)
    _opt(s, "--sample", int, "sample this many x instead of scanning all")

    s = add("thresholds", "empirical h* per y against the almost-all threshold formula")
    _opt(s, "--X", int)
    _opt(s, "--ys", str, "comma-separated y values")
    _opt(s, "--target", float)
    _opt(s, "--epsilon", float)
    _opt(s, "--sample", int)

    s = add("verify-all", "run the acceptance suite")
    _flag(s, "--quick", "skip criteria budgeted above 30 s")
    return parser


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    for key, val in cfg.items():
        if key in GLOBAL_DEFAULTS:
            continue
        if key not in DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        if not isinstance(val, dict):
            raise UsageError(f"config block {key!r} must be an object")
        unknown = set(val) - set(DEFAULTS[key])
        if unknown:
            raise UsageError(f"unknown keys in {key!r}: {sorted(unknown)}")
    return cfg


def resolve(ns: argparse.Namespace) -> dict:
    """Merge flags over config over defaults into one flat settings dict."""
    cfg = load_config(ns.config) if getattr(ns, "config", None) else {}
    cmd = ns.command
    out = {"command": cmd}
    for key, default in GLOBAL_DEFAULTS.items():
        out[key] = getattr(ns, key, None)
        if out[key] is None:
            out[key] = cfg.get(key, default)
    block = cfg.get(cmd, {})
    for key, default in DEFAULTS[cmd].items():
        val = getattr(ns, key, None)
        out[key] = val if val is not None else block.get(key, default)
    return out


# --------------------------------------------------------------------------
# rendering

def _plain(obj):
    if is_dataclass(obj):
        return _plain(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


class Result:
    """Payload for JSON, optional table for CSV/text, and the asserted outcome."""

    def __init__(self, payload, table=None, ok: bool = True, text: str | None = None):
        self.payload = _plain(payload)
        self.table = table
        self.ok = ok
        self.text = text

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.payload, indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            header, rows = self.table if self.table else (["key", "value"], _flatten(self.payload))
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
            return buf.getvalue()
        if self.text is not None:
            return self.text.rstrip("\n") + "\n"
        rows = _flatten(self.payload)
        width = max((len(k) for k, _ in rows), default=0)
        return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(obj, list) and obj and any(isinstance(v, (dict, list)) for v in obj):
        out = []
        for i, v in enumerate(obj):
            out.extend(_flatten(v, f"{prefix}[{i}]"))
        return out
    return [(prefix, obj)]


# --------------------------------------------------------------------------
# subcommands

def _toy(cfg):
    from .params import derive_params, toy_params
    if cfg["derived"]:
        return derive_params(cfg["X"], cfg["y"], cfg["epsilon"], cfg["eta"], cfg["C"], cfg["A_vk"])
    return toy_params(cfg["X"], cfg["y"], cfg["J"], cfg["P1"], cfg["P2"], cfg["P3"],
                      cfg["epsilon"], cfg["eta"], cfg["C"], cfg["A_vk"])


def cmd_params(cfg) -> Result:
    from .dickman import default_table
    from .params import (derive_params, log_threshold_h_all, log_threshold_h_almost_all,
                         notational_checks, validate_params)
    over = {k: cfg[k] for k in ("J", "P1", "P2", "P3") if cfg[k] is not None}
    p = derive_params(cfg["X"], cfg["y"], cfg["epsilon"], cfg["eta"], cfg["C"], cfg["A_vk"],
                      overrides=over or None)
    val = validate_params(p)
    notes = notational_checks(p, default_table(), cfg["A"])
    th = {"log_h_almost_all": log_threshold_h_almost_all(p.X, p.y, p.epsilon),
          "log_h_all": log_threshold_h_all(p.X, p.y, p.epsilon)}
    payload = {"params": p.to_dict(), "validation": val.to_dict(),
               "notational": notes.to_dict(), "thresholds": th}
    pairs = [(k, v) for k, v in p.to_dict().items()]
    text = "\n".join([
        *(f"{k:<14} {v}" for k, v in pairs),
        "",
        val.to_text(),
        "",
        notes.to_text(),
        "",
        f"log h (almost all) {th['log_h_almost_all']:.6g}",
        f"log h (all)        {th['log_h_all']:.6g}",
    ])
    # desk-scale instances are expected to violate the asymptotic constraints: report, exit 0
    return Result(payload, (["check", "pass", "measured", "required"],
                            [(c.name, c.passed, c.measured, c.required)
                             for c in val.checks + notes.checks]), text=text)


def cmd_rho(cfg) -> Result:
    from .dickman import build_rho, default_table, log_rho, rho, rho_ratio, table_rows
    if cfg["u_max"] == 50.0 and cfg["degree"] == 32 and cfg["tol"] == 1e-13:
        table = default_table()
    else:
        table = build_rho(cfg["u_max"], cfg["degree"], cfg["tol"])
    payload = {"u_max": table.u_max, "degree": table.degree, "tol": table.tol}
    text = []
    if cfg["table_dump"]:
        rows = table_rows(table, cfg["step"])
        with open(cfg["table_dump"], "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["u", "rho", "log_rho"])
            w.writerows(rows)
        payload["table_dump"] = cfg["table_dump"]
        payload["rows"] = len(rows)
        text.append(f"wrote {len(rows)} rows to {cfg['table_dump']}")
    if cfg["u"] is not None:
        u = cfg["u"]
        val = log_rho(table, u) if cfg["log"] else rho(table, u)
        payload.update({"u": u, "log_rho" if cfg["log"] else "rho": val})
        text.append(repr(val))
        if cfg["ratio_v"] is not None:
            rep = rho_ratio(table, u, cfg["ratio_v"])
            payload["ratio"] = rep
            text.append(f"rho(u-v)/rho(u) = {rep.exact:.12g}, exp(v xi) = {rep.predicted:.12g}, "
                        f"|log gap| = {rep.log_discrepancy:.3g}, scaled = {rep.scaled_constant:.3g}")
    if not text:
        raise UsageError("rho needs --u or --table-dump")
    table_out = (["u", "rho", "log_rho"], [(cfg["u"], rho(table, cfg["u"]), log_rho(table, cfg["u"]))]) \
        if cfg["u"] is not None else None
    return Result(payload, table_out, text="\n".join(text))


def cmd_psi(cfg) -> Result:
    from .dickman import default_table
    from .smooth import psi_interval_report, psi_report
    kw = {"segment_size": cfg["segment_size"], "threads": cfg["threads"]}
    table = default_table()
    if cfg["h"] is None:
        rep = psi_report(cfg["x"], cfg["y"], table, **kw)
    else:
        rep = psi_interval_report(cfg["x"], cfg["h"], cfg["y"], table, **kw)
    payload = dict(asdict(rep), x=cfg["x"], y=cfg["y"], h=cfg["h"])
    return Result(payload)


def cmd_gaps(cfg) -> Result:
    from .scanner import max_gap
    rep = max_gap(cfg["lo"], cfg["hi"], cfg["y"], cfg["segment_size"], cfg["threads"])
    return Result(rep, (["gap", "count"], sorted(rep.histogram.items())))


def cmd_pairwise(cfg) -> Result:
    from .dickman import default_table
    from .smooth import pairwise_report
    rep = pairwise_report(cfg["x"], cfg["y"], cfg["a"], cfg["b"], default_table(),
                          segment_size=cfg["segment_size"], threads=cfg["threads"])
    return Result(rep)


def cmd_weights(cfg) -> Result:
    from .weights import (support_interval, weight_bound_check, weights_enumerate,
                          weights_tilde_enumerate)
    p = _toy(cfg)
    if cfg["window"]:
        lo, hi = cfg["window"]
    else:
        a, b = support_interval(p, cfg["tilde"])
        lo, hi = max(1, math.floor(a)), math.ceil(b) + 1
    if cfg["tilde"]:
        R = cfg["R"] if cfg["R"] is not None else int(math.isqrt(int(p.X / p.P1)))
        w = weights_tilde_enumerate(p, R, lo, hi)
    else:
        w = weights_enumerate(p, lo, hi)
    bound = weight_bound_check(w)
    payload = {"lo": lo, "hi": hi, "tilde": w.tilde, "support": len(w.ns), "total": w.total,
               "bound": bound, "weights": w.rows()}
    text = f"{len(w.ns)} n with w_n > 0, total {w.total}, max bound ratio {bound.max_ratio:.4g}"
    return Result(payload, (["n", "w_n"], w.rows()), ok=bound.passed, text=text)


def cmd_meanvalue(cfg) -> Result:
    from .dpoly import factorisation, from_primes, mean_value, mean_value_exact
    if cfg["primes"]:
        poly = from_primes(*cfg["primes"])
        src = f"primes in ({cfg['primes'][0]:g}, {cfg['primes'][1]:g}]"
    else:
        poly = factorisation(_toy(cfg))
        src = "F = P1 P2 P3^J M"
    q = mean_value(poly, cfg["t0"], cfg["t1"], cfg["tol"])
    e = mean_value_exact(poly, cfg["t0"], cfg["t1"])
    payload = {"source": src, "terms": len(poly), "t0": cfg["t0"], "t1": cfg["t1"],
               "quadrature": q, "exact": e, "relative_gap": abs(q - e) / e if e else 0.0}
    return Result(payload)


def cmd_regions(cfg) -> Result:
    from .dpoly import factorisation, from_primes, make_grid, partition_regions, region_contributions
    p = _toy(cfg)
    F = factorisation(p)
    t0 = cfg["t0"] if cfg["t0"] is not None else p.y ** 0.125
    grid = make_grid(t0, cfg["t1"], F.n_max)
    parts = partition_regions(from_primes(p.P1, 2 * p.P1), from_primes(p.P2, 2 * p.P2), grid,
                              p.P1, p.P2, beta=cfg["beta"], eta=p.eta)
    rep = region_contributions(F, parts, grid, p)
    payload = dict(asdict(rep), alpha1=parts.alpha1, alpha2=parts.alpha2, beta=parts.beta,
                   default_t0=p.y ** 0.125, t_range_matches=bool(abs(t0 - p.y ** 0.125) < 1e-12))
    rows = [(k, rep.node_counts[k], rep.by_region[k]) for k in ("T1", "T2", "T3")]
    return Result(payload, (["region", "nodes", "integral"], rows))


def cmd_checks(cfg) -> Result:
    from . import acceptance, dpoly
    from .weights import weights_enumerate
    lemma, seed = cfg["lemma"], cfg["seed"]
    reports = []
    if lemma in ("mvt", "hm"):
        for q, T in acceptance.random_polys(seed, cfg["count"]):
            T = min(T, cfg["T"])
            if lemma == "mvt":
                reports.append(dpoly.mvt_check(q, T, cfg["C_check"]))
            else:
                grid = dpoly.make_grid(-T, T, q.n_max)
                vals = np.abs(dpoly.evaluate_uniform(q, grid.t_start, grid.step,
                                                     grid.nodes.size, 0.0))
                ws = dpoly.extract_well_spaced(grid.nodes, vals, float(np.quantile(vals, 0.9)))
                reports.append(dpoly.halasz_montgomery_check(q, ws, max(T, 2.0), cfg["C_check"]))
    elif lemma == "parseval":
        p = _toy(cfg)
        X = int(p.X)
        h2 = int(p.X * p.y ** (-3 / 8))
        w = weights_enumerate(p, X, 2 * X + h2 + 1)
        reports.append(dpoly.parseval_discrepancy(w, min(20, h2), h2, p.y ** 0.125))
    else:
        name = {"imvt": "improved_mean_value", "moment": "prime_moment",
                "large": "large_values", "pointwise": "pointwise_prime_bound"}[lemma]
        reports.append(acceptance.lemma_battery(seed)[name])
    ok = all(r.passed for r in reports)
    payload = [r.to_dict() for r in reports] if len(reports) > 1 else reports[0].to_dict()
    rows = [(r.lemma, r.lhs, sum(r.rhs_terms), r.ratio, r.asserted, r.passed) for r in reports]
    return Result(payload, (["lemma", "lhs", "rhs", "ratio", "asserted", "pass"], rows), ok=ok)


def cmd_mellin(cfg) -> Result:
    from .mellin import SmoothingParams, eta_mellin, mellin_inversion_check, mellin_table
    sp = SmoothingParams(cfg["xi"], cfg["kappa"])
    payload = {"xi": sp.xi, "kappa": sp.kappa, "eta_mellin_at_1": eta_mellin(1.0, sp).real}
    table = None
    if cfg["t_grid"]:
        a, b, n = cfg["t_grid"]
        rows = mellin_table(sp, np.linspace(a, b, int(n)))
        table = (["t", "re", "im"], rows)
        payload["table"] = rows
    if cfg["invert"] is not None:
        payload["inversion"] = mellin_inversion_check(cfg["invert"], sp, cfg["t_max"])
    return Result(payload, table)


def cmd_scan(cfg) -> Result:
    from .scanner import scan_almost_all
    rep = scan_almost_all(cfg["X"], cfg["y"], cfg["h"], cfg["sample"],
                          cfg["seed"] if cfg["sample"] else None,
                          cfg["segment_size"], cfg["threads"])
    return Result(rep)


def cmd_thresholds(cfg) -> Result:
    from .scanner import compare_with_theory
    try:
        ys = [float(v) for v in str(cfg["ys"]).split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --ys: {cfg['ys']}") from exc
    tab = compare_with_theory(cfg["X"], ys, cfg["epsilon"], cfg["target"], cfg["sample"],
                              cfg["seed"] if cfg["sample"] else None,
                              cfg["segment_size"], cfg["threads"])
    header = ["y", "u", "h_empirical", "reached", "h_formula", "ratio", "vacuous"]
    rows = [tuple(getattr(r, k) for k in header) for r in tab.rows]
    lines = ["  ".join(f"{h:>12}" for h in header)]
    lines += ["  ".join(f"{v:>12.6g}" if isinstance(v, float) else f"{str(v):>12}" for v in r)
              for r in rows]
    lines.append(f"empirical h* nonincreasing in y: {tab.nonincreasing}")
    return Result(tab, (header, rows), ok=tab.nonincreasing, text="\n".join(lines))


def cmd_verify_all(cfg) -> Result:
    from .acceptance import verify_all

    def progress(r):
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.number:2d} {r.name} ({r.seconds:.2f} s)", file=sys.stderr)

    rep = verify_all(cfg["seed"], cfg["threads"], cfg["quick"], progress=progress)
    rows = [(r.number, r.name, r.passed, round(r.seconds, 3)) for r in rep.results]
    return Result(rep.to_dict(), (["criterion", "name", "pass", "seconds"], rows),
                  ok=rep.passed, text=rep.to_text())


COMMANDS = {
    "params": cmd_params, "rho": cmd_rho, "psi": cmd_psi, "gaps": cmd_gaps,
    "pairwise": cmd_pairwise, "weights": cmd_weights, "meanvalue": cmd_meanvalue,
    "regions": cmd_regions, "checks": cmd_checks, "mellin": cmd_mellin, "scan": cmd_scan,
    "thresholds": cmd_thresholds, "verify-all": cmd_verify_all,
}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(ns)
        if getattr(ns, "dump_config", False):
            print(json.dumps({k: v for k, v in cfg.items()}, indent=2, sort_keys=True))
            return 0
        result = COMMANDS[cfg["command"]](cfg)
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except (UsageError, DomainError, RangeError, CapacityError) as exc:
        print(f"{parser.prog} {ns.command}: error: {exc}", file=sys.stderr)
        return 2
    except FriableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = result.render(cfg["format"])
    if cfg["out"]:
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if result.ok else 1


def main() -> None:
    sys.exit(dispatch())
