"""The acceptance battery, shared by ``verify-all`` and the test suite.

Each criterion returns (passed, details); details hold only deterministic
numbers so two runs can be compared byte for byte once timings are dropped.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import dickman, dpoly, mellin, scanner, smooth, weights
from .params import toy_params

SLOW_SECONDS = 30.0


@dataclass(frozen=True)
class Criterion:
    number: int
    name: str
    run: Callable
    slow: bool = False     # skipped by --quick


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    details: dict


@dataclass(frozen=True)
class SuiteReport:
    seed: int
    threads: int
    quick: bool
    results: tuple = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self, timings: bool = True) -> dict:
        rows = []
        for r in self.results:
            row = {"criterion": r.number, "name": r.name, "pass": r.passed, "details": r.details}
            if timings:
                row["seconds"] = round(r.seconds, 3)
            rows.append(row)
        return {"seed": self.seed, "quick": self.quick, "all_passed": self.passed,
                "criteria": rows}

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True, default=_jsonable)

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"[{status}] {r.number:2d} {r.name:<28} {r.seconds:8.2f} s")
        lines.append("all passed" if self.passed else "FAILURES")
        return "\n".join(lines)


def _jsonable(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(type(obj))


def toy_instances():
    """Small hand-sized ParamSets used by the factorisation and lemma batteries."""
    return [
        toy_params(1e4, 60, J=1, P1=2, P2=4, P3=7.5),
        toy_params(1e5, 100, J=2, P1=3, P2=8, P3=10),
        toy_params(2e4, 30, J=0, P1=5, P2=10, P3=12),
        toy_params(5e4, 50, J=3, P1=2, P2=3, P3=5),
    ]


# --------------------------------------------------------------------------
# criteria

def c1_dickman(ctx) -> tuple[bool, dict]:
    table = dickman.build_rho(50.0)
    u = np.linspace(0.0, 2.0, 1000)
    closed = np.where(u <= 1, 1.0, 1.0 - np.log(np.maximum(u, 1.0)))
    err = float(np.max(np.abs(dickman.rho(table, u) - closed)))
    res = float(np.max(dickman.delay_residual(table, np.linspace(1.0, 30.0, 1000))))
    return err <= 1e-10 and res <= 1e-9, {"closed_form_error": err, "delay_residual": res}


def _trial_division_lpf(ns: np.ndarray) -> np.ndarray:
    """Largest prime factor of every n <= 10^8 by dividing out all primes <= 10^4."""
    rem = ns.copy()
    lpf = np.ones_like(ns)
    for p in smooth.small_primes(10_000).tolist():
        hit = rem % p == 0
        while np.any(hit):
            lpf[hit] = p
            rem[hit] //= p
            hit = rem % p == 0
    big = rem > 1
    lpf[big] = rem[big]
    return lpf


def c2_sieve(ctx) -> tuple[bool, dict]:
    rng = np.random.Generator(np.random.Philox(ctx["seed"]))
    top = 10 ** 8
    ns = np.sort(rng.integers(1, top, size=10_000))
    oracle = _trial_division_lpf(ns)
    got = np.zeros_like(ns)
    for a, lpf in smooth.iter_lpf_segments(1, top, 1 << 22, ctx["threads"]):
        i, j = np.searchsorted(ns, [a, a + lpf.size])
        got[i:j] = lpf[ns[i:j] - a]
    agree = bool(np.array_equal(got, oracle))
    seg = smooth.lpf_table(1, 2_000_000, segment_size=65_543, threads=ctx["threads"]).lpf
    mono = smooth.lpf_table(1, 2_000_000, segment_size=2_000_000).lpf
    same = bool(np.array_equal(seg, mono))
    p1, p2 = smooth.psi(100, 5), smooth.psi(16, 2)
    ok = p1 == 34 and p2 == 5 and agree and same
    return ok, {"psi_100_5": p1, "psi_16_2": p2, "trial_division_agrees": agree,
                "segmented_equals_monolithic": same}


def c3_hildebrand(ctx) -> tuple[bool, dict]:
    count = smooth.psi(10 ** 6, 10 ** 3, threads=ctx["threads"])
    rel = count / (1e6 * (1 - math.log(2))) - 1
    return abs(rel) <= 0.2, {"psi": count, "relative_error": rel}


def c4_factorisation(ctx) -> tuple[bool, dict]:
    rows = []
    for p in toy_instances():
        F = dpoly.factorisation(p)
        w = weights.weights_enumerate(p, 1, 1 << 62)
        same = bool(np.array_equal(F.ns, w.ns) and np.array_equal(F.a, w.w))
        rows.append({"X": p.X, "J": p.J, "terms": len(F), "equal": same})
    return len(rows) >= 3 and all(r["equal"] for r in rows), {"instances": rows}


def c5_mean_value(ctx) -> tuple[bool, dict]:
    tol = 1e-10
    T = 300.0
    single = dpoly.make_poly([7], [3])
    got = dpoly.mean_value(single, -T, T, tol)
    e1 = abs(got / (2 * T * 9 / 49) - 1)
    two = dpoly.make_poly([2, 3])
    d = math.log(1.5)
    exact = 2 * T * (1 / 4 + 1 / 9) + 2 * (1 / 6) * 2 * math.sin(T * d) / d
    e2 = abs(dpoly.mean_value(two, -T, T, tol) / exact - 1)
    poly = dpoly.factorisation(toy_instances()[0])
    a, b, c = 1.0, 37.3, 80.0
    left = dpoly.mean_value(poly, a, b, 1e-8)
    right = dpoly.mean_value(poly, b, c, 1e-8)
    whole = dpoly.mean_value(poly, a, c, 1e-8)
    e3 = abs(left + right - whole) / whole
    ok = e1 <= 1e-6 and e2 <= 1e-6 and e3 <= 2e-8
    return ok, {"single_term_rel_error": e1, "two_term_rel_error": e2,
                "additivity_rel_gap": e3}


def random_polys(seed: int, count: int = 50):
    """(poly, T) pairs: sparse support in (N, 2N], N <= 10^4, positive coefficients, T <= 10^4."""
    rng = np.random.Generator(np.random.Philox(seed))
    out = []
    for _ in range(count):
        N = int(round(10 ** rng.uniform(2, 4)))
        k = min(200, N // 4)
        ns = N + 1 + rng.choice(N, size=k, replace=False)
        a = rng.uniform(0.05, 1.0, size=k)
        T = float(10 ** rng.uniform(1, 4))
        out.append((dpoly.make_poly(ns, a), T))
    return out


def lemma_battery(seed: int) -> dict:
    """Report-only checks on the standard toy battery; every ratio should be finite and positive."""
    p = toy_instances()[0]
    reports = {}

    smooth_support = smooth.smooth_set(10_001, 20_001, 100).members
    G = dpoly.from_set(smooth_support)
    reports["improved_mean_value"] = dpoly.improved_mvt_check(G, 100.0)

    P1, P2, X = 10.0, 100.0, 1e4
    ell = dpoly.moment_ell(P1, P2)
    A = dpoly.from_set(smooth.smooth_set(101, 201, 30).members)
    reports["prime_moment"] = dpoly.moment_check(dpoly.from_primes(P1, 2 * P1), A, ell, 100.0,
                                                 X, P1)

    P = dpoly.from_primes(50, 100)
    T = 200.0
    grid = dpoly.make_grid(-T, T, P.n_max)
    vals = np.abs(dpoly.evaluate_uniform(P, grid.t_start, grid.step, grid.nodes.size))
    V = 2.0 / float(vals.max())
    ws = dpoly.extract_well_spaced(grid.nodes, vals, 1 / V)
    reports["large_values"] = dpoly.large_values_check(P, ws, V, T, 50.0)

    Pw = dpoly.from_primes(500, 1000)
    reports["pointwise_prime_bound"] = dpoly.pointwise_bound_check(
        Pw, dpoly.make_grid(0.0, 1000.0, Pw.n_max), p.sigma0, p.X, 500.0)

    F = dpoly.factorisation(p)
    g = dpoly.make_grid(p.y ** 0.125, 200.0, F.n_max)
    parts = dpoly.partition_regions(dpoly.from_primes(p.P1, 2 * p.P1),
                                    dpoly.from_primes(p.P2, 2 * p.P2), g, p.P1, p.P2, eta=p.eta)
    mv = dpoly.region_contributions(F, parts, g, p)
    reports["region_bound"] = dpoly.CheckReport("region_bound", mv.total, mv.reference_terms,
                                                mv.ratio, False, bool(mv.ratio and
                                                                      math.isfinite(mv.ratio)),
                                                {"by_region": mv.by_region})

    X = int(p.X)
    h2 = int(p.X * p.y ** (-3 / 8))
    w = weights.weights_enumerate(p, X, 2 * X + h2 + 1)
    reports["parseval"] = dpoly.parseval_discrepancy(w, 20, h2, p.y ** 0.125)
    return reports


def c6_lemmas(ctx) -> tuple[bool, dict]:
    polys = random_polys(ctx["seed"])
    mvt = [dpoly.mvt_check(q, T) for q, T in polys]
    hm = []
    for q, T in polys[:20]:
        Th = min(T, 2000.0)
        grid = dpoly.make_grid(-Th, Th, q.n_max)
        vals = np.abs(dpoly.evaluate_uniform(q, grid.t_start, grid.step, grid.nodes.size, 0.0))
        ws = dpoly.extract_well_spaced(grid.nodes, vals, float(np.quantile(vals, 0.9)))
        hm.append(dpoly.halasz_montgomery_check(q, ws, Th))
    battery = lemma_battery(ctx["seed"])
    finite = {k: bool(math.isfinite(r.ratio) and r.ratio > 0) for k, r in battery.items()}
    ok = all(r.passed for r in mvt) and all(r.passed for r in hm) and all(finite.values())
    return ok, {
        "mvt_failures": sum(not r.passed for r in mvt),
        "mvt_max_ratio": max(r.ratio for r in mvt),
        "hm_failures": sum(not r.passed for r in hm),
        "hm_max_ratio": max(r.ratio for r in hm),
        "hm_set_sizes": [r.notes["size"] for r in hm],
        "reported_ratios": {k: r.ratio for k, r in battery.items()},
        "finite_positive": finite,
    }


MELLIN_PAIRS = [(0.1, 0.2), (0.3, 0.1), (0.05, 0.0), (0.5, 0.4), (0.2, 0.05)]


def _mellin_oracle(s: complex, sp) -> complex:
    """int t^(s-1) eta(t) dt by Gauss-Legendre on each linear piece."""
    x, w = np.polynomial.legendre.leggauss(200)
    knots = np.sort(sp.knots)
    total = 0j
    for a, b in zip(knots[:-1], knots[1:]):
        if b <= a:
            continue
        t = 0.5 * (b - a) * x + 0.5 * (a + b)
        total += 0.5 * (b - a) * np.sum(w * t ** (s - 1) * mellin.eta(t, sp))
    return complex(total)


def c7_mellin(ctx) -> tuple[bool, dict]:
    ts = np.linspace(-50, 50, 20)
    worst_q = worst_1 = 0.0
    for xi, k in MELLIN_PAIRS:
        sp = mellin.SmoothingParams(xi, k)
        for t in ts:
            s = 1 + 1j * t
            worst_q = max(worst_q, abs(mellin.eta_mellin(s, sp) - _mellin_oracle(s, sp)))
        for method in ("closed", "series"):
            worst_1 = max(worst_1, abs(mellin.eta_mellin(1.0, sp, method) - (2 * k + xi)))
    sp = mellin.SmoothingParams(0.1, 0.2)
    zs = [0.5, 0.75, 0.8, 0.95, 1.0, 1.1, 1.25, 1.35, 2.0, 10.0]
    inv = [mellin.mellin_inversion_check(z, sp) for z in zs]
    worst_inv = max(r.error for r in inv)
    ok = worst_q <= 1e-8 and worst_1 <= 1e-12 and worst_inv <= 1e-3
    return ok, {"closed_vs_quadrature": worst_q, "area_error": worst_1,
                "inversion_max_error": worst_inv}


def c8_scanner(ctx) -> tuple[bool, dict]:
    X = 10 ** 5
    hs = [5, 20, 50, 200]
    ys = [10, 30, 100, 300]
    grid = np.array([scanner.fraction_curve(X, y, hs, threads=ctx["threads"]) for y in ys])
    mono_h = bool(np.all(np.diff(grid, axis=1) >= 0))
    mono_y = bool(np.all(np.diff(grid, axis=0) >= 0))
    g = scanner.max_gap(1, 100, 5).max_gap
    gaps = [scanner.max_gap(1, 10 ** 4, y).max_gap for y in (2, 3, 5, 7)]
    mono_gap = all(a >= b for a, b in zip(gaps, gaps[1:]))
    ok = mono_h and mono_y and g == 9 and mono_gap
    return ok, {"fractions": grid.tolist(), "monotone_in_h": mono_h, "monotone_in_y": mono_y,
                "max_gap_1_100_5": g, "max_gaps_y_2_3_5_7": gaps}


def c9_trend(ctx) -> tuple[bool, dict]:
    tab = scanner.compare_with_theory(10 ** 6, [50, 100, 200, 400], 0.1, 0.99,
                                      threads=ctx["threads"])
    rows = [{"y": r.y, "h_empirical": r.h_empirical, "h_formula": r.h_formula,
             "vacuous": r.vacuous} for r in tab.rows]
    return tab.nonincreasing, {"rows": rows}


CRITERIA = [
    Criterion(1, "dickman_closed_form", c1_dickman),
    Criterion(2, "sieve_exactness", c2_sieve),
    Criterion(3, "hildebrand_u2", c3_hildebrand),
    Criterion(4, "factorisation_identity", c4_factorisation),
    Criterion(5, "mean_value_quadrature", c5_mean_value),
    Criterion(6, "lemma_checks", c6_lemmas),
    Criterion(7, "mellin", c7_mellin),
    Criterion(8, "scanner_properties", c8_scanner),
    Criterion(9, "theorem_trend", c9_trend, slow=True),
]


def run_criterion(c: Criterion, seed: int = 0, threads: int = 1) -> CriterionResult:
    start = time.perf_counter()
    ok, details = c.run({"seed": seed, "threads": threads})
    return CriterionResult(c.number, c.name, bool(ok), time.perf_counter() - start, details)


def _canonical(results) -> str:
    return json.dumps([{"n": r.number, "pass": r.passed, "details": r.details} for r in results],
                      sort_keys=True, default=_jsonable)


def verify_all(seed: int = 0, threads: int = 1, quick: bool = False,
               only=None, progress=None) -> SuiteReport:
    """Run every criterion; the last one reruns the rest at another thread count and compares."""
    results = []
    for c in CRITERIA:
        if only is not None and c.number not in only:
            continue
        if quick and c.slow:
            continue
        r = run_criterion(c, seed, threads)
        results.append(r)
        if progress:
            progress(r)
    if only is None or 10 in only:
        start = time.perf_counter()
        other = 4 if threads == 1 else 1
        again = [run_criterion(c, seed, other) for c in CRITERIA
                 if any(r.number == c.number for r in results)]
        same = _canonical(results) == _canonical(again)
        r = CriterionResult(10, "reproducibility", same, time.perf_counter() - start,
                            {"threads_compared": sorted([threads, other]),
                             "criteria_compared": [x.number for x in again]})
        results.append(r)
        if progress:
            progress(r)
    return SuiteReport(seed, threads, quick, tuple(results))
