"""Sparse Dirichlet polynomials on vertical lines, their mean values and lemma checks.

A polynomial sum a_n n^-s is stored as sorted unique ``ns`` with positive
coefficients ``a``.  Integer coefficients stay int64 through ``multiply`` so
the factorisation identity can be checked exactly.

Mean values are available two ways:

* ``mean_value``: composite Simpson on a uniform grid, halving the step
  until the estimate settles;
* ``mean_value_exact``: the closed form
  sum_{m,n} b_m b_n (sin(t1 d) - sin(t0 d)) / d with d = log(m/n), which
  costs O(N^2) but has no discretisation error.

Lemma checks use the exact form; the quadrature is cross-checked against it
in the tests.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import CapacityError, CheckFailure, DomainError, RangeError, ToleranceError
from .smooth import small_primes

_INT64_LIMIT = 1 << 63
_CHUNK = 1 << 21
DEFAULT_MAX_TERMS = 50_000_000
DEFAULT_C_CHECK = 8.0


# --------------------------------------------------------------------------
# polynomials

@dataclass(frozen=True, eq=False)
class DirichletPoly:
    ns: np.ndarray    # sorted unique int64
    a: np.ndarray     # positive coefficients, int64 or float64

    def __post_init__(self):
        if self.ns.shape != self.a.shape or self.ns.ndim != 1:
            raise DomainError("ns and a must be 1-d arrays of equal length")

    def __len__(self) -> int:
        return int(self.ns.size)

    @property
    def n_min(self) -> int:
        return int(self.ns[0]) if self.ns.size else 0

    @property
    def n_max(self) -> int:
        return int(self.ns[-1]) if self.ns.size else 0

    def coeff(self, n: int):
        i = np.searchsorted(self.ns, n)
        if i < self.ns.size and self.ns[i] == n:
            return self.a[i].item()
        return 0

    def as_dict(self) -> dict:
        return dict(zip(self.ns.tolist(), self.a.tolist()))

    def __call__(self, t, sigma: float = 1.0):
        return evaluate(self, t, sigma)

    def __mul__(self, other: "DirichletPoly") -> "DirichletPoly":
        return multiply(self, other)

    def sum_sq(self) -> float:
        return float(np.sum(self.a.astype(float) ** 2))


def make_poly(ns, a=None) -> DirichletPoly:
    """Build a polynomial from (possibly repeated, unsorted) terms; repeats are added."""
    ns = np.asarray(ns, dtype=np.int64).ravel()
    if a is None:
        a = np.ones(ns.size, dtype=np.int64)
    a = np.asarray(a).ravel()
    if a.dtype.kind not in "iuf":
        raise DomainError("coefficients must be real")
    if a.dtype.kind in "iu":
        a = a.astype(np.int64)
    if ns.size and ns.min() < 1:
        raise DomainError("indices must be positive")
    if np.any(a < 0):
        raise DomainError("coefficients must be nonnegative")
    order = np.argsort(ns, kind="stable")
    ns, a = ns[order], a[order]
    if ns.size:
        starts = np.flatnonzero(np.r_[True, ns[1:] != ns[:-1]])
        ns, a = ns[starts], np.add.reduceat(a, starts)
    keep = a > 0
    return DirichletPoly(ns[keep], a[keep])


def unit_poly() -> DirichletPoly:
    return make_poly([1])


def from_primes(lo: float, hi: float) -> DirichletPoly:
    """Sum of p^-s over primes lo < p <= hi."""
    if not lo < hi:
        raise DomainError(f"need lo < hi, got ({lo}, {hi}]")
    top = math.floor(hi)
    if top > 1 << 31:
        raise CapacityError(f"prime range up to {top} is too large to sieve here")
    ps = small_primes(top)
    return make_poly(ps[ps > lo])


def from_set(ns) -> DirichletPoly:
    """Indicator polynomial of a set of positive integers."""
    return make_poly(np.unique(np.asarray(ns, dtype=np.int64)))


def from_weights(w) -> DirichletPoly:
    """Polynomial with the coefficients of a WeightWindow."""
    return DirichletPoly(w.ns.astype(np.int64), w.w.astype(np.int64))


def multiply(p: DirichletPoly, q: DirichletPoly,
             max_terms: int = DEFAULT_MAX_TERMS) -> DirichletPoly:
    """Exact Dirichlet convolution c_{mn} += a_m b_n."""
    if len(p) == 0 or len(q) == 0:
        return make_poly([], np.zeros(0, dtype=np.int64))
    if len(p) * len(q) > max_terms:
        raise CapacityError(f"product has {len(p) * len(q)} raw terms, budget is {max_terms}")
    if p.n_max * q.n_max >= _INT64_LIMIT:
        raise CapacityError("product indices overflow 64-bit integers")
    exact = p.a.dtype.kind == "i" and q.a.dtype.kind == "i"
    if exact and int(p.a.sum()) * int(q.a.sum()) >= _INT64_LIMIT:
        raise CapacityError("product coefficients overflow 64-bit integers")
    ns = np.multiply.outer(p.ns, q.ns).ravel()
    cs = np.multiply.outer(p.a, q.a).ravel()
    return make_poly(ns, cs)


def power(p: DirichletPoly, k: int, max_terms: int = DEFAULT_MAX_TERMS) -> DirichletPoly:
    """p^k by repeated multiplication; p^0 is the unit polynomial."""
    if k < 0:
        raise DomainError(f"need k >= 0, got {k}")
    out = unit_poly()
    for _ in range(k):
        out = multiply(out, p, max_terms)
    return out


def factorisation(p, M=None, max_power: int = 8, max_terms: int = DEFAULT_MAX_TERMS) -> DirichletPoly:
    """F = P1 P2 P3^J M for a ParamSet; J above ``max_power`` needs toy mode."""
    from .smooth import enumerate_M
    if p.J > max_power and not p.toy_mode:
        raise CapacityError(f"J = {p.J} exceeds {max_power}; only toy instances go further")
    P1 = from_primes(p.P1, 2 * p.P1)
    P2 = from_primes(p.P2, 2 * p.P2)
    P3 = from_primes(p.P3, 2 * p.P3)
    Mp = from_set(enumerate_M(p).members if M is None else M)
    out = multiply(P1, P2, max_terms)
    out = multiply(out, power(P3, p.J, max_terms), max_terms)
    return multiply(out, Mp, max_terms)


def evaluate(p: DirichletPoly, t, sigma: float = 1.0):
    """sum a_n n^-(sigma + i t), vectorised over t with pairwise reductions."""
    t_arr = np.asarray(t, dtype=float)
    flat = np.atleast_1d(t_arr).ravel()
    out = np.zeros(flat.size, dtype=complex)
    if len(p):
        logn = np.log(p.ns.astype(float))
        b = p.a.astype(float) * np.exp(-sigma * logn)
        rows = max(1, _CHUNK // len(p))
        for i in range(0, flat.size, rows):
            ph = np.multiply.outer(flat[i:i + rows], logn)
            out[i:i + rows] = (np.cos(ph) * b).sum(axis=1) - 1j * (np.sin(ph) * b).sum(axis=1)
    return out.reshape(t_arr.shape) if t_arr.ndim else complex(out[0])


def evaluate_uniform(p: DirichletPoly, t0: float, h: float, n: int, sigma: float = 1.0,
                     block: int = 256) -> np.ndarray:
    """p(sigma + i t) at t = t0 + k h, k = 0..n-1.

    Splits t = t_s + j h, so exp(-i t log m) = exp(-i t_s log m) exp(-i j h log m):
    one table of block phases times one column per block start, a matrix
    product instead of n * len(p) complex exponentials.
    """
    out = np.zeros(n, dtype=complex)
    if len(p) == 0 or n == 0:
        return out
    logn = np.log(p.ns.astype(float))
    b = p.a.astype(float) * np.exp(-sigma * logn)
    B = min(block, n)
    E = np.exp(-1j * np.multiply.outer(h * np.arange(B), logn))
    n_blocks = -(-n // B)
    cols = max(1, _CHUNK // len(p))
    for s in range(0, n_blocks, cols):
        starts = t0 + h * B * np.arange(s, min(n_blocks, s + cols))
        W = b[:, None] * np.exp(-1j * np.multiply.outer(logn, starts))
        vals = (E @ W).T.ravel()
        lo = s * B
        out[lo:lo + vals.size] = vals[:n - lo]
    return out


# --------------------------------------------------------------------------
# grids and mean values

@dataclass(frozen=True, eq=False)
class TGrid:
    t_start: float
    t_end: float
    step: float
    nodes: np.ndarray

    @property
    def n_intervals(self) -> int:
        return self.nodes.size - 1

    def simpson_weights(self) -> np.ndarray:
        w = np.ones(self.nodes.size)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return w * self.step / 3.0

    def evaluate(self, p: DirichletPoly, sigma: float = 1.0) -> np.ndarray:
        """|p(sigma + it)|^2 at every node."""
        vals = evaluate_uniform(p, self.t_start, self.step, self.nodes.size, sigma)
        return np.abs(vals) ** 2


def max_step(n_max: int) -> float:
    """pi / (4 log n_max): resolves the fastest oscillation n^-it."""
    return math.pi / (4.0 * math.log(n_max)) if n_max > 1 else math.inf


def make_grid(t0: float, t1: float, n_max: int, step: Optional[float] = None) -> TGrid:
    """Uniform grid on [t0, t1] with an even number of intervals and step <= pi/(4 log n_max)."""
    if not t0 < t1:
        raise DomainError(f"need t0 < t1, got [{t0}, {t1}]")
    cap = min(max_step(n_max), (t1 - t0) / 2)
    h = cap if step is None else min(step, cap)
    n = max(2, math.ceil((t1 - t0) / h))
    n += n % 2
    nodes = np.linspace(t0, t1, n + 1)
    return TGrid(float(t0), float(t1), (t1 - t0) / n, nodes)


def _simpson(f: np.ndarray, h: float) -> float:
    w = np.ones(f.size)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float(np.sum(w * f)) * h / 3.0


def mean_value(p: DirichletPoly, t0: float, t1: float, tol: float = 1e-8,
               sigma: float = 1.0, max_refine: int = 14) -> float:
    """Simpson estimate of int_{t0}^{t1} |p(sigma + it)|^2 dt, halving until settled."""
    if not t0 < t1:
        raise DomainError(f"need t0 < t1, got [{t0}, {t1}]")
    if len(p) == 0:
        return 0.0
    grid = make_grid(t0, t1, p.n_max)
    f = grid.evaluate(p, sigma)
    n, h = grid.n_intervals, grid.step
    prev = _simpson(f, h)
    for _ in range(max_refine):
        fm = np.abs(evaluate_uniform(p, t0 + h / 2, h, n, sigma)) ** 2
        g = np.empty(2 * n + 1)
        g[0::2], g[1::2] = f, fm
        f, n, h = g, 2 * n, h / 2
        cur = _simpson(f, h)
        if abs(cur - prev) <= tol * abs(cur) or cur == prev:
            return cur
        prev = cur
    raise ToleranceError(f"mean value on [{t0}, {t1}] did not settle to {tol:g}")


def mean_value_exact(p: DirichletPoly, t0: float, t1: float, sigma: float = 1.0) -> float:
    """int_{t0}^{t1} |p(sigma + it)|^2 dt in closed form."""
    if t1 < t0:
        return -mean_value_exact(p, t1, t0, sigma)
    if len(p) == 0 or t1 == t0:
        return 0.0
    logn = np.log(p.ns.astype(float))
    b = p.a.astype(float) * np.exp(-sigma * logn)
    L, c = t1 - t0, 0.5 * (t0 + t1)
    rows = max(1, _CHUNK // len(p))
    parts = []
    for i in range(0, len(p), rows):
        d = np.subtract.outer(logn[i:i + rows], logn)
        # (sin(t1 d) - sin(t0 d)) / d = L cos(c d) sinc(L d / 2)
        k = np.cos(c * d) * np.sinc(L * d / (2 * np.pi))
        parts.append(np.sum(b[i:i + rows] * np.sum(k * b, axis=1)))
    return float(L * np.sum(parts))


# --------------------------------------------------------------------------
# region partition

@dataclass(frozen=True, eq=False)
class RegionPartition:
    labels: np.ndarray   # 1, 2 or 3 per grid node
    alpha1: float
    alpha2: float
    beta: float

    def counts(self) -> dict:
        return {f"T{k}": int(np.count_nonzero(self.labels == k)) for k in (1, 2, 3)}


def region_alphas(beta: float) -> tuple[float, float]:
    """alpha1 = 1/4 - 4 beta and alpha2 = 1/4 - 2 beta."""
    return 0.25 - 4 * beta, 0.25 - 2 * beta


def partition_regions(p1: DirichletPoly, p2: DirichletPoly, grid: TGrid, P1: float, P2: float,
                      beta: Optional[float] = None, eta: Optional[float] = None) -> RegionPartition:
    """Label nodes T1 (|P1| <= P1^-a1), T2 (else |P2| <= P2^-a2) or T3.

    beta defaults to 8 eta; one of the two must be given.
    """
    if beta is None:
        if eta is None:
            raise DomainError("give beta or eta")
        beta = 8 * eta
    a1, a2 = region_alphas(beta)
    v1 = np.abs(evaluate_uniform(p1, grid.t_start, grid.step, grid.nodes.size))
    v2 = np.abs(evaluate_uniform(p2, grid.t_start, grid.step, grid.nodes.size))
    t1 = v1 <= P1 ** -a1
    t2 = ~t1 & (v2 <= P2 ** -a2)
    labels = np.full(grid.nodes.size, 3, dtype=np.int8)
    labels[t2] = 2
    labels[t1] = 1
    return RegionPartition(labels, a1, a2, beta)


@dataclass(frozen=True)
class MeanValueReport:
    t0: float
    t1: float
    nodes: int
    total: float
    by_region: dict
    node_counts: dict
    reference_terms: tuple    # the three terms of the mean-value bound
    ratio: Optional[float]

    def to_dict(self) -> dict:
        return asdict(self)


def reference_terms(p, T: float) -> tuple:
    """P1^(-1/2+64 eta) (P1 T/X rho^(1-eps) + rho^(phi-eps)) L^2 and (rho/(log X)^J)^25.

    rho = rho(u - v) and L = log X / (log P2 (log P3)^J); evaluated in log space.
    """
    logX = math.log(p.X)
    lr = math.log(p.rho_u_minus_v)
    lpre = (-0.5 + 64 * p.eta) * p.log_P1
    lL = 2 * (math.log(logX) - math.log(p.log_P2) - p.J * math.log(p.log_P3))
    a = lpre + p.log_P1 + math.log(T) - logX + (1 - p.epsilon) * lr + lL
    b = lpre + (p.phi - p.epsilon) * lr + lL
    c = 25 * (lr - p.J * math.log(logX))
    return tuple(_exp(v) for v in (a, b, c))


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def region_contributions(F: DirichletPoly, parts: RegionPartition, grid: TGrid,
                         params=None) -> MeanValueReport:
    """Simpson-weighted int |F(1+it)|^2 over each region; the pieces add up to the total."""
    vals = grid.evaluate(F) * grid.simpson_weights()
    by = {f"T{k}": float(np.sum(np.where(parts.labels == k, vals, 0.0))) for k in (1, 2, 3)}
    total = float(np.sum(vals))
    refs, ratio = (), None
    if params is not None:
        refs = reference_terms(params, grid.t_end)
        denom = sum(refs)
        ratio = total / denom if denom > 0 else None
    return MeanValueReport(grid.t_start, grid.t_end, int(grid.nodes.size), total, by,
                           parts.counts(), refs, ratio)


# --------------------------------------------------------------------------
# lemma checks

@dataclass(frozen=True)
class CheckReport:
    lemma: str
    lhs: float
    rhs_terms: tuple
    ratio: float
    asserted: bool
    passed: bool
    notes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"lemma": self.lemma, "lhs": self.lhs, "rhs_terms": list(self.rhs_terms),
                "ratio": self.ratio, "asserted": self.asserted, "pass": self.passed,
                "notes": dict(self.notes)}


def _report(lemma, lhs, terms, asserted, C_check=None, strict=False, **notes) -> CheckReport:
    rhs = float(sum(terms))
    ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
    if asserted:
        passed = bool(lhs <= C_check * rhs)
        notes["C_check"] = C_check
    else:
        passed = bool(math.isfinite(ratio) and ratio >= 0)
    rep = CheckReport(lemma, float(lhs), tuple(float(x) for x in terms), float(ratio),
                      asserted, passed, notes)
    if strict and not passed:
        raise CheckFailure(f"{lemma}: lhs/rhs = {ratio:.6g} exceeds C_check = {C_check}")
    return rep


def dyadic_scale(p: DirichletPoly) -> float:
    """X with supp p in (X, 2X], taken as n_max / 2."""
    X = p.n_max / 2
    if len(p) and p.n_min <= X:
        raise DomainError(f"support [{p.n_min}, {p.n_max}] is not inside one dyadic block")
    return X


def mvt_check(p: DirichletPoly, T: float, C_check: float = DEFAULT_C_CHECK,
              X: Optional[float] = None, strict: bool = False) -> CheckReport:
    """int_{-T}^{T} |sum a_n n^-it|^2 dt <= C (T + X) sum |a_n|^2."""
    if T <= 0:
        raise DomainError(f"need T > 0, got {T}")
    X = dyadic_scale(p) if X is None else X
    lhs = mean_value_exact(p, -T, T, sigma=0.0)
    return _report("mean_value_theorem", lhs, [(T + X) * p.sum_sq()], True, C_check, strict,
                   T=T, X=X)


def near_diagonal_sum(p: DirichletPoly, K: float) -> float:
    """sum over 1 <= k <= K and n of |a_n| |a_{n+k}|."""
    if len(p) < 2 or K < 1:
        return 0.0
    a = p.a.astype(float)
    cum = np.r_[0.0, np.cumsum(a)]
    j = np.searchsorted(p.ns, p.ns + int(math.floor(K)), side="right")
    return float(np.sum(a * (cum[j] - cum[np.arange(1, len(p) + 1)])))


def improved_mvt_check(p: DirichletPoly, T: float, C_check: float = DEFAULT_C_CHECK,
                       X: Optional[float] = None, strict: bool = False) -> CheckReport:
    """int_{-T}^{T} |G(it)|^2 against T sum |a_n|^2 + T sum_{k <= 2X/T} sum |a_n a_{n+k}|."""
    if T <= 0:
        raise DomainError(f"need T > 0, got {T}")
    X = dyadic_scale(p) if X is None else X
    lhs = mean_value_exact(p, -T, T, sigma=0.0)
    terms = [T * p.sum_sq(), T * near_diagonal_sum(p, 2 * X / T)]
    return _report("improved_mean_value", lhs, terms, True, C_check, strict, T=T, X=X)


def moment_ell(P1: float, P2: float) -> int:
    """ceil(log P2 / log P1)."""
    return math.ceil(math.log(P2) / math.log(P1))


def moment_check(P: DirichletPoly, A: DirichletPoly, ell: int, T: float, X: float,
                 P1: float) -> CheckReport:
    """int_{-T}^{T} |P(1+it)^ell A(1+it)|^2 against (T/X + 2^ell P1) (ell+1)!^2 max|a_n|^2."""
    if ell < 1:
        raise DomainError(f"need ell >= 1, got {ell}")
    if T <= 0:
        raise DomainError(f"need T > 0, got {T}")
    prod = multiply(power(P, ell), A)
    lhs = mean_value_exact(prod, -T, T)
    amax = float(A.a.max()) if len(A) else 0.0
    rhs = (T / X + 2 ** ell * P1) * math.factorial(ell + 1) ** 2 * amax ** 2
    return _report("prime_moment", lhs, [rhs], False, ell=ell, T=T, X=X, P1=P1)


@dataclass(frozen=True)
class WellSpacedSet:
    points: tuple

    def __post_init__(self):
        pts = self.points
        if any(b - a < 1 for a, b in zip(pts, pts[1:])):
            raise DomainError("points are not well spaced")

    def __len__(self) -> int:
        return len(self.points)


def extract_well_spaced(nodes, values, threshold: float) -> WellSpacedSet:
    """Greedy: visit nodes with value >= threshold from largest down, keep those >= 1 from all kept."""
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    idx = np.flatnonzero(values >= threshold)
    order = idx[np.lexsort((nodes[idx], -values[idx]))]
    kept: list[float] = []
    for t in nodes[order].tolist():
        i = np.searchsorted(kept, t)
        if i > 0 and t - kept[i - 1] < 1:
            continue
        if i < len(kept) and kept[i] - t < 1:
            continue
        kept.insert(i, t)
    return WellSpacedSet(tuple(kept))


def large_values_check(P: DirichletPoly, ws: WellSpacedSet, V: float, T: float,
                       P_scale: Optional[float] = None) -> CheckReport:
    """|ws| against T^(2 log V / log P) V^2 exp(2 (log T / log P) log log T)."""
    if V < 1:
        raise DomainError(f"need V >= 1, got {V}")
    if T <= math.e:
        raise DomainError(f"need T > e, got {T}")
    P_scale = P.n_max / 2 if P_scale is None else P_scale
    if len(ws):
        vals = np.abs(evaluate(P, np.asarray(ws.points)))
        if np.any(vals < 1 / V * (1 - 1e-12)):
            raise DomainError("some point has |P(1+it)| < 1/V")
        if max(abs(t) for t in ws.points) > T:
            raise RangeError("well-spaced set leaves [-T, T]")
    lP = math.log(P_scale)
    rhs = _exp(2 * math.log(V) / lP * math.log(T) + 2 * math.log(V)
               + 2 * math.log(T) / lP * math.log(math.log(T)))
    return _report("large_values", float(len(ws)), [rhs], False, V=V, T=T, P=P_scale)


def halasz_montgomery_check(G: DirichletPoly, ws: WellSpacedSet, T: float,
                            C_check: float = DEFAULT_C_CHECK, X: Optional[float] = None,
                            strict: bool = False) -> CheckReport:
    """sum_{t in ws} |G(it)|^2 <= C (X + |ws| T^(1/2)) log T sum |a_n|^2."""
    if T <= 1:
        raise DomainError(f"need T > 1, got {T}")
    if len(ws) and max(abs(t) for t in ws.points) > T:
        raise RangeError("well-spaced set leaves [-T, T]")
    X = dyadic_scale(G) if X is None else X
    lhs = float(np.sum(np.abs(evaluate(G, np.asarray(ws.points, dtype=float), 0.0)) ** 2)) \
        if len(ws) else 0.0
    rhs = (X + len(ws) * math.sqrt(T)) * math.log(T) * G.sum_sq()
    return _report("halasz_montgomery", lhs, [rhs], True, C_check, strict,
                   T=T, X=X, size=len(ws))


def pointwise_bound_check(P: DirichletPoly, grid: TGrid, sigma0: float, X: float,
                          P_scale: Optional[float] = None) -> CheckReport:
    """max over the grid of |P(1+it)| / (P^-sigma0 + (log X)^3 / (1 + |t|))."""
    P_scale = P.n_max / 2 if P_scale is None else P_scale
    logX = math.log(X)
    vals = np.abs(evaluate_uniform(P, grid.t_start, grid.step, grid.nodes.size))
    bound = P_scale ** -sigma0 + logX ** 3 / (1 + np.abs(grid.nodes))
    r = vals / bound
    i = int(np.argmax(r))
    size_ok = math.log(P_scale) >= logX ** (2 / 3) * math.log(logX) ** (4 / 3)
    in_range = bool(np.all(np.abs(grid.nodes) <= X))
    return _report("pointwise_prime_bound", float(vals[i]), [float(bound[i])], False,
                   t_at_max=float(grid.nodes[i]), P=P_scale, P_large_enough=size_ok,
                   t_within_X=in_range)


def parseval_lhs(dense: np.ndarray, base: int, X: int, h1: int, h2: int,
                 stride: int = 1) -> float:
    """(1/X) int_X^{2X} |S_h1/h1 - S_h2/h2|^2 dx, S_h(x) = sum_{x <= n <= x+h} w_n.

    For integer h the integrand is constant on each (k-1, k), where S_h
    sums n = k .. k+h-1, so the midpoint rule on those cells is exact;
    ``stride`` > 1 samples every stride-th cell instead.
    """
    cum = np.r_[0, np.cumsum(dense, dtype=np.int64)]
    k = np.arange(X + 1, 2 * X + 1, stride, dtype=np.int64) - base
    s1 = (cum[k + h1] - cum[k]) / h1
    s2 = (cum[k + h2] - cum[k]) / h2
    return float(np.mean((s1 - s2) ** 2))


def parseval_discrepancy(w, h1: int, h2: int, t0: float, X: Optional[int] = None,
                         J: Optional[int] = None, n_dyadic: int = 6,
                         stride: int = 1) -> CheckReport:
    """Short-interval variance of the weights against its three Dirichlet-polynomial terms.

    Terms: (J max w)^2 / t0, int_{t0}^{X/h1} |G(1+it)|^2, and
    max over T = (X/h1) 2^k, k < n_dyadic, of X/(T h1) int_T^{2T} |G(1+it)|^2.
    """
    p = w.params
    X = int(p.X if X is None else X)
    J = p.J if J is None else J
    if not 1 <= h1 <= h2:
        raise DomainError(f"need 1 <= h1 <= h2, got h1 = {h1}, h2 = {h2}")
    if w.lo > X + 1 or w.hi < 2 * X + h2 + 1:
        raise RangeError(f"window [{w.lo}, {w.hi}) does not cover [{X}, {2 * X + h2}]")
    dense = np.zeros(w.hi - w.lo, dtype=np.int64)
    dense[w.ns - w.lo] = w.w
    lhs = parseval_lhs(dense, w.lo, X, int(h1), int(h2), stride)

    G = from_weights(w)
    wmax = float(w.w.max()) if w.ns.size else 0.0
    T1 = X / h1
    first = (J * wmax) ** 2 / t0
    second = mean_value_exact(G, t0, T1) if T1 > t0 else 0.0
    third = max(X / (T * h1) * mean_value_exact(G, T, 2 * T)
                for T in (T1 * 2 ** k for k in range(n_dyadic)))
    in_range = bool(X >= 2 * t0 ** 3 and h2 <= X / t0 ** 3)
    return _report("parseval", lhs, [first, second, third], False,
                   h1=int(h1), h2=int(h2), t0=t0, X=X, in_lemma_range=in_range)
