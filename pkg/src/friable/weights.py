"""Weights counting factorisations n = q1 q2 p1 ... pJ m (and the variant with an extra r).

Tuples (p1, ..., pJ) are ordered and may repeat, so w_n is exactly the
coefficient of n^-s in P1(s) P2(s) P3(s)^J M(s).  Enumeration walks the
factor lattice with nested ascending loops and is independent of the
Dirichlet-polynomial convolution in ``dpoly``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CapacityError, CheckFailure, DomainError, RangeError
from .params import ParamSet
from .smooth import enumerate_M, small_primes, smooth_set

DEFAULT_MAX_LATTICE = 20_000_000
_INT64_LIMIT = 1 << 63


@dataclass(frozen=True, eq=False)
class WeightWindow:
    lo: int
    hi: int
    ns: np.ndarray          # sorted support, int64
    w: np.ndarray           # int64 multiplicities, all > 0
    params: Optional[ParamSet] = None
    tilde: bool = False

    def __getitem__(self, n: int) -> int:
        i = np.searchsorted(self.ns, n)
        if i < self.ns.size and self.ns[i] == n:
            return int(self.w[i])
        return 0

    @property
    def total(self) -> int:
        return int(self.w.sum())

    def as_dict(self) -> dict:
        return dict(zip(self.ns.tolist(), self.w.tolist()))

    def rows(self):
        return list(zip(self.ns.tolist(), self.w.tolist()))


def primes_in_dyadic(P: float) -> np.ndarray:
    """Primes p with P < p <= 2P."""
    top = math.floor(2 * P)
    ps = small_primes(top)
    return ps[ps > P]


def factor_sets(p: ParamSet, M=None):
    """Prime ranges for q1, q2, p_i and the set M (taken from ``M`` when given)."""
    q1 = primes_in_dyadic(p.P1)
    q2 = primes_in_dyadic(p.P2)
    q3 = primes_in_dyadic(p.P3)
    m = enumerate_M(p).members if M is None else np.unique(np.asarray(M, dtype=np.int64))
    return q1, q2, q3, m


def lattice_size(p: ParamSet, M=None, extra: int = 1) -> int:
    q1, q2, q3, m = factor_sets(p, M)
    return len(q1) * len(q2) * len(q3) ** p.J * len(m) * extra


def _enumerate(p: ParamSet, lo: int, hi: int, extra: np.ndarray, tilde: bool,
               max_lattice: int, M) -> WeightWindow:
    if hi <= lo:
        raise DomainError(f"empty window [{lo}, {hi})")
    q1, q2, q3, m = factor_sets(p, M)
    size = len(q1) * len(q2) * len(q3) ** p.J * len(m) * len(extra)
    if size > max_lattice:
        raise CapacityError(f"factor lattice has {size} points, budget is {max_lattice}")
    # (m, r) pairs keep their multiplicity: distinct pairs may share a product
    tail = np.sort(np.multiply.outer(m, extra).ravel())
    if tail.size and len(q1) and len(q2) and (p.J == 0 or len(q3)):
        top = int(q1[-1]) * int(q2[-1]) * (int(q3[-1]) ** p.J if p.J else 1) * int(tail[-1])
        if top >= _INT64_LIMIT:
            raise CapacityError("products overflow 64-bit integers")

    chunks = [np.zeros(0, dtype=np.int64)]
    for a in q1.tolist():
        for b in q2.tolist():
            for tup in itertools.product(q3.tolist(), repeat=p.J):
                base = a * b * math.prod(tup)
                ns = base * tail
                chunks.append(ns[(ns >= lo) & (ns < hi)])
    ns, counts = np.unique(np.concatenate(chunks), return_counts=True)
    return WeightWindow(lo, hi, ns.astype(np.int64), counts.astype(np.int64), p, tilde)


def weights_enumerate(p: ParamSet, lo: int, hi: int, M=None,
                      max_lattice: int = DEFAULT_MAX_LATTICE) -> WeightWindow:
    """w_n for n in [lo, hi).

    ``M`` replaces the sieved set M, which lets hand-built toys pin M = {1}.
    """
    return _enumerate(p, lo, hi, np.ones(1, dtype=np.int64), False, max_lattice, M)


def r_set(p: ParamSet, R: int) -> np.ndarray:
    """(R, 2R] intersected with S(y)."""
    if R < 1:
        return np.zeros(0, dtype=np.int64)
    return smooth_set(R + 1, 2 * R + 1, p.y).members


def weights_tilde_enumerate(p: ParamSet, R: int, lo: int, hi: int, M=None,
                            max_lattice: int = DEFAULT_MAX_LATTICE) -> WeightWindow:
    """Weights with one further factor r in (R, 2R] of S(y)."""
    return _enumerate(p, lo, hi, r_set(p, R), True, max_lattice, M)


def support_interval(p: ParamSet, tilde: bool = False, x: Optional[float] = None):
    """Interval that must contain the support: [X/2^(J+5), 2^(J+5) X], or [x/2^(J+5), 2^(J+6) x]."""
    if tilde:
        x = p.X if x is None else x
        return x / 2 ** (p.J + 5), 2 ** (p.J + 6) * x
    return p.X / 2 ** (p.J + 5), 2 ** (p.J + 5) * p.X


@dataclass(frozen=True)
class AverageReport:
    x: int
    h: int
    average: float
    reference: Optional[float]          # rho(u-v) / (log P1 log P2 (2 log P3)^J)
    in_lemma_range: Optional[bool]      # 2 X y^(-5/12) <= h <= X
    h2: Optional[float] = None          # X y^(-3/8)
    h2_in_lemma_range: Optional[bool] = None


def window_sum(w: WeightWindow, x: int, h: int) -> int:
    """Sum of w_n over x <= n <= x + h."""
    if x < w.lo or x + h >= w.hi:
        raise RangeError(f"[{x}, {x + h}] not inside window [{w.lo}, {w.hi})")
    i = np.searchsorted(w.ns, x, side="left")
    j = np.searchsorted(w.ns, x + h, side="right")
    return int(w.w[i:j].sum())


def weight_average(w: WeightWindow, x: int, h: int) -> AverageReport:
    if h < 1:
        raise DomainError(f"need h >= 1, got {h}")
    avg = window_sum(w, x, h) / h
    p = w.params
    if p is None:
        return AverageReport(x, h, avg, None, None)
    ref = p.rho_u_minus_v / (p.log_P1 * p.log_P2 * (2 * p.log_P3) ** p.J) \
        if min(p.log_P1, p.log_P2, p.log_P3) > 0 else None
    lower = 2 * p.X * p.y ** (-5 / 12)
    h2 = p.X * p.y ** (-3 / 8)
    return AverageReport(x, h, avg, ref, bool(lower <= h <= p.X), h2, bool(lower <= h2 <= p.X))


@dataclass(frozen=True)
class BoundReport:
    passed: bool
    max_ratio: float
    checked: int
    offenders: tuple = field(default_factory=tuple)


def weight_bound(p: ParamSet, n) -> np.ndarray:
    """(log n)^(J+2) / (log P1 log P2 (log P3)^J)."""
    logn = np.log(np.asarray(n, dtype=float))
    return logn ** (p.J + 2) / (p.log_P1 * p.log_P2 * p.log_P3 ** p.J)


def weight_bound_check(w: WeightWindow, strict: bool = False) -> BoundReport:
    """Check w_n against the pointwise bound over the whole support."""
    if w.ns.size == 0:
        return BoundReport(True, 0.0, 0)
    if w.params is None:
        raise DomainError("window carries no ParamSet")
    ratio = w.w / weight_bound(w.params, w.ns)
    bad = w.ns[ratio > 1.0]
    rep = BoundReport(bool(bad.size == 0), float(ratio.max()), int(w.ns.size),
                      tuple(bad[:100].tolist()))
    if strict and not rep.passed:
        raise CheckFailure(f"weight bound fails at n = {list(rep.offenders)}")
    return rep
