"""Short-interval scans: how often [x, x+h] holds a y-smooth number, and smooth gaps.

For x in [X, 2X] let d(x) be the distance from x to the next y-smooth
number >= x.  Then [x, x+h] contains a smooth number iff d(x) <= h, so one
sweep computing d over the range answers every h at once: fractions are
empirical CDF values of d, and the least h reaching a target fraction is
an order statistic of d.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CapacityError, DomainError
from .params import threshold_h_almost_all
from .smooth import DEFAULT_MAX_ENTRIES, DEFAULT_SEGMENT, iter_smooth, smooth_set

MAX_EXEMPLARS = 100


@dataclass(frozen=True)
class ScanReport:
    X: int
    y: float
    h: int
    sampled: bool
    sample_size: int
    seed: Optional[int]
    scanned: int
    exceptions: int
    fraction: float
    exemplars: tuple = field(default_factory=tuple)


def _members_after(X: int, reach: int, y: float, segment_size: int, threads: int) -> np.ndarray:
    """Smooth members of [X, 2X + reach], plus the first one beyond it if any."""
    hi = 2 * X + reach + 1
    if hi - X > DEFAULT_MAX_ENTRIES:
        raise CapacityError(f"scan window of {hi - X} integers exceeds budget")
    return smooth_set(X, hi, y, segment_size=segment_size, threads=threads).members


def next_smooth_distance(X: int, y: float, xs: np.ndarray, reach: int,
                         segment_size: int = DEFAULT_SEGMENT, threads: int = 1) -> np.ndarray:
    """d(x) for each x in ``xs`` (a subset of [X, 2X]); values above ``reach`` become reach + 1."""
    members = _members_after(X, reach, y, segment_size, threads)
    i = np.searchsorted(members, xs, side="left")
    d = np.full(xs.shape, reach + 1, dtype=np.int64)
    ok = i < members.size
    d[ok] = np.minimum(members[i[ok]] - xs[ok], reach + 1)
    return d


def sample_points(X: int, n: int, seed: int) -> np.ndarray:
    """n distinct x in [X, 2X] from a counter-based (Philox) generator, sorted."""
    if n < 1:
        raise DomainError(f"need a positive sample size, got {n}")
    rng = np.random.Generator(np.random.Philox(seed))
    n = min(n, X + 1)
    return X + np.sort(rng.choice(X + 1, size=n, replace=False))


def _scan_points(X: int, sample: Optional[int], seed: Optional[int]) -> np.ndarray:
    if sample is None:
        return np.arange(X, 2 * X + 1, dtype=np.int64)
    return sample_points(X, sample, 0 if seed is None else seed)


def scan_almost_all(X: int, y: float, h: int, sample: Optional[int] = None,
                    seed: Optional[int] = None, segment_size: int = DEFAULT_SEGMENT,
                    threads: int = 1) -> ScanReport:
    """Share of x in [X, 2X] whose [x, x+h] contains a y-smooth number.

    Exhaustive when ``sample`` is None; otherwise ``sample`` distinct x drawn
    with the given seed.
    """
    if X < 1:
        raise DomainError(f"need X >= 1, got {X}")
    if h < 0:
        raise DomainError(f"need h >= 0, got {h}")
    xs = _scan_points(X, sample, seed)
    d = next_smooth_distance(X, y, xs, h, segment_size, threads)
    bad = xs[d > h]
    return ScanReport(X, y, h, sample is not None, int(xs.size), seed, int(xs.size),
                      int(bad.size), 1.0 - bad.size / xs.size,
                      tuple(bad[:MAX_EXEMPLARS].tolist()))


def fraction_curve(X: int, y: float, hs, sample: Optional[int] = None, seed: Optional[int] = None,
                   segment_size: int = DEFAULT_SEGMENT, threads: int = 1) -> np.ndarray:
    """Scan fractions for several h from a single sweep."""
    hs = np.asarray(hs, dtype=np.int64)
    xs = _scan_points(X, sample, seed)
    d = np.sort(next_smooth_distance(X, y, xs, int(hs.max()), segment_size, threads))
    return np.searchsorted(d, hs, side="right") / xs.size


@dataclass(frozen=True)
class GapReport:
    lo: int
    hi: int
    y: float
    members: int
    max_gap: Optional[int]
    argmax: Optional[int]     # smaller endpoint of the first maximal gap
    histogram: dict
    degenerate: bool


def max_gap(lo: int, hi: int, y: float, segment_size: int = DEFAULT_SEGMENT,
            threads: int = 1) -> GapReport:
    """Largest gap between consecutive y-smooth numbers in [lo, hi], streamed by segment."""
    if hi < lo:
        raise DomainError(f"need lo <= hi, got [{lo}, {hi}]")
    lo = max(lo, 1)
    hist: Counter = Counter()
    prev = None
    count = 0
    best, where = None, None
    for seg in iter_smooth(lo, hi + 1, y, segment_size, threads):
        if seg.size == 0:
            continue
        seq = seg if prev is None else np.r_[prev, seg]
        gaps = np.diff(seq)
        count += seg.size
        if gaps.size:
            vals, cnt = np.unique(gaps, return_counts=True)
            hist.update(dict(zip(vals.tolist(), cnt.tolist())))
            k = int(np.argmax(gaps))
            if best is None or gaps[k] > best:
                best, where = int(gaps[k]), int(seq[k])
        prev = seg[-1]
    return GapReport(lo, hi, y, count, best, where, dict(sorted(hist.items())), count < 2)


@dataclass(frozen=True)
class ThresholdResult:
    X: int
    y: float
    target: float
    h: int
    reached: bool
    fraction: float


def empirical_threshold(X: int, y: float, target: float = 0.99, sample: Optional[int] = None,
                        seed: Optional[int] = None, h_cap: Optional[int] = None,
                        segment_size: int = DEFAULT_SEGMENT, threads: int = 1) -> ThresholdResult:
    """Least h >= 0 with scan fraction >= target.

    The fraction is the empirical CDF of d(x), so the answer is the
    ceil(target * n)-th smallest d; ``h_cap`` (default X) bounds the search,
    and ``reached`` is False when it is hit.
    """
    if not 0 < target <= 1:
        raise DomainError(f"need 0 < target <= 1, got {target}")
    h_cap = X if h_cap is None else h_cap
    xs = _scan_points(X, sample, seed)
    d = np.sort(next_smooth_distance(X, y, xs, h_cap, segment_size, threads))
    k = max(1, math.ceil(target * xs.size - 1e-9))
    h = int(d[k - 1])
    reached = h <= h_cap
    h = min(h, h_cap)
    frac = float(np.searchsorted(d, h, side="right") / xs.size)
    return ThresholdResult(X, y, target, h, reached, frac)


@dataclass(frozen=True)
class TheoryRow:
    y: float
    u: float
    h_empirical: int
    reached: bool
    h_formula: float
    ratio: float
    vacuous: bool      # formula threshold exceeds X


@dataclass(frozen=True)
class TheoryTable:
    X: int
    epsilon: float
    target: float
    rows: tuple
    nonincreasing: bool   # empirical h* nonincreasing in y


def compare_with_theory(X: int, ys, epsilon: float = 0.1, target: float = 0.99,
                        sample: Optional[int] = None, seed: Optional[int] = None,
                        segment_size: int = DEFAULT_SEGMENT, threads: int = 1) -> TheoryTable:
    """Empirical h*(target) per y next to the almost-all threshold formula."""
    ys = sorted(ys)
    rows = []
    for y in ys:
        r = empirical_threshold(X, y, target, sample, seed, None, segment_size, threads)
        hf = threshold_h_almost_all(X, y, epsilon)
        rows.append(TheoryRow(y, math.log(X) / math.log(y), r.h, r.reached, hf,
                              r.h / hf if hf > 0 else math.inf, bool(hf > X)))
    hs = [r.h_empirical for r in rows]
    return TheoryTable(X, epsilon, target, tuple(rows),
                       all(a >= b for a, b in zip(hs, hs[1:])))
