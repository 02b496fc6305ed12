"""Exact smooth-number machinery built on a segmented largest-prime-factor sieve.

Conventions used throughout the package:

* P(1) = 1, so 1 counts as y-smooth for every y >= 2.
* Windows passed as ``(lo, hi)`` are half-open [lo, hi); intervals written
  [x, x + h] in the operation names are closed.
* "n ~ N" means the dyadic range (N, 2N].
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .errors import CapacityError, DomainError

DEFAULT_SEGMENT = 1 << 22
DEFAULT_MAX_ENTRIES = 1 << 27
_INT64_LIMIT = 1 << 63


@dataclass(frozen=True, eq=False)
class LpfTable:
    lo: int
    hi: int
    lpf: np.ndarray

    def __getitem__(self, n: int) -> int:
        if not self.lo <= n < self.hi:
            raise IndexError(f"{n} outside window [{self.lo}, {self.hi})")
        return int(self.lpf[n - self.lo])

    def smooth_mask(self, y: float) -> np.ndarray:
        return self.lpf <= y


@dataclass(frozen=True, eq=False)
class SmoothSet:
    y: float
    lo: int
    hi: int
    members: np.ndarray   # sorted int64

    def __len__(self) -> int:
        return int(self.members.size)

    def __contains__(self, n) -> bool:
        i = np.searchsorted(self.members, n)
        return bool(i < self.members.size and self.members[i] == n)


@lru_cache(maxsize=16)
def small_primes(limit: int) -> np.ndarray:
    """Primes <= limit by a plain sieve of Eratosthenes."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p::p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def _check_window(lo: int, hi: int) -> None:
    if lo < 1 or hi <= lo:
        raise DomainError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    if hi >= _INT64_LIMIT:
        raise DomainError("windows above 2**63 are not supported")


def _lpf_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    size = hi - lo
    dtype = np.int32 if hi < (1 << 31) else np.int64
    # product of the prime powers with p <= sqrt(n) dividing n
    small = np.ones(size, dtype=dtype)
    lpf = np.ones(size, dtype=dtype)
    for p in base.tolist():
        if p * p >= hi:
            break
        first = (-lo) % p
        if first >= size:
            continue
        lpf[first::p] = p
        pk = p
        while pk < hi:
            first = (-lo) % pk
            if first < size:
                small[first::pk] *= p
            pk *= p
    cof = np.arange(lo, hi, dtype=dtype) // small
    big = cof > 1
    lpf[big] = cof[big]
    return lpf.astype(np.int64, copy=False)


def _segments(lo: int, hi: int, segment_size: int):
    return [(a, min(a + segment_size, hi)) for a in range(lo, hi, segment_size)]


def iter_lpf_segments(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT,
                      threads: int = 1) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (segment_lo, lpf array) over [lo, hi) in ascending order."""
    _check_window(lo, hi)
    if segment_size < 1:
        raise DomainError("segment_size must be positive")
    base = small_primes(math.isqrt(hi - 1) + 1)
    segs = _segments(lo, hi, segment_size)
    if threads <= 1 or len(segs) == 1:
        for a, b in segs:
            yield a, _lpf_segment(a, b, base)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # bounded look-ahead keeps memory at O(threads * segment)
        for i in range(0, len(segs), threads):
            batch = segs[i:i + threads]
            for (a, _), arr in zip(batch, pool.map(lambda s: _lpf_segment(s[0], s[1], base), batch)):
                yield a, arr


def lpf_table(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT,
              max_entries: int = DEFAULT_MAX_ENTRIES, threads: int = 1) -> LpfTable:
    """Largest prime factors of every integer in [lo, hi)."""
    _check_window(lo, hi)
    if hi - lo > max_entries:
        raise CapacityError(f"window of {hi - lo} entries exceeds budget of {max_entries}")
    parts = [arr for _, arr in iter_lpf_segments(lo, hi, segment_size, threads)]
    return LpfTable(lo, hi, np.concatenate(parts))


def iter_smooth(lo: int, hi: int, y: float, segment_size: int = DEFAULT_SEGMENT,
                threads: int = 1) -> Iterator[np.ndarray]:
    """Sorted y-smooth members of [lo, hi), one array per segment."""
    for a, lpf in iter_lpf_segments(lo, hi, segment_size, threads):
        yield a + np.flatnonzero(lpf <= y)


def smooth_set(lo: int, hi: int, y: float, segment_size: int = DEFAULT_SEGMENT,
               max_entries: int = DEFAULT_MAX_ENTRIES, threads: int = 1) -> SmoothSet:
    """All y-smooth integers in [lo, hi)."""
    if hi <= lo:
        return SmoothSet(y, lo, hi, np.zeros(0, dtype=np.int64))
    if hi - lo > max_entries:
        raise CapacityError(f"window of {hi - lo} entries exceeds budget of {max_entries}")
    parts = list(iter_smooth(lo, hi, y, segment_size, threads))
    return SmoothSet(y, lo, hi, np.concatenate(parts).astype(np.int64))


def _count_smooth(lo: int, hi: int, y: float, segment_size: int, threads: int) -> int:
    if hi <= lo:
        return 0
    if y >= hi - 1:
        return hi - lo
    return sum(int(np.count_nonzero(lpf <= y))
               for _, lpf in iter_lpf_segments(lo, hi, segment_size, threads))


def psi(x: int, y: float, segment_size: int = DEFAULT_SEGMENT, threads: int = 1) -> int:
    """Number of y-smooth integers in [1, x]."""
    if y < 2:
        raise DomainError(f"need y >= 2, got {y}")
    x = int(math.floor(x))
    if x < 1:
        return 0
    return _count_smooth(1, x + 1, y, segment_size, threads)


def psi_interval(x: int, h: int, y: float, segment_size: int = DEFAULT_SEGMENT,
                 threads: int = 1) -> int:
    """Number of y-smooth integers in [x, x + h]."""
    if h < 0:
        raise DomainError(f"need h >= 0, got {h}")
    lo = max(int(x), 1)
    return _count_smooth(lo, int(x) + int(h) + 1, y, segment_size, threads)


@dataclass(frozen=True)
class CountReport:
    count: int
    prediction: Optional[float]
    relative_error: Optional[float]
    u: float
    in_validity_range: Optional[bool] = None


def psi_report(x: int, y: float, table=None, **kw) -> CountReport:
    """Psi(x, y) next to the x rho(u) prediction."""
    from .dickman import rho
    count = psi(x, y, **kw)
    u = math.log(x) / math.log(y) if x > 1 else 0.0
    if table is None:
        return CountReport(count, None, None, u)
    pred = x * rho(table, u)
    return CountReport(count, pred, count / pred - 1.0, u)


def psi_interval_report(x: int, h: int, y: float, table=None, **kw) -> CountReport:
    """Count in [x, x+h] against h rho(u); flags whether x y^(-5/12) <= h <= x."""
    from .dickman import rho
    count = psi_interval(x, h, y, **kw)
    u = math.log(x) / math.log(y) if x > 1 else 0.0
    valid = x * y ** (-5.0 / 12.0) <= h <= x
    if table is None:
        return CountReport(count, None, None, u, valid)
    pred = h * rho(table, u)
    rel = count / pred - 1.0 if pred > 0 else None
    return CountReport(count, pred, rel, u, valid)


def pairwise_smooth_count(x: int, y: float, a: int, b: int,
                          segment_size: int = DEFAULT_SEGMENT, threads: int = 1) -> int:
    """#{n in (x, 2x] : n and a n + b both y-smooth}.

    Values a n + b <= 0 never count as smooth.
    """
    if a < 1:
        raise DomainError(f"need a >= 1, got {a}")
    if b == 0:
        raise DomainError("need b != 0")
    x = int(x)
    if x < 1:
        raise DomainError(f"need x >= 1, got {x}")
    n = np.arange(x + 1, 2 * x + 1, dtype=np.int64)
    left = lpf_table(x + 1, 2 * x + 1, segment_size, threads=threads).lpf <= y
    m = a * n + b
    ok = m >= 1
    right = np.zeros_like(left)
    if np.any(ok):
        lo, hi = int(m[ok].min()), int(m[ok].max()) + 1
        tab = lpf_table(lo, hi, segment_size, threads=threads)
        right[ok] = tab.lpf[m[ok] - lo] <= y
    return int(np.count_nonzero(left & right))


@dataclass(frozen=True)
class PairwiseReport:
    x: int
    y: float
    a: int
    b: int
    count: int
    single_count: int            # Psi(2x, y) - Psi(x, y)
    empirical_exponent: Optional[float]   # log(count/x) / log rho(u)
    phi: float


def pairwise_report(x: int, y: float, a: int, b: int, table=None,
                    phi: float = 13 / 8, **kw) -> PairwiseReport:
    from .dickman import log_rho
    count = pairwise_smooth_count(x, y, a, b, **kw)
    single = _count_smooth(x + 1, 2 * x + 1, y, kw.get("segment_size", DEFAULT_SEGMENT),
                           kw.get("threads", 1))
    expo = None
    if table is not None and count > 0:
        lr = log_rho(table, math.log(x) / math.log(y))
        if lr < 0:
            expo = math.log(count / x) / lr
    return PairwiseReport(x, y, a, b, count, single, expo, phi)


def m_interval(p) -> tuple[float, float]:
    """Real endpoints of the set M for a ParamSet, computed in log space."""
    log_denom = math.log(p.P1) + math.log(p.P2) + p.J * math.log(p.P3)
    lower = math.exp(math.log(p.X) - (p.J + 5) * math.log(2) - log_denom)
    upper = math.exp(math.log(8 * p.X) - log_denom)
    return lower, upper


def enumerate_M(p, max_entries: int = DEFAULT_MAX_ENTRIES) -> SmoothSet:
    """S(y) intersected with [X / (2^(J+5) P1 P2 P3^J), 8X / (P1 P2 P3^J)]."""
    lower, upper = m_interval(p)
    lo = max(1, math.ceil(lower))
    hi = math.floor(upper) + 1 if math.isfinite(upper) else None
    if hi is None:
        raise CapacityError(f"M interval [{lower:.6g}, {upper:.6g}] is unbounded")
    if hi <= lo:
        return SmoothSet(p.y, lo, lo, np.zeros(0, dtype=np.int64))
    if hi - lo > max_entries:
        raise CapacityError(
            f"M interval [{lower:.6g}, {upper:.6g}] holds {hi - lo} integers, "
            f"budget is {max_entries}")
    return smooth_set(lo, hi, p.y, max_entries=max_entries)
