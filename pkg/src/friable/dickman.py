"""Dickman function rho(u) as a table of per-unit-interval Chebyshev pieces.

rho = 1 on [0, 1] and -u rho'(u) = rho(u - 1) for u > 1.  On [k, k+1] we
store the normalised piece g_k(u) = rho(u) / rho(k) together with
log rho(k), so values far into the underflow range keep full relative
precision and ``log_rho`` never has to take the log of a denormal.

Each piece satisfies

    u g_k(u) - int_k^u g_k = (rho(k-1)/rho(k)) * int_{u-1}^k g_{k-1},

solved in the equivalent integral form on Chebyshev collocation points
(integrals taken exactly on the interpolant, Clenshaw-Curtis style), with
the node count doubled until the piece has settled below tol / 10.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as C

from .errors import DomainError, RangeError, ToleranceError

DEFAULT_U_MAX = 50.0
DEFAULT_DEGREE = 32
DEFAULT_TOL = 1e-13
_MAX_NODES = 1024


@dataclass(frozen=True, eq=False)
class RhoTable:
    u_max: float
    degree: int
    tol: float
    log_scale: np.ndarray   # log rho(k), k = 0..n_pieces
    coeffs: np.ndarray      # (n_pieces, degree+1), Chebyshev coeffs of g_k in x = 2(u-k)-1
    anti: np.ndarray        # (n_pieces, degree+2), antiderivative of g_k in x, zero at x=-1

    @property
    def n_pieces(self) -> int:
        return self.coeffs.shape[0]


def _cheb_points(n: int) -> np.ndarray:
    # first-kind points, matching chebinterpolate
    return np.cos(np.pi * (np.arange(n) + 0.5) / n)[::-1]


def _clenshaw(x: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Evaluate rows of ``coeffs`` (one row per x) at x, vectorised."""
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for j in range(coeffs.shape[1] - 1, 0, -1):
        b1, b2 = 2.0 * x * b1 - b2 + coeffs[:, j], b1
    return x * b1 - b2 + coeffs[:, 0]


@lru_cache(maxsize=None)
def _collocation_matrices(n: int):
    """Nodes, value->coefficient map and the running-integral operator on n points."""
    nodes = _cheb_points(n)
    vander = C.chebvander(nodes, n - 1)
    to_coef = np.linalg.inv(vander)
    integ = np.zeros((n + 1, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        integ[:, j] = C.chebint(e, lbnd=-1.0)
    running = C.chebvander(nodes, n) @ integ @ to_coef
    return nodes, to_coef, running


def _solve_piece(k: int, prev_anti: np.ndarray, ratio: float, n: int):
    """Chebyshev coefficients (length n) of g on [k, k+1].

    Solves u g(u) - int_k^u g = ratio * int_{u-1}^k g_prev on n collocation
    points; ratio = rho-scale of the previous piece over the current one.
    """
    nodes, to_coef, running = _collocation_matrices(n)
    u = k + 0.5 * (nodes + 1.0)
    rhs = ratio * 0.5 * (C.chebval(1.0, prev_anti) - C.chebval(nodes, prev_anti))
    lhs = np.diag(u) - 0.5 * running
    values = np.linalg.solve(lhs, rhs)
    return to_coef @ values


def build_rho(u_max: float = DEFAULT_U_MAX, degree: int = DEFAULT_DEGREE,
              tol: float = DEFAULT_TOL) -> RhoTable:
    """Tabulate rho on [0, u_max].

    Each piece solves the integral form u rho(u) = int_{u-1}^u rho(t) dt by
    collocation instead of stepping rho(u) = rho(k) - int rho(t-1)/t dt
    forward: the forward recursion feeds rounding error into a slowly
    decaying companion solution and loses every digit near u = 13, while
    the integral form keeps that companion switched off.
    """
    if u_max < 1:
        raise DomainError(f"u_max must be >= 1, got {u_max}")
    if degree < 8:
        raise DomainError(f"degree must be >= 8, got {degree}")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")

    n_pieces = max(1, math.ceil(u_max))
    coeffs = np.zeros((n_pieces, degree + 1))
    anti = np.zeros((n_pieces, degree + 2))
    log_scale = np.zeros(n_pieces + 1)

    coeffs[0, 0] = 1.0
    anti[0] = C.chebint(coeffs[0], lbnd=-1.0)
    xs_d = _cheb_points(degree + 1)

    for k in range(1, n_pieces):
        ratio = math.exp(log_scale[k - 1] - log_scale[k])
        last = None
        n = 16
        while True:
            vals = C.chebval(xs_d, _solve_piece(k, anti[k - 1], ratio, n))
            if last is not None and np.max(np.abs(vals - last)) < tol / 10:
                break
            if n >= _MAX_NODES:
                raise ToleranceError(
                    f"piece [{k}, {k + 1}]: collocation did not settle below {tol / 10:g}")
            last = vals
            n *= 2

        coeffs[k] = C.chebfit(xs_d, vals, degree)
        anti[k] = C.chebint(coeffs[k], lbnd=-1.0)
        g_end = C.chebval(1.0, coeffs[k])
        if not g_end > 0:
            raise ToleranceError(f"piece [{k}, {k + 1}] lost positivity")
        log_scale[k + 1] = log_scale[k] + math.log(g_end)

    table = RhoTable(float(u_max), degree, tol, log_scale, coeffs, anti)
    _verify(table)
    return table


def _verify(table: RhoTable) -> None:
    for k in range(table.n_pieces - 1):
        left = math.exp(table.log_scale[k]) * C.chebval(1.0, table.coeffs[k])
        right = math.exp(table.log_scale[k + 1]) * C.chebval(-1.0, table.coeffs[k + 1])
        if abs(left - right) > table.tol:
            raise ToleranceError(f"discontinuity {abs(left - right):.3g} at u = {k + 1}")
    grid = np.linspace(1.0, table.u_max, 41)
    res = delay_residual(table, grid)
    worst = float(np.max(res))
    if worst > 10 * table.tol:
        raise ToleranceError(f"delay-identity residual {worst:.3g} exceeds {10 * table.tol:g}")


@lru_cache(maxsize=8)
def default_table(u_max: float = DEFAULT_U_MAX) -> RhoTable:
    return build_rho(u_max)


def _locate(table: RhoTable, u: np.ndarray):
    if np.any(u > table.u_max):
        raise RangeError(f"u = {float(np.max(u))} exceeds table range u_max = {table.u_max}")
    k = np.clip(np.floor(u).astype(np.int64), 0, table.n_pieces - 1)
    x = 2.0 * (u - k) - 1.0
    return k, x


def rho(table: RhoTable, u):
    """rho(u); 1 on [0, 1] and 0 for u < 0."""
    arr = np.asarray(u, dtype=float)
    flat = np.atleast_1d(arr)
    out = np.zeros_like(flat)
    pos = flat >= 0
    if np.any(pos):
        k, x = _locate(table, flat[pos])
        out[pos] = np.exp(table.log_scale[k]) * _clenshaw(x, table.coeffs[k])
    return out.reshape(arr.shape) if arr.ndim else float(out[0])


def log_rho(table: RhoTable, u):
    arr = np.asarray(u, dtype=float)
    flat = np.atleast_1d(arr)
    out = np.full_like(flat, -np.inf)
    pos = flat >= 0
    if np.any(pos):
        k, x = _locate(table, flat[pos])
        out[pos] = table.log_scale[k] + np.log(_clenshaw(x, table.coeffs[k]))
    return out.reshape(arr.shape) if arr.ndim else float(out[0])


def rho_integral(table: RhoTable, a: float, b: float) -> float:
    """Integral of rho over [a, b] for 0 <= a <= b <= u_max, summed piece by piece."""
    if a > b:
        return -rho_integral(table, b, a)
    a = max(a, 0.0)
    if b > table.u_max:
        raise RangeError(f"b = {b} exceeds u_max = {table.u_max}")
    total = 0.0
    k = min(int(math.floor(a)), table.n_pieces - 1)
    while k < table.n_pieces and k < b:
        lo, hi = max(a, k), min(b, k + 1)
        if hi > lo:
            xa, xb = 2.0 * (lo - k) - 1.0, 2.0 * (hi - k) - 1.0
            piece = C.chebval(xb, table.anti[k]) - C.chebval(xa, table.anti[k])
            total += 0.5 * math.exp(table.log_scale[k]) * piece
        k += 1
    return total


def delay_residual(table: RhoTable, u_grid) -> np.ndarray:
    """|u rho(u) - int_{u-1}^u rho| on a grid in [1, u_max]."""
    u_grid = np.atleast_1d(np.asarray(u_grid, dtype=float))
    vals = rho(table, u_grid)
    ints = np.array([rho_integral(table, u - 1.0, u) for u in u_grid])
    return np.abs(u_grid * vals - ints)


def xi(u: float) -> float:
    """Main terms log u + log log(u + 2) of the saddle parameter."""
    if u <= 1:
        raise DomainError(f"xi needs u > 1, got {u}")
    return math.log(u) + math.log(math.log(u + 2.0))


@dataclass(frozen=True)
class RatioReport:
    u: float
    v: float
    exact: float
    predicted: float
    log_discrepancy: float
    scaled_constant: float   # log_discrepancy * u / (1 + v^2)


def rho_ratio(table: RhoTable, u: float, v: float) -> RatioReport:
    """Compare rho(u - v) / rho(u) with exp(v xi(u))."""
    if not u > 2:
        raise RangeError(f"need u > 2, got {u}")
    if abs(v) > u / 2:
        raise RangeError(f"need |v| <= u/2, got v = {v}")
    if u > table.u_max or u - v > table.u_max:
        raise RangeError(f"u = {u}, v = {v} leave the table range")
    log_exact = log_rho(table, u - v) - log_rho(table, u)
    x = xi(u)
    disc = abs(log_exact - v * x)
    return RatioReport(u, v, math.exp(log_exact), math.exp(v * x), disc,
                       disc * u / (1.0 + v * v))


@dataclass(frozen=True)
class AsymptoticReport:
    u: tuple
    r: tuple
    in_range: bool          # r in (0.5, 1.5) wherever u >= 5
    increasing_tail: bool   # r nondecreasing over grid points with u >= 5
    positive: bool


def rho_asymptotic_check(table: RhoTable, u_grid) -> AsymptoticReport:
    """r(u) = -log rho(u) / (u log u) over a grid in (e, u_max].

    r tends to 1 only very slowly and from above; at desk scale it sits a
    little over 1 and is still rising, which is what the tail flag records.
    """
    us = np.asarray(sorted(u_grid), dtype=float)
    if us.size and (us[0] <= 1 or us[-1] > table.u_max):
        raise RangeError("grid must lie in (1, u_max]")
    r = -log_rho(table, us) / (us * np.log(us))
    tail = r[us >= 5]
    return AsymptoticReport(
        u=tuple(us.tolist()),
        r=tuple(r.tolist()),
        in_range=bool(np.all((tail > 0.5) & (tail < 1.5))),
        increasing_tail=bool(np.all(np.diff(tail) >= 0)),
        positive=bool(np.all(r > 0)),
    )


def table_rows(table: RhoTable, step: float = 0.1):
    """(u, rho, log_rho) rows on a uniform grid, for CSV dumps."""
    us = np.round(np.arange(0.0, table.u_max + step / 2, step), 12)
    us = us[us <= table.u_max]
    return list(zip(us.tolist(), rho(table, us).tolist(), log_rho(table, us).tolist()))
