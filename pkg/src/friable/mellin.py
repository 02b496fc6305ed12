"""Trapezoidal smoothing eta_{xi,kappa}, its Mellin transform, and numerical inversion.

eta is 1 on [1-k, 1+k], 0 outside [1-k-xi, 1+k+xi], and linear in between.
With knots a = (1+k+xi, 1+k, 1-k, 1-k-xi) and signs (+, -, -, +),

    eta~(s) = sum_j sign_j a_j^(s+1) / (xi s (s+1)).

Because sum sign_j = sum sign_j a_j = 0 the singularities at s = 0, -1 are
removable; near them the transform is evaluated as

    eta~(s) = (1/xi) sum_j sign_j (a_j L_j E(s L_j) - L_j E((s+1) L_j)),

with L_j = log a_j and E(z) = (e^z - 1)/z, which has no cancellation at s = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RangeError

SINGULAR_RADIUS = 1e-6


@dataclass(frozen=True)
class SmoothingParams:
    xi: float
    kappa: float

    def __post_init__(self):
        if not self.xi > 0:
            raise DomainError(f"need xi > 0, got {self.xi}")
        if not self.kappa >= 0:
            raise DomainError(f"need kappa >= 0, got {self.kappa}")
        if not self.kappa + self.xi < 1:
            raise DomainError(f"need kappa + xi < 1, got {self.kappa + self.xi}")

    @property
    def knots(self) -> np.ndarray:
        k, x = self.kappa, self.xi
        return np.array([1 + k + x, 1 + k, 1 - k, 1 - k - x])

    @property
    def support(self) -> tuple[float, float]:
        return 1 - self.kappa - self.xi, 1 + self.kappa + self.xi

    @classmethod
    def from_interval(cls, h: float, x: float) -> "SmoothingParams":
        """kappa = xi = h / x."""
        return cls(h / x, h / x)


_SIGNS = np.array([1.0, -1.0, -1.0, 1.0])


def eta(z, sp: SmoothingParams):
    """eta_{xi,kappa}(z), vectorised."""
    z = np.asarray(z, dtype=float)
    k, x = sp.kappa, sp.xi
    out = np.clip(np.minimum((1 + k + x - z) / x, (z + k + x - 1) / x), 0.0, 1.0)
    return out if out.ndim else float(out)


def _expm1_over(z: np.ndarray) -> np.ndarray:
    """(e^z - 1)/z, equal to 1 at z = 0."""
    out = np.ones_like(z, dtype=complex)
    small = np.abs(z) < 1e-5
    big = ~small
    out[big] = np.expm1(z[big]) / z[big]
    zs = z[small]
    out[small] = 1 + zs / 2 + zs * zs / 6 + zs ** 3 / 24
    return out


def _mellin_closed(s: np.ndarray, sp: SmoothingParams) -> np.ndarray:
    a = sp.knots
    num = np.sum(_SIGNS[:, None] * np.exp(np.multiply.outer(np.log(a), s + 1)), axis=0)
    return num / (sp.xi * s * (s + 1))


def _mellin_series(s: np.ndarray, sp: SmoothingParams) -> np.ndarray:
    a = sp.knots
    L = np.log(a)
    terms = (a * L)[:, None] * _expm1_over(np.multiply.outer(L, s)) \
        - L[:, None] * _expm1_over(np.multiply.outer(L, s + 1))
    return np.sum(_SIGNS[:, None] * terms, axis=0) / sp.xi


def eta_mellin(s, sp: SmoothingParams, method: str = "auto"):
    """Mellin transform int_0^inf t^(s-1) eta(t) dt.

    ``method`` is "closed", "series" or "auto"; "auto" uses the closed form
    except within SINGULAR_RADIUS of s = 0 or s = -1.
    """
    s_arr = np.asarray(s, dtype=complex)
    flat = np.atleast_1d(s_arr).ravel()
    if method == "closed":
        out = _mellin_closed(flat, sp)
    elif method == "series":
        out = _mellin_series(flat, sp)
    elif method == "auto":
        near = (np.abs(flat) < SINGULAR_RADIUS) | (np.abs(flat + 1) < SINGULAR_RADIUS)
        out = np.empty(flat.size, dtype=complex)
        out[~near] = _mellin_closed(flat[~near], sp)
        out[near] = _mellin_series(flat[near], sp)
    else:
        raise DomainError(f"unknown method {method!r}")
    return out.reshape(s_arr.shape) if s_arr.ndim else complex(out[0])


@dataclass(frozen=True)
class InversionReport:
    z: float
    t_max: float
    reconstructed: float
    imag_part: float
    exact: float
    error: float
    truncation_estimate: float
    slow_convergence: bool


def default_t_max(sp: SmoothingParams) -> float:
    return 1e3 / sp.xi


def truncation_estimate(z: float, sp: SmoothingParams, t_max: float) -> float:
    """(1/pi) sum_j a_j^2 / (xi z t_max): tail bound from |eta~(1+it)| <= sum a_j^2 / (xi t^2)."""
    return float(np.sum(sp.knots ** 2)) / (math.pi * sp.xi * z * t_max)


def mellin_inversion_check(z: float, sp: SmoothingParams, t_max: float | None = None,
                           n_nodes: int | None = None) -> InversionReport:
    """(1/2 pi) int_{-t_max}^{t_max} z^(-1-it) eta~(1+it) dt against eta(z), by Simpson.

    The node count resolves both the oscillation of z^-it and the knot
    frequencies log a_j of eta~.
    """
    if not z > 0:
        raise DomainError(f"need z > 0, got {z}")
    t_max = default_t_max(sp) if t_max is None else t_max
    if not t_max > 0:
        raise DomainError(f"need t_max > 0, got {t_max}")
    if n_nodes is None:
        freq = abs(math.log(z)) + float(np.max(np.abs(np.log(sp.knots))))
        n_nodes = int(min(2e7, max(2000, 2 * t_max * (freq + 1) * 8)))
    n = n_nodes + (n_nodes % 2)
    t = np.linspace(-t_max, t_max, n + 1)
    f = np.exp(-(1 + 1j * t) * math.log(z)) * eta_mellin(1 + 1j * t, sp)
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    val = np.sum(w * f) * (2 * t_max / n) / 3.0 / (2 * math.pi)
    exact = float(eta(z, sp))
    est = truncation_estimate(z, sp, t_max)
    err = abs(val.real - exact)
    return InversionReport(float(z), float(t_max), float(val.real), float(val.imag), exact,
                           err, est, bool(err > 10 * est))


def mellin_table(sp: SmoothingParams, t_values) -> list:
    """(t, Re, Im) rows of eta~(1 + it)."""
    t = np.asarray(t_values, dtype=float)
    v = eta_mellin(1 + 1j * t, sp)
    return list(zip(t.tolist(), v.real.tolist(), v.imag.tolist()))


def smoothed_sum(w, x: float, sp: SmoothingParams) -> float:
    """sum_n w_n eta(n / x) over the weight window."""
    lo, hi = sp.support
    if w.lo > x * lo or w.hi <= x * hi:
        raise RangeError(f"window [{w.lo}, {w.hi}) does not cover [{x * lo}, {x * hi}]")
    i = np.searchsorted(w.ns, x * lo, side="left")
    j = np.searchsorted(w.ns, x * hi, side="right")
    vals = eta(w.ns[i:j] / x, sp)
    return float(np.sum(w.w[i:j] * vals))


@dataclass(frozen=True)
class SplitReport:
    x: float
    cutoff: float
    total: float        # direct smoothed sum
    U: complex          # (1/2 pi) int_{|t| <= cutoff} x^s G(s) eta~(s) dt on s = 1 + it
    V: complex          # same over cutoff < |t| <= t_max
    t_max: float

    @property
    def residual(self) -> float:
        return abs(self.U.real + self.V.real - self.total)


def mellin_split(w, x: float, sp: SmoothingParams, cutoff: float, t_max: float | None = None,
                 n_per_unit: int = 64) -> SplitReport:
    """Split the Mellin integral for sum w_n eta(n/x) at |t| = cutoff (U near, V far).

    Numerical only; toy windows keep G small enough for direct evaluation.
    """
    from .dpoly import evaluate_uniform, from_weights
    t_max = default_t_max(sp) if t_max is None else t_max
    if not 0 < cutoff < t_max:
        raise DomainError(f"need 0 < cutoff < t_max, got {cutoff}, {t_max}")
    G = from_weights(w)
    total = smoothed_sum(w, x, sp)

    def piece(a: float, b: float) -> complex:
        n = max(2, int(math.ceil((b - a) * n_per_unit)))
        n += n % 2
        h = (b - a) / n
        t = a + h * np.arange(n + 1)
        f = np.exp((1 + 1j * t) * math.log(x)) * evaluate_uniform(G, a, h, n + 1) \
            * eta_mellin(1 + 1j * t, sp)
        wts = np.ones(n + 1)
        wts[1:-1:2] = 4.0
        wts[2:-1:2] = 2.0
        return complex(np.sum(wts * f) * h / 3.0 / (2 * math.pi))

    U = piece(-cutoff, cutoff)
    V = piece(cutoff, t_max) + piece(-t_max, -cutoff)
    return SplitReport(float(x), float(cutoff), total, U, V, float(t_max))
