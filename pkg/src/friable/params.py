"""Parameter ledger for the weight construction and the interval-length thresholds.

Everything is double precision.  Quantities that overflow at realistic sizes
(P1, P2, the thresholds) are also carried in log space; the plain values may
be ``inf``, and comparisons are done on the logs.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

from .errors import DomainError

PHI = 13 / 8
DEFAULT_A_VK = 0.05   # arbitrary; keeps desk-scale sigma0 inside (0, 1)


@dataclass(frozen=True)
class ParamSet:
    X: float
    y: float
    epsilon: float
    eta: float
    C: float
    A_vk: float
    u: float
    sigma0: float
    J: int
    v: float
    P1: float
    P2: float
    P3: float
    log_P1: float
    log_P2: float
    log_P3: float
    rho_u: float
    rho_u_minus_v: float
    phi: float = PHI
    toy_mode: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Check:
    name: str
    passed: Optional[bool]      # None for report-only entries
    measured: float
    required: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple = field(default_factory=tuple)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks if c.passed is not None)

    def failed(self) -> list:
        return [c.name for c in self.checks if c.passed is False]

    def to_dict(self) -> dict:
        return {"checks": [asdict(c) for c in self.checks], "all_passed": self.all_passed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=_json_default)

    def to_text(self) -> str:
        rows = [("check", "status", "measured", "required")]
        for c in self.checks:
            status = "report" if c.passed is None else ("pass" if c.passed else "FAIL")
            rows.append((c.name, status, f"{c.measured:.6g}", c.required))
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        return "\n".join("  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip() for r in rows)


def _json_default(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    raise TypeError(type(obj))


def sigma0(X: float, A_vk: float = DEFAULT_A_VK) -> float:
    """A_vk / ((log X)^(2/3) (log log X)^(1/3))."""
    if X <= math.e:
        raise DomainError(f"sigma0 needs log log X > 0, got X = {X}")
    L = math.log(X)
    return A_vk / (L ** (2 / 3) * math.log(L) ** (1 / 3))


def _log_rho(table, t: float) -> float:
    from .dickman import log_rho
    # rho is 1 on [0, 1]; arguments below 0 only arise at desk scale where v > u
    return log_rho(table, max(t, 0.0))


def derive_params(X: float, y: float, epsilon: float, eta: float, C: float,
                  A_vk: float = DEFAULT_A_VK, table=None, phi: float = PHI,
                  overrides: Optional[dict] = None) -> ParamSet:
    """Fill in u, sigma0, J, v, P1, P2, P3 from the base inputs.

    ``overrides`` may set any of J, P1, P2, P3 and switches the result to
    toy mode; P2 and P3 not overridden still follow their formulas.
    """
    if X < 16:
        raise DomainError(f"need X >= 16, got {X}")
    if y < 2:
        raise DomainError(f"need y >= 2, got {y}")
    if y > X:
        raise DomainError(f"need y <= X (u >= 1), got y = {y} > X = {X}")
    if not (0 < epsilon < 1 and 0 < eta < 1):
        raise DomainError("epsilon and eta must lie in (0, 1)")
    if C < 1:
        raise DomainError(f"need C >= 1, got {C}")
    if A_vk <= 0:
        raise DomainError(f"need A_vk > 0, got {A_vk}")
    if table is None:
        from .dickman import default_table
        table = default_table()
    overrides = dict(overrides or {})
    unknown = set(overrides) - {"J", "P1", "P2", "P3"}
    if unknown:
        raise DomainError(f"unknown overrides: {sorted(unknown)}")

    logX, logy = math.log(X), math.log(y)
    u = logX / logy
    s0 = sigma0(X, A_vk)
    if "J" in overrides:
        J = int(overrides["J"])
    else:
        # u = 1 makes the formula 0; J is kept positive
        J = max(1, math.ceil(200 * u * math.log(u) / (s0 * logy)))
    v = J * math.log(y / 2) / logy

    log_rho_u = _log_rho(table, u)
    log_rho_uv = _log_rho(table, u - v)

    if "P1" in overrides:
        log_P1 = math.log(overrides["P1"])
    else:
        log_P1 = (2 / (1 - 2 * epsilon)) * (
            (2 + epsilon) * math.log(logX) - (2 - phi + 2 * epsilon) * log_rho_uv)
    if "P2" in overrides:
        log_P2 = math.log(overrides["P2"])
    else:
        log_P2 = (log_P1 + J * math.log(logX)) / eta
    log_P3 = math.log(overrides["P3"]) if "P3" in overrides else math.log(y / 2)

    return ParamSet(
        X=float(X), y=float(y), epsilon=epsilon, eta=eta, C=C, A_vk=A_vk,
        u=u, sigma0=s0, J=J, v=v,
        P1=_safe_exp(log_P1), P2=_safe_exp(log_P2), P3=_safe_exp(log_P3),
        log_P1=log_P1, log_P2=log_P2, log_P3=log_P3,
        rho_u=math.exp(log_rho_u), rho_u_minus_v=math.exp(log_rho_uv),
        phi=phi, toy_mode=bool(overrides),
    )


def toy_params(X: float, y: float, J: int, P1: float, P2: float, P3: float,
               epsilon: float = 0.1, eta: float = 0.1, C: float = 1.0,
               A_vk: float = DEFAULT_A_VK, table=None) -> ParamSet:
    """Small instance with every size parameter set by hand."""
    return derive_params(X, y, epsilon, eta, C, A_vk, table,
                         overrides={"J": J, "P1": P1, "P2": P2, "P3": P3})


def params_from_config(cfg: dict, table=None) -> ParamSet:
    """Build a ParamSet from a JSON-style record; unknown keys are rejected."""
    allowed = {"X", "y", "epsilon", "eta", "C", "A_vk", "phi", "toy"}
    unknown = set(cfg) - allowed
    if unknown:
        raise DomainError(f"unknown parameter keys: {sorted(unknown)}")
    return derive_params(cfg["X"], cfg["y"], cfg.get("epsilon", 0.1), cfg.get("eta", 0.01),
                         cfg.get("C", 1.0), cfg.get("A_vk", DEFAULT_A_VK), table,
                         cfg.get("phi", PHI), cfg.get("toy"))


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def validate_params(p: ParamSet) -> ValidationReport:
    """Report every size constraint the construction relies on; never raises."""
    logX, logy = math.log(p.X), math.log(p.y)
    loglogX = math.log(logX)
    log_rho_uv = math.log(p.rho_u_minus_v) if p.rho_u_minus_v > 0 else -math.inf
    y_low = p.C * loglogX / p.sigma0          # log of the lower end of the y-range
    y_high = logX / p.C
    u_high = p.sigma0 * logX / (p.C * loglogX)
    p1_low = 4 * math.log(logX) - (2 / 3) * log_rho_uv
    p1_high = 20 * math.log(logX) - (14 / 3) * log_rho_uv
    half_y = math.log(p.y / 2)
    chain = p.log_P1 <= p.log_P2 <= p.log_P3 <= half_y + 1e-12
    checks = (
        Check("y_range_lower", logy >= y_low, logy, f"log y >= {y_low:.6g}"),
        Check("y_range_upper", logy <= y_high, logy, f"log y <= {y_high:.6g}"),
        Check("u_range_lower", p.u >= p.C, p.u, f"u >= C = {p.C:g}"),
        Check("u_range_upper", p.u <= u_high, p.u, f"u <= {u_high:.6g}"),
        Check("u_gt_3v", p.u > 3 * p.v, p.u, f"u > 3v = {3 * p.v:.6g}"),
        Check("P1_window", p1_low <= p.log_P1 <= p1_high, p.log_P1,
              f"log P1 in [{p1_low:.6g}, {p1_high:.6g}]"),
        Check("prime_chain", chain, p.log_P2,
              f"log P1 <= log P2 <= log P3 <= log(y/2): "
              f"{p.log_P1:.6g}, {p.log_P2:.6g}, {p.log_P3:.6g}, {half_y:.6g}"),
    )
    return ValidationReport(checks)


def log_threshold_h_almost_all(X: float, y: float, epsilon: float) -> float:
    if X <= math.e:
        raise DomainError(f"need X > e, got {X}")
    u = math.log(X) / math.log(y)
    if u < 1:
        raise DomainError(f"need u >= 1, got {u}")
    return (1 + epsilon) * (11 / 8 * u * math.log(u) + 4 * math.log(math.log(X)))


def threshold_h_almost_all(X: float, y: float, epsilon: float) -> float:
    """exp((1 + eps)(11/8 u log u + 4 log log X))."""
    return _safe_exp(log_threshold_h_almost_all(X, y, epsilon))


def log_threshold_h_all(x: float, y: float, epsilon: float) -> float:
    if x <= math.e:
        raise DomainError(f"need x > e, got {x}")
    u = math.log(x) / math.log(y)
    if u < 1:
        raise DomainError(f"need u >= 1, got {u}")
    return 0.5 * math.log(x) + (1 + epsilon) * (11 / 16 * u * math.log(u)
                                                + 2 * math.log(math.log(x)))


def threshold_h_all(x: float, y: float, epsilon: float) -> float:
    """sqrt(x) exp((1 + eps)(11/16 u log u + 2 log log x))."""
    return _safe_exp(log_threshold_h_all(x, y, epsilon))


def notational_checks(p: ParamSet, table, A: float) -> ValidationReport:
    """rho(u) <= rho(u - v) (asserted) and (A log X)^J rho(u - v)^eps / log X (reported)."""
    if A <= 0:
        raise DomainError(f"need A > 0, got {A}")
    ratio = p.rho_u / p.rho_u_minus_v if p.rho_u_minus_v > 0 else math.inf
    logX = math.log(p.X)
    log_lemma = (p.J * math.log(A * logX) + p.epsilon * math.log(p.rho_u_minus_v)
                 - math.log(logX))
    return ValidationReport((
        Check("rho_monotone", ratio <= 1.0, ratio, "rho(u)/rho(u-v) <= 1"),
        Check("multiplicity_ratio", None, _safe_exp(log_lemma),
              "(A log X)^J rho(u-v)^eps / log X, bounded by an implicit constant"),
    ))

