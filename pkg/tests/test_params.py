import math

import pytest

from friable.errors import DomainError
from friable.params import (derive_params, log_threshold_h_almost_all, notational_checks,
                            sigma0, threshold_h_all, threshold_h_almost_all, toy_params,
                            validate_params)


def test_u_is_exact_ratio_of_logs():
    p = derive_params(1e8, 1e4, 0.1, 0.1, 1.0)
    assert p.u == pytest.approx(2.0, rel=1e-15)


def test_sigma0_frozen():
    expected = 0.05 / (math.log(1e6) ** (2 / 3) * math.log(math.log(1e6)) ** (1 / 3))
    assert sigma0(1e6, 0.05) == pytest.approx(expected, rel=1e-14)
    assert sigma0(1e6, 0.05) == pytest.approx(0.006294655153800404, rel=1e-14)


def test_derived_formulas():
    p = derive_params(1e6, 1e3, 0.1, 0.01, 2.0)
    assert p.J == math.ceil(200 * p.u * math.log(p.u) / (p.sigma0 * math.log(p.y)))
    assert p.v == pytest.approx(p.J * math.log(p.y / 2) / math.log(p.y))
    assert p.P3 == pytest.approx(p.y / 2)
    assert p.log_P2 == pytest.approx((p.log_P1 + p.J * math.log(math.log(p.X))) / p.eta)
    assert not p.toy_mode


def test_toy_chain_passes():
    p = toy_params(1e4, 60, 1, 3, 9, 27)
    assert p.toy_mode
    rep = validate_params(p)
    chain = [c for c in rep.checks if "chain" in c.name]
    assert chain and all(c.passed for c in chain)


def test_u_range_fails_at_y_equals_X():
    p = derive_params(1e6, 1e6, 0.1, 0.1, 2.0, overrides={"J": 1, "P1": 2, "P2": 3, "P3": 4})
    rep = validate_params(p)
    assert not rep.all_passed
    assert any(c.name == "u_range_lower" and c.passed is False for c in rep.checks)


@pytest.mark.parametrize("bad", [dict(X=10), dict(y=1), dict(y=1e7), dict(epsilon=1.5),
                                 dict(C=0.5), dict(A_vk=0)])
def test_domain_errors(bad):
    args = dict(X=1e6, y=1e3, epsilon=0.1, eta=0.1, C=2.0, A_vk=0.05) | bad
    with pytest.raises(DomainError):
        derive_params(**args)


def test_threshold_almost_all():
    X = 1e6
    expected = math.exp(1.1 * (11 / 8 * 2 * math.log(2) + 4 * math.log(math.log(X))))
    assert threshold_h_almost_all(X, 1e3, 0.1) == pytest.approx(expected, rel=1e-12)
    assert threshold_h_almost_all(X, 1e3, 0.1) == pytest.approx(847676.74, rel=1e-7)
    assert threshold_h_almost_all(X, X, 0.0) == pytest.approx(math.log(X) ** 4, rel=1e-12)
    assert threshold_h_almost_all(X, 1e3, 0.2) > threshold_h_almost_all(X, 1e3, 0.1)
    assert log_threshold_h_almost_all(X, 1e3, 0.1) == pytest.approx(math.log(expected))


def test_threshold_all():
    x = 1e6
    assert threshold_h_all(x, 1e3, 0.1) == pytest.approx(920693.62, rel=1e-7)
    assert threshold_h_all(x, x, 0.0) == pytest.approx(math.sqrt(x) * math.log(x) ** 2,
                                                      rel=1e-12)
    for y in (50, 1e3, 1e5):
        assert threshold_h_all(x, y, 0.1) >= math.sqrt(x)


def test_notational_ratio(table):
    p = derive_params(1e6, 1e3, 0.1, 0.01, 2.0)
    rep = notational_checks(p, table, 2.0)
    assert rep.checks
    assert p.rho_u <= p.rho_u_minus_v
