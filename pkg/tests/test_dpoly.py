import math
from collections import Counter

import numpy as np
import pytest
from scipy.integrate import quad

from friable import dpoly
from friable.errors import CapacityError, CheckFailure, DomainError, RangeError
from friable.params import toy_params
from friable.weights import weights_enumerate


def brute_eval(terms, t, sigma=1.0):
    return sum(a * n ** -(sigma + 1j * t) for n, a in terms.items())


def quad_mean(terms, t0, t1, sigma=1.0):
    f = lambda t: abs(brute_eval(terms, t, sigma)) ** 2
    val, _ = quad(f, t0, t1, limit=2000, epsabs=0, epsrel=1e-12)
    return val


def test_make_poly_merges_and_validates():
    p = dpoly.make_poly([5, 3, 5, 7], [1, 2, 3, 0])
    assert p.as_dict() == {3: 2, 5: 4}
    assert p.n_min == 3 and p.n_max == 5 and p.coeff(5) == 4 and p.coeff(4) == 0
    with pytest.raises(DomainError):
        dpoly.make_poly([0, 1])
    with pytest.raises(DomainError):
        dpoly.make_poly([2], [-1])


def test_from_primes():
    assert dpoly.from_primes(2, 4).as_dict() == {3: 1}
    assert dpoly.from_primes(10, 20).as_dict() == {11: 1, 13: 1, 17: 1, 19: 1}
    assert len(dpoly.from_primes(10 ** 6, 2 * 10 ** 6)) == 70435


def test_evaluate_examples():
    p = dpoly.make_poly([2, 3, 5], [1.0, 2.0, 0.5])
    assert dpoly.evaluate(p, 0.0) == pytest.approx(1 / 2 + 2 / 3 + 0.5 / 5)
    single = dpoly.make_poly([2])
    assert abs(dpoly.evaluate(single, 17.3)) == pytest.approx(0.5, rel=1e-14)
    two = dpoly.make_poly([2, 4])
    assert dpoly.evaluate(two, math.pi / math.log(2)) == pytest.approx(-0.25, abs=1e-14)


def test_evaluate_uniform_matches_direct():
    rng = np.random.Generator(np.random.Philox(3))
    p = dpoly.make_poly(rng.integers(1, 5000, 300), rng.uniform(0, 1, 300))
    ts = -40.0 + 0.013 * np.arange(1000)
    direct = dpoly.evaluate(p, ts, 0.7)
    fast = dpoly.evaluate_uniform(p, -40.0, 0.013, 1000, 0.7, block=64)
    assert np.max(np.abs(direct - fast)) <= 1e-11
    terms = p.as_dict()
    for k in (0, 311, 999):
        assert direct[k] == pytest.approx(brute_eval(terms, ts[k], 0.7), abs=1e-11)


def test_multiply_matches_convolution():
    p = dpoly.make_poly([1, 2, 3, 6], [1, 2, 1, 3])
    q = dpoly.make_poly([2, 3, 4], [5, 1, 1])
    oracle = Counter()
    for m, a in p.as_dict().items():
        for n, b in q.as_dict().items():
            oracle[m * n] += a * b
    assert dpoly.multiply(p, q).as_dict() == dict(oracle)
    assert (p * dpoly.unit_poly()).as_dict() == p.as_dict()
    P3 = dpoly.from_primes(7.5, 15)
    assert dpoly.power(P3, 2).as_dict() == {121: 1, 143: 2, 169: 1}
    assert dpoly.power(P3, 0).as_dict() == {1: 1}


def test_multiply_capacity():
    p = dpoly.make_poly(np.arange(1, 101))
    with pytest.raises(CapacityError):
        dpoly.multiply(p, p, max_terms=5000)
    big = dpoly.make_poly([2 ** 40])
    with pytest.raises(CapacityError):
        dpoly.multiply(big, big)


def test_factorisation_equals_weights():
    p = toy_params(1e4, 60, 1, 2, 4, 7.5)
    F = dpoly.factorisation(p)
    w = weights_enumerate(p, 1, F.n_max + 1)
    assert F.as_dict() == w.as_dict()
    toy = toy_params(100, 60, 0, 2, 4, 7.5)
    assert dpoly.factorisation(toy, M=[1]).as_dict() == {15: 1, 21: 1}


def test_grid():
    g = dpoly.make_grid(0.0, 10.0, 1000)
    assert g.n_intervals % 2 == 0
    assert g.step <= math.pi / (4 * math.log(1000))
    assert g.simpson_weights().sum() == pytest.approx(10.0)
    with pytest.raises(DomainError):
        dpoly.make_grid(1.0, 1.0, 10)


def test_mean_value_single_term():
    p = dpoly.make_poly([7], [3.0])
    T = 123.4
    exact = 2 * T * 9 / 49
    assert dpoly.mean_value(p, -T, T) == pytest.approx(exact, rel=1e-10)
    assert dpoly.mean_value_exact(p, -T, T) == pytest.approx(exact, rel=1e-14)


def test_mean_value_two_term_beat():
    p = dpoly.make_poly([2, 3])
    T = 50.0
    d = math.log(1.5)
    exact = 2 * T * (1 / 4 + 1 / 9) + 2 * (1 / 6) * 2 * math.sin(T * d) / d
    assert dpoly.mean_value(p, -T, T, tol=1e-10) == pytest.approx(exact, rel=1e-8)
    assert dpoly.mean_value_exact(p, -T, T) == pytest.approx(exact, rel=1e-13)


def test_mean_value_against_quad():
    terms = {3: 1.0, 5: 0.5, 8: 2.0, 13: 0.25}
    p = dpoly.make_poly(list(terms), list(terms.values()))
    oracle = quad_mean(terms, 1.0, 40.0)
    assert dpoly.mean_value(p, 1.0, 40.0, tol=1e-11) == pytest.approx(oracle, rel=1e-9)
    assert dpoly.mean_value_exact(p, 1.0, 40.0) == pytest.approx(oracle, rel=1e-10)


def test_mean_value_additive_and_empty():
    p = dpoly.from_primes(20, 80)
    whole = dpoly.mean_value(p, 0.0, 90.0, tol=1e-9)
    split = dpoly.mean_value(p, 0.0, 37.0, tol=1e-9) + dpoly.mean_value(p, 37.0, 90.0, tol=1e-9)
    assert abs(whole - split) <= 2e-9 * whole
    empty = dpoly.make_poly([])
    assert dpoly.mean_value(empty, 0, 10) == 0.0
    assert dpoly.mean_value_exact(empty, 0, 10) == 0.0


def test_region_partition():
    assert dpoly.region_alphas(1 / 32) == (0.125, 0.1875)
    p = toy_params(1e4, 60, 1, 2, 4, 7.5, eta=0.01)
    F = dpoly.factorisation(p)
    grid = dpoly.make_grid(p.y ** 0.125, 300.0, F.n_max)
    P1, P2 = dpoly.from_primes(p.P1, 2 * p.P1), dpoly.from_primes(p.P2, 2 * p.P2)
    parts = dpoly.partition_regions(P1, P2, grid, p.P1, p.P2, beta=0.0)
    assert set(np.unique(parts.labels).tolist()) <= {1, 2, 3}
    assert sum(parts.counts().values()) == grid.nodes.size
    # direct comparison on one node
    k = 17
    v1 = abs(dpoly.evaluate(P1, grid.nodes[k]))
    v2 = abs(dpoly.evaluate(P2, grid.nodes[k]))
    label = 1 if v1 <= p.P1 ** -0.25 else (2 if v2 <= p.P2 ** -0.25 else 3)
    assert parts.labels[k] == label
    rep = dpoly.region_contributions(F, parts, grid, p)
    assert sum(rep.by_region.values()) == pytest.approx(rep.total, rel=1e-12)
    assert rep.total == pytest.approx(dpoly.mean_value_exact(F, grid.t_start, grid.t_end),
                                      rel=1e-6)
    assert len(rep.reference_terms) == 3
    with pytest.raises(DomainError):
        dpoly.partition_regions(P1, P2, grid, p.P1, p.P2)


def test_region_contributions_zero_poly():
    grid = dpoly.make_grid(0.0, 10.0, 100)
    P = dpoly.from_primes(2, 4)
    parts = dpoly.partition_regions(P, P, grid, 2.0, 2.0, beta=0.01)
    rep = dpoly.region_contributions(dpoly.make_poly([]), parts, grid)
    assert rep.total == 0.0 and all(v == 0.0 for v in rep.by_region.values())


def test_mvt_single_term():
    p = dpoly.make_poly([101], [2.0])
    rep = dpoly.mvt_check(p, 10.0)
    assert rep.lhs == pytest.approx(2 * 10.0 * 4.0)
    assert rep.ratio == pytest.approx(2 * 10.0 / (10.0 + 50.5))
    assert rep.passed and rep.asserted and rep.lemma == "mean_value_theorem"


def test_mvt_strict_failure():
    p = dpoly.make_poly(np.arange(51, 101))
    rep = dpoly.mvt_check(p, 100.0, C_check=1e-3)
    assert not rep.passed
    with pytest.raises(CheckFailure):
        dpoly.mvt_check(p, 100.0, C_check=1e-3, strict=True)
    with pytest.raises(DomainError):
        dpoly.mvt_check(dpoly.make_poly([2, 10]), 10.0)


def test_near_diagonal_sum():
    p = dpoly.make_poly([10, 11, 13, 20], [1.0, 2.0, 3.0, 4.0])
    d = p.as_dict()
    for K in (0.5, 1, 2, 3, 10):
        oracle = sum(d[n] * d.get(n + k, 0.0) for n in d for k in range(1, int(K) + 1))
        assert dpoly.near_diagonal_sum(p, K) == pytest.approx(oracle)


def test_improved_mvt():
    p = dpoly.make_poly([60, 70, 90])
    rep = dpoly.improved_mvt_check(p, 500.0)
    # T >= 2X leaves only the diagonal term
    assert rep.rhs_terms[1] == 0.0
    assert rep.rhs_terms[0] == pytest.approx(500.0 * 3)
    assert rep.passed


def test_moment_check():
    P = dpoly.make_poly([3])
    A = dpoly.unit_poly()
    rep = dpoly.moment_check(P, A, 1, 20.0, 100.0, 2.0)
    assert rep.lhs == pytest.approx(2 * 20.0 / 9)
    assert rep.rhs_terms[0] == pytest.approx((0.2 + 4.0) * 4)
    empty = dpoly.moment_check(P, dpoly.make_poly([]), 2, 20.0, 100.0, 2.0)
    assert empty.lhs == 0.0
    assert dpoly.moment_ell(10, 100) == 2


def test_extract_well_spaced():
    nodes = np.array([0.0, 0.5, 1.0, 3.0])
    assert len(dpoly.extract_well_spaced(nodes, [0, 0, 0, 0], 1.0)) == 0
    assert dpoly.extract_well_spaced(nodes, [0, 5, 0, 0], 1.0).points == (0.5,)
    ws = dpoly.extract_well_spaced(nodes, [2.0, 3.0, 0, 0], 1.0)
    assert ws.points == (0.5,)
    with pytest.raises(DomainError):
        dpoly.WellSpacedSet((0.0, 0.5))


def test_large_values():
    P = dpoly.from_primes(50, 100)
    empty = dpoly.large_values_check(P, dpoly.WellSpacedSet(()), 2.0, 100.0)
    assert empty.lhs == 0.0 and empty.passed
    with pytest.raises(DomainError):
        dpoly.large_values_check(P, dpoly.WellSpacedSet((0.0,)), 1.0, 100.0)
    V = 1.0 / abs(dpoly.evaluate(P, 0.0))
    rep = dpoly.large_values_check(P, dpoly.WellSpacedSet((0.0,)), max(V, 1.0), 100.0)
    assert rep.lhs == 1.0 and math.isfinite(rep.ratio)


def test_halasz_montgomery():
    G = dpoly.make_poly([7], [1.5])
    rep = dpoly.halasz_montgomery_check(G, dpoly.WellSpacedSet((3.0,)), 10.0)
    assert rep.lhs == pytest.approx(2.25)
    assert rep.ratio <= 1
    empty = dpoly.halasz_montgomery_check(G, dpoly.WellSpacedSet(()), 10.0)
    assert empty.lhs == 0.0 and empty.passed
    with pytest.raises(RangeError):
        dpoly.halasz_montgomery_check(G, dpoly.WellSpacedSet((30.0,)), 10.0)


def test_pointwise_bound():
    P = dpoly.from_primes(500, 1000)
    grid = dpoly.make_grid(0.0, 500.0, P.n_max)
    rep = dpoly.pointwise_bound_check(P, grid, 0.01, 1e6)
    assert math.isfinite(rep.ratio) and rep.ratio > 0
    assert abs(dpoly.evaluate(P, 0.0)) == pytest.approx(
        sum(1 / p for p in P.ns.tolist()), rel=1e-14)
    assert rep.notes["t_within_X"]


def test_parseval_trivial_cases():
    p = toy_params(1e3, 60, 1, 2, 4, 7.5)
    X = 1000
    w = weights_enumerate(p, X, 2 * X + 200)
    same = dpoly.parseval_discrepancy(w, 50, 50, 2.0)
    assert same.lhs == 0.0
    zero = weights_enumerate(toy_params(1e3, 60, 1, 2, 4, 7.5), X, 2 * X + 200, M=[10 ** 6])
    rep = dpoly.parseval_discrepancy(zero, 10, 50, 2.0)
    assert rep.lhs == 0.0 and rep.rhs_terms == (0.0, 0.0, 0.0)
    with pytest.raises(RangeError):
        dpoly.parseval_discrepancy(w, 10, 500, 2.0)


def test_parseval_lhs_brute():
    rng = np.random.Generator(np.random.Philox(11))
    X, base, h1, h2 = 50, 40, 3, 7
    dense = rng.integers(0, 3, 2 * X + h2 + 2 - base)
    w = dict(zip(range(base, base + dense.size), dense.tolist()))
    S = lambda x, h: sum(w.get(n, 0) for n in range(math.ceil(x), math.floor(x + h) + 1))
    # the integrand is constant on each (k-1, k); sample its midpoint
    oracle = np.mean([(S(k - 0.5, h1) / h1 - S(k - 0.5, h2) / h2) ** 2
                      for k in range(X + 1, 2 * X + 1)])
    assert dpoly.parseval_lhs(dense, base, X, h1, h2) == pytest.approx(oracle, rel=1e-14)
