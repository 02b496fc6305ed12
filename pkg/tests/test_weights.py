import itertools
import math
from collections import Counter

import numpy as np
import pytest

from friable.errors import CapacityError, CheckFailure, DomainError, RangeError
from friable.params import toy_params
from friable.smooth import lpf_table
from friable.weights import (WeightWindow, lattice_size, primes_in_dyadic, r_set, support_interval,
                             weight_average, weight_bound_check, weights_enumerate,
                             weights_tilde_enumerate, window_sum)


@pytest.fixture(scope="module")
def toy0():
    # q1 in {3}, q2 in {5, 7}
    return toy_params(100, 60, 0, 2, 4, 7.5)


@pytest.fixture(scope="module")
def toy1():
    # adds p in {11, 13}
    return toy_params(100, 60, 1, 2, 4, 7.5)


def test_primes_in_dyadic():
    assert primes_in_dyadic(2).tolist() == [3]
    assert primes_in_dyadic(10).tolist() == [11, 13, 17, 19]
    assert primes_in_dyadic(7.5).tolist() == [11, 13]


def test_hand_enumeration_J0(toy0):
    w = weights_enumerate(toy0, 1, 1000, M=[1])
    assert w.as_dict() == {15: 1, 21: 1}
    assert w[15] == 1 and w[16] == 0


def test_hand_enumeration_J1(toy1):
    w = weights_enumerate(toy1, 1, 10_000, M=[1])
    assert w.as_dict() == {165: 1, 195: 1, 231: 1, 273: 1}
    assert weight_bound_check(w).passed


def test_direct_convolution_oracle():
    p = toy_params(1e4, 60, 2, 2, 4, 7.5)
    M = [1, 2, 3, 4, 6]
    w = weights_enumerate(p, 1, 10 ** 7, M=M)
    oracle = Counter(a * b * c * d * m for a, b, (c, d), m in
                     itertools.product([3], [5, 7], itertools.product([11, 13], repeat=2), M))
    assert w.as_dict() == dict(oracle)
    assert w[3 * 5 * 11 * 13 * 6] == 2


def test_support_is_smooth_and_in_interval():
    p = toy_params(1e4, 60, 1, 2, 4, 7.5)
    a, b = support_interval(p)
    w = weights_enumerate(p, 1, int(b) + 1)
    assert w.ns.size > 0
    assert w.ns.min() >= a and w.ns.max() <= b
    tab = lpf_table(int(w.ns.min()), int(w.ns.max()) + 1)
    assert np.all(tab.lpf[w.ns - tab.lo] <= p.y)


def test_window_restriction(toy1):
    full = weights_enumerate(toy1, 1, 10_000, M=[1])
    part = weights_enumerate(toy1, 200, 250, M=[1])
    assert part.as_dict() == {231: 1}
    assert window_sum(full, 165, 30) == 2
    assert window_sum(full, 166, 28) == 0


def test_average(toy1):
    w = weights_enumerate(toy1, 1, 10_000, M=[1])
    rep = weight_average(w, 100, 200)
    assert rep.average == pytest.approx(4 / 200)
    with pytest.raises(RangeError):
        window_sum(w, 9_990, 20)
    with pytest.raises(DomainError):
        weight_average(w, 100, 0)


def test_average_zero_window(toy0):
    w = weights_enumerate(toy0, 30, 100, M=[1])
    assert w.total == 0
    assert weight_average(w, 30, 50).average == 0.0


def test_bound_check_empty_and_strict(toy0):
    empty = weights_enumerate(toy0, 30, 100, M=[1])
    assert weight_bound_check(empty).passed
    # multiplicity 50 at n = 15 is far above (log 15)^2 / (log 2 log 4)
    heavy = WeightWindow(1, 100, np.array([15, 21]), np.array([50, 1]), toy0)
    rep = weight_bound_check(heavy)
    assert not rep.passed and rep.offenders == (15,)
    with pytest.raises(CheckFailure):
        weight_bound_check(heavy, strict=True)


def test_tilde_matches_shifted_sum(toy1):
    base = weights_enumerate(toy1, 1, 10 ** 6, M=[1, 2])
    R = 5
    rs = r_set(toy1, R)
    assert rs.tolist() == [6, 7, 8, 9, 10]
    tw = weights_tilde_enumerate(toy1, R, 1, 10 ** 6, M=[1, 2])
    oracle = Counter()
    for n, c in base.rows():
        for r in rs.tolist():
            oracle[n * r] += c
    assert tw.as_dict() == dict(oracle)
    assert tw.tilde


def test_tilde_empty_R(toy1):
    tw = weights_tilde_enumerate(toy1, 0, 1, 10 ** 6, M=[1])
    assert tw.total == 0


def test_capacity(toy1):
    assert lattice_size(toy1, M=[1]) == 4
    with pytest.raises(CapacityError):
        weights_enumerate(toy1, 1, 10 ** 6, M=[1], max_lattice=3)
    with pytest.raises(DomainError):
        weights_enumerate(toy1, 10, 10, M=[1])
