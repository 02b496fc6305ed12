import numpy as np
from hypothesis import given, settings, strategies as st

from friable import dpoly
from friable.mellin import SmoothingParams, eta, eta_mellin
from friable.scanner import fraction_curve
from friable.smooth import lpf_table, psi, psi_interval

small_polys = st.dictionaries(st.integers(1, 300), st.integers(1, 5), min_size=1, max_size=12) \
    .map(lambda d: dpoly.make_poly(list(d), list(d.values())))


@settings(max_examples=60, deadline=None)
@given(small_polys, small_polys, st.floats(-50, 50))
def test_multiply_is_pointwise_product(p, q, t):
    pq = dpoly.multiply(p, q)
    assert abs(dpoly.evaluate(pq, t) - dpoly.evaluate(p, t) * dpoly.evaluate(q, t)) <= 1e-9
    assert pq.as_dict() == dpoly.multiply(q, p).as_dict()
    assert int(pq.a.sum()) == int(p.a.sum()) * int(q.a.sum())


@settings(max_examples=40, deadline=None)
@given(small_polys, st.floats(-30, 30), st.floats(0.1, 30), st.floats(0.1, 30))
def test_exact_mean_value_additive(p, t0, l1, l2):
    a = dpoly.mean_value_exact(p, t0, t0 + l1)
    b = dpoly.mean_value_exact(p, t0 + l1, t0 + l1 + l2)
    whole = dpoly.mean_value_exact(p, t0, t0 + l1 + l2)
    assert a >= 0 and b >= 0
    assert abs(a + b - whole) <= 1e-10 * max(1.0, whole)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10 ** 7), st.integers(1, 2000))
def test_lpf_is_a_prime_factor(lo, width):
    tab = lpf_table(lo, lo + width)
    ns = np.arange(lo, lo + width)
    assert np.all(ns % tab.lpf == 0)
    rest = ns // tab.lpf
    # what remains after removing P(n) has no prime factor above P(n)
    sub = lpf_table(1, int(rest.max()) + 1).lpf[rest - 1]
    assert np.all(sub <= tab.lpf)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5000), st.integers(0, 500), st.floats(2, 100))
def test_psi_interval_is_difference(x, h, y):
    assert psi_interval(x, h, y) == psi(x + h, y) - psi(x - 1, y)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 0.4), st.floats(0.0, 0.5), st.floats(-40, 40))
def test_mellin_conjugate_symmetry(xi, kappa, t):
    sp = SmoothingParams(xi, kappa)
    a = eta_mellin(1 + 1j * t, sp)
    b = eta_mellin(1 - 1j * t, sp)
    assert abs(a - np.conj(b)) <= 1e-12 * max(1.0, abs(a))
    assert abs(a) <= 2 * kappa + xi + 1e-12


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 0.4), st.floats(0.0, 0.5), st.floats(0, 3))
def test_eta_in_unit_interval(xi, kappa, z):
    v = eta(z, SmoothingParams(xi, kappa))
    assert 0.0 <= v <= 1.0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=80), st.floats(0, 1))
def test_extract_is_well_spaced(values, thr):
    nodes = 0.37 * np.arange(len(values))
    ws = dpoly.extract_well_spaced(nodes, values, thr)
    pts = np.array(ws.points)
    assert np.all(np.diff(pts) >= 1)
    assert all(values[int(round(t / 0.37))] >= thr for t in ws.points)
    # the global maximum is always kept when it clears the threshold
    if max(values) >= thr:
        assert any(values[int(round(t / 0.37))] == max(values) for t in ws.points)


@settings(max_examples=15, deadline=None)
@given(st.integers(50, 3000), st.floats(2, 60), st.lists(st.integers(0, 60), min_size=2,
                                                       max_size=6))
def test_fraction_monotone_in_h(X, y, hs):
    hs = sorted(hs)
    f = fraction_curve(X, y, hs)
    assert np.all(np.diff(f) >= 0) and np.all((0 <= f) & (f <= 1))
