import numpy as np
import pytest

from friable.errors import DomainError
from friable.smooth import (iter_lpf_segments, lpf_table, pairwise_report,
                            pairwise_smooth_count, psi, psi_interval, psi_interval_report,
                            psi_report, small_primes, smooth_set)


def largest_prime_factor(n):
    if n == 1:
        return 1
    best, d = 1, 2
    while d * d <= n:
        while n % d == 0:
            best, n = d, n // d
        d += 1
    return max(best, n) if n > 1 else best


def brute_psi(x, y):
    return sum(1 for n in range(1, x + 1) if largest_prime_factor(n) <= y)


def test_small_primes():
    assert small_primes(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert small_primes(1).size == 0


def test_lpf_examples():
    tab = lpf_table(1, 200)
    assert tab[1] == 1 and tab[12] == 3 and tab[97] == 97 and tab[128] == 2
    assert all(tab[n] == largest_prime_factor(n) for n in range(1, 200))


def test_lpf_random_against_trial_division():
    rng = np.random.Generator(np.random.Philox(7))
    lo = 10 ** 8 - 200_000
    tab = lpf_table(lo, 10 ** 8 + 1)
    for n in rng.integers(lo, 10 ** 8 + 1, size=300).tolist():
        assert tab[n] == largest_prime_factor(n)


def test_segmented_matches_monolithic():
    whole = lpf_table(1000, 60_000, segment_size=1 << 20).lpf
    parts = np.concatenate([s for _, s in iter_lpf_segments(1000, 60_000, segment_size=777)])
    assert np.array_equal(whole, parts)
    threaded = lpf_table(1000, 60_000, segment_size=1000, threads=3).lpf
    assert np.array_equal(whole, threaded)


def test_psi_oracles():
    assert psi(16, 2) == 5
    assert psi(100, 5) == 34 == brute_psi(100, 5)
    assert psi(50, 100) == 50
    assert psi(10 ** 6, 10 ** 3) == 344299


def test_psi_interval():
    assert psi_interval(32, 32, 2) == 2
    assert psi_interval(10, 5, 100) == 6
    assert psi_interval(500, 80, 7) == brute_psi(580, 7) - brute_psi(499, 7)


def test_reports(table):
    r = psi_report(10 ** 6, 10 ** 3, table)
    assert r.count == 344299
    assert r.prediction == pytest.approx(10 ** 6 * 0.30685281944005469)
    assert abs(r.relative_error) <= 0.2
    ri = psi_interval_report(10 ** 6, 10 ** 4, 10 ** 3, table)
    # x y^(-5/12) ~ 56234 > h
    assert not ri.in_validity_range
    assert ri.prediction == pytest.approx(10 ** 4 * 0.30685281944005469)
    assert psi_interval_report(10 ** 6, 10 ** 5, 10 ** 3, table).in_validity_range


def test_smooth_set():
    s = smooth_set(4, 41, 5)
    expected = [n for n in range(4, 41) if largest_prime_factor(n) <= 5]
    assert s.members.tolist() == expected
    assert 36 in s and 7 not in s
    assert len(smooth_set(1, 2, 2)) == 1
    assert len(smooth_set(5, 5, 2)) == 0


def test_pairwise_small():
    assert pairwise_smooth_count(10, 3, 1, 1) == 0
    assert pairwise_smooth_count(2, 2, 1, 2) == 0
    x, y = 300, 7
    oracle = sum(1 for n in range(x + 1, 2 * x + 1)
                 if largest_prime_factor(n) <= y and largest_prime_factor(3 * n - 5) <= y)
    assert pairwise_smooth_count(x, y, 3, -5) == oracle


def test_pairwise_bounded_by_single(table):
    r = pairwise_report(10 ** 4, 30, 1, 1, table)
    assert r.count <= r.single_count == psi(2 * 10 ** 4, 30) - psi(10 ** 4, 30)


def test_pairwise_domain():
    with pytest.raises(DomainError):
        pairwise_smooth_count(10, 3, 0, 1)
    with pytest.raises(DomainError):
        pairwise_smooth_count(10, 3, 1, 0)
