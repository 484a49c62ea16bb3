import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import admissible_subset_sums, min_fib_summands, sz_by_scan
from zeckprimes.numeration import (
    ZeckDigits, carry_mismatch_count, create_zero_shift, digit, fib,
    fibword_morphic, sz, sz_array, sz_trunc, v, v_array, w_seq, zeck_expand,
    zeck_value,
)

LOG_PHI = math.log((1 + math.sqrt(5)) / 2)
naturals = st.integers(min_value=0, max_value=2**62)


def test_fib_values():
    assert fib(0) == 0
    assert fib(1) == fib(2) == 1
    assert fib(10) == 55 and fib(11) == 89
    assert fib(93) == fib(92) + fib(91) > 2**63
    assert fib(250) == fib(249) + fib(248)


def test_expand_examples():
    assert zeck_expand(0) == ZeckDigits() and zeck_expand(0).length == 0
    assert zeck_expand(4).indices == (2, 4)
    assert zeck_expand(100).indices == (4, 6, 11)
    assert zeck_expand(100).length == 11


def test_value_examples():
    assert zeck_value(ZeckDigits()) == 0
    assert zeck_value(ZeckDigits.from_indices([2])) == 1
    assert zeck_value(ZeckDigits.from_indices([4, 6, 11])) == 100
    with pytest.raises(ValueError):
        ZeckDigits.from_indices([3, 4])


def test_greedy_matches_unique_subset_sum():
    sums = admissible_subset_sums(20)
    for n in range(0, 6000):
        assert len(sums[n]) == 1
        assert zeck_expand(n).indices == sums[n][0]


def test_minimality_small():
    best = min_fib_summands(600)
    for n in range(600):
        assert sz(n) == best[n]


def test_sz_and_truncation_examples():
    assert all(sz(fib(k)) == 1 for k in range(2, 120))
    assert sz(100) == 3
    assert all(sz_trunc(n, 2) == 0 for n in range(200))
    assert v(100, 7) == 11
    assert all(v(n, 2) == 0 for n in range(50))
    assert all(v(fib(k), k) == 0 for k in range(2, 60))


@given(naturals, st.integers(min_value=2, max_value=95))
def test_truncation_consistency(n, lam):
    assert sz_trunc(n, lam) == sz(v(n, lam))
    assert 0 <= v(n, lam) < fib(lam)


@given(naturals)
def test_expand_roundtrip(n):
    d = zeck_expand(n)
    assert zeck_value(d) == n
    assert zeck_expand(zeck_value(d)) == d
    assert sz(n) == sz_by_scan(n)


def test_vectorised_agree():
    rng = np.random.default_rng(7)
    n = np.concatenate([np.arange(5000), rng.integers(0, 2**62, 5000)])
    ref = [sz(int(x)) for x in n]
    assert list(sz_array(n)) == ref
    assert list(sz_array(n, 13)) == [sz_trunc(int(x), 13) for x in n]
    assert list(v_array(n, 17)) == [v(int(x), 17) for x in n]


def test_shift_relation():
    # holds below F_{lam-1}; above it the top digits collide and carry
    for lam in range(2, 26):
        u = np.arange(fib(lam - 1))
        assert np.array_equal(sz_array(u + fib(lam)), sz_array(u) + 1)
    assert sz(1 + fib(3)) == 1


def test_create_zero_shift():
    assert create_zero_shift(0, 5) == 0
    assert create_zero_shift(1, 3) == 1
    for ell in range(2, 12):
        for n in range(400):
            y = create_zero_shift(n, ell)
            brute = next(t for t in range(fib(ell)) if v(n + t, ell) == 0)
            assert y == brute


@given(naturals, st.integers(min_value=2, max_value=80))
def test_create_zero_shift_postcondition(n, ell):
    y = create_zero_shift(n, ell)
    assert 0 <= y < fib(ell) and v(n + y, ell) == 0


def test_carry_examples():
    assert carry_mismatch_count(500, 0, 9) == 0
    assert carry_mismatch_count(1000, 1, 20) <= 1000 / fib(19)
    assert carry_mismatch_count(10**4, 5, 12) <= 10**4 * 5 / fib(11)


def brute_carry(N, r, lam):
    return sum(sz(n + r) - sz(n) != sz_trunc(n + r, lam) - sz_trunc(n, lam) for n in range(N))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3000), st.integers(0, 20), st.integers(2, 20))
def test_carry_matches_brute_and_bound(N, r, lam):
    count = carry_mismatch_count(N, r, lam)
    assert count == brute_carry(N, r, lam)
    if lam >= 3:
        assert count <= N * r / fib(lam - 1)


def test_morphic_word():
    assert fibword_morphic(8) == [0, 1, 1, 1, 0, 1, 0, 0]
    word = fibword_morphic(10**5)
    assert word[0] == 0
    assert np.array_equal(np.array(word), sz_array(np.arange(10**5)) % 2)


def test_w_seq_examples():
    assert w_seq(4, 9) == [0, 3, 5, 8, 11, 13, 16, 18, 21]
    assert w_seq(3, 6) == [0, 2, 3, 5, 7, 8]
    assert list(np.diff(w_seq(4, 9))) == [3, 2, 3, 3, 2, 3, 2, 3]


@pytest.mark.parametrize("lam", range(3, 13))
def test_w_seq_gap_law(lam):
    w = w_seq(lam, 10**4)
    gaps = np.diff(w)
    short = digits_at_two(np.arange(len(gaps)))
    assert set(np.unique(gaps)) <= {fib(lam), fib(lam - 1)}
    assert np.array_equal(gaps == fib(lam - 1), short == 1)


def digits_at_two(n):
    from zeckprimes.numeration import digits_array
    return digits_array(n, [2])[2]


@given(st.integers(4, 70), st.integers(1, 10**6))
def test_support_window_of_multiples(k, m):
    assume(m < fib(k - 3))
    idx = zeck_expand(m * fib(k)).indices
    spread = math.log(m) / LOG_PHI
    assert all(k - spread - 1 <= ell <= k + spread + 2 for ell in idx)


@given(naturals, naturals)
def test_support_of_sum_and_difference(n, m):
    assume(n > 0 and m > 0)
    dn, dm = zeck_expand(n).indices, zeck_expand(m).indices
    lo = min(dn[0], dm[0]) - 3
    hi = max(dn[-1], dm[-1]) + 2
    for value in (n + m, abs(n - m)):
        assert all(lo <= ell <= hi for ell in zeck_expand(value).indices)


def test_digit_accessor():
    assert digit(100, 11) == 1 and digit(100, 5) == 0 and digit(100, 300) == 0
