from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nodalstab.frobenius import (
    BoundParams,
    RankSequence,
    assumption_check,
    check_weighted_bounds,
    degree_bound,
    degree_from_slope,
    euler_from_degree,
    geometric_sum,
    hw_chain_check,
    invariant_mu0,
    is_prime,
    largest_integer_below,
    p1_degree_check,
    p1_trivial_case,
    slope_bound_iterated,
    slope_bound_single,
    slope_from_degree,
    validate_rank_sequence,
    weakly_decreasing_compositions,
)

PRIMES = [2, 3, 5, 7, 11, 13]


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_largest_integer_below():
    assert largest_integer_below(F(1)) == 0
    assert largest_integer_below(F(1, 2)) == 0
    assert largest_integer_below(F(48, 49)) == 0
    assert largest_integer_below(F(-1, 2)) == -1
    assert largest_integer_below(F(3)) == 2


class TestRankSequences:
    def test_single_block(self):
        for p in (2, 5):
            rep = validate_rank_sequence(RankSequence((4,)), 4, p)
            assert rep.valid and rep.m == 0

    def test_tight(self):
        rep = validate_rank_sequence(RankSequence((1, 1, 1)), 3, 5)
        assert rep.valid and rep.m == 2 and rep.weighted_sum == 6

    def test_not_decreasing(self):
        rep = validate_rank_sequence(RankSequence((1, 2)), 3, 5)
        assert not rep.valid and not rep.checks["weakly_decreasing"]

    def test_m_bound_uses_p(self):
        rep = validate_rank_sequence(RankSequence((1, 1, 1)), 3, 2)
        assert not rep.checks["m_bound"]

    def test_compositions_count(self):
        # partition numbers
        assert [len(weakly_decreasing_compositions(h)) for h in range(1, 8)] == [1, 2, 3, 5, 7, 11, 15]

    def test_weighted_bounds_exhaustive(self):
        for h in range(1, 7):
            for seq in weakly_decreasing_compositions(h):
                assert check_weighted_bounds(seq) == (True, True)


class TestSlopeBounds:
    def test_single(self):
        assert slope_bound_single(F(3, 2), 0, 4) == F(3, 2)
        assert slope_bound_single(0, 1, 2) == 1
        assert slope_bound_single(-1, 3, 3) == 5

    def test_iterated_examples(self):
        assert slope_bound_iterated(BoundParams(7, 2, 3, 0, -1)) == -1
        assert slope_bound_iterated(BoundParams(7, 2, 3, 2, -1)) == 15
        for n in range(4):
            assert slope_bound_iterated(BoundParams(5, 4, 1, n, F(2, 3))) == F(2, 3)

    def test_iterated_rank_above_p(self):
        with pytest.raises(ValueError):
            slope_bound_iterated(BoundParams(2, 2, 3, 1, 0))

    def test_recurrence(self):
        for p in (2, 3, 5, 7):
            for r in range(1, p + 1):
                for g in range(1, 6):
                    prev = slope_bound_iterated(BoundParams(p, g, r, 0, 1 - g))
                    for n in range(1, 11):
                        cur = slope_bound_iterated(BoundParams(p, g, r, n, 1 - g))
                        assert cur - prev == p ** (n - 1) * (r - 1) * (g - 1)
                        prev = cur

    def test_geometric_sum(self):
        assert [geometric_sum(3, n) for n in range(4)] == [0, 1, 4, 13]


class TestDegreeBound:
    def test_p7(self):
        b = degree_bound(BoundParams(7, 2, 3, 2, -1))
        assert b.exact == F(48, 49) and b.uniform == 1 and b.deg_conclusion == 0

    def test_r2_g2_p5(self):
        b = degree_bound(BoundParams(5, 2, 2, 1, -1))
        assert b.uniform == F(1, 2) and b.deg_conclusion == 0

    def test_by_rank_is_informational(self):
        b = degree_bound(BoundParams(7, 2, 3, 2, -1))
        assert b.by_rank[3] == b.exact and b.by_rank[1] < b.exact

    def test_preconditions(self):
        with pytest.raises(ValueError):
            degree_bound(BoundParams(7, 2, 3, 1, 0))
        with pytest.raises(ValueError):
            degree_bound(BoundParams(7, 1, 3, 1, 0))
        with pytest.raises(ValueError):
            degree_bound(BoundParams(7, 2, 1, 1, -1))

    def test_exact_below_uniform(self):
        for p in (2, 3, 5, 7):
            for r in range(2, p + 1):
                for g in range(2, 6):
                    for n in range(1, 8):
                        b = degree_bound(BoundParams(p, g, r, n, 1 - g))
                        assert b.exact < b.uniform

    def test_assumption_forces_degree_zero(self):
        for p in (q for q in range(2, 98) if is_prime(q)):
            for r in range(2, min(5, p) + 1):
                for g in range(2, 11):
                    if assumption_check(p, r, g).holds:
                        assert degree_bound(BoundParams(p, g, r, 1, 1 - g)).deg_conclusion == 0


class TestMisc:
    def test_invariant_mu0(self):
        assert invariant_mu0(0, 1, 1) == 0
        assert invariant_mu0(0, 5, 4) == -3
        assert invariant_mu0(6, 3, 2) == 1

    def test_p1(self):
        assert p1_degree_check(0, 1, 2, 0)
        assert not p1_degree_check(0, 1, 2, 1)
        assert p1_degree_check(3, 1, 2, 1)
        assert p1_trivial_case(3, 5, 0) and not p1_trivial_case(3, 5, 1)

    @given(st.integers(-50, 50), st.integers(1, 6), st.integers(0, 10))
    def test_riemann_roch_round_trip(self, deg, rank, g):
        mu = slope_from_degree(deg, rank, g)
        assert mu == euler_from_degree(deg, rank, g) / rank
        assert degree_from_slope(mu, rank, g) == deg


class TestAssumption:
    def test_examples(self):
        rep = assumption_check(5, 2, 2)
        assert rep.threshold == 2 and rep.holds
        assert all(assumption_check(p, 1, g).holds for p in PRIMES for g in range(1, 6))
        rep = assumption_check(7, 2, 6)
        assert rep.threshold == 10 and not rep.holds

    def test_rank_two_specialization(self):
        for g in range(2, 51):
            rep = assumption_check(2, 2, g)
            assert rep.threshold == 2 * (g - 1)
            assert rep.specialization == f"rank 2: p > 2g - 2 = {2 * g - 2}"

    def test_not_prime(self):
        with pytest.raises(ValueError):
            assumption_check(9, 2, 2)


class TestChain:
    def test_p2_m2(self):
        rep = hw_chain_check(2, 2, 9)
        assert rep.g == 28
        assert [(l.lhs, l.rhs) for l in rep.links] == [(54, 54), (54, 10), (10, 2)]
        assert rep.all_links_hold
        assert rep.assumption_violated  # p = 2 is far below 2g - 2 = 54

    def test_p2_m3(self):
        rep = hw_chain_check(2, 3, 17)
        assert rep.g == 120
        assert [(l.lhs, l.rhs) for l in rep.links] == [(238, 238), (238, 10), (10, 2)]
        assert rep.all_links_hold

    def test_errors(self):
        with pytest.raises(ValueError, match="prime to p"):
            hw_chain_check(2, 2, 10)
        with pytest.raises(ValueError):
            hw_chain_check(2, 2, 13)
        with pytest.raises(ValueError):
            hw_chain_check(2, 0, 3)

    def test_first_link_over_range(self):
        # at d = 2p^m + 1 the first link is an equality, and g grows with d
        for p in (2, 3, 5):
            for m in (1, 2, 3):
                q = p**m
                for d in range(2 * q + 1, 3 * q):
                    if d % p:
                        rep = hw_chain_check(p, m, d)
                        assert rep.links[0].holds
