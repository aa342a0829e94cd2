import math
import random

import pytest

from waring import aux_count as ac
from waring import expsum_arcs as ea
from waring import smooth_sets as sm
from waring.errors import BudgetError, CoprimalityError, DomainError


class TestRepFunction:
    def test_two_squares(self):
        rep = ac.rep_function([[1, 2], [1, 2]], 2)
        assert rep.table == {2: 1, 5: 2, 8: 1}
        assert rep.total == 4

    def test_single_domain_power(self):
        rep = ac.rep_function([[1]], 5)
        assert rep.table == {1: 1}

    def test_injective_single(self):
        rep = ac.rep_function([[1, 2, 3]], 3)
        assert rep.table == {1: 1, 8: 1, 27: 1}
        assert rep.total == 3

    def test_conservation(self):
        rng = random.Random(7)
        for _ in range(20):
            doms = [sorted(rng.sample(range(0, 20), rng.randint(1, 6)))
                    for _ in range(rng.randint(1, 4))]
            rep = ac.rep_function(doms, rng.randint(1, 4))
            assert sum(rep.table.values()) == rep.total
            assert all(c >= 1 for c in rep.table.values())

    def test_budget(self):
        with pytest.raises(BudgetError) as err:
            ac.rep_function([list(range(100))] * 3, 2, budget_ops=10**5)
        assert err.value.predicted == 100**3

    def test_empty_domain(self):
        with pytest.raises(DomainError):
            ac.rep_function([[1], []], 2)


class TestSCount:
    def test_pair_of_squares(self):
        assert ac.s_count([1, 2], 2, 2).S == 6

    def test_interval_squares(self):
        assert ac.s_count([1, 2, 3], 2, 2).S == 15

    def test_strictly_monotone_single(self):
        res = ac.s_count([1, 2, 3], 1, 3)
        assert res.S == 3 == res.set_size

    def test_diagonal_bound(self):
        rng = random.Random(11)
        for _ in range(15):
            X = sorted(rng.sample(range(1, 40), rng.randint(2, 7)))
            s = rng.randint(1, 3)
            res = ac.s_count(X, s, rng.randint(1, 4))
            assert res.S >= res.diagonal_lb == len(X) ** s

    def test_diagonal_equality_when_sums_unique(self):
        # powers of 10 make every multiset sum unique
        res = ac.s_count([1, 10, 100], 2, 2)
        # 2*9 - 3 solutions counting order: diagonal only when tuple-sorted
        assert res.S == 15  # (x1,x2) vs (y1,y2): 9 diagonal + 6 swaps

    def test_relabel_invariance(self):
        a = ac.s_count([3, 1, 2], 2, 3).S
        b = ac.s_count((1, 2, 3), 2, 3).S
        assert a == b

    def test_matches_brute_force(self):
        rng = random.Random(3)
        for _ in range(10):
            X = sorted(rng.sample(range(1, 25), rng.randint(2, 6)))
            s = rng.randint(1, 3)
            k = rng.randint(1, 3)
            if len(X) ** s > 10**5:
                continue
            assert ac.s_count(X, s, k).S == ac.brute_force_s_count(X, s, k)


class TestDistinctSums:
    def test_hand_case(self):
        res = ac.distinct_sums_bound([[1, 2], [1, 2]], 2)
        assert res.distinct == 3
        assert res.lower_bound == pytest.approx(16 / 6)

    def test_equality_constant_gamma(self):
        res = ac.distinct_sums_bound([[1]], 1)
        assert res.distinct == 1 == res.lower_bound

    def test_inequality_with_slack(self):
        res = ac.distinct_sums_bound([list(range(1, 11))] * 2, 3)
        assert res.distinct >= res.lower_bound
        assert res.distinct * res.sum_gamma_sq >= res.total**2


class TestTpqCount:
    def test_pinned(self):
        assert ac.t_pq_count([1, 3], 2, 2, 2, 5).S == 4

    def test_singleton(self):
        assert ac.t_pq_count([1], 2, 3, 2, 5).S == 1
        assert ac.t_pq_count([1], 3, 2, 3, 7).S == 1

    def test_coprimality_names_element(self):
        with pytest.raises(CoprimalityError) as err:
            ac.t_pq_count([1, 4], 2, 2, 2, 3)
        assert "4" in str(err.value)

    def test_p_equals_q(self):
        with pytest.raises(DomainError):
            ac.t_pq_count([1, 3], 2, 2, 5, 5)

    def test_not_prime(self):
        with pytest.raises(DomainError):
            ac.t_pq_count([1, 3], 2, 2, 4, 5)

    def test_budget(self):
        with pytest.raises(BudgetError):
            ac.t_pq_count(list(range(1, 32, 2)), 4, 2, 2, 3, budget_ops=10**6)

    @pytest.mark.parametrize("E,s,k,p,q", [
        ((1, 3), 2, 2, 2, 5),
        ((1, 2), 2, 2, 3, 5),
        ((1, 2, 4), 2, 3, 3, 5),
        ((1, 3, 7), 2, 2, 2, 5),
        ((1, 2), 3, 2, 3, 7),
        ((1, 2, 3, 4), 2, 2, 5, 3),
    ])
    def test_matches_enumeration(self, E, s, k, p, q):
        assert ac.t_pq_count(E, s, k, p, q).S == ac.brute_force_t_pq(E, s, k, p, q)

    def test_ratio_against_size_times_lower_order(self):
        # reporting-style comparison: count stays within a small multiple of
        # |E| * S_{s-1}(E)
        E = [1, 3, 7, 9]
        t = ac.t_pq_count(E, 2, 2, 2, 5).S
        s1 = ac.s_count(E, 1, 2).S
        assert 0 < t <= 4 * len(E) * s1


class TestLemma1:
    @pytest.mark.parametrize("P,lhs,rhs", [
        (8, 120, 184), (12, 284, 428), (16, 1471, 6144)])
    def test_pinned_sides(self, P, lhs, rhs):
        rep = ac.lemma1_check(3, 2, P, 0.4, base_levels=0)
        assert (rep.lhs, rep.rhs) == (lhs, rhs)
        assert rep.ratio <= 2.0

    def test_degenerate_singleton(self):
        rep = ac.lemma1_sides([1], sm.PrimeWindow(5, 5, (5,)), 2, 3, 5.0)
        assert rep.lhs == 1
        assert rep.rhs >= 1
        assert rep.ratio <= 1.0

    def test_window_required(self):
        # P^theta below 2 leaves no primes to multiply by; theta <= 1/k also
        # trips the limiting-case warning on the inner build
        with pytest.warns(UserWarning):
            with pytest.raises(DomainError):
                ac.lemma1_check(3, 2, 4, 0.2, base_levels=0)


class TestExponentFit:
    def test_synthetic_exact_square(self):
        fit = ac.exponent_fit([(10, 100), (20, 400), (40, 1600)])
        assert fit.slope == pytest.approx(2.0, abs=1e-9)

    def test_cube_pairs_slope(self):
        runs = [(P, ac.s_count(range(1, P + 1), 2, 3).S) for P in (20, 40, 80)]
        fit = ac.exponent_fit(runs)
        assert 1.8 <= fit.slope <= 2.2

    def test_degenerate(self):
        with pytest.raises(DomainError):
            ac.exponent_fit([(10, 100), (20, 400)])
        with pytest.raises(DomainError):
            ac.exponent_fit([(10, 100), (10, 105), (20, 400)])


class TestParsevalConsistency:
    @pytest.mark.parametrize("k,P,s", [(2, 3, 2), (3, 4, 2), (2, 5, 2)])
    def test_moment_equals_count(self, k, P, s):
        S = ac.s_count(range(1, P + 1), s, k).S
        mom = ea.exact_moment(ea.abs_power(ea.FullInterval(P=P, k=k), 2 * s))
        assert round(mom) == S
        assert abs(mom - S) < 1e-6
