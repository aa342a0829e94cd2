import math

import pytest

from waring import bound_engine as be
from waring.errors import DomainError, RootBracketError


class TestLambdaClosed:
    def test_seed_k3(self):
        assert be.lambda_closed(3, 2) == 2.0

    def test_seed_collapses_for_every_k(self):
        for k in range(3, 30):
            assert be.lambda_closed(k, 2) == pytest.approx(2.0, abs=1e-15)

    def test_hand_value(self):
        assert be.lambda_closed(3, 3) == pytest.approx(3.75, abs=1e-15)

    @pytest.mark.parametrize("k,s", [(2, 3), (3, 1), (0, 2)])
    def test_domain(self, k, s):
        with pytest.raises(DomainError):
            be.lambda_closed(k, s)


class TestLambdaIterate:
    def test_hand_value(self):
        table = be.lambda_iterate(3, 3, 1 / 3)
        assert table.lambda_at(3) == pytest.approx(3.75, abs=1e-12)
        assert table.lambda_at(3) == pytest.approx(be.lambda_closed(3, 3))

    def test_seed_only(self):
        table = be.lambda_iterate(3, 2, 0.9)
        assert table.lambdas == (2.0,)
        assert table.s_max == 2

    def test_matches_closed_form_at_limit(self):
        table = be.lambda_iterate(10, 50, 1 / 10)
        for s in range(2, 51):
            assert abs(table.lambda_at(s) - be.lambda_closed(10, s)) < 1e-9

    def test_delta_column_consistent(self):
        table = be.lambda_iterate(5, 20, 0.3)
        for s in range(2, 21):
            assert table.delta_at(s) == pytest.approx(
                table.lambda_at(s) - (2 * s - 5), abs=1e-12)

    def test_policy_tag(self):
        assert be.lambda_iterate(3, 5, 0.5).policy == "fixed-theta"

    def test_theta_domain(self):
        with pytest.raises(DomainError):
            be.lambda_iterate(3, 5, 0.0)
        with pytest.raises(DomainError):
            be.lambda_iterate(3, 5, 1.5)


class TestSolveSigma:
    def test_k3_root(self):
        sig = be.solve_sigma(3)
        assert sig.lambda_root == pytest.approx(1.486, abs=5e-4)
        assert sig.sigma_hat == pytest.approx(0.02893, abs=5e-6)
        assert sig.beta == pytest.approx(16 / 9)

    def test_residual_invariant(self):
        for k in (3, 7, 50, 1000):
            sig = be.solve_sigma(k)
            assert abs((1 + sig.lambda_root) * sig.beta
                       - math.exp(sig.lambda_root)) < 1e-9

    def test_large_k_trend(self):
        # root approaches log k + log log k
        for k in (50, 100, 500):
            sig = be.solve_sigma(k)
            ratio = sig.lambda_root / (math.log(k) + math.log(math.log(k)))
            assert 0.8 < ratio < 1.2

    def test_s_star(self):
        sig = be.solve_sigma(3)
        assert sig.s_star == pytest.approx(sig.lambda_root / math.log(4 / 3))

    def test_domain(self):
        with pytest.raises(DomainError):
            be.solve_sigma(2)


class TestSigmaOfS:
    def test_zero_at_seed(self):
        assert be.sigma_of_s(3, 2) == 0.0

    def test_hand_value(self):
        assert be.sigma_of_s(3, 3) == pytest.approx(1 / 48)

    def test_integer_max_near_sigma_hat(self):
        sig = be.solve_sigma(3)
        best = max(be.sigma_of_s(3, s) for s in range(2, 60))
        assert abs(best - sig.sigma_hat) < 0.05 * sig.sigma_hat

    def test_negative_for_larger_k_small_s(self):
        # numerator 1 - (k-2) < 0 at s = 2 for k >= 4; returned as-is
        assert be.sigma_of_s(5, 2) < 0


class TestThetaSchedule:
    def test_endpoint_collapses(self):
        assert be.theta_schedule(3, 1.0).thetas[-1] == 1 / 3

    def test_endpoint_exact_across_k(self):
        for k in range(3, 31):
            for d in (0.25, 1.0, k - 0.25):
                assert be.theta_schedule(k, d).thetas[-1] == 1.0 / k

    def test_first_value_hand(self):
        sched = be.theta_schedule(3, 1.0)
        assert sched.thetas[0] == pytest.approx(7 / 27, abs=1e-12)

    def test_linear_step_identity(self):
        for k in (3, 7, 19):
            for d in (0.5, 2.5, k / 2):
                if not 0 < d < k:
                    continue
                sched = be.theta_schedule(k, d)
                a, b = (k - d) / (2 * k), 1 / (2 * k)
                for j in range(k - 1):
                    res = sched.thetas[j] - (a * sched.thetas[j + 1] + b)
                    assert abs(res) < 1e-12

    def test_monotone_and_bounded(self):
        sched = be.theta_schedule(8, 3.0)
        assert all(x < y for x, y in zip(sched.thetas, sched.thetas[1:]))
        assert all(0 < t <= 1 / 8 for t in sched.thetas)

    def test_domain(self):
        with pytest.raises(DomainError):
            be.theta_schedule(3, 3.0)
        with pytest.raises(DomainError):
            be.theta_schedule(3, 0.0)


class TestDeltaIterate:
    def test_seed(self):
        assert be.delta_iterate(3, 5).delta_at(2) == 1.0
        assert be.delta_iterate(9, 5).delta_at(2) == 7.0

    def test_hand_value(self):
        assert be.delta_iterate(3, 3).delta_at(3) == pytest.approx(0.6, abs=1e-12)

    def test_monotone_decreasing_positive(self):
        for table in (be.delta_iterate(6, 80), be.delta_iterate(6, 80).variant):
            ds = [table.delta_at(s) for s in range(2, 81)]
            assert all(x > y > 0 for x, y in zip(ds, ds[1:]))

    def test_decay_bound_holds_at_k5(self):
        table = be.delta_iterate(5, 50)
        for s in range(2, 51):
            assert table.delta_at(s) <= be.delta_bound(5, s)

    def test_variant_decays_slower(self):
        # the full two-term theta is larger, which keeps delta larger
        table = be.delta_iterate(12, 40)
        for s in range(3, 41):
            assert table.variant.delta_at(s) >= table.delta_at(s)

    def test_lambda_column(self):
        table = be.delta_iterate(4, 10)
        for s in range(2, 11):
            assert table.lambda_at(s) == pytest.approx(
                table.delta_at(s) + 2 * s - 4)


class TestGkBound:
    def test_pinned_t1_k10(self):
        r = be.gk_bound(10, "T1")
        assert r.bound == 121
        assert r.choice["v"] == 46
        assert r.continuous_optimum == pytest.approx(45.654, abs=2e-3)

    def test_pinned_t2_k10(self):
        r = be.gk_bound(10, "T2")
        assert r.bound == 83
        assert r.choice["u"] == 31
        assert r.choice["bound_exact_delta"] == 77

    @pytest.mark.parametrize("k,thm,pinned", [
        (20, "T1", 267), (20, "T2", 175), (50, "T1", 765), (50, "T2", 473)])
    def test_pinned_regressions(self, k, thm, pinned):
        assert be.gk_bound(k, thm).bound == pinned

    def test_t2_below_t1(self):
        for k in (10, 20, 50):
            assert be.gk_bound(k, 2).bound < be.gk_bound(k, 1).bound

    def test_bound_equals_formula_at_choice(self):
        sig = be.solve_sigma(20)
        r1 = be.gk_bound(20, "T1")
        v, ct = r1.choice["v"], r1.choice["ceil_term"]
        assert ct == math.ceil(18 / (2 * sig.sigma_hat) * (20 / 21) ** v)
        assert r1.bound == 7 + 2 * v + 2 * ct
        r2 = be.gk_bound(20, "T2")
        u, ct = r2.choice["u"], r2.choice["ceil_term"]
        assert ct == math.ceil(be.delta_bound(20, u) / (2 * sig.sigma_hat))
        assert r2.bound == 3 + 2 * u + 2 * ct

    def test_scan_soundness_wider_window(self):
        # doubling the scan window changes nothing
        for k in (10, 20):
            base1 = be.gk_bound(k, "T1")
            wide1 = be.gk_bound(k, "T1", scan_factor=8.0)
            assert wide1.bound == base1.bound
            base2 = be.gk_bound(k, "T2")
            wide2 = be.gk_bound(k, "T2", scan_factor=8.0)
            assert wide2.choice["scan_bound_best"] == base2.choice["scan_bound_best"]

    def test_scan_minimum_not_above_prescribed(self):
        r = be.gk_bound(20, "T2")
        assert r.choice["scan_bound_best"] <= r.bound

    def test_asymptote_fields(self):
        r1 = be.gk_bound(50, "T1")
        assert r1.asymptote == pytest.approx(
            100 * (math.log(50 * math.log(50)) + 1 + math.log(2)))
        r2 = be.gk_bound(50, "T2")
        assert r2.asymptote == pytest.approx(50 * math.log(50 * math.log(50)))

    def test_asymptotic_sanity(self):
        # T1 against its leading term sits in the window pointwise; the T2
        # ratio decreases into the window as k grows.
        t2_ratios = []
        for k in (50, 100, 500, 1000):
            r1 = be.gk_bound(k, "T1")
            lead = 2 * k * math.log(k * math.log(k))
            assert 0.9 < r1.bound / lead < 1.5
            r2 = be.gk_bound(k, "T2")
            t2_ratios.append(r2.bound / (k * math.log(k * math.log(k))))
        assert all(a > b for a, b in zip(t2_ratios, t2_ratios[1:]))
        assert 0.9 < t2_ratios[-1] < 1.5

    def test_small_k_caveat(self):
        assert be.gk_bound(3, "T1").small_k_caveat
        assert not be.gk_bound(10, "T1").small_k_caveat

    def test_theorem_tags(self):
        assert be.gk_bound(10, 1).theorem == "T1"
        assert be.gk_bound(10, "2").theorem == "T2"
        with pytest.raises(DomainError):
            be.gk_bound(10, "T3")


class TestBoundParams:
    def test_valid(self):
        p = be.BoundParams(k=3, s=2, theta=0.4)
        assert p.k == 3

    @pytest.mark.parametrize("k,s,theta", [(2, 2, 0.4), (3, 1, 0.4),
                                           (3, 2, 0.0), (3, 2, 1.01)])
    def test_invalid(self, k, s, theta):
        with pytest.raises(DomainError):
            be.BoundParams(k=k, s=s, theta=theta)
