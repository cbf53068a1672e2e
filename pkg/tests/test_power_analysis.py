"""Power analysis for the two-sample arcsine z-test.

Expected sample sizes come from a brute-force scan of the 80-digit oracle
power function, not from the closed-form seed used by the implementation.
"""

import math

import pytest
from hypothesis import given, strategies as st

import oracles
from rankstats.errors import DomainError, UnattainablePowerError
from rankstats.power_analysis import (
    harmonic_n,
    minimum_detectable_h,
    power_two_proportions,
    required_n,
)
from rankstats.proportion_tests import normal_cdf, normal_ppf


def brute_force_n(h, alpha, target, two_sided=True):
    n = 2
    while oracles.two_sample_power(h, n, n, alpha, two_sided) < target:
        n += 1
    return n


# Frozen from brute_force_n; recomputed in test_frozen_sizes_match_oracle.
REQUIRED_N = {0.1: 1570, 0.2: 393, 0.5: 63, 0.8: 25}


class TestPower:
    def test_zero_effect_gives_alpha(self):
        assert power_two_proportions(0.0, 100, 100, 0.05).power == pytest.approx(0.05, abs=1e-15)

    def test_zero_effect_one_sided(self):
        assert power_two_proportions(0.0, 100, 100, 0.05, "one-sided").power == pytest.approx(0.05, abs=1e-15)

    def test_h_02_n_197(self):
        # The pooled two-sample test at 197 per group only reaches about 51%.
        report = power_two_proportions(0.2, 197, 197, 0.05)
        assert report.power == pytest.approx(float(oracles.two_sample_power(0.2, 197, 197, 0.05)), abs=1e-12)
        assert report.power == pytest.approx(0.5100, abs=1e-4)

    def test_saturates(self):
        assert power_two_proportions(3.0, 50, 50, 0.05).power == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("h,n1,n2", [(0.1, 100, 300), (0.35, 40, 41), (0.7, 2, 9)])
    def test_matches_oracle(self, h, n1, n2):
        for tails, two in (("two-sided", True), ("one-sided", False)):
            got = power_two_proportions(h, n1, n2, 0.05, tails).power
            assert got == pytest.approx(float(oracles.two_sample_power(h, n1, n2, 0.05, two)), abs=1e-12)

    @pytest.mark.parametrize(
        "kwargs",
        [dict(h=-0.1, n1=10, n2=10), dict(h=0.2, n1=1, n2=10), dict(h=0.2, n1=10, n2=10, alpha=0.0),
         dict(h=0.2, n1=10, n2=10, tails="both")],
    )
    def test_domain(self, kwargs):
        with pytest.raises(DomainError):
            power_two_proportions(**kwargs)

    @given(st.floats(0, 3), st.integers(2, 10**6), st.integers(2, 10**6))
    def test_harmonic_symmetry(self, h, n1, n2):
        assert power_two_proportions(h, n1, n2).power == power_two_proportions(h, n2, n1).power

    @given(st.floats(0.01, 2), st.floats(0.01, 2), st.integers(2, 5000))
    def test_increasing_in_h(self, a, b, n):
        lo, hi = sorted((a, b))
        assert power_two_proportions(lo, n, n).power <= power_two_proportions(hi, n, n).power

    @given(st.floats(0.01, 1), st.integers(2, 5000), st.integers(1, 5000))
    def test_increasing_in_n(self, h, n, extra):
        assert power_two_proportions(h, n, n).power <= power_two_proportions(h, n + extra, n).power

    @given(st.floats(0, 1), st.integers(2, 2000), st.floats(0.001, 0.2), st.floats(0.001, 0.2))
    def test_at_least_alpha_and_monotone_in_alpha(self, h, n, a1, a2):
        lo, hi = sorted((a1, a2))
        p_lo = power_two_proportions(h, n, n, lo).power
        assert p_lo >= lo - 1e-12
        assert p_lo <= power_two_proportions(h, n, n, hi).power + 1e-15

    def test_harmonic_mean(self):
        assert harmonic_n(100, 300) == pytest.approx(150.0)
        assert power_two_proportions(0.3, 100, 300).effective_n == pytest.approx(150.0)


class TestRequiredN:
    @pytest.mark.parametrize("h,n", sorted(REQUIRED_N.items()))
    def test_frozen_sizes_match_oracle(self, h, n):
        assert brute_force_n(h, 0.05, 0.80) == n

    @pytest.mark.parametrize("h,n", sorted(REQUIRED_N.items()))
    def test_round_trip(self, h, n):
        assert required_n(h, 0.05, 0.80) == n
        assert power_two_proportions(h, n, n).power >= 0.80
        assert power_two_proportions(h, n - 1, n - 1).power < 0.80

    def test_h02_closed_form(self):
        z = normal_ppf(0.975) + normal_ppf(0.80)
        assert 2 * z * z / 0.04 == pytest.approx(392.444, abs=1e-3)
        assert required_n(0.2) == 393

    def test_power_barely_above_alpha(self):
        assert required_n(0.2, 0.05, 0.05 + 1e-6) == 2

    def test_one_sided_needs_fewer(self):
        assert required_n(0.2, tails="one-sided") == brute_force_n(0.2, 0.05, 0.80, two_sided=False)
        assert required_n(0.2, tails="one-sided") < required_n(0.2)

    def test_zero_effect(self):
        with pytest.raises(UnattainablePowerError):
            required_n(0.0)

    @pytest.mark.parametrize("target", [0.05, 0.01, 1.0])
    def test_target_domain(self, target):
        with pytest.raises(DomainError):
            required_n(0.2, 0.05, target)


class TestMinimumDetectable:
    def test_197(self):
        h = minimum_detectable_h(197, 197)
        assert h == pytest.approx((normal_ppf(0.975) + normal_ppf(0.8)) / math.sqrt(98.5), rel=1e-12)
        assert h == pytest.approx(0.28228, abs=1e-5)

    def test_scales_with_inverse_sqrt_n(self):
        assert minimum_detectable_h(2 * 197, 2 * 197) == pytest.approx(
            minimum_detectable_h(197, 197) / math.sqrt(2), rel=1e-12
        )

    def test_inverse_of_required_n(self):
        # MDE at the required size lands at (or just below) the design effect.
        assert minimum_detectable_h(393, 393) == pytest.approx(0.2, abs=1e-3)

    def test_vanishes_for_huge_n(self):
        assert minimum_detectable_h(10**8, 10**8) < 0.001

    @pytest.mark.parametrize("n1,n2,target", [(197, 197, 0.8), (50, 400, 0.9), (1000, 1000, 0.5)])
    def test_reproduces_target(self, n1, n2, target):
        h = minimum_detectable_h(n1, n2, 0.05, target)
        power = power_two_proportions(h, n1, n2, 0.05).power
        minor = normal_cdf(-(2 * normal_ppf(0.975) + normal_ppf(target)))
        assert power == pytest.approx(target + minor, abs=1e-12)
        if target >= 0.8:
            assert abs(power - target) < 1e-6

    def test_one_sided_exact(self):
        h = minimum_detectable_h(300, 300, 0.05, 0.8, "one-sided")
        assert power_two_proportions(h, 300, 300, 0.05, "one-sided").power == pytest.approx(0.8, abs=1e-12)
