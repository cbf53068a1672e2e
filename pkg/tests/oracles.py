"""Independent reference computations used by the test suite.

Nothing here imports rankstats: each oracle recomputes a quantity by a
different route (arbitrary-precision series, exact rationals, enumeration).
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

mpmath.mp.dps = 80


def erf_series(x) -> mpmath.mpf:
    """erf by its Maclaurin series, summed until terms vanish at 80 digits."""
    x = mpmath.mpf(x)
    total = mpmath.mpf(0)
    term = x  # (-1)^n x^(2n+1) / n!
    n = 0
    while True:
        contrib = term / (2 * n + 1)
        total += contrib
        if n > 10 and abs(contrib) < mpmath.mpf(10) ** -75:
            break
        n += 1
        term *= -x * x / n
    return 2 / mpmath.sqrt(mpmath.pi) * total


def phi(z) -> mpmath.mpf:
    return (1 + erf_series(mpmath.mpf(z) / mpmath.sqrt(2))) / 2


def quantile(q) -> mpmath.mpf:
    """Standard normal quantile by root-finding on the series CDF."""
    q = mpmath.mpf(q)
    return mpmath.findroot(lambda z: phi(z) - q, 0)


def cohens_h(p1, p2) -> mpmath.mpf:
    p1, p2 = mpmath.mpf(p1), mpmath.mpf(p2)
    return 2 * abs(mpmath.asin(mpmath.sqrt(p1)) - mpmath.asin(mpmath.sqrt(p2)))


def chi_square_exact(rows) -> Fraction:
    """Pearson chi-square of a 2x2 table in exact rational arithmetic."""
    row_tot = [sum(r) for r in rows]
    col_tot = [rows[0][j] + rows[1][j] for j in range(2)]
    n = sum(row_tot)
    total = Fraction(0)
    for i in range(2):
        for j in range(2):
            expected = Fraction(row_tot[i] * col_tot[j], n)
            total += (rows[i][j] - expected) ** 2 / expected
    return total


def pooled_z_squared_exact(n_a, k_a, n_b, k_b) -> Fraction:
    pa, pb = Fraction(k_a, n_a), Fraction(k_b, n_b)
    pooled = Fraction(k_a + k_b, n_a + n_b)
    return (pa - pb) ** 2 / (pooled * (1 - pooled) * (Fraction(1, n_a) + Fraction(1, n_b)))


def two_sample_power(h, n1, n2, alpha, two_sided=True) -> mpmath.mpf:
    n_eff = 2 / (mpmath.mpf(1) / n1 + mpmath.mpf(1) / n2)
    shift = mpmath.mpf(h) * mpmath.sqrt(n_eff / 2)
    z = quantile(1 - mpmath.mpf(alpha) / 2) if two_sided else quantile(1 - mpmath.mpf(alpha))
    power = phi(shift - z)
    if two_sided:
        power += phi(-shift - z)
    return power


def exact_one_sample_size(n, p_true, p_expected, alpha) -> float:
    """Exact rejection probability of the two-sided one-sample z-test.

    Sums the Binomial(n, p_true) pmf over every count whose z exceeds the
    critical value; the rejection rule is evaluated in exact rationals.
    """
    z_crit = quantile(1 - mpmath.mpf(alpha) / 2)
    crit_sq = z_crit ** 2
    p_e = Fraction(p_expected).limit_denominator(10**9)
    var = p_e * (1 - p_e) / n
    p = mpmath.mpf(p_true)
    total = mpmath.mpf(0)
    for k in range(n + 1):
        diff = Fraction(k, n) - p_e
        ratio = diff * diff / var
        if mpmath.mpf(ratio.numerator) / ratio.denominator > crit_sq:
            total += mpmath.binomial(n, k) * p ** k * (1 - p) ** (n - k)
    return float(total)
