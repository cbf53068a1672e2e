"""Power, required sample size and minimum detectable effect for the two-sample
proportion test.

Everything is expressed in Cohen's h. On the arcsine scale
``2*asin(sqrt(p_hat))`` has variance ``1/n``, so the difference between two
groups has variance ``1/n1 + 1/n2 = 2/n'`` with ``n'`` the harmonic mean of
the group sizes, and the z statistic is centred at ``h*sqrt(n'/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .errors import DomainError, UnattainablePowerError
from .proportion_tests import normal_cdf, normal_ppf

PowerTails = Literal["two-sided", "one-sided", "greater", "less"]

#: Hard ceiling for the integer search in :func:`required_n`.
MAX_N = 10**12


@dataclass(frozen=True)
class PowerReport:
    h: float
    n1: int
    n2: int
    alpha: float
    tails: str
    power: float

    @property
    def effective_n(self) -> float:
        return harmonic_n(self.n1, self.n2)


def harmonic_n(n1: float, n2: float) -> float:
    """Harmonic mean ``2/(1/n1 + 1/n2)``; symmetric in its arguments."""
    return 2.0 / (1.0 / n1 + 1.0 / n2)


def _two_sided(tails: str) -> bool:
    if tails == "two-sided":
        return True
    if tails in ("one-sided", "greater", "less"):
        return False
    raise DomainError(f"tails must be 'two-sided' or 'one-sided', got {tails!r}")


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    return alpha


def _check_target(target_power: float, alpha: float) -> float:
    target_power = float(target_power)
    if not alpha < target_power < 1.0:
        raise DomainError(f"target power must lie in (alpha={alpha}, 1), got {target_power!r}")
    return target_power


def _critical_z(alpha: float, tails: str) -> float:
    return normal_ppf(1.0 - alpha / 2.0) if _two_sided(tails) else normal_ppf(1.0 - alpha)


def power_two_proportions(
    h: float,
    n1: int,
    n2: int,
    alpha: float = 0.05,
    tails: PowerTails = "two-sided",
) -> PowerReport:
    """Power of the two-sample proportion z-test at effect size ``h``.

    Two-sided power is ``Phi(h*s - z) + Phi(-h*s - z)`` with ``s = sqrt(n'/2)``
    and ``z = z_{1-alpha/2}``; the one-sided form keeps only the first term
    with ``z = z_{1-alpha}``. At ``h = 0`` the result equals ``alpha``.
    """
    h = float(h)
    if not 0.0 <= h < math.inf:
        raise DomainError(f"h must be a finite non-negative number, got {h!r}")
    alpha = _check_alpha(alpha)
    for n in (n1, n2):
        if n < 2:
            raise DomainError(f"group sizes must be at least 2, got {n!r}")
    shift = h * math.sqrt(harmonic_n(n1, n2) / 2.0)
    z_crit = _critical_z(alpha, tails)
    power = normal_cdf(shift - z_crit)
    if _two_sided(tails):
        power += normal_cdf(-shift - z_crit)
    return PowerReport(h=h, n1=n1, n2=n2, alpha=alpha, tails=tails, power=min(1.0, power))


def required_n(
    h: float,
    alpha: float = 0.05,
    target_power: float = 0.80,
    tails: PowerTails = "two-sided",
) -> int:
    """Smallest equal per-group size whose power reaches ``target_power``.

    Seeds the search with ``2*(z_crit + z_power)**2 / h**2`` (minor tail
    ignored), then walks the integer grid until ``n`` passes and ``n - 1``
    does not.
    """
    alpha = _check_alpha(alpha)
    target_power = _check_target(target_power, alpha)
    h = float(h)
    if h == 0.0:
        raise UnattainablePowerError("at h = 0 power equals alpha for every n")
    if not 0.0 < h < math.inf:
        raise DomainError(f"h must be a finite positive number, got {h!r}")
    z_sum = _critical_z(alpha, tails) + normal_ppf(target_power)
    seed = 2.0 * z_sum * z_sum / (h * h)
    if seed > MAX_N:
        raise UnattainablePowerError(f"power {target_power} needs more than {MAX_N} per group")
    n = max(2, math.ceil(seed))

    def reaches(size: int) -> bool:
        return power_two_proportions(h, size, size, alpha, tails).power >= target_power

    while not reaches(n):
        n += 1
    while n > 2 and reaches(n - 1):
        n -= 1
    return n


def minimum_detectable_h(
    n1: int,
    n2: int,
    alpha: float = 0.05,
    target_power: float = 0.80,
    tails: PowerTails = "two-sided",
) -> float:
    """Effect size detected with ``target_power`` at group sizes ``n1``, ``n2``.

    Closed form ``(z_crit + z_power) / sqrt(n'/2)``. For two-sided tests the
    opposite tail is ignored, so the exact power at the returned h exceeds
    the target by ``Phi(-(2*z_crit + z_power))``, about 1e-6 at the defaults.
    """
    alpha = _check_alpha(alpha)
    target_power = _check_target(target_power, alpha)
    for n in (n1, n2):
        if n < 1:
            raise DomainError(f"group sizes must be positive, got {n!r}")
    z_sum = _critical_z(alpha, tails) + normal_ppf(target_power)
    return z_sum / math.sqrt(harmonic_n(n1, n2) / 2.0)
