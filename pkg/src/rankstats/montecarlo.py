"""Monte Carlo calibration of the analytic tests under a binomial model.

Each institution's top-10% count is drawn as ``Binomial(n, p)``. Trials are
split into fixed-size partitions; partition ``i`` draws from its own PCG64
stream seeded by ``SeedSequence(seed, spawn_key=(i,))``. Because partitions
and their streams do not depend on the number of workers, the rates are
bit-identical for any ``workers`` value.

Simulated counts are evaluated by the real test functions, not a vectorised
copy of their formulas. Binomial draws repeat heavily, so each distinct
outcome is evaluated once and weighted by its frequency.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateDataError, DomainError
from .proportion_tests import InstitutionRecord, diff_ci, one_sample_z, two_sample_z

DEFAULT_TRIALS = 100_000
CHUNK_SIZE = 10_000


@dataclass(frozen=True)
class SimulationConfig:
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    workers: int = 1
    chunk_size: int = CHUNK_SIZE

    def __post_init__(self) -> None:
        if isinstance(self.trials, bool) or not isinstance(self.trials, int) or self.trials < 1:
            raise DomainError(f"trials must be a positive integer, got {self.trials!r}")
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers!r}")
        if self.chunk_size < 1:
            raise DomainError(f"chunk_size must be >= 1, got {self.chunk_size!r}")

    def partitions(self) -> list[tuple[int, int]]:
        """``(partition index, trials in partition)`` pairs covering all trials."""
        full, rest = divmod(self.trials, self.chunk_size)
        sizes = [self.chunk_size] * full + ([rest] if rest else [])
        return list(enumerate(sizes))


def _check_prop(name: str, p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def _check_n(name: str, n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def _run(
    config: SimulationConfig,
    draw: Callable[[np.random.Generator, int], np.ndarray],
    hit: Callable[[tuple[int, ...]], bool],
) -> float:
    """Fraction of trials whose drawn outcome satisfies ``hit``.

    ``draw`` returns an array of shape ``(size, k)`` of integer outcomes.
    """
    def count(part: tuple[int, int]) -> int:
        index, size = part
        rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(index,)))
        outcomes, freq = np.unique(draw(rng, size), axis=0, return_counts=True)
        return sum(int(f) for row, f in zip(outcomes.tolist(), freq) if hit(tuple(row)))

    parts = config.partitions()
    if config.workers == 1:
        hits = sum(map(count, parts))
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            hits = sum(pool.map(count, parts))
    return hits / config.trials


def simulate_type1(
    n: int,
    p_true: float,
    p_expected: float | None = None,
    alpha: float = 0.05,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    workers: int = 1,
) -> float:
    """Rejection rate of the one-sample z-test on ``Binomial(n, p_true)`` counts.

    With ``p_expected`` left at ``p_true`` the null is true and the rate
    estimates the Type I error.
    """
    config = SimulationConfig(trials, seed, workers)
    n = _check_n("n", n)
    p_true = _check_prop("p_true", p_true)
    p_expected = p_true if p_expected is None else p_expected
    one_sample_z(InstitutionRecord("check", n, 0), p_expected, alpha)  # validates arguments

    def draw(rng, size):
        return rng.binomial(n, p_true, size=size)[:, None]

    def hit(outcome):
        return one_sample_z(InstitutionRecord("sim", n, outcome[0]), p_expected, alpha).significant

    return _run(config, draw, hit)


def simulate_power(
    n1: int,
    n2: int,
    p1: float,
    p2: float,
    alpha: float = 0.05,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    workers: int = 1,
) -> float:
    """Rejection rate of the pooled two-sample z-test for true proportions ``p1``, ``p2``.

    Draws whose pooled proportion is 0 or 1 have no test statistic and count
    as non-rejections.
    """
    config = SimulationConfig(trials, seed, workers)
    n1, n2 = _check_n("n1", n1), _check_n("n2", n2)
    p1, p2 = _check_prop("p1", p1), _check_prop("p2", p2)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")

    def draw(rng, size):
        return np.column_stack([rng.binomial(n1, p1, size=size), rng.binomial(n2, p2, size=size)])

    def hit(outcome):
        k1, k2 = outcome
        try:
            return two_sample_z(
                InstitutionRecord("a", n1, k1), InstitutionRecord("b", n2, k2), alpha
            ).significant
        except DegenerateDataError:
            return False

    return _run(config, draw, hit)


def simulate_ci_coverage(
    n1: int,
    n2: int,
    p1: float,
    p2: float,
    level: float = 0.95,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    workers: int = 1,
) -> float:
    """Share of simulated Wald intervals that contain the true ``p1 - p2``."""
    config = SimulationConfig(trials, seed, workers)
    n1, n2 = _check_n("n1", n1), _check_n("n2", n2)
    p1, p2 = _check_prop("p1", p1), _check_prop("p2", p2)
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must lie in (0, 1), got {level!r}")
    truth = p1 - p2

    def draw(rng, size):
        return np.column_stack([rng.binomial(n1, p1, size=size), rng.binomial(n2, p2, size=size)])

    def hit(outcome):
        k1, k2 = outcome
        return diff_ci(InstitutionRecord("a", n1, k1), InstitutionRecord("b", n2, k2), level).contains(truth)

    return _run(config, draw, hit)


def binomial_band(rate: float, trials: int, sigmas: float = 3.0) -> tuple[float, float]:
    """``rate ± sigmas`` binomial standard errors for ``trials`` draws."""
    half = sigmas * math.sqrt(rate * (1.0 - rate) / trials)
    return rate - half, rate + half
