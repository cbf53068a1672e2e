"""Two-stage cluster sampling over consecutive publication years.

An institution's publications are split into blocks of ``width`` consecutive
years anchored at the earliest year (1990-1992, 1993-1995, ...). One block is
drawn at random and can then be tested against the remaining blocks to see
whether it is representative.

Selection uses numpy's ``default_rng`` (PCG64) seeded with the caller's seed,
so a given seed picks the same block on every run.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .effect_sizes import EffectSize, cohens_h
from .errors import DegenerateDataError, DomainError
from .proportion_tests import InstitutionRecord, TestResult, two_sample_z

YEAR_RANGE = (1900, 2100)


@dataclass(frozen=True)
class PublicationRecord:
    year: int
    is_top10: bool

    def validate(self, year_range: tuple[int, int] = YEAR_RANGE) -> None:
        lo, hi = year_range
        if not lo <= self.year <= hi:
            raise DomainError(f"publication year {self.year} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class Cluster:
    start_year: int
    end_year: int
    n_pubs: int
    n_top10: int

    @property
    def label(self) -> str:
        return f"{self.start_year}-{self.end_year}"

    @property
    def proportion(self) -> float:
        return self.n_top10 / self.n_pubs if self.n_pubs else float("nan")


@dataclass(frozen=True)
class ClusterPlan:
    cluster_width: int
    clusters: tuple[Cluster, ...]
    selected_index: int | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.selected_index is not None and not 0 <= self.selected_index < len(self.clusters):
            raise DomainError(f"selected index {self.selected_index} out of range")

    @property
    def n_pubs(self) -> int:
        return sum(c.n_pubs for c in self.clusters)

    @property
    def n_top10(self) -> int:
        return sum(c.n_top10 for c in self.clusters)

    @property
    def selected(self) -> Cluster:
        if self.selected_index is None:
            raise DomainError("no cluster has been selected yet")
        return self.clusters[self.selected_index]

    def cluster_of(self, year: int) -> int:
        """Index of the cluster holding ``year``."""
        for i, c in enumerate(self.clusters):
            if c.start_year <= year <= c.end_year:
                return i
        raise DomainError(f"year {year} is not covered by this plan")


@dataclass(frozen=True)
class ClusterComparison:
    cluster: Cluster
    complement_n_pubs: int
    complement_n_top10: int
    test: TestResult | None  # None when cluster and complement have no (or only) top-10% papers
    effect: EffectSize


def build_clusters(
    pubs: Iterable[PublicationRecord],
    width: int = 3,
    year_range: tuple[int, int] = YEAR_RANGE,
) -> ClusterPlan:
    """Partition publications into consecutive ``width``-year clusters.

    The last cluster absorbs any remainder years, so 1990-1999 at width 3
    gives 1990-1992, 1993-1995, 1996-1999. Years in the covered range with no
    publications still belong to a cluster (possibly an empty one).
    """
    if width < 1:
        raise DomainError(f"cluster width must be >= 1, got {width}")
    pubs = list(pubs)
    if not pubs:
        raise DomainError("cannot cluster an empty publication list")
    for p in pubs:
        p.validate(year_range)
    first = min(p.year for p in pubs)
    last = max(p.year for p in pubs)
    n_clusters = max(1, (last - first + 1) // width)

    counts = [[0, 0] for _ in range(n_clusters)]
    for p in pubs:
        idx = min((p.year - first) // width, n_clusters - 1)
        counts[idx][0] += 1
        counts[idx][1] += bool(p.is_top10)

    clusters = []
    for i, (n, k) in enumerate(counts):
        start = first + i * width
        end = last if i == n_clusters - 1 else start + width - 1
        clusters.append(Cluster(start, end, n, k))
    return ClusterPlan(cluster_width=width, clusters=tuple(clusters))


def select_cluster(plan: ClusterPlan, seed: int) -> ClusterPlan:
    """Draw one cluster uniformly at random; same plan and seed, same draw."""
    if not plan.clusters:
        raise DomainError("plan has no clusters to select from")
    rng = np.random.default_rng(seed)
    index = int(rng.integers(len(plan.clusters)))
    return replace(plan, selected_index=index, seed=seed)


def _compare(plan: ClusterPlan, index: int, alpha: float) -> ClusterComparison:
    cluster = plan.clusters[index]
    rest_n = plan.n_pubs - cluster.n_pubs
    rest_k = plan.n_top10 - cluster.n_top10
    if cluster.n_pubs < 1:
        raise DomainError(f"cluster {cluster.label} contains no publications")
    if rest_n < 1:
        raise DomainError(f"the complement of cluster {cluster.label} is empty")
    inside = InstitutionRecord(cluster.label, cluster.n_pubs, cluster.n_top10)
    outside = InstitutionRecord(f"not {cluster.label}", rest_n, rest_k)
    try:
        test = two_sample_z(inside, outside, alpha)
    except DegenerateDataError:
        test = None
    return ClusterComparison(
        cluster=cluster,
        complement_n_pubs=rest_n,
        complement_n_top10=rest_k,
        test=test,
        effect=cohens_h(inside.proportion, outside.proportion),
    )


def cluster_vs_population(plan: ClusterPlan, alpha: float = 0.05) -> ClusterComparison:
    """Two-sample z and h of the selected cluster against all other clusters pooled.

    The complement is used instead of the full population so that the two
    samples do not overlap.
    """
    if plan.selected_index is None:
        raise DomainError("select a cluster before comparing it with the population")
    return _compare(plan, plan.selected_index, alpha)


def homogeneity_sweep(
    plan: ClusterPlan, alpha: float = 0.05
) -> tuple[list[ClusterComparison], float]:
    """Compare every cluster with its complement; also return the largest |z|.

    Clusters that are empty, or whose complement is empty, are skipped.
    """
    total = plan.n_pubs
    results = [
        _compare(plan, i, alpha)
        for i, c in enumerate(plan.clusters)
        if 0 < c.n_pubs < total
    ]
    return results, max((abs(r.test.z) for r in results if r.test is not None), default=0.0)


def publications_from_counts(rows: Sequence[tuple[int, int, int]]) -> list[PublicationRecord]:
    """Expand ``(year, n_pubs, n_top10)`` rows into individual publication records."""
    pubs = []
    for year, n, k in rows:
        pubs.extend(PublicationRecord(year, True) for _ in range(k))
        pubs.extend(PublicationRecord(year, False) for _ in range(n - k))
    return pubs
