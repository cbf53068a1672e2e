"""Tests and effect sizes applied across a whole institutional ranking."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .effect_sizes import H_ANCHORS, EffectSize, cohens_h, cohens_h_value
from .errors import DegenerateDataError, DomainError, NotFoundError
from .proportion_tests import (
    ConfidenceInterval,
    InstitutionRecord,
    Tails,
    TestResult,
    diff_ci,
    one_sample_z,
    two_sample_z,
)

SORT_KEYS: dict[str, Callable[[InstitutionRecord], float]] = {
    "proportion": lambda r: r.proportion,
    "n_top10": lambda r: r.n_top10,
    "n_pubs": lambda r: r.n_pubs,
}


class RankingDataset(Sequence[InstitutionRecord]):
    """Institutions ordered by a descending sort key.

    Ties are broken by descending ``n_pubs`` and then by ascending id, so the
    ranking is a pure function of the set of records. Rank positions are
    1-based.
    """

    def __init__(self, records: Iterable[InstitutionRecord], sort_key: str = "proportion"):
        if sort_key not in SORT_KEYS:
            raise DomainError(f"unknown sort key {sort_key!r}; choose from {sorted(SORT_KEYS)}")
        records = list(records)
        seen: set[str] = set()
        for rec in records:
            if rec.id in seen:
                raise DomainError(f"duplicate institution id {rec.id!r}")
            seen.add(rec.id)
        key = SORT_KEYS[sort_key]
        self.sort_key = sort_key
        self._records = tuple(sorted(records, key=lambda r: (-key(r), -r.n_pubs, r.id)))
        self._rank = {rec.id: i + 1 for i, rec in enumerate(self._records)}

    def __getitem__(self, index):
        return self._records[index]

    def __len__(self) -> int:
        return len(self._records)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RankingDataset):
            return NotImplemented
        return self._records == other._records and self.sort_key == other.sort_key

    def __repr__(self) -> str:
        return f"RankingDataset({len(self)} institutions, sort_key={self.sort_key!r})"

    def rank_of(self, institution_id: str) -> int:
        try:
            return self._rank[institution_id]
        except KeyError:
            raise NotFoundError(f"institution {institution_id!r} is not in the dataset") from None

    def get(self, institution_id: str) -> InstitutionRecord:
        return self._records[self.rank_of(institution_id) - 1]


@dataclass(frozen=True)
class ExcellenceFlag:
    record: InstitutionRecord
    rank: int
    test: TestResult
    effect: EffectSize
    direction: int  # sign of p_observed - p_expected


@dataclass(frozen=True)
class PairComparison:
    a: InstitutionRecord
    b: InstitutionRecord
    test: TestResult | None  # None when the pooled proportion is 0 or 1
    effect: EffectSize
    ci: ConfidenceInterval

    @property
    def degenerate(self) -> bool:
        return self.test is None


@dataclass(frozen=True)
class PairwiseMatrix:
    """Upper triangle of all pairwise comparisons, keyed by rank indices ``(i, j)``, ``i < j``."""

    dataset: RankingDataset
    alpha: float
    cells: dict[tuple[int, int], PairComparison]

    def __getitem__(self, key: tuple[int, int]) -> PairComparison:
        i, j = key
        if i == j:
            raise KeyError("the diagonal of a pairwise matrix is empty")
        return self.cells[(min(i, j), max(i, j))]

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells.values())


@dataclass(frozen=True)
class NeighborhoodReport:
    reference_id: str
    reference_rank: int
    threshold: float
    trivial_ids: frozenset[str]
    span: tuple[int, int]

    @property
    def count(self) -> int:
        return len(self.trivial_ids)


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def excellence_flags(
    ds: RankingDataset,
    p_expected: float = 0.10,
    alpha: float = 0.05,
    anchors: Sequence[float] = H_ANCHORS,
    tails: Tails = "two-sided",
) -> list[ExcellenceFlag]:
    """One-sample test and Cohen's h against ``p_expected`` for every institution, in rank order."""
    if len(ds) == 0:
        raise DomainError("excellence flags need a non-empty dataset")
    flags = []
    for rank, rec in enumerate(ds, start=1):
        try:
            test = one_sample_z(rec, p_expected, alpha, tails)
        except DomainError as exc:
            raise DomainError(f"institution {rec.id!r}: {exc}") from exc
        flags.append(
            ExcellenceFlag(
                record=rec,
                rank=rank,
                test=test,
                effect=cohens_h(rec.proportion, p_expected, anchors),
                direction=_sign(rec.proportion - p_expected),
            )
        )
    return flags


def compare_pair(
    a: InstitutionRecord,
    b: InstitutionRecord,
    alpha: float = 0.05,
    anchors: Sequence[float] = H_ANCHORS,
    level: float | None = None,
) -> PairComparison:
    """Two-sample z, pairwise h and the interval for ``p_a - p_b`` (level ``1 - alpha`` unless given)."""
    try:
        test = two_sample_z(a, b, alpha)
    except DegenerateDataError:
        test = None
    return PairComparison(
        a=a, b=b, test=test,
        effect=cohens_h(a.proportion, b.proportion, anchors),
        ci=diff_ci(a, b, 1.0 - alpha if level is None else level),
    )


def pairwise_matrix(
    ds: RankingDataset,
    alpha: float = 0.05,
    bonferroni: bool = False,
    anchors: Sequence[float] = H_ANCHORS,
) -> PairwiseMatrix:
    """All ``N(N-1)/2`` pairwise comparisons.

    With ``bonferroni=True`` the per-pair alpha (and so the interval level) is
    divided by the number of pairs.
    """
    n = len(ds)
    if n < 2:
        raise DomainError("a pairwise matrix needs at least two institutions")
    pair_alpha = alpha / (n * (n - 1) // 2) if bonferroni else alpha
    cells = {
        (i, j): compare_pair(ds[i], ds[j], pair_alpha, anchors)
        for i in range(n)
        for j in range(i + 1, n)
    }
    return PairwiseMatrix(dataset=ds, alpha=pair_alpha, cells=cells)


def trivial_neighborhood(
    ds: RankingDataset, reference_id: str, h_threshold: float = H_ANCHORS[0]
) -> NeighborhoodReport:
    """Institutions whose pairwise h with the reference is below ``h_threshold``.

    ``span`` is the maximal run of consecutive rank positions around the
    reference in which every institution is trivially different from it.
    """
    if h_threshold < 0:
        raise DomainError(f"h_threshold must be non-negative, got {h_threshold!r}")
    ref_rank = ds.rank_of(reference_id)
    p_ref = ds[ref_rank - 1].proportion
    trivial = [
        rec.id != reference_id and cohens_h_value(p_ref, rec.proportion) < h_threshold
        for rec in ds
    ]
    trivial[ref_rank - 1] = True
    lo = hi = ref_rank
    while lo > 1 and trivial[lo - 2]:
        lo -= 1
    while hi < len(ds) and trivial[hi]:
        hi += 1
    trivial[ref_rank - 1] = False
    return NeighborhoodReport(
        reference_id=reference_id,
        reference_rank=ref_rank,
        threshold=h_threshold,
        trivial_ids=frozenset(rec.id for rec, t in zip(ds, trivial) if t),
        span=(lo, hi),
    )

