"""Effect sizes for proportion differences: Cohen's h, Cohen's w, Cramér's V.

Values are classified into the bands

    trivial < small < small-to-medium < medium < medium-to-large < large

where only the three anchors carry the plain labels and anything strictly
between two anchors gets the hyphenated label. Anchors default to Cohen's
conventions (w: .1/.3/.5, h: .2/.5/.8) and can be overridden per call.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from typing import Literal, Sequence

from .errors import DegenerateDataError, DomainError
from .proportion_tests import InstitutionRecord

BANDS: tuple[str, ...] = (
    "trivial", "small", "small-to-medium", "medium", "medium-to-large", "large",
)
W_ANCHORS: tuple[float, float, float] = (0.1, 0.3, 0.5)
H_ANCHORS: tuple[float, float, float] = (0.2, 0.5, 0.8)
ANCHOR_TOL = 1e-12

Measure = Literal["h", "w", "v"]


@dataclass(frozen=True)
class EffectSize:
    measure: str
    value: float
    band: str


@dataclass(frozen=True)
class TwoByTwoTable:
    """Counts of top-10% and other papers for two institutions.

    Rows are institutions (A, B); columns are (top10, not_top10).
    """

    a_top: int
    a_rest: int
    b_top: int
    b_rest: int

    def __post_init__(self) -> None:
        for name in ("a_top", "a_rest", "b_top", "b_rest"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 0:
                raise DomainError(f"table cell {name} must be a non-negative integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.n < 1:
            raise DomainError("table total must be at least 1")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> TwoByTwoTable:
        (a_top, a_rest), (b_top, b_rest) = rows
        return cls(a_top, a_rest, b_top, b_rest)

    @classmethod
    def from_records(cls, a: InstitutionRecord, b: InstitutionRecord) -> TwoByTwoTable:
        return cls(a.n_top10, a.n_pubs - a.n_top10, b.n_top10, b.n_pubs - b.n_top10)

    @property
    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a_top, self.a_rest), (self.b_top, self.b_rest)

    @property
    def row_totals(self) -> tuple[int, int]:
        return self.a_top + self.a_rest, self.b_top + self.b_rest

    @property
    def col_totals(self) -> tuple[int, int]:
        return self.a_top + self.b_top, self.a_rest + self.b_rest

    @property
    def n(self) -> int:
        return self.a_top + self.a_rest + self.b_top + self.b_rest


def _classify(value: float, anchors: Sequence[float]) -> str:
    value = float(value)
    if math.isnan(value) or value < 0:
        raise DomainError(f"effect size must be non-negative, got {value!r}")
    small, medium, large = anchors
    if not 0 < small < medium < large:
        raise DomainError(f"anchors must be strictly increasing and positive, got {anchors!r}")
    for anchor, label in ((small, "small"), (medium, "medium"), (large, "large")):
        if abs(value - anchor) <= ANCHOR_TOL:
            return label
    if value < small:
        return "trivial"
    if value < medium:
        return "small-to-medium"
    if value < large:
        return "medium-to-large"
    return "large"


def classify_w(value: float, anchors: Sequence[float] = W_ANCHORS) -> str:
    """Band label for Cohen's w or Cramér's V (anchors .1, .3, .5)."""
    return _classify(value, anchors)


def classify_h(value: float, anchors: Sequence[float] = H_ANCHORS) -> str:
    """Band label for Cohen's h (anchors .2, .5, .8)."""
    return _classify(value, anchors)


def band_rank(band: str) -> int:
    """Position of ``band`` in the ordering trivial < ... < large."""
    return BANDS.index(band)


def _check_proportion(name: str, p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def cohens_h_value(p_observed: float, p_expected: float) -> float:
    p_observed = _check_proportion("p_observed", p_observed)
    p_expected = _check_proportion("p_expected", p_expected)
    return 2.0 * abs(math.asin(math.sqrt(p_observed)) - math.asin(math.sqrt(p_expected)))


def cohens_h(
    p_observed: float, p_expected: float, anchors: Sequence[float] = H_ANCHORS
) -> EffectSize:
    """Arcsine effect size ``2*|asin(sqrt(p_o)) - asin(sqrt(p_e))|``.

    Direction is discarded; callers that need it compare the proportions.
    """
    value = cohens_h_value(p_observed, p_expected)
    return EffectSize("h", value, classify_h(value, anchors))


def chi_square(t: TwoByTwoTable) -> float:
    """Pearson chi-square, summed over the four cells, no continuity correction."""
    rows, cols = t.row_totals, t.col_totals
    if 0 in rows or 0 in cols:
        raise DegenerateDataError(
            f"2x2 table {t.rows} has a zero marginal; expected counts are undefined"
        )
    n = t.n
    total = 0.0
    for i, row in enumerate(t.rows):
        for j, observed in enumerate(row):
            expected = rows[i] * cols[j] / n
            total += (observed - expected) ** 2 / expected
    return total


def cohens_w(t: TwoByTwoTable, anchors: Sequence[float] = W_ANCHORS) -> EffectSize:
    value = math.sqrt(chi_square(t) / t.n)
    return EffectSize("w", value, classify_w(value, anchors))


def cramers_v(t: TwoByTwoTable, anchors: Sequence[float] = W_ANCHORS) -> EffectSize:
    # min(r, c) - 1 is 1 for a 2x2 table; kept so the general formula is visible.
    n_rows, n_cols = 2, 2
    value = math.sqrt(chi_square(t) / (t.n * (min(n_rows, n_cols) - 1)))
    return EffectSize("v", value, classify_w(value, anchors))


def proportion_at_h(p_base: float, h: float) -> float:
    """The proportion above ``p_base`` whose Cohen's h against it equals ``h``."""
    p_base = _check_proportion("p_base", p_base)
    angle = math.asin(math.sqrt(p_base)) + float(h) / 2.0
    if not 0.0 <= angle <= math.pi / 2.0:
        raise DomainError(f"no proportion lies at h={h!r} above {p_base!r}")
    return math.sin(angle) ** 2
