"""Deterministic text and CSV rendering of analysis results.

Every numeric field is printed with exactly six decimals using Python's
format mini-language, which ignores the process locale. p-values below
1e-300 print as ``0.000000`` and carry the ``underflow`` flag.

``text`` output is one title line followed by one ``key=value,...`` line per
row; ``csv`` output is a header row plus data rows. Both carry the same values.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import singledispatch
from typing import Sequence

from .cluster_sampling import ClusterComparison, ClusterPlan
from .effect_sizes import TwoByTwoTable, cohens_h_value, cohens_w, cramers_v
from .errors import DegenerateDataError
from .power_analysis import PowerReport
from .proportion_tests import UNDERFLOW_P, TestResult
from .ranking_analysis import (
    ExcellenceFlag,
    NeighborhoodReport,
    PairComparison,
    PairwiseMatrix,
    RankingDataset,
)

FORMATS = ("text", "csv")


@dataclass
class Table:
    title: str
    columns: Sequence[str]
    rows: list[tuple[str, ...]] = field(default_factory=list)

    def add(self, *values: object) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(tuple(fmt_value(v) for v in values))


def fmt_num(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    text = f"{x:.6f}"
    return "0.000000" if text == "-0.000000" else text


def fmt_value(v: object) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_num(v)
    return str(v)


def fmt_p(p: float) -> str:
    return fmt_num(0.0 if p < UNDERFLOW_P else p)


def _flags(*pairs: tuple[bool, str]) -> str:
    return ";".join(name for on, name in pairs if on)


def _test_fields(test: TestResult | None) -> tuple[object, ...]:
    """``z, p_value, significant`` followed by flag names."""
    if test is None:
        return None, None, None, "degenerate"
    flags = _flags((test.small_sample, "small-sample"), (test.underflow, "underflow"))
    return test.z, fmt_p(test.p_value), test.significant, flags


def render(table: Table, fmt: str = "text") -> bytes:
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    out = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(table.columns)
        writer.writerows(table.rows)
    else:
        out.write(f"# {table.title}\n")
        for row in table.rows:
            out.write(",".join(f"{c}={v}" for c, v in zip(table.columns, row)) + "\n")
    return out.getvalue().encode("utf-8")


def emit_report(result: object, fmt: str = "text") -> bytes:
    """Serialize any supported analysis result (or a ready :class:`Table`)."""
    table = result if isinstance(result, Table) else to_table(result)
    return render(table, fmt)


@singledispatch
def to_table(result: object) -> Table:
    raise TypeError(f"no report layout for {type(result).__name__}")


@to_table.register
def _(ds: RankingDataset) -> Table:
    table = Table(f"Ranking dataset ({len(ds)} institutions)", ("institution", "n_pubs", "n_top10"))
    for rec in ds:
        table.add(rec.id, rec.n_pubs, rec.n_top10)
    return table


EXCELLENCE_COLUMNS = (
    "rank", "institution", "n_pubs", "n_top10", "proportion", "z", "h", "band",
    "p_value", "significant", "direction", "flags",
)


def excellence_table(flags: Sequence[ExcellenceFlag], p_expected: float | None = None) -> Table:
    title = "Excellence indicator vs expected proportion"
    if flags:
        title += f" (alpha={fmt_num(flags[0].test.alpha)}"
        title += f", expected={fmt_num(p_expected)})" if p_expected is not None else ")"
    table = Table(title, EXCELLENCE_COLUMNS)
    for f in flags:
        z, p, sig, fl = _test_fields(f.test)
        rec = f.record
        table.add(
            f.rank, rec.id, rec.n_pubs, rec.n_top10, rec.proportion, z,
            f.effect.value, f.effect.band, p, sig, f.direction, fl,
        )
    return table


@to_table.register
def _(flags: list) -> Table:
    if all(isinstance(f, ExcellenceFlag) for f in flags):
        return excellence_table(flags)
    raise TypeError("lists are only reportable as excellence flags")


PAIR_COLUMNS = (
    "rank_a", "a", "rank_b", "b", "p_a", "p_b", "z", "h", "band", "p_value",
    "significant", "diff", "se", "ci_lower", "ci_upper", "flags",
)


def _pair_values(cmp: PairComparison, rank_a: object = None, rank_b: object = None) -> tuple:
    z, p, sig, fl = _test_fields(cmp.test)
    if cmp.ci.degenerate:
        fl = ";".join(x for x in (fl, "zero-width-ci") if x)
    return (
        rank_a, cmp.a.id, rank_b, cmp.b.id, cmp.a.proportion, cmp.b.proportion,
        z, cmp.effect.value, cmp.effect.band, p, sig, cmp.ci.estimate,
        cmp.ci.standard_error, cmp.ci.lower, cmp.ci.upper, fl,
    )


@to_table.register
def _(matrix: PairwiseMatrix) -> Table:
    level = fmt_num(1.0 - matrix.alpha)
    table = Table(
        f"Pairwise comparisons (alpha={fmt_num(matrix.alpha)}, ci level={level})", PAIR_COLUMNS
    )
    for (i, j), cmp in sorted(matrix.cells.items()):
        table.add(*_pair_values(cmp, i + 1, j + 1))
    return table


@to_table.register
def _(cmp: PairComparison) -> Table:
    """Single pair, with Cohen's w and Cramér's V of its 2x2 table appended."""
    table = Table(
        f"Two-sample comparison (alpha={fmt_num(cmp.test.alpha if cmp.test else float('nan'))})",
        PAIR_COLUMNS + ("w", "w_band", "v", "v_band"),
    )
    try:
        t = TwoByTwoTable.from_records(cmp.a, cmp.b)
        w, v = cohens_w(t), cramers_v(t)
        extra = (w.value, w.band, v.value, v.band)
    except DegenerateDataError:
        extra = (None, None, None, None)
    table.add(*_pair_values(cmp), *extra)
    return table


def neighborhood_table(report: NeighborhoodReport, ds: RankingDataset) -> Table:
    lo, hi = report.span
    table = Table(
        f"Trivial-difference neighborhood of {report.reference_id} (rank {report.reference_rank}, "
        f"h < {fmt_num(report.threshold)}): count={report.count}, span={lo}-{hi}",
        ("rank", "institution", "proportion", "h_vs_reference", "status", "in_span"),
    )
    ref = ds.get(report.reference_id)
    for rank, rec in enumerate(ds, start=1):
        if rec.id == report.reference_id:
            status = "reference"
        else:
            status = "trivial" if rec.id in report.trivial_ids else "non-trivial"
        table.add(
            rank, rec.id, rec.proportion, cohens_h_value(ref.proportion, rec.proportion),
            status, lo <= rank <= hi,
        )
    return table


@to_table.register
def _(report: PowerReport) -> Table:
    table = Table("Power of the two-sample proportion z-test", ("h", "n1", "n2", "alpha", "tails", "power"))
    table.add(report.h, report.n1, report.n2, report.alpha, report.tails, report.power)
    return table


def sample_size_table(
    h: float, alpha: float, target: float, tails: str, n: int, achieved: float
) -> Table:
    table = Table(
        "Required sample size per group",
        ("h", "alpha", "target_power", "tails", "n_per_group", "achieved_power"),
    )
    table.add(h, alpha, target, tails, n, achieved)
    return table


CLUSTER_COLUMNS = (
    "index", "start_year", "end_year", "n_pubs", "n_top10", "proportion", "selected",
    "z_vs_rest", "p_value", "significant", "h_vs_rest", "band", "flags",
)


def cluster_table(plan: ClusterPlan, comparisons: Sequence[ClusterComparison], max_abs_z: float) -> Table:
    by_label = {c.cluster.label: c for c in comparisons}
    selected = plan.selected.label if plan.selected_index is not None else "none"
    table = Table(
        f"Cluster plan (width={plan.cluster_width}, seed={plan.seed}, selected={selected}, "
        f"max |z| vs rest={fmt_num(max_abs_z)})",
        CLUSTER_COLUMNS,
    )
    for i, c in enumerate(plan.clusters):
        cmp = by_label.get(c.label)
        if cmp is None:
            z = p = sig = h = band = None
            fl = "empty"
        else:
            z, p, sig, fl = _test_fields(cmp.test)
            h, band = cmp.effect.value, cmp.effect.band
        table.add(
            i, c.start_year, c.end_year, c.n_pubs, c.n_top10,
            c.proportion if c.n_pubs else None, i == plan.selected_index,
            z, p, sig, h, band, fl,
        )
    return table
