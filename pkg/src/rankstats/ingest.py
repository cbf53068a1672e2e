"""CSV ingestion for ranking and publication-level data.

Ranking files have the exact header ``institution,n_pubs,n_top10``. Exports
that give a percentage instead of a count use ``institution,n_pubs,pct_top10``
and are read with ``proportions=True``; the count is recovered as
``round(pct / 100 * n_pubs)``.

Publication files have the exact header ``year,is_top10`` with ``is_top10``
either 0 or 1.
"""

from __future__ import annotations

import csv
import math
import re
from typing import Iterable, TextIO

from .cluster_sampling import YEAR_RANGE, PublicationRecord
from .errors import DomainError, DuplicateIdError, ParseError
from .proportion_tests import InstitutionRecord
from .ranking_analysis import RankingDataset

RANKING_HEADER = ("institution", "n_pubs", "n_top10")
PROPORTION_HEADER = ("institution", "n_pubs", "pct_top10")
PUBLICATION_HEADER = ("year", "is_top10")

_INT = re.compile(r"[+-]?[0-9]+")


def _rows(stream: TextIO | Iterable[str], header: tuple[str, ...]):
    """Yield ``(line_number, fields)`` for each non-blank data row after checking the header."""
    reader = csv.reader(stream)
    try:
        first = next(reader)
    except StopIteration:
        raise ParseError("input is empty; expected header " + ",".join(header), line=1) from None
    if first and first[0].startswith("\ufeff"):
        first[0] = first[0][1:]
    if tuple(first) != header:
        raise ParseError(
            f"header must be exactly {','.join(header)!r}, got {','.join(first)!r}",
            line=reader.line_num,
        )
    for fields in reader:
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, got {len(fields)}", line=reader.line_num
            )
        yield reader.line_num, fields


def _int_field(value: str, line: int, field: str) -> int:
    text = value.strip()
    if not _INT.fullmatch(text):
        raise ParseError(f"{text!r} is not an integer", line=line, field=field)
    return int(text)


def parse_ranking_csv(
    stream: TextIO | Iterable[str],
    proportions: bool = False,
    sort_key: str = "proportion",
) -> RankingDataset:
    """Read and validate a ranking CSV into a :class:`RankingDataset`."""
    header = PROPORTION_HEADER if proportions else RANKING_HEADER
    records: list[InstitutionRecord] = []
    seen: dict[str, int] = {}
    for line, (name, n_text, k_text) in _rows(stream, header):
        name = name.strip()
        if not name:
            raise ParseError("institution name is empty", line=line, field="institution")
        if name in seen:
            raise DuplicateIdError(
                f"duplicate institution {name!r} (first seen on line {seen[name]})",
                line=line, field="institution",
            )
        seen[name] = line
        n_pubs = _int_field(n_text, line, "n_pubs")
        if n_pubs < 1:
            raise ParseError(f"n_pubs must be >= 1, got {n_pubs}", line=line, field="n_pubs")
        if proportions:
            try:
                pct = float(k_text.strip())
            except ValueError:
                raise ParseError(f"{k_text!r} is not a number", line=line, field="pct_top10") from None
            if not (math.isfinite(pct) and 0.0 <= pct <= 100.0):
                raise ParseError(f"pct_top10 must lie in [0, 100], got {pct}", line=line, field="pct_top10")
            n_top10 = round(pct / 100.0 * n_pubs)
        else:
            n_top10 = _int_field(k_text, line, "n_top10")
            if not 0 <= n_top10 <= n_pubs:
                raise ParseError(
                    f"n_top10 must lie in [0, n_pubs={n_pubs}], got {n_top10}",
                    line=line, field="n_top10",
                )
        records.append(InstitutionRecord(name, n_pubs, n_top10))
    try:
        return RankingDataset(records, sort_key=sort_key)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


def parse_publication_csv(
    stream: TextIO | Iterable[str], year_range: tuple[int, int] = YEAR_RANGE
) -> list[PublicationRecord]:
    pubs = []
    lo, hi = year_range
    for line, (year_text, flag_text) in _rows(stream, PUBLICATION_HEADER):
        year = _int_field(year_text, line, "year")
        if not lo <= year <= hi:
            raise ParseError(f"year {year} outside [{lo}, {hi}]", line=line, field="year")
        flag = flag_text.strip()
        if flag not in ("0", "1"):
            raise ParseError(f"is_top10 must be 0 or 1, got {flag!r}", line=line, field="is_top10")
        pubs.append(PublicationRecord(year, flag == "1"))
    if not pubs:
        raise ParseError("no publication rows after the header")
    return pubs
