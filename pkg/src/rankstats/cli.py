"""Command-line interface.

Exit codes: 0 on success, 1 on usage errors, 2 on data errors. Reports go to
stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from typing import Sequence

from . import __version__
from .cluster_sampling import build_clusters, homogeneity_sweep, select_cluster
from .effect_sizes import H_ANCHORS, proportion_at_h
from .errors import RankstatsError
from .ingest import parse_publication_csv, parse_ranking_csv
from .montecarlo import DEFAULT_TRIALS, simulate_ci_coverage, simulate_power, simulate_type1
from .power_analysis import power_two_proportions, required_n
from .proportion_tests import InstitutionRecord
from .ranking_analysis import (
    RankingDataset,
    compare_pair,
    excellence_flags,
    pairwise_matrix,
    trivial_neighborhood,
)
from .reports import (
    Table,
    cluster_table,
    emit_report,
    excellence_table,
    neighborhood_table,
    sample_size_table,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--alpha", type=float, default=0.05, help="significance level (default 0.05)")
    shared.add_argument("--expected", type=float, default=0.10,
                        help="expected top-10%% proportion (default 0.10)")
    shared.add_argument("--level", type=float, default=0.95, help="confidence level (default 0.95)")
    shared.add_argument("--h-threshold", type=float, default=H_ANCHORS[0],
                        help="Cohen's h below which a difference is trivial (default 0.2)")
    shared.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    shared.add_argument("--format", choices=("text", "csv"), default="text")
    return shared


def _ranking_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="ranking CSV (institution,n_pubs,n_top10); '-' for stdin")
    p.add_argument("--proportions", action="store_true",
                   help="input has pct_top10 (percent) instead of n_top10")
    p.add_argument("--sort-key", choices=("proportion", "n_top10", "n_pubs"), default="proportion")


def build_parser() -> argparse.ArgumentParser:
    shared = _common()
    parser = _Parser(prog="rankstats", description="Significance tests, effect sizes and power "
                     "for top-10% excellence indicators of research institutions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("test-one", parents=[shared], help="one institution vs the expected proportion")
    p.add_argument("--id", default="institution")
    p.add_argument("--n-pubs", type=int, required=True)
    p.add_argument("--n-top10", type=int, required=True)
    p.add_argument("--tails", choices=("two-sided", "greater", "less"), default="two-sided")

    p = sub.add_parser("test-pair", parents=[shared], help="two institutions against each other")
    for side in ("a", "b"):
        p.add_argument(f"--{side}-id", default=side.upper())
        p.add_argument(f"--{side}-pubs", type=int, required=True)
        p.add_argument(f"--{side}-top10", type=int, required=True)

    p = sub.add_parser("excellence", parents=[shared], help="one-sample test for every institution")
    _ranking_input(p)

    p = sub.add_parser("matrix", parents=[shared], help="all pairwise comparisons")
    _ranking_input(p)
    p.add_argument("--bonferroni", action="store_true", help="divide alpha by the number of pairs")

    p = sub.add_parser("neighborhood", parents=[shared], help="trivial-difference neighborhood")
    _ranking_input(p)
    p.add_argument("--reference", required=True, help="institution id of the reference")

    p = sub.add_parser("power", parents=[shared], help="power at a given effect size")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, help="second group size (default: n1)")
    p.add_argument("--tails", choices=("two-sided", "one-sided"), default="two-sided")

    p = sub.add_parser("sample-size", parents=[shared], help="required n per group")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--power", type=float, default=0.80, help="target power (default 0.80, by convention)")
    p.add_argument("--tails", choices=("two-sided", "one-sided"), default="two-sided")

    p = sub.add_parser("cluster-plan", parents=[shared], help="year clusters, random pick, homogeneity")
    p.add_argument("input", help="publication CSV (year,is_top10); '-' for stdin")
    p.add_argument("--width", type=int, default=3, help="years per cluster (default 3)")

    p = sub.add_parser("simulate", parents=[shared], help="Monte Carlo calibration table")
    p.add_argument("--n", type=int, default=1000, help="per-group size (default 1000)")
    p.add_argument("--h", type=float, default=0.2, help="effect size for the power row (default 0.2)")
    p.add_argument("--power-n", type=int, help="per-group size for the power row (default: n)")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--workers", type=int, default=1)
    return parser


@contextmanager
def _open(path: str):
    if path == "-":
        yield sys.stdin
    else:
        with open(path, newline="", encoding="utf-8") as fh:
            yield fh


def _dataset(args) -> RankingDataset:
    with _open(args.input) as fh:
        return parse_ranking_csv(fh, proportions=args.proportions, sort_key=args.sort_key)


def _simulation_table(args) -> Table:
    n, p0 = args.n, args.expected
    power_n = args.power_n or n
    p1 = proportion_at_h(p0, args.h)
    run = dict(trials=args.trials, seed=args.seed, workers=args.workers)
    table = Table(
        f"Monte Carlo calibration (trials={args.trials}, seed={args.seed})",
        ("experiment", "n1", "n2", "p1", "p2", "reference", "empirical"),
    )
    table.add("type1", n, None, p0, None, args.alpha,
              simulate_type1(n, p0, alpha=args.alpha, **run))
    analytic = power_two_proportions(args.h, power_n, power_n, args.alpha).power
    table.add("power", power_n, power_n, p1, p0, analytic,
              simulate_power(power_n, power_n, p1, p0, alpha=args.alpha, **run))
    table.add("ci_coverage", n, n, p1, p0, args.level,
              simulate_ci_coverage(n, n, p1, p0, level=args.level, **run))
    return table


def run(args) -> object:
    cmd = args.command
    if cmd == "test-one":
        rec = InstitutionRecord(args.id, args.n_pubs, args.n_top10)
        flags = excellence_flags(RankingDataset([rec]), args.expected, args.alpha, tails=args.tails)
        return excellence_table(flags, args.expected)
    if cmd == "test-pair":
        a = InstitutionRecord(args.a_id, args.a_pubs, args.a_top10)
        b = InstitutionRecord(args.b_id, args.b_pubs, args.b_top10)
        return compare_pair(a, b, args.alpha, level=args.level)
    if cmd == "excellence":
        return excellence_table(excellence_flags(_dataset(args), args.expected, args.alpha), args.expected)
    if cmd == "matrix":
        return pairwise_matrix(_dataset(args), args.alpha, bonferroni=args.bonferroni)
    if cmd == "neighborhood":
        ds = _dataset(args)
        return neighborhood_table(trivial_neighborhood(ds, args.reference, args.h_threshold), ds)
    if cmd == "power":
        n2 = args.n2 if args.n2 is not None else args.n1
        return power_two_proportions(args.h, args.n1, n2, args.alpha, args.tails)
    if cmd == "sample-size":
        n = required_n(args.h, args.alpha, args.power, args.tails)
        achieved = power_two_proportions(args.h, n, n, args.alpha, args.tails).power
        return sample_size_table(args.h, args.alpha, args.power, args.tails, n, achieved)
    if cmd == "cluster-plan":
        with _open(args.input) as fh:
            pubs = parse_publication_csv(fh)
        plan = select_cluster(build_clusters(pubs, args.width), args.seed)
        comparisons, max_z = homogeneity_sweep(plan, args.alpha)
        return cluster_table(plan, comparisons, max_z)
    if cmd == "simulate":
        return _simulation_table(args)
    raise UsageError(f"unknown command {cmd!r}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        output = emit_report(run(args), args.format)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (RankstatsError, OSError, UnicodeDecodeError) as exc:
        print(f"rankstats: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if hasattr(sys.stdout, "buffer"):
        sys.stdout.flush()
        sys.stdout.buffer.write(output)
        sys.stdout.buffer.flush()
    else:
        sys.stdout.write(output.decode("utf-8"))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
