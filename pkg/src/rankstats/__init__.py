"""Significance tests, effect sizes, power analysis and cluster sampling for
citation-based excellence indicators (share of top-10% most-cited papers)."""

from .cluster_sampling import (
    Cluster,
    ClusterComparison,
    ClusterPlan,
    PublicationRecord,
    build_clusters,
    cluster_vs_population,
    homogeneity_sweep,
    select_cluster,
)
from .effect_sizes import (
    EffectSize,
    TwoByTwoTable,
    chi_square,
    classify_h,
    classify_w,
    cohens_h,
    cohens_w,
    cramers_v,
)
from .errors import (
    DegenerateDataError,
    DomainError,
    DuplicateIdError,
    NotFoundError,
    ParseError,
    RankstatsError,
    UnattainablePowerError,
)
from .ingest import parse_publication_csv, parse_ranking_csv
from .montecarlo import SimulationConfig, simulate_ci_coverage, simulate_power, simulate_type1
from .power_analysis import PowerReport, minimum_detectable_h, power_two_proportions, required_n
from .proportion_tests import (
    ConfidenceInterval,
    InstitutionRecord,
    TestResult,
    diff_ci,
    normal_cdf,
    one_sample_z,
    two_sample_z,
)
from .ranking_analysis import (
    NeighborhoodReport,
    RankingDataset,
    excellence_flags,
    pairwise_matrix,
    trivial_neighborhood,
)
from .reports import emit_report

__version__ = "0.1.0"
