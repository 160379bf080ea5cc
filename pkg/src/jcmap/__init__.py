"""Journal citation mapping: ego environments, varimax factor analysis,
nonmetric MDS stimulus spaces, citation trends and synthetic skewed data."""

__version__ = "0.1.0"

from .ego import Direction, EgoEnvironment, build_environment, build_matrix, ego_total, select_members
from .errors import JcmapError
from .factors import (
    CorrelationMatrix,
    FactorSolution,
    ProfileMode,
    designate_clusters,
    extract_components,
    factor_analyze,
    profile_correlations,
    select_factor_count,
    varimax_criterion,
    varimax_rotate,
)
from .genmodel import (
    CumAdvConfig,
    PowerLawFit,
    fit_power_law,
    sample_skewness,
    simulate_cumulative_advantage,
    synthesize_environment_fixture,
    synthesize_series_fixture,
)
from .ingest import CitationRecord, CitationTensor, aggregate, load_tensor, normalize_journal_name, parse_citation_csv
from .mds import MapLayout, dissimilarity_from_correlation, kruskal_stress1, monotone_regression, nonmetric_mds
from .trends import TrendSeries, moving_average, pair_series
