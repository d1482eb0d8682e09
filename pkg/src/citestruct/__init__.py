"""Structural-change indicators for evolving journal citation networks.

The pipeline factor-analyzes yearly journal-journal citation matrices, bins
the three main loading columns into a 10x10x10 joint distribution, and
derives configurational information Q, ternary interaction information I,
and the redundancy R = I + Q, next to partial correlations, factor-graph
exports, and betweenness series.
"""

from .binning import JointDistribution3, MarginSet, bin_loadings, margins, serialize_joint_csv
from .corpus import (
    CitationMatrix,
    YearSeries,
    build_environment,
    load_year_dir,
    load_year_series,
    parse_citation_csv,
    select_direction,
    serialize_citation_csv,
    zero_diagonal,
)
from .factors import (
    CorrelationMatrix,
    CorrelationReport,
    FactorSolution,
    RotationInfo,
    align_solution,
    correlation_matrix,
    partial_correlations,
    principal_components,
    serialize_solution_csv,
    varimax_criterion,
    varimax_rotate,
)
from .graphs import (
    JournalGraph,
    TwoModeGraph,
    betweenness,
    export_pajek,
    factor_graph,
    journal_graph,
    pajek_partition,
    parse_pajek,
    write_pajek,
)
from .infomeasures import (
    InfoReport,
    entropy,
    info_report,
    millibits,
    mu_multi,
    mu_star3,
    q_config,
    transmission2,
)
from .maxent import MaxEntModel, ipf_fit, redundancy, ternary_interaction
from .pipeline import (
    AnalysisConfig,
    SeriesReport,
    SeriesRow,
    SynthParams,
    YearAnalysis,
    analyze_series,
    analyze_year,
    synth_series,
)

__version__ = "0.1.0"
