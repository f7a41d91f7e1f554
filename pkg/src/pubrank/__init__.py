"""pubrank: author and institution ranking over publication corpora."""

from .analysis import (
    ScatterDataset,
    cumulative_curve,
    h_index,
    h_index_all,
    similarity_scatter,
    write_scatter_csv,
    year_scatter,
)
from .corpus import (
    AuthorRecord,
    Corpus,
    CorpusFormatError,
    DomainNotFoundError,
    DomainView,
    InstitutionRecord,
    PaperRecord,
    ValidationReport,
    VenueRecord,
    build_corpus,
    domain_view,
    exclude_self_citations,
    load_corpus,
    merge_overall,
    write_corpus,
)
from .grading import (
    ContributionBased,
    GradeAssignment,
    PercentileBased,
    RankingTable,
    RankRow,
    assign_letters,
    letter_distribution,
    rank_authors,
    write_grades_csv,
    write_ranking_csv,
)
from .institutions import (
    InstitutionScore,
    RankComparison,
    compare_rankings,
    score_institutions,
    write_institutions_csv,
)
from .metrics import (
    ALL_METRICS,
    MetricConfig,
    MetricKind,
    MetricVector,
    build_exposure_operator,
    build_influence_operator,
    compute_bcc,
    compute_cc,
    compute_connections,
    compute_cv,
    compute_exposure,
    compute_followers,
    compute_influence,
    compute_metric,
    write_metric_csv,
)
from .ranker import (
    PowerIterationConfig,
    RankVector,
    TransitionOperator,
    power_iterate,
    row_normalize,
    stationary_exact,
)
from .synth import SynthConfig, generate

__version__ = "0.1.0"
