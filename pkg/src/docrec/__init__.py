"""Related-paper recommendation from digital library access logs.

Access logs are filtered, split into per-client sessions, and reduced to
debiased co-download pair counts; reference lists give co-citation counts
for comparison. Both feed the same ranked recommender and evaluation
harness.
"""

from .coindex import (
    COCITATION,
    CODOWNLOAD,
    CoOccurrenceIndex,
    DebiasConfig,
    count_cocitations,
    count_codownloads,
    merge,
    read_index,
    write_index,
)
from .estimators import (
    AccessLogFilter,
    CoCitationRecommender,
    CoDownloadRecommender,
    PrecomputedIndexRecommender,
    Sessionizer,
)
from .evaluator import (
    CurvePoint,
    EvalQuery,
    average_precision,
    build_eval_queries,
    coverage_distribution,
    map_over_age,
    recs_over_age,
)
from .exceptions import ContractError, FormatError, MissingMetadataError, ParseError
from .logmodel import (
    AccessEvent,
    CitationRecord,
    DocumentMeta,
    FilterConfig,
    filter_events,
    load_citations,
    load_metadata,
    parse_access_line,
)
from .recommender import RecommendationList, max_strength, recommend
from .sessionizer import Session, sessionize
from .synthcorpus import GenConfig, TopicOracle, generate, oracle_relevant

__version__ = "0.1.0"

__all__ = [
    "COCITATION",
    "CODOWNLOAD",
    "CoOccurrenceIndex",
    "DebiasConfig",
    "count_cocitations",
    "count_codownloads",
    "merge",
    "read_index",
    "write_index",
    "AccessLogFilter",
    "CoCitationRecommender",
    "CoDownloadRecommender",
    "PrecomputedIndexRecommender",
    "Sessionizer",
    "CurvePoint",
    "EvalQuery",
    "average_precision",
    "build_eval_queries",
    "coverage_distribution",
    "map_over_age",
    "recs_over_age",
    "ContractError",
    "FormatError",
    "MissingMetadataError",
    "ParseError",
    "AccessEvent",
    "CitationRecord",
    "DocumentMeta",
    "FilterConfig",
    "filter_events",
    "load_citations",
    "load_metadata",
    "parse_access_line",
    "RecommendationList",
    "max_strength",
    "recommend",
    "Session",
    "sessionize",
    "GenConfig",
    "TopicOracle",
    "generate",
    "oracle_relevant",
]
