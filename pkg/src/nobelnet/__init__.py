"""Professor-student genealogy analysis of prize candidacies.

The package builds a validated mentorship graph, measures each
candidate's proximity to previous winners (ancestors, descendants,
peers), assembles a yearly candidate panel, fits logit/probit models on
it, and renders the report bundle.
"""

from .config import RunConfig, parse_config, with_overrides
from .errors import (
    AllRowsDroppedError,
    CycleDetectedError,
    DataError,
    DegenerateDesignError,
    DuplicateIdError,
    EmptyInputError,
    EstimationError,
    InvalidFilterError,
    NobelnetError,
    ParseError,
    PerfectSeparationError,
    RankDeficientError,
    SameNodeError,
    SchemaError,
    UnknownCovariateError,
    UnknownEndpointError,
    UnknownNodeError,
    ValidationError,
)
from .estimators import (
    CitationBreak,
    CitationSeries,
    DesignMatrix,
    DroppedGroup,
    GlmFit,
    Link,
    WonAfterPair,
    build_design,
    citation_break,
    design_from_arrays,
    drop_separated_groups,
    fit_glm,
    predict_probability,
    won_after,
)
from .genealogy import (
    Direction,
    Gender,
    GenealogyGraph,
    MentorEdge,
    Scholar,
    Source,
    UNREACHABLE,
    all_distances,
    ancestor_set,
    build_graph,
    descendant_subgraph,
    directed_distance,
)
from .ingest import (
    IngestResult,
    LoadReport,
    emit_graph,
    emit_panel,
    ingest,
    load_citations,
    load_edges,
    load_panel,
    load_scholars,
)
from .panel import (
    PanelRow,
    apply_candidate_filter,
    build_panel,
    nobel_set_at,
    shortlist,
)
from .proximity import (
    NobelSet,
    ProximityVector,
    crosscloseness,
    holder_distance,
    horizontal_proximity,
    incloseness,
    outcloseness,
    peer_proximity,
    relative_scale,
    year_proximities,
)
from .report import ReportBundle, run_report

__version__ = "0.1.0"
