"""Synchronizing right resolvers of directed multigraphs.

Core objects are immutable: :class:`~syncfactor.graphs.Graph` (positional
edge identity), :class:`~syncfactor.resolvers.RightResolver` (validated
out-edge-bijective homomorphisms), and the analyses built on them — minimal
and maximal bunchy factors, stability of resolvers, synchronizer synthesis,
and seeded sampling experiments.  The HTTP facade lives in
:mod:`syncfactor.service`, the command line in :mod:`syncfactor.cli`.
"""

from .bunchy import BunchyFactorResult, compute_bunchy_factor, factor_through_bunchy
from .construct import (
    NonBunchyWitness,
    SynthesisStep,
    SynthesisTrace,
    biresolving_swap,
    find_biresolver,
    find_nonbunchy_witness,
    synthesize_synchronizer,
    wab_stable_resolver,
)
from .errors import (
    BudgetExceeded,
    DeskScaleExceeded,
    GraphFormatError,
    NotStronglyConnected,
    ResolverValidationError,
    SynchronizerNotFound,
    SyncfactorError,
    TheoremViolation,
    UnsupportedInput,
    UsageError,
)
from .experiments import (
    ExperimentRecord,
    ExtensionSpec,
    OgProbeReport,
    SyncProbabilityEstimate,
    TableExperimentResult,
    derive_seed,
    enumerate_right_resolvers,
    estimate_sync_probability,
    histogram_csv,
    parse_records_csv,
    probe_og_uniqueness,
    records_csv,
    run_table_experiment,
    sample_extension,
    table_csv,
)
from .graphs import (
    Graph,
    Path,
    VertexPartition,
    brute_force_isomorphic,
    canonical_form,
    is_strongly_connected,
    period,
)
from .minimal import (
    BunchyClass,
    MinimalFactorResult,
    classify,
    compute_minimal_factor,
    minimal_iso,
)
from .resolvers import (
    ResolverKind,
    RightResolver,
    compose,
    identity_resolver,
    kind,
    lift_backward,
    lift_forward,
    random_right_resolver,
    validate,
)
from .stability import (
    MinimalImage,
    StabilityReport,
    compute_stability,
    fiber_collapse_word,
    is_synchronizing,
    maximal_synchronized_sets,
    minimal_images,
    mss_partition_word,
    pair_synchronizable,
    stability_quotient,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "BunchyClass",
    "BunchyFactorResult",
    "DeskScaleExceeded",
    "ExperimentRecord",
    "ExtensionSpec",
    "Graph",
    "GraphFormatError",
    "MinimalFactorResult",
    "MinimalImage",
    "NonBunchyWitness",
    "NotStronglyConnected",
    "OgProbeReport",
    "Path",
    "ResolverKind",
    "ResolverValidationError",
    "RightResolver",
    "StabilityReport",
    "SynchronizerNotFound",
    "SyncProbabilityEstimate",
    "SyncfactorError",
    "SynthesisStep",
    "SynthesisTrace",
    "TableExperimentResult",
    "TheoremViolation",
    "UnsupportedInput",
    "UsageError",
    "VertexPartition",
    "biresolving_swap",
    "brute_force_isomorphic",
    "canonical_form",
    "classify",
    "compose",
    "compute_bunchy_factor",
    "compute_minimal_factor",
    "compute_stability",
    "derive_seed",
    "enumerate_right_resolvers",
    "estimate_sync_probability",
    "factor_through_bunchy",
    "fiber_collapse_word",
    "find_biresolver",
    "find_nonbunchy_witness",
    "histogram_csv",
    "identity_resolver",
    "is_strongly_connected",
    "is_synchronizing",
    "kind",
    "lift_backward",
    "lift_forward",
    "maximal_synchronized_sets",
    "minimal_images",
    "minimal_iso",
    "mss_partition_word",
    "pair_synchronizable",
    "parse_records_csv",
    "period",
    "probe_og_uniqueness",
    "random_right_resolver",
    "records_csv",
    "run_table_experiment",
    "sample_extension",
    "stability_quotient",
    "synthesize_synchronizer",
    "table_csv",
    "validate",
    "wab_stable_resolver",
]
