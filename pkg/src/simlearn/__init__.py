"""Data-driven behavior reconstruction, similarity indexes, and
similarity-based trajectory transfer for linear time-varying systems."""

from .behavior import (
    BehaviorRep,
    MembershipResult,
    build_representation,
    decompose,
    membership,
    orthonormal_columns,
)
from .errors import (
    ConfigError,
    DegenerateBehaviorError,
    DimensionError,
    IlcDivergenceError,
    InvalidExperienceError,
    NotSimilarError,
    PrincipleViolationError,
    ProtocolError,
    SimlearnError,
)
from .ilc import IlcRun, ilc_error_curve, ilc_track, response_matrix
from .iotest import (
    PrincipleCheck,
    TestDataset,
    design_test_inputs,
    random_test_inputs,
    run_tests,
    verify_principles,
)
from .models import LtvModel, Trajectory, as_plant, build_lifted, oracle_behavior, simulate
from .similarity import (
    GuestRanking,
    SimilarityCheck,
    SimilarityReport,
    check_similarity,
    rank_guests,
    similarity_indexes,
)
from .transfer import (
    PipelineOutcome,
    TransferResult,
    project_behavior,
    project_subspace,
    transfer,
    transfer_pipeline,
)

__version__ = "0.1.0"

__all__ = [
    "BehaviorRep",
    "ConfigError",
    "DegenerateBehaviorError",
    "DimensionError",
    "GuestRanking",
    "IlcDivergenceError",
    "IlcRun",
    "InvalidExperienceError",
    "LtvModel",
    "MembershipResult",
    "NotSimilarError",
    "PipelineOutcome",
    "PrincipleCheck",
    "PrincipleViolationError",
    "ProtocolError",
    "SimilarityCheck",
    "SimilarityReport",
    "SimlearnError",
    "TestDataset",
    "Trajectory",
    "TransferResult",
    "as_plant",
    "build_lifted",
    "build_representation",
    "check_similarity",
    "decompose",
    "design_test_inputs",
    "ilc_error_curve",
    "ilc_track",
    "membership",
    "oracle_behavior",
    "orthonormal_columns",
    "project_behavior",
    "project_subspace",
    "random_test_inputs",
    "rank_guests",
    "response_matrix",
    "run_tests",
    "simulate",
    "similarity_indexes",
    "transfer",
    "transfer_pipeline",
    "verify_principles",
]
