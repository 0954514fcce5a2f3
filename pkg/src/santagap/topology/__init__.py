"""Independence-complex topology: eta, DE-sequences, covers, drivers."""

from .desequence import (
    DELETE,
    EXPLODE,
    CoverRecord,
    DeSequence,
    DeStep,
    EdgeClassification,
    ExecutionResult,
    SearchOutcome,
    SequenceError,
    average_cost,
    basic_cover,
    classify_edge,
    cover_value,
    execute_sequence,
    is_cheap,
    is_gamma,
    replay_structurally,
    search_de_sequence,
    sequence_from_json,
    shrink_cover,
    step_from_json,
    verify_star,
    vertex_resources,
)
from .drivers import (
    FourPhaseResult,
    HallResult,
    PhaseLedger,
    all_deletions,
    four_phase_driver,
    hall_eta_check,
)
from .homology import (
    INF,
    EtaCapError,
    HomologyProfile,
    SimplicialComplex,
    clear_eta_cache,
    eta,
    eta_at_least,
    eta_from_profile,
    homology_profile,
    independence_complex,
)

__all__ = [
    "DELETE",
    "EXPLODE",
    "INF",
    "CoverRecord",
    "DeSequence",
    "DeStep",
    "EdgeClassification",
    "EtaCapError",
    "ExecutionResult",
    "FourPhaseResult",
    "HallResult",
    "HomologyProfile",
    "PhaseLedger",
    "SearchOutcome",
    "SequenceError",
    "SimplicialComplex",
    "all_deletions",
    "average_cost",
    "basic_cover",
    "classify_edge",
    "clear_eta_cache",
    "cover_value",
    "eta",
    "eta_at_least",
    "eta_from_profile",
    "execute_sequence",
    "four_phase_driver",
    "hall_eta_check",
    "homology_profile",
    "independence_complex",
    "is_cheap",
    "is_gamma",
    "replay_structurally",
    "search_de_sequence",
    "sequence_from_json",
    "shrink_cover",
    "step_from_json",
    "verify_star",
    "vertex_resources",
]
