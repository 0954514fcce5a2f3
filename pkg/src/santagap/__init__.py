"""santagap: exact desk-scale tools for restricted max-min allocation.

Computes the configuration-LP optimum T* exactly, builds approximation
allocation graphs, measures the topological connectedness parameter eta
of independence complexes over GF(2), executes and validates
deletion/explosion sequences with cover accounting, and runs
integrality-gap experiments against the 53/15 and two-values bounds.
"""

__version__ = "0.1.0"

from .instance import (
    Allocation,
    Instance,
    InstanceError,
    OptResult,
    ParseError,
    brute_force_opt,
    gen_random,
    gen_two_value,
    load_instance,
    parse_instance,
    parse_instance_json,
)
from .lp_core import (
    ClpModel,
    Configuration,
    DualSolution,
    LpFeasibilityResult,
    TStarResult,
    build_dual_basic,
    build_dual_refined,
    clp_feasible,
    compute_t_star,
    enumerate_configurations,
    verify_dual,
)
from .allocation_graph import (
    AllocationGraph,
    AlphaHyperedge,
    FatReport,
    MAlpha,
    build_H,
    build_J,
    compute_fat,
    compute_m,
    enumerate_alpha_hyperedges,
    find_independent_transversal,
    is_block,
    restrict,
)
from .gap_report import (
    CoefficientCertificate,
    GapReport,
    run_gap_experiment,
    verify_convex_combination,
)
from .graphs import Graph
from .two_values import (
    LimitConstants,
    RcEntry,
    a_coeff,
    check_obs_crc,
    f_gap,
    harmonic_sums,
    limit_bound,
    r_c,
    rc_table,
    two_value_driver,
)

__all__ = [
    "Allocation",
    "AllocationGraph",
    "AlphaHyperedge",
    "ClpModel",
    "CoefficientCertificate",
    "Configuration",
    "DualSolution",
    "FatReport",
    "GapReport",
    "Graph",
    "Instance",
    "InstanceError",
    "LimitConstants",
    "LpFeasibilityResult",
    "MAlpha",
    "OptResult",
    "ParseError",
    "RcEntry",
    "TStarResult",
    "a_coeff",
    "brute_force_opt",
    "build_H",
    "build_J",
    "build_dual_basic",
    "build_dual_refined",
    "check_obs_crc",
    "clp_feasible",
    "compute_fat",
    "compute_m",
    "compute_t_star",
    "enumerate_alpha_hyperedges",
    "enumerate_configurations",
    "f_gap",
    "find_independent_transversal",
    "gen_random",
    "gen_two_value",
    "harmonic_sums",
    "is_block",
    "limit_bound",
    "load_instance",
    "parse_instance",
    "parse_instance_json",
    "r_c",
    "rc_table",
    "restrict",
    "run_gap_experiment",
    "two_value_driver",
    "verify_convex_combination",
    "verify_dual",
]
