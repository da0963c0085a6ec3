"""Graph-constrained max-cut: LP relaxation over tree-decomposition states,
randomized rounding with a provable half-of-LP guarantee, and a partition
meta-algorithm for deletion- and contraction-friendly constraints.
"""

from .decomposition import (FAMILY_FULL, FAMILY_REDUCED, TreeDecomposition,
                            build_tree_decomposition,
                            validate_tree_decomposition, variable_family)
from .dp import ConstraintDP, StateSpaceError
from .graph import (CONNECTIVITY, DOMINATING_SET, INDEPENDENT_SET,
                    VERTEX_COVER, ConstraintGraph, Instance, WeightFunction,
                    closed_neighborhood, cut_value, is_feasible)
from .lp import LPModel, build_lp, embed_integral_solution, lp_statistics, \
    make_family
from .minor import ContractedInstance, VertexPartition, algorithm2, \
    contract_part, force_root_vertex
from .oracle import OracleReport, brute_force_opt, certify_instance, corpus, \
    enumerate_feasible
from .pipeline import Pipeline, run_pipeline
from .rounding import Rounder, RoundingRun, check_joint_inequality, \
    exact_expected_cut, half_cut_audit, per_edge_cut_audit, round_once
from .simplex import SolverConfig, SolverResult, check_solution, solve

__all__ = [
    "CONNECTIVITY", "DOMINATING_SET", "INDEPENDENT_SET", "VERTEX_COVER",
    "FAMILY_FULL", "FAMILY_REDUCED",
    "ConstraintGraph", "Instance", "WeightFunction", "ConstraintDP",
    "TreeDecomposition", "LPModel", "Pipeline", "Rounder", "RoundingRun",
    "OracleReport", "ContractedInstance", "VertexPartition",
    "SolverConfig", "SolverResult", "StateSpaceError",
    "algorithm2", "brute_force_opt", "build_lp", "build_tree_decomposition",
    "certify_instance", "check_joint_inequality", "check_solution",
    "closed_neighborhood", "contract_part", "corpus", "cut_value",
    "embed_integral_solution", "enumerate_feasible", "exact_expected_cut",
    "force_root_vertex", "half_cut_audit", "is_feasible", "lp_statistics",
    "make_family", "per_edge_cut_audit", "round_once", "run_pipeline",
    "solve", "validate_tree_decomposition", "variable_family",
]
