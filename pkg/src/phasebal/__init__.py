"""Optimal phase allocation for radial distribution feeders.

Builds a mixed-integer linear program over a linearized three-phase
DistFlow grid model, solves it with a built-in simplex / branch-and-bound
pair, and certifies small instances by brute-force enumeration.
"""

from .analysis import (
    ReassignmentTable,
    UnbalanceReport,
    reassignment,
    unbalance_metric,
)
from .bnb import MipSolution, solve_mip
from .feeder import FeederFormatError, parse_feeder, serialize_feeder
from .formulation import CaseConfig, MilpModel, ModelBuildError, build_model, fix_assignment
from .lin3distflow import (
    PhasorState,
    SensitivityMatrices,
    build_sensitivity,
    downstream_flows,
    load_injections,
    propagate_voltages,
    run_power_flow,
)
from .lp_format import read_solution, write_lp
from .network import (
    Bus,
    Line,
    Network,
    Phase,
    PHASES,
    ValidationReport,
    networks_equal,
    validate,
)
from .oracle import CertifyResult, EnumerationGuardError, certify, enumerate_assignments
from .simplex import LpSolution, solve_lp
from .solution import Solution, check_solution, constraint_residuals, extract_solution

__all__ = [
    "Bus",
    "CaseConfig",
    "CertifyResult",
    "EnumerationGuardError",
    "FeederFormatError",
    "Line",
    "LpSolution",
    "MilpModel",
    "MipSolution",
    "ModelBuildError",
    "Network",
    "PHASES",
    "Phase",
    "PhasorState",
    "ReassignmentTable",
    "Solution",
    "SensitivityMatrices",
    "UnbalanceReport",
    "ValidationReport",
    "build_model",
    "build_sensitivity",
    "certify",
    "check_solution",
    "constraint_residuals",
    "downstream_flows",
    "enumerate_assignments",
    "extract_solution",
    "fix_assignment",
    "load_injections",
    "networks_equal",
    "parse_feeder",
    "propagate_voltages",
    "read_solution",
    "reassignment",
    "run_power_flow",
    "serialize_feeder",
    "solve_lp",
    "solve_mip",
    "unbalance_metric",
    "validate",
    "write_lp",
]
