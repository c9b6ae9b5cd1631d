"""Minimal-time digital-analog schedules and their total-time bounds."""
from .compiler import (
    BoundsReport,
    Schedule,
    bounds_report,
    compile,
    conjecture_gap_search,
    enumerate_worst_directions,
    general_worst_problems,
    worst_case_problem,
)
from .hamiltonian import (
    CouplingKey,
    ModelKind,
    ProblemVector,
    TwoBodyHamiltonian,
    build_problem_vector,
    coupling_index,
    norms,
)
from .lp import LpSolution, enumerate_basic_solutions, solve_min_time
from .experiments import run_sweep
from .polytope import FacetSet, facet_enumeration, gauge, inradius
from .signs import SignMatrix, build_sign_matrix, build_sign_matrix_recursive, enumerate_layers, restrict_rows
from .verify import VerificationReport, verify_all

__version__ = "0.1.0"

__all__ = [
    "BoundsReport", "CouplingKey", "FacetSet", "LpSolution", "ModelKind", "ProblemVector", "Schedule",
    "SignMatrix", "TwoBodyHamiltonian", "VerificationReport", "bounds_report", "build_problem_vector",
    "build_sign_matrix", "build_sign_matrix_recursive", "compile", "conjecture_gap_search",
    "coupling_index", "enumerate_basic_solutions", "enumerate_layers", "enumerate_worst_directions",
    "facet_enumeration", "gauge", "general_worst_problems", "inradius", "norms", "restrict_rows",
    "run_sweep", "solve_min_time", "verify_all", "worst_case_problem",
]
