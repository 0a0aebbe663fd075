"""Projected answer-set counting for ground disjunctive programs by dynamic
programming over tree decompositions of the primal graph."""

from .decomposition import (
    NiceTreeDecomposition,
    PrimalGraph,
    TreeDecomposition,
    decompose,
    make_nice,
    primal_graph,
    validate_td,
)
from .engine import TabledTreeDecomposition, origins, origins_table, purge, run_dp
from .formats import ParseDiagnostic, ParseError, parse_program, print_program, read_td, write_td
from .oracle import enumerate_answer_sets, projected_count
from .phc import PHC, PHC_TIGHT, consistent
from .pipeline import SolveResult, solve
from .prim import PRIM, prim_solution_rows
from .program import Program, ProgramClass, ProgramKind, Rule, classify, gl_reduct, satisfies
from .proj import final_count, run_proj

__version__ = "0.1.0"

__all__ = [
    "NiceTreeDecomposition",
    "PrimalGraph",
    "TreeDecomposition",
    "decompose",
    "make_nice",
    "primal_graph",
    "validate_td",
    "TabledTreeDecomposition",
    "origins",
    "origins_table",
    "purge",
    "run_dp",
    "ParseDiagnostic",
    "ParseError",
    "parse_program",
    "print_program",
    "read_td",
    "write_td",
    "enumerate_answer_sets",
    "projected_count",
    "PHC",
    "PHC_TIGHT",
    "PRIM",
    "consistent",
    "prim_solution_rows",
    "SolveResult",
    "solve",
    "Program",
    "ProgramClass",
    "ProgramKind",
    "Rule",
    "classify",
    "gl_reduct",
    "satisfies",
    "final_count",
    "run_proj",
]
