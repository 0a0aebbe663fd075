"""End-to-end solving: classify, decompose, run both DP passes, count."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import engine, proj
from .decomposition import TreeDecomposition, decompose, make_nice, primal_graph
from .phc import PHC, PHC_TIGHT
from .prim import PRIM
from .program import Program, ProgramKind, classify

ALGORITHMS = {"phc": PHC, "phc-tight": PHC_TIGHT, "prim": PRIM}


class AlgorithmMismatchError(ValueError):
    """Requested table algorithm is unsound for the program's class."""


@dataclass
class RunStats:
    width: int = 0
    nodes: int = 0
    max_table: int = 0
    max_purged: int = 0
    algorithm: str = ""
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "nodes": self.nodes,
            "max_table": self.max_table,
            "max_purged": self.max_purged,
            "algorithm": self.algorithm,
            "timings": {k: round(v, 6) for k, v in self.timings.items()},
        }


@dataclass
class SolveResult:
    count: int
    stats: RunStats
    program: Program
    ttd: engine.TabledTreeDecomposition
    purged: engine.PurgedTables
    proj_tables: proj.ProjTables
    td: TreeDecomposition


def pick_algorithm(program: Program, requested: str = "auto"):
    kind = classify(program).kind
    if requested == "auto":
        if kind is ProgramKind.TIGHT:
            return PHC_TIGHT
        if kind is ProgramKind.HEAD_CYCLE_FREE:
            return PHC
        return PRIM
    alg = ALGORITHMS.get(requested)
    if alg is None:
        raise ValueError(f"unknown algorithm {requested!r}")
    if alg is PHC_TIGHT and kind is not ProgramKind.TIGHT:
        raise AlgorithmMismatchError(f"phc-tight requires a tight program, got {kind.value}")
    if alg is PHC and kind is ProgramKind.DISJUNCTIVE:
        raise AlgorithmMismatchError(f"phc requires a head-cycle-free program, got {kind.value}")
    return alg


def solve(
    program: Program,
    algorithm: str = "auto",
    heuristic: str = "min-fill",
    seed: int = 0,
    td: TreeDecomposition | None = None,
) -> SolveResult:
    """Count the projected answer sets of the program.

    A tree decomposition may be supplied; otherwise one is computed with the
    given elimination heuristic and seed.  The algorithm defaults to the
    strongest sound one for the program's class.
    """
    alg = pick_algorithm(program, algorithm)
    stats = RunStats(algorithm=alg.name)

    t0 = time.perf_counter()
    if td is None:
        td = decompose(primal_graph(program), heuristic, seed)
    nice = make_nice(td)
    stats.timings["decompose"] = time.perf_counter() - t0
    stats.width = nice.width
    stats.nodes = len(nice.nodes)

    t0 = time.perf_counter()
    ttd = engine.run_dp(alg, program, nice)
    stats.timings["dp"] = time.perf_counter() - t0
    stats.max_table = max(len(ttd.table(t)) for t in ttd.post_order)

    t0 = time.perf_counter()
    purged = engine.purge(ttd)
    stats.timings["purge"] = time.perf_counter() - t0
    stats.max_purged = purged.max_rows()

    t0 = time.perf_counter()
    tables = proj.run_proj(purged, program.projection)
    stats.timings["proj"] = time.perf_counter() - t0

    count = proj.final_count(tables, purged)
    return SolveResult(count, stats, program, ttd, purged, tables, td)
