"""Brute-force reference solver.

Enumerates every interpretation, keeps those that are minimal models of their
own reduct, and counts projections.  Minimality is checked by enumerating all
proper subsets, deliberately independent of the dynamic-programming machinery
this package exists to test.
"""

from __future__ import annotations

from dataclasses import dataclass

from .program import Program

MAX_ATOMS = 24


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    answer_sets: frozenset[int]
    projected_count: int


def enumerate_answer_sets(program: Program) -> list[int]:
    """All answer sets as interpretation bitmasks, ascending."""
    n = program.n_atoms
    if n > MAX_ATOMS:
        raise OracleSizeError(f"{n} atoms exceed the brute-force guard of {MAX_ATOMS}")
    rules = [(r.head_mask, r.pos_mask, r.neg_mask) for r in program.rules]
    out = []
    for interp in range(1 << n):
        reduct = [(h, p) for h, p, ng in rules if not ng & interp]
        ok = True
        for h, p in reduct:
            if not (h & interp or p & ~interp):
                ok = False
                break
        if not ok:
            continue
        if interp:
            minimal = True
            sub = (interp - 1) & interp
            while True:
                good = True
                for h, p in reduct:
                    if not (h & sub or p & ~sub):
                        good = False
                        break
                if good:
                    minimal = False
                    break
                if sub == 0:
                    break
                sub = (sub - 1) & interp
            if not minimal:
                continue
        out.append(interp)
    return out


def projected_count(program: Program, pmask: int | None = None) -> int:
    """Number of distinct projections of answer sets onto the projection set."""
    if pmask is None:
        pmask = program.projection
    return len({interp & pmask for interp in enumerate_answer_sets(program)})


def analyze(program: Program, pmask: int | None = None) -> OracleResult:
    if pmask is None:
        pmask = program.projection
    answer_sets = enumerate_answer_sets(program)
    return OracleResult(frozenset(answer_sets), len({a & pmask for a in answer_sets}))
