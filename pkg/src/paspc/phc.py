"""Table algorithm for head-cycle-free programs.

Rows are triples (interpretation, proven atoms, atom ordering), all restricted
to the current bag.  An atom counts as proven when some rule derives it with
every positive body atom ordered strictly before it; removal keeps a row only
if the removed atom is proven or false.  The tight variant drops the ordering
component entirely: on programs with an acyclic positive dependency digraph,
provability degenerates to rule support.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .decomposition import INTRODUCE, JOIN, LEAF, REMOVE
from .engine import NodeTable
from .program import Program, Rule, ids_of, is_model


class PhcRow(NamedTuple):
    interp: int
    proven: int
    order: tuple[int, ...]


class TightRow(NamedTuple):
    interp: int
    proven: int


def ords(order: tuple[int, ...], addition) -> list[tuple[int, ...]]:
    """All insertions of the (at most one) added atom into the ordering."""
    extra = list(addition)
    if not extra:
        return [order]
    if len(extra) > 1:
        raise ValueError("at most one atom can be inserted at a time")
    a = extra[0]
    if a in order:
        raise ValueError("atom already ordered")
    return [order[:i] + (a,) + order[i:] for i in range(len(order) + 1)]


def gp(interp: int, order: tuple[int, ...], bag_rules: Sequence[Rule]) -> int:
    """Atoms provable under the interpretation and ordering (as a bitmask).

    A head atom is provable when the positive body holds, the negative body
    and the rest of the head are false, and every positive body atom comes
    strictly before it in the ordering.  Body atoms missing from the ordering
    fail the ordering condition.
    """
    pos_at = {a: i for i, a in enumerate(order)}
    proven = 0
    for r in bag_rules:
        if r.pos_mask & ~interp or r.neg_mask & interp:
            continue
        for a in r.head:
            if interp & (r.head_mask & ~(1 << a)):
                continue
            ia = pos_at.get(a)
            if ia is None:
                continue
            if all(pos_at.get(b, len(order)) < ia for b in r.pos_body):
                proven |= 1 << a
    return proven


def gp_supported(interp: int, bag_rules: Sequence[Rule]) -> int:
    """Ordering-free provability: plain rule support."""
    proven = 0
    for r in bag_rules:
        if r.pos_mask & ~interp or r.neg_mask & interp:
            continue
        for a in r.head:
            if not interp & (r.head_mask & ~(1 << a)):
                proven |= 1 << a
    return proven


class PhcAlgorithm:
    name = "phc"
    solution_row = PhcRow(0, 0, ())

    @staticmethod
    def interp(row: PhcRow) -> int:
        return row.interp

    @staticmethod
    def sort_key(row: PhcRow):
        return (row.interp, row.proven, row.order)

    @staticmethod
    def node_table(
        kind: str,
        bag_mask: int,
        atom: int | None,
        bag_rules: Sequence[Rule],
        child_tables: Sequence[NodeTable],
    ) -> dict[PhcRow, set[tuple[int, ...]]]:
        out: dict[PhcRow, set[tuple[int, ...]]] = {}
        if kind == LEAF:
            out[PhcRow(0, 0, ())] = {()}
        elif kind == INTRODUCE:
            bit = 1 << atom
            for ci, row in enumerate(child_tables[0].rows):
                for interp in (row.interp, row.interp | bit):
                    if not is_model(interp, bag_rules):
                        continue
                    for order in ords(row.order, (atom,) if interp & bit else ()):
                        new = PhcRow(interp, row.proven | gp(interp, order, bag_rules), order)
                        out.setdefault(new, set()).add((ci,))
        elif kind == REMOVE:
            bit = 1 << atom
            for ci, row in enumerate(child_tables[0].rows):
                if row.proven & bit or not row.interp & bit:
                    new = PhcRow(
                        row.interp & ~bit,
                        row.proven & ~bit,
                        tuple(a for a in row.order if a != atom),
                    )
                    out.setdefault(new, set()).add((ci,))
        elif kind == JOIN:
            right: dict[tuple[int, tuple[int, ...]], list[int]] = {}
            for cj, row in enumerate(child_tables[1].rows):
                right.setdefault((row.interp, row.order), []).append(cj)
            for ci, row in enumerate(child_tables[0].rows):
                for cj in right.get((row.interp, row.order), ()):
                    new = PhcRow(row.interp, row.proven | child_tables[1].rows[cj].proven, row.order)
                    out.setdefault(new, set()).add((ci, cj))
        else:
            raise ValueError(f"unknown node kind {kind!r}")
        return out

    @staticmethod
    def format_row(row: PhcRow, program: Program) -> str:
        i = ",".join(program.names(row.interp))
        p = ",".join(program.names(row.proven))
        s = ",".join(program.atom_names[a] for a in row.order)
        return f"I={{{i}}} P={{{p}}} s=<{s}>"


class PhcTightAlgorithm:
    """Ordering-free variant, sound for tight programs only."""

    name = "phc-tight"
    solution_row = TightRow(0, 0)

    @staticmethod
    def interp(row: TightRow) -> int:
        return row.interp

    @staticmethod
    def sort_key(row: TightRow):
        return (row.interp, row.proven)

    @staticmethod
    def node_table(
        kind: str,
        bag_mask: int,
        atom: int | None,
        bag_rules: Sequence[Rule],
        child_tables: Sequence[NodeTable],
    ) -> dict[TightRow, set[tuple[int, ...]]]:
        out: dict[TightRow, set[tuple[int, ...]]] = {}
        if kind == LEAF:
            out[TightRow(0, 0)] = {()}
        elif kind == INTRODUCE:
            bit = 1 << atom
            for ci, row in enumerate(child_tables[0].rows):
                for interp in (row.interp, row.interp | bit):
                    if not is_model(interp, bag_rules):
                        continue
                    new = TightRow(interp, row.proven | gp_supported(interp, bag_rules))
                    out.setdefault(new, set()).add((ci,))
        elif kind == REMOVE:
            bit = 1 << atom
            for ci, row in enumerate(child_tables[0].rows):
                if row.proven & bit or not row.interp & bit:
                    new = TightRow(row.interp & ~bit, row.proven & ~bit)
                    out.setdefault(new, set()).add((ci,))
        elif kind == JOIN:
            right: dict[int, list[int]] = {}
            for cj, row in enumerate(child_tables[1].rows):
                right.setdefault(row.interp, []).append(cj)
            for ci, row in enumerate(child_tables[0].rows):
                for cj in right.get(row.interp, ()):
                    new = TightRow(row.interp, row.proven | child_tables[1].rows[cj].proven)
                    out.setdefault(new, set()).add((ci, cj))
        else:
            raise ValueError(f"unknown node kind {kind!r}")
        return out

    @staticmethod
    def format_row(row: TightRow, program: Program) -> str:
        i = ",".join(program.names(row.interp))
        p = ",".join(program.names(row.proven))
        return f"I={{{i}}} P={{{p}}}"


PHC = PhcAlgorithm()
PHC_TIGHT = PhcTightAlgorithm()


def consistent(ttd) -> bool:
    """A head-cycle-free program has an answer set iff the all-empty row
    reached the root table."""
    return ttd.alg.solution_row in ttd.table(ttd.td.root).index


def check_row_invariants(ttd) -> list[str]:
    """Structural row checks used by fuzz tests: proven within interpretation
    within bag, and the ordering enumerating the interpretation exactly."""
    problems = []
    for t in ttd.post_order:
        bag_mask = ttd.td.nodes[t].bag_mask
        for row in ttd.table(t).rows:
            if row.interp & ~bag_mask:
                problems.append(f"node {t}: interpretation outside bag")
            if row.proven & ~row.interp:
                problems.append(f"node {t}: proven atom outside interpretation")
            if isinstance(row, PhcRow):
                if len(set(row.order)) != len(row.order) or set(row.order) != set(ids_of(row.interp)):
                    problems.append(f"node {t}: ordering does not enumerate interpretation")
    return problems
