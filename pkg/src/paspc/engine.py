"""Post-order dynamic-programming driver over a nice tree decomposition.

Each table algorithm turns one node's child tables into the node's own table
and reports, per emitted row, the child-row index sequences it came from.
The driver records tables and those origin links; a later top-down pass
(purge) keeps only rows reachable from designated solution rows at the root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Protocol, Sequence

from .decomposition import INTRODUCE, LEAF, REMOVE, NiceTreeDecomposition
from .program import Program, Rule


class TableAlgorithm(Protocol):
    name: str
    solution_row: Any

    def node_table(
        self,
        kind: str,
        bag_mask: int,
        atom: int | None,
        bag_rules: Sequence[Rule],
        child_tables: Sequence["NodeTable"],
    ) -> dict[Any, set[tuple[int, ...]]]: ...

    def interp(self, row: Any) -> int: ...

    def sort_key(self, row: Any) -> Any: ...

    def format_row(self, row: Any, program: Program) -> str: ...


class NodeTable:
    """Rows in canonical order plus per-row origin sequences (child indices)."""

    __slots__ = ("rows", "index", "origins")

    def __init__(self, rows: list, origins: list[list[tuple[int, ...]]]):
        self.rows = rows
        self.index = {row: i for i, row in enumerate(rows)}
        self.origins = origins

    def __len__(self) -> int:
        return len(self.rows)


@dataclass
class TabledTreeDecomposition:
    """Nice decomposition attributed with per-node tables of one algorithm."""

    td: NiceTreeDecomposition
    program: Program
    alg: TableAlgorithm
    tables: list[NodeTable | None]
    bag_rules: list[list[Rule]]
    post_order: list[int] = field(default_factory=list)

    def table(self, t: int) -> NodeTable:
        tab = self.tables[t]
        if tab is None:
            raise KeyError(f"node {t} has no table")
        return tab


def bag_programs(program: Program, td: NiceTreeDecomposition) -> list[list[Rule]]:
    """Per-node rule lists: a rule belongs to a node iff its atoms fit the bag.

    Computed incrementally bottom-up: rules enter at introduce nodes of one of
    their atoms and leave when an atom is removed."""
    rules_by_atom: dict[int, list[Rule]] = {}
    atomless = []
    for r in program.rules:
        if r.atom_mask == 0:
            atomless.append(r)  # fits every bag
            continue
        for a in sorted(set(r.head) | set(r.pos_body) | set(r.neg_body)):
            rules_by_atom.setdefault(a, []).append(r)

    out: list[list[Rule]] = [[] for _ in td.nodes]
    for t in td.post_order():
        nd = td.nodes[t]
        if nd.kind == LEAF:
            out[t] = list(atomless)
        elif nd.kind == INTRODUCE:
            # a rule enters exactly when its last missing atom is introduced
            fresh = [r for r in rules_by_atom.get(nd.atom, ()) if not (r.atom_mask & ~nd.bag_mask)]
            out[t] = out[nd.children[0]] + fresh
        elif nd.kind == REMOVE:
            bit = 1 << nd.atom
            out[t] = [r for r in out[nd.children[0]] if not (r.atom_mask & bit)]
        else:  # join: same bag as both children
            out[t] = out[nd.children[0]]
    return out


def run_dp(alg: TableAlgorithm, program: Program, td: NiceTreeDecomposition) -> TabledTreeDecomposition:
    """Run the table algorithm over all nodes in post-order."""
    order = td.post_order()
    rules = bag_programs(program, td)
    tables: list[NodeTable | None] = [None] * len(td.nodes)
    for t in order:
        nd = td.nodes[t]
        children = [tables[c] for c in nd.children]
        assert all(c is not None for c in children)
        produced = alg.node_table(nd.kind, nd.bag_mask, nd.atom, rules[t], children)  # type: ignore[arg-type]
        rows = sorted(produced, key=alg.sort_key)
        origins = [sorted(produced[row]) for row in rows]
        tables[t] = NodeTable(rows, origins)
    return TabledTreeDecomposition(td, program, alg, tables, rules, order)


def origins(ttd: TabledTreeDecomposition, t: int, row: Any) -> set[tuple]:
    """Originating child-row sequences of a row, as row tuples."""
    tab = ttd.table(t)
    if row not in tab.index:
        raise KeyError(f"row not present in table of node {t}")
    kids = ttd.td.nodes[t].children
    out = set()
    for seq in tab.origins[tab.index[row]]:
        out.add(tuple(ttd.table(kids[i]).rows[j] for i, j in enumerate(seq)))
    return out


def origins_table(ttd: TabledTreeDecomposition, t: int, rows: Sequence[Any]) -> set[tuple]:
    out: set[tuple] = set()
    for row in rows:
        out |= origins(ttd, t, row)
    return out


@dataclass
class PurgedTables:
    """Per-node surviving rows (in table order) with re-indexed origins."""

    ttd: TabledTreeDecomposition
    rows: list[list]  # per node
    origins: list[list[list[tuple[int, ...]]]]  # per node, per row
    kept: list[list[int]]  # per node: original row indices

    def max_rows(self) -> int:
        return max((len(r) for r in self.rows), default=0)


def purge(ttd: TabledTreeDecomposition, solution_rows: Sequence[Any] | None = None) -> PurgedTables:
    """Keep only rows reachable from the root solution rows via origin links.

    ``solution_rows`` defaults to the algorithm's designated root solution
    row intersected with the root table.  An inconsistent instance yields
    empty tables everywhere."""
    td = ttd.td
    root = td.root
    root_table = ttd.table(root)
    if solution_rows is None:
        solution_rows = [ttd.alg.solution_row] if ttd.alg.solution_row in root_table.index else []

    marked: list[set[int]] = [set() for _ in td.nodes]
    for row in solution_rows:
        if row not in root_table.index:
            raise KeyError("solution row not present in root table")
        marked[root].add(root_table.index[row])

    for t in reversed(ttd.post_order):
        if not marked[t]:
            continue
        nd = td.nodes[t]
        tab = ttd.table(t)
        for u in marked[t]:
            for seq in tab.origins[u]:
                for i, j in enumerate(seq):
                    marked[nd.children[i]].add(j)

    rows: list[list] = [[] for _ in td.nodes]
    kept: list[list[int]] = [[] for _ in td.nodes]
    new_index: list[dict[int, int]] = [{} for _ in td.nodes]
    origins_out: list[list[list[tuple[int, ...]]]] = [[] for _ in td.nodes]
    for t in ttd.post_order:
        tab = ttd.table(t)
        keep = sorted(marked[t])
        kept[t] = keep
        new_index[t] = {j: i for i, j in enumerate(keep)}
        rows[t] = [tab.rows[j] for j in keep]
        nd = td.nodes[t]
        remapped = []
        for j in keep:
            seqs = [
                tuple(new_index[nd.children[i]][x] for i, x in enumerate(seq))
                for seq in tab.origins[j]
            ]
            remapped.append(sorted(seqs))
        origins_out[t] = remapped
    return PurgedTables(ttd, rows, origins_out, kept)


# --- scopes and verification helpers ---------------------------------------


@dataclass(frozen=True)
class NodeScope:
    """Program and atoms below a node (inclusive and strict)."""

    rules_below: frozenset[Rule]
    rules_strictly_below: frozenset[Rule]
    atoms_below: int
    atoms_strictly_below: int


def node_scope(ttd: TabledTreeDecomposition, t: int) -> NodeScope:
    td = ttd.td
    below_rules: set[Rule] = set()
    below_atoms = 0
    stack = [t]
    while stack:
        x = stack.pop()
        below_rules.update(ttd.bag_rules[x])
        below_atoms |= td.nodes[x].bag_mask
        stack.extend(td.nodes[x].children)
    here = set(ttd.bag_rules[t])
    return NodeScope(
        frozenset(below_rules),
        frozenset(below_rules - here),
        below_atoms,
        below_atoms & ~td.nodes[t].bag_mask,
    )


def definitional_origins(ttd: TabledTreeDecomposition, t: int, row: Any) -> set[tuple[int, ...]]:
    """Recompute origins from the algorithm itself: all child-row sequences
    whose singleton tables reproduce the row.  Quadratic; debug use only."""
    nd = ttd.td.nodes[t]
    alg = ttd.alg
    out = set()
    child_tables = [ttd.table(c) for c in nd.children]
    ranges = [range(len(tab)) for tab in child_tables]
    for combo in product(*ranges):
        singles = [
            NodeTable([child_tables[i].rows[j]], [child_tables[i].origins[j]])
            for i, j in enumerate(combo)
        ]
        produced = alg.node_table(nd.kind, nd.bag_mask, nd.atom, ttd.bag_rules[t], singles)
        if row in produced:
            out.add(combo)
    return out


def verify_origins(ttd: TabledTreeDecomposition) -> list[str]:
    """Debug mode: check that every row's recorded origin links are nonempty
    and identical to the definitional recomputation.  Expensive."""
    problems = []
    for t in ttd.post_order:
        tab = ttd.table(t)
        for i, row in enumerate(tab.rows):
            recorded = set(tab.origins[i])
            if not recorded:
                problems.append(f"node {t} row {i}: no origin recorded")
                continue
            if recorded != definitional_origins(ttd, t, row):
                problems.append(f"node {t} row {i}: recorded origins differ from definition")
    return problems


def format_table(ttd: TabledTreeDecomposition, t: int) -> str:
    """Human-readable dump of one node table (trace output)."""
    nd = ttd.td.nodes[t]
    names = ",".join(sorted(ttd.program.names(nd.bag_mask)))
    head = f"node {t} kind={nd.kind} bag={{{names}}} rows={len(ttd.table(t))}"
    lines = [head]
    tab = ttd.table(t)
    for i, row in enumerate(tab.rows):
        lines.append(f"  {i}: {ttd.alg.format_row(row, ttd.program)} origins={tab.origins[i]}")
    return "\n".join(lines)
