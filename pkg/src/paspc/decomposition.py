"""Primal graphs, elimination-ordering tree decompositions, validation, and
normalization to nice decompositions with empty root and leaf bags."""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field

from .program import Program


class PrimalGraph:
    """Atoms as vertices; the atoms of each rule form a clique."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int):
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]

    def add_edge(self, a: int, b: int) -> None:
        if a == b:
            return
        self.adj[a].add(b)
        self.adj[b].add(a)

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in sorted(self.adj[a]) if a < b]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrimalGraph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj


def primal_graph(program: Program) -> PrimalGraph:
    g = PrimalGraph(program.n_atoms)
    for r in program.rules:
        atoms = sorted(set(r.head) | set(r.pos_body) | set(r.neg_body))
        for i in range(len(atoms)):
            for j in range(i + 1, len(atoms)):
                g.add_edge(atoms[i], atoms[j])
    return g


@dataclass
class TreeDecomposition:
    """Unrooted decomposition: bags per node, undirected tree edges."""

    bags: list[frozenset[int]]
    edges: list[tuple[int, int]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


def validate_td(graph: PrimalGraph, td: TreeDecomposition) -> list[str]:
    """Return the list of violated decomposition conditions (empty when valid)."""
    problems: list[str] = []
    n_nodes = len(td.bags)
    if n_nodes == 0:
        return ["decomposition has no nodes"]

    adj: list[list[int]] = [[] for _ in range(n_nodes)]
    for i, j in td.edges:
        if not (0 <= i < n_nodes and 0 <= j < n_nodes):
            problems.append(f"edge ({i},{j}) references unknown node")
            continue
        adj[i].append(j)
        adj[j].append(i)

    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != n_nodes:
        problems.append("bag tree is disconnected")
    if len(td.edges) != n_nodes - 1:
        problems.append("bag graph has a cycle or wrong edge count")

    covered = set()
    for bag in td.bags:
        covered |= bag
    for v in range(graph.n):
        if v not in covered:
            problems.append(f"vertex {v} in no bag")
    for a, b in graph.edges():
        if not any(a in bag and b in bag for bag in td.bags):
            problems.append(f"edge ({a},{b}) inside no bag")

    # occurrence sets must induce connected subtrees
    for v in range(graph.n):
        holders = [t for t in range(n_nodes) if v in td.bags[t]]
        if len(holders) <= 1:
            continue
        start = holders[0]
        reach = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for w in adj[x]:
                if w not in reach and v in td.bags[w]:
                    reach.add(w)
                    stack.append(w)
        if reach != set(holders):
            problems.append(f"occurrences of vertex {v} are not connected")
    return problems


def decompose(graph: PrimalGraph, heuristic: str = "min-fill", seed: int = 0) -> TreeDecomposition:
    """Elimination-ordering decomposition.

    Repeatedly eliminates a vertex chosen by the heuristic (``min-fill`` or
    ``min-degree``), turns its neighborhood into a clique, records the bag
    vertex+neighborhood, and later connects each bag to the first later bag
    containing all its neighbors.  Ties are broken by smallest vertex id;
    with a nonzero seed a seeded RNG picks among the tied candidates instead.

    Scores are maintained incrementally (only vertices whose neighborhood
    changed are rescored), so sparse graphs decompose in near-linear time.
    """
    if heuristic not in ("min-fill", "min-degree"):
        raise ValueError(f"unknown heuristic {heuristic!r}")
    n = graph.n
    if n == 0:
        return TreeDecomposition([frozenset()], [])

    rng = random.Random(seed) if seed != 0 else None
    nbrs: list[set[int]] = [set(s) for s in graph.adj]
    alive = [True] * n
    by_fill = heuristic == "min-fill"

    def rescore(v: int) -> int:
        if not by_fill:
            return len(nbrs[v])
        ns = sorted(nbrs[v])
        missing = 0
        for i in range(len(ns)):
            ni = nbrs[ns[i]]
            for j in range(i + 1, len(ns)):
                if ns[j] not in ni:
                    missing += 1
        return missing

    score = [rescore(v) for v in range(n)]
    heap = [(score[v], v) for v in range(n)]
    heapq.heapify(heap)

    bags: list[frozenset[int]] = []
    elim_neighbors: list[set[int]] = []
    remaining = n
    while remaining:
        if rng is None:
            while True:
                s, v = heapq.heappop(heap)
                if alive[v] and score[v] == s:
                    break
        else:
            best = min(score[u] for u in range(n) if alive[u])
            v = rng.choice([u for u in range(n) if alive[u] and score[u] == best])

        neigh = set(nbrs[v])
        bags.append(frozenset(neigh | {v}))
        elim_neighbors.append(neigh)
        touched = set(neigh)
        ns = sorted(neigh)
        for i in range(len(ns)):
            for j in range(i + 1, len(ns)):
                x, y = ns[i], ns[j]
                if y not in nbrs[x]:
                    nbrs[x].add(y)
                    nbrs[y].add(x)
                    if by_fill:
                        touched.update(nbrs[x] & nbrs[y])
        for u in neigh:
            nbrs[u].discard(v)
        nbrs[v].clear()
        alive[v] = False
        remaining -= 1
        for u in touched:
            if alive[u]:
                score[u] = rescore(u)
                heapq.heappush(heap, (score[u], u))

    edges = []
    for i in range(len(bags)):
        need = elim_neighbors[i]
        if not need:
            if i + 1 < len(bags):
                edges.append((i, i + 1))
            continue
        for j in range(i + 1, len(bags)):
            if need <= bags[j]:
                edges.append((i, j))
                break
    return TreeDecomposition(bags, edges)


# --- nice decompositions ----------------------------------------------------

LEAF, INTRODUCE, REMOVE, JOIN = "leaf", "int", "rem", "join"


@dataclass
class NiceNode:
    kind: str
    bag: frozenset[int]
    atom: int | None
    children: tuple[int, ...]
    bag_mask: int


@dataclass
class NiceTreeDecomposition:
    nodes: list[NiceNode] = field(default_factory=list)
    root: int = -1

    def add(self, kind: str, bag: frozenset[int], atom: int | None, children: tuple[int, ...]) -> int:
        mask = 0
        for a in bag:
            mask |= 1 << a
        self.nodes.append(NiceNode(kind, bag, atom, children, mask))
        return len(self.nodes) - 1

    def post_order(self) -> list[int]:
        order: list[int] = []
        stack = [self.root]
        while stack:
            t = stack.pop()
            order.append(t)
            stack.extend(self.nodes[t].children)
        order.reverse()
        return order

    @property
    def width(self) -> int:
        return max(len(nd.bag) for nd in self.nodes) - 1

    def to_tree_decomposition(self) -> TreeDecomposition:
        bags = [nd.bag for nd in self.nodes]
        edges = [(t, c) for t, nd in enumerate(self.nodes) for c in nd.children]
        return TreeDecomposition(list(bags), edges)


def check_nice(ntd: NiceTreeDecomposition) -> list[str]:
    """Structural checks for the nice shape; used by tests and make_nice."""
    problems = []
    for t, nd in enumerate(ntd.nodes):
        if nd.kind == LEAF:
            if nd.children or nd.bag:
                problems.append(f"node {t}: leaf must have no children and empty bag")
        elif nd.kind == INTRODUCE:
            if len(nd.children) != 1:
                problems.append(f"node {t}: introduce needs one child")
            else:
                cb = ntd.nodes[nd.children[0]].bag
                if nd.atom is None or nd.atom in cb or cb | {nd.atom} != nd.bag:
                    problems.append(f"node {t}: bad introduce")
        elif nd.kind == REMOVE:
            if len(nd.children) != 1:
                problems.append(f"node {t}: remove needs one child")
            else:
                cb = ntd.nodes[nd.children[0]].bag
                if nd.atom is None or nd.atom in nd.bag or nd.bag | {nd.atom} != cb:
                    problems.append(f"node {t}: bad remove")
        elif nd.kind == JOIN:
            if len(nd.children) != 2:
                problems.append(f"node {t}: join needs two children")
            elif not nd.bag:
                problems.append(f"node {t}: join over empty bag")
            elif any(ntd.nodes[c].bag != nd.bag for c in nd.children):
                problems.append(f"node {t}: join children bags differ")
        else:
            problems.append(f"node {t}: unknown kind {nd.kind}")
    if ntd.nodes[ntd.root].bag:
        problems.append("root bag not empty")
    return problems


def make_nice(td: TreeDecomposition, root: int | None = None) -> NiceTreeDecomposition:
    """Normalize a valid decomposition to a nice one of the same width.

    The designated root defaults to the node with the largest id.  Between
    original bags, removals come first and introductions second, both in
    ascending atom order.  Multi-child nodes become chains of binary joins;
    a would-be join over an empty bag is restructured into a chain by
    grafting one subtree in place of a leaf of the other.
    """
    ntd = NiceTreeDecomposition()
    n = len(td.bags)
    if n == 0:
        raise ValueError("decomposition has no nodes")
    if root is None:
        root = n - 1

    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in td.edges:
        adj[i].append(j)
        adj[j].append(i)
    for lst in adj:
        lst.sort()

    def chain_up(top: int, have: frozenset[int], want: frozenset[int]) -> int:
        for a in sorted(have - want):
            have = have - {a}
            top = ntd.add(REMOVE, have, a, (top,))
        for a in sorted(want - have):
            have = have | {a}
            top = ntd.add(INTRODUCE, have, a, (top,))
        return top

    def fresh_chain(bag: frozenset[int]) -> int:
        top = ntd.add(LEAF, frozenset(), None, ())
        return chain_up(top, frozenset(), bag)

    def graft(host: int, piece: int) -> None:
        """Replace the first reachable leaf under ``host`` with ``piece``."""
        parent, t = -1, host
        while ntd.nodes[t].kind != LEAF:
            parent, t = t, ntd.nodes[t].children[0]
        if parent == -1:
            raise AssertionError("cannot graft into a bare leaf")
        nd = ntd.nodes[parent]
        nd.children = tuple(piece if c == t else c for c in nd.children)

    # iterative post-order over the original tree
    order: list[tuple[int, int]] = []
    stack = [(root, -1)]
    while stack:
        t, parent = stack.pop()
        order.append((t, parent))
        for c in adj[t]:
            if c != parent:
                stack.append((c, t))
    order.reverse()

    built: dict[int, int] = {}
    for t, parent in order:
        bag = td.bags[t]
        kids = [c for c in adj[t] if c != parent]
        if not kids:
            built[t] = fresh_chain(bag)
            continue
        tops = [chain_up(built[c], td.bags[c], bag) for c in kids]
        cur = tops[0]
        for other in tops[1:]:
            if bag:
                cur = ntd.add(JOIN, bag, None, tuple(sorted((cur, other))))
            else:
                # disconnected components: stack one subtree below the other
                host_node = ntd.nodes[other]
                if host_node.kind == LEAF:
                    pass  # the bare leaf adds nothing
                else:
                    graft(other, cur)
                    cur = other
        built[t] = cur

    top = chain_up(built[root], td.bags[root], frozenset())
    ntd.root = top

    # grafting replaces leaves and can orphan nodes; drop everything the
    # root no longer reaches and renumber
    reachable = set()
    stack2 = [ntd.root]
    while stack2:
        x = stack2.pop()
        reachable.add(x)
        stack2.extend(ntd.nodes[x].children)
    if len(reachable) != len(ntd.nodes):
        keep = sorted(reachable)
        remap = {old: new for new, old in enumerate(keep)}
        ntd.nodes = [ntd.nodes[old] for old in keep]
        for nd in ntd.nodes:
            nd.children = tuple(remap[c] for c in nd.children)
        ntd.root = remap[ntd.root]

    problems = check_nice(ntd)
    if problems:
        raise AssertionError("make_nice produced a malformed tree: " + "; ".join(problems))
    return ntd
