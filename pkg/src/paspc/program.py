"""Ground disjunctive logic programs: data model, satisfaction, reduct, classes.

Atoms are interned to dense integer ids (0..n-1, first-occurrence order).
Interpretations and atom sets are plain ``int`` bitmasks over those ids:
bit ``1 << a`` is set iff atom ``a`` is in the set.  Rules carry their atom
sets both as sorted id tuples and as precomputed masks.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence


def mask_of(ids: Iterable[int]) -> int:
    m = 0
    for a in ids:
        m |= 1 << a
    return m


def ids_of(mask: int) -> tuple[int, ...]:
    out = []
    a = 0
    while mask:
        if mask & 1:
            out.append(a)
        mask >>= 1
        a += 1
    return tuple(out)


def iter_bits(mask: int) -> Iterator[int]:
    a = 0
    while mask:
        if mask & 1:
            yield a
        mask >>= 1
        a += 1


@dataclass(frozen=True)
class Rule:
    """One ground rule: disjunctive head, positive body, negative body."""

    head: tuple[int, ...]
    pos_body: tuple[int, ...]
    neg_body: tuple[int, ...]
    head_mask: int
    pos_mask: int
    neg_mask: int
    atom_mask: int

    @staticmethod
    def make(head: Iterable[int], pos_body: Iterable[int], neg_body: Iterable[int]) -> "Rule":
        h = tuple(sorted(set(head)))
        p = tuple(sorted(set(pos_body)))
        n = tuple(sorted(set(neg_body)))
        hm, pm, nm = mask_of(h), mask_of(p), mask_of(n)
        return Rule(h, p, n, hm, pm, nm, hm | pm | nm)

    def key(self) -> tuple:
        return (self.head, self.pos_body, self.neg_body)


def satisfies(interp: int, rule: Rule) -> bool:
    """True iff the interpretation (bitmask) satisfies the rule."""
    return bool((rule.head_mask | rule.neg_mask) & interp) or bool(rule.pos_mask & ~interp)


def is_model(interp: int, rules: Sequence[Rule]) -> bool:
    for r in rules:
        if not ((r.head_mask | r.neg_mask) & interp or r.pos_mask & ~interp):
            return False
    return True


class ProgramKind(Enum):
    TIGHT = "tight"
    HEAD_CYCLE_FREE = "head-cycle-free"
    DISJUNCTIVE = "disjunctive"


@dataclass(frozen=True)
class ProgramClass:
    kind: ProgramKind
    is_normal: bool


@dataclass(frozen=True)
class DependencyDigraph:
    """Positive dependency digraph: edge (a, b) for a in B+ and b in H of a rule."""

    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]


class Program:
    """A finite set of ground rules plus a projection atom set.

    Immutable after construction.  Duplicate rules are collapsed; atom ids are
    dense and owned by the instance.  ``projection`` is a bitmask and is
    always a subset of the atom mask.
    """

    __slots__ = ("atom_names", "rules", "projection", "_index")

    def __init__(self, atom_names: Sequence[str], rules: Sequence[Rule], projection: int):
        self.atom_names = tuple(atom_names)
        self.rules = tuple(rules)
        if projection & ~self.atom_mask:
            raise ValueError("projection atoms outside atom table")
        self.projection = projection
        self._index = {name: i for i, name in enumerate(self.atom_names)}

    @classmethod
    def from_specs(
        cls,
        rule_specs: Iterable[tuple[Iterable[str], Iterable[str], Iterable[str]]],
        projection: Iterable[str] | None = None,
    ) -> "Program":
        """Build from (head, pos_body, neg_body) name triples in source order.

        Atom ids follow first occurrence across the given triples.  When
        ``projection`` is None the projection defaults to all atoms.
        """
        names: list[str] = []
        index: dict[str, int] = {}

        def intern(name: str) -> int:
            i = index.get(name)
            if i is None:
                i = len(names)
                index[name] = i
                names.append(name)
            return i

        rules = []
        seen = set()
        for head, pos, neg in rule_specs:
            r = Rule.make([intern(a) for a in head], [intern(a) for a in pos], [intern(a) for a in neg])
            if r.key() not in seen:
                seen.add(r.key())
                rules.append(r)
        if projection is None:
            pmask = (1 << len(names)) - 1
        else:
            pmask = 0
            for name in projection:
                if name not in index:
                    raise ValueError(f"projection atom {name!r} does not occur in any rule")
                pmask |= 1 << index[name]
        return cls(names, rules, pmask)

    @property
    def n_atoms(self) -> int:
        return len(self.atom_names)

    @property
    def atom_mask(self) -> int:
        return (1 << len(self.atom_names)) - 1

    def atom_id(self, name: str) -> int:
        return self._index[name]

    def mask(self, names: Iterable[str]) -> int:
        return mask_of(self._index[n] for n in names)

    def names(self, mask: int) -> tuple[str, ...]:
        return tuple(self.atom_names[a] for a in iter_bits(mask))

    def with_projection(self, projection: int) -> "Program":
        return Program(self.atom_names, self.rules, projection)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Program):
            return NotImplemented
        return (
            self.atom_names == other.atom_names
            and self.rules == other.rules
            and self.projection == other.projection
        )

    def __hash__(self) -> int:
        return hash((self.atom_names, self.rules, self.projection))

    def __repr__(self) -> str:
        return f"Program(atoms={len(self.atom_names)}, rules={len(self.rules)})"


def gl_reduct(program: Program, interp: int) -> Program:
    """Reduct under an interpretation: drop rules whose negative body meets it,
    strip negative bodies from the rest.  Atom table and projection carry over."""
    kept = []
    seen = set()
    for r in program.rules:
        if r.neg_mask & interp:
            continue
        rr = Rule(r.head, r.pos_body, (), r.head_mask, r.pos_mask, 0, r.head_mask | r.pos_mask)
        if rr.key() not in seen:
            seen.add(rr.key())
            kept.append(rr)
    return Program(program.atom_names, kept, program.projection)


def dependency_digraph(program: Program) -> DependencyDigraph:
    verts = set()
    edges = set()
    for r in program.rules:
        verts.update(r.head)
        verts.update(r.pos_body)
        for a in r.pos_body:
            for b in r.head:
                edges.add((a, b))
    return DependencyDigraph(frozenset(verts), frozenset(edges))


def _sccs(vertices: Iterable[int], succ: dict[int, list[int]]) -> dict[int, int]:
    """Iterative Tarjan; returns vertex -> component id."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    comp: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    counter = 0
    n_comp = 0
    for root in vertices:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            for i in range(pi, len(succ.get(v, ()))):
                w = succ[v][i]
                if w not in index:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


def classify(program: Program) -> ProgramClass:
    """Classify by the positive dependency digraph.

    Tight when the digraph is acyclic; otherwise head-cycle-free when no two
    distinct head atoms of one rule share a cycle (equivalently a strongly
    connected component); otherwise disjunctive.  Normality is independent.
    """
    dep = dependency_digraph(program)
    succ: dict[int, list[int]] = {}
    for a, b in sorted(dep.edges):
        succ.setdefault(a, []).append(b)
    comp = _sccs(sorted(dep.vertices), succ)

    self_loop = any(a == b for a, b in dep.edges)
    comp_sizes: dict[int, int] = {}
    for v, c in comp.items():
        comp_sizes[c] = comp_sizes.get(c, 0) + 1
    acyclic = not self_loop and all(s == 1 for s in comp_sizes.values())

    is_normal = all(len(r.head) <= 1 for r in program.rules)
    if acyclic:
        return ProgramClass(ProgramKind.TIGHT, is_normal)

    for r in program.rules:
        hs = [a for a in r.head if a in comp]
        for i in range(len(hs)):
            for j in range(i + 1, len(hs)):
                if comp[hs[i]] == comp[hs[j]]:
                    return ProgramClass(ProgramKind.DISJUNCTIVE, is_normal)
    return ProgramClass(ProgramKind.HEAD_CYCLE_FREE, is_normal)
