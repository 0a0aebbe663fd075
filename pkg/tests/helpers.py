"""Shared test support: the running example, a hand-built 14-node nice
decomposition for it, and seeded random program generators per class."""

from __future__ import annotations

import random

from paspc.decomposition import NiceTreeDecomposition
from paspc.formats import parse_program
from paspc.program import Program, ProgramKind, classify

EXAMPLE1_TEXT = """\
a | b.
c | e.
d | e :- b.
b :- e, not d.
d :- not b.
#project d, e.
"""


def example1() -> Program:
    return parse_program(EXAMPLE1_TEXT)


# answer sets of the running example, as atom-name sets
EXAMPLE1_ANSWER_SETS = [{"b", "c", "d"}, {"a", "c", "d"}, {"b", "e"}, {"a", "d", "e"}]


def fourteen_node_td(program: Program) -> tuple[NiceTreeDecomposition, dict[str, int]]:
    """A hand-built 14-node nice decomposition of the running example.

    One branch introduces a and b and removes a at a bag-{b} node; the other
    introduces b, d, then e (bag {b,d,e}), later covers {c,e}, and both
    branches join at bag {b}.  Returns the tree and a name->node map.
    """
    a, b, c, e, d = (program.atom_id(x) for x in "abced")
    f = frozenset
    ntd = NiceTreeDecomposition()
    ids = {}
    ids["t1"] = ntd.add("leaf", f(), None, ())
    ids["t2"] = ntd.add("int", f({a}), a, (ids["t1"],))
    ids["t3"] = ntd.add("int", f({a, b}), b, (ids["t2"],))
    ids["t4"] = ntd.add("rem", f({b}), a, (ids["t3"],))
    ids["t5"] = ntd.add("leaf", f(), None, ())
    ids["t6"] = ntd.add("int", f({b}), b, (ids["t5"],))
    ids["t7"] = ntd.add("int", f({b, d}), d, (ids["t6"],))
    ids["t8"] = ntd.add("int", f({b, d, e}), e, (ids["t7"],))
    ids["t9"] = ntd.add("rem", f({b, e}), d, (ids["t8"],))
    ids["t10"] = ntd.add("int", f({b, c, e}), c, (ids["t9"],))
    ids["t11"] = ntd.add("rem", f({b, e}), c, (ids["t10"],))
    ids["t12"] = ntd.add("rem", f({b}), e, (ids["t11"],))
    ids["t13"] = ntd.add("join", f({b}), None, (ids["t4"], ids["t12"]))
    ids["t14"] = ntd.add("rem", f(), b, (ids["t13"],))
    ntd.root = ids["t14"]
    return ntd, ids


# --- random program generators ----------------------------------------------


def _atom_names(n: int) -> list[str]:
    return [f"x{i}" for i in range(n)]


def random_projection(rng: random.Random, program: Program) -> int:
    choice = rng.randrange(3)
    if choice == 0:
        return 0
    if choice == 1:
        return program.atom_mask
    return rng.getrandbits(program.n_atoms) & program.atom_mask


def _random_rule(rng: random.Random, names: list[str], max_head: int) -> tuple:
    """A rule over at most three atoms: wider rules turn the primal graph
    into large cliques, whose ordering-variant tables make the projection
    pass exponentially expensive without testing anything new."""
    size = rng.randint(1, min(3, len(names)))
    atoms = rng.sample(names, size)
    k_h = rng.randint(0, min(max_head, size))
    k_p = rng.randint(0, size - k_h)
    head, rest = atoms[:k_h], atoms[k_h:]
    pos, neg = rest[:k_p], rest[k_p:]
    if not head and not pos and not neg:
        head = atoms[:1]
    return head, pos, neg


def random_mixed(rng: random.Random, n_atoms: int, n_rules: int, max_head: int = 2) -> Program:
    names = _atom_names(n_atoms)
    return Program.from_specs(_random_rule(rng, names, max_head) for _ in range(n_rules))


def random_tight(rng: random.Random, n_atoms: int, n_rules: int) -> Program:
    """Positive bodies draw only from lower-indexed atoms, so the positive
    dependency digraph is acyclic by construction."""
    names = _atom_names(n_atoms)
    specs = []
    for _ in range(n_rules):
        k_h = rng.randint(1, min(2, n_atoms))
        head = rng.sample(names, k_h)
        lowest = min(int(h[1:]) for h in head)
        below = names[:lowest]
        pos = rng.sample(below, min(rng.randint(0, 3 - k_h), len(below)))
        neg = rng.sample(names, min(len(names), rng.randint(0, max(0, 3 - k_h - len(pos)))))
        specs.append((head, pos, neg))
    p = Program.from_specs(specs)
    assert classify(p).kind is ProgramKind.TIGHT
    return p


def random_normal(rng: random.Random, n_atoms: int, n_rules: int) -> Program:
    p = random_mixed(rng, n_atoms, n_rules, max_head=1)
    assert classify(p).is_normal
    return p


def random_hcf(rng: random.Random, n_atoms: int, n_rules: int) -> Program:
    """Head-cycle-free but not tight: a positive two-atom cycle is embedded
    so the dependency digraph is always cyclic, and programs whose random
    remainder creates a head-cycle are resampled."""
    n_atoms = max(n_atoms, 2)
    names = _atom_names(n_atoms)
    while True:
        a, b = rng.sample(names, 2)
        specs = [((a,), (b,), ()), ((b,), (a,), ())]
        specs.extend(_random_rule(rng, names, 2) for _ in range(n_rules))
        p = Program.from_specs(specs)
        if classify(p).kind is ProgramKind.HEAD_CYCLE_FREE:
            return p


def random_disjunctive(rng: random.Random, n_atoms: int, n_rules: int) -> Program:
    """Carries an embedded head-cycle, so the class is disjunctive for sure."""
    n_atoms = max(n_atoms, 2)
    names = _atom_names(n_atoms)
    a, b = rng.sample(names, 2)
    specs = [((a, b), (), ()), ((a,), (b,), ()), ((b,), (a,), ())]
    specs.extend(_random_rule(rng, names, 2) for _ in range(n_rules))
    p = Program.from_specs(specs)
    assert classify(p).kind is ProgramKind.DISJUNCTIVE
    return p
