"""Seeded generators of languages and instances for sweeps and tests."""

from __future__ import annotations

import itertools
import random
from typing import Sequence

from .relations import Constraint, ConstraintLanguage, OperationTable, Relation, WeightedInstance

MAX_TERNARY_TUPLES = 16


def close_under(tuples: set[tuple[int, ...]], ops: Sequence[OperationTable]) -> set[tuple[int, ...]]:
    """Smallest superset of ``tuples`` closed under coordinatewise application of ``ops``."""
    closed = set(tuples)
    frontier = set(tuples)
    while frontier:
        new = set()
        current = sorted(closed)
        for op in ops:
            for combo in itertools.product(current, repeat=op.arity):
                if not any(t in frontier for t in combo):
                    continue
                image = tuple(op(*(t[j] for t in combo)) for j in range(len(combo[0])))
                if image not in closed:
                    new.add(image)
        closed |= new
        frontier = new
    return closed


def random_tractable_ops(rng: random.Random, d: int) -> list[OperationTable]:
    """A tournament pair on some pairs and an arithmetical operation on the others."""
    return _tractable_structure(rng, d)[0]


def _tractable_structure(rng: random.Random, d: int) -> tuple[list[OperationTable], list[tuple[int, int]]]:
    pairs = list(itertools.combinations(range(d), 2))
    style = rng.choice(["mixed", "tournament", "arithmetical", "lattice"])
    if style == "lattice":
        order = list(range(d))
        rng.shuffle(order)
        rank = {v: i for i, v in enumerate(order)}
        lo = OperationTable.from_function(d, 2, lambda x, y: x if rank[x] <= rank[y] else y)
        hi = OperationTable.from_function(d, 2, lambda x, y: y if rank[x] <= rank[y] else x)
        return [lo, hi], []
    if style == "tournament":
        commutative = set(pairs)
    elif style == "arithmetical":
        commutative = set()
    else:
        commutative = {p for p in pairs if rng.random() < 0.5}
    winner = {p: rng.choice(p) for p in commutative}

    def phi(x: int, y: int) -> int:
        key = (min(x, y), max(x, y))
        return winner[key] if key in winner else x

    def psi(x: int, y: int) -> int:
        key = (min(x, y), max(x, y))
        if key in winner:
            return x + y - winner[key]
        return x

    def m(x: int, y: int, z: int) -> int:
        # majority on commutative pairs, arithmetical on the rest, first argument otherwise
        vals = {x, y, z}
        if len(vals) != 2:
            return x
        a, b = sorted(vals)
        if (a, b) in commutative:
            return x if x in (y, z) else y
        return z if x == y else x

    ops = []
    if commutative:
        ops += [OperationTable.from_function(d, 2, phi), OperationTable.from_function(d, 2, psi)]
    if len(commutative) < len(pairs):
        ops.append(OperationTable.from_function(d, 3, m))
    return ops, [p for p in pairs if p not in commutative]


def random_relation(rng: random.Random, d: int, arity: int, ops: Sequence[OperationTable] = (),
                    seeds: int | None = None) -> Relation:
    coords = [sorted(rng.sample(range(d), rng.randint(1, d))) for _ in range(arity)]
    box = list(itertools.product(*coords))
    k = seeds if seeds is not None else rng.randint(1, min(4, len(box)))
    start = set(rng.sample(box, min(k, len(box))))
    tuples = close_under(start, ops) if ops else start
    return Relation(arity, d, frozenset(tuples))


def random_tractable_language(rng: random.Random, max_domain: int = 4, max_relations: int = 3,
                              max_arity: int = 3, swap_probability: float = 0.3) -> ConstraintLanguage:
    """Relations closed under a random tractable operation family.

    With ``swap_probability`` a binary relation is seeded with ``(a, b), (b, a)``
    for a pair without commutative operations, which keeps that pair on the
    arithmetical side.
    """
    d = rng.randint(2, max_domain)
    ops, arithmetic_pairs = _tractable_structure(rng, d)
    rels: dict[str, Relation] = {}
    attempts = 0
    target = rng.randint(1, max_relations)
    while len(rels) < target and attempts < 50:
        attempts += 1
        if arithmetic_pairs and rng.random() < swap_probability:
            a, b = rng.choice(arithmetic_pairs)
            seeds = {(a, b), (b, a)}
            if rng.random() < 0.5:
                seeds.add((rng.randrange(d), rng.randrange(d)))
            rel = Relation(2, d, frozenset(close_under(seeds, ops)))
            arity = 2
        else:
            arity = rng.randint(1, max_arity)
            rel = random_relation(rng, d, arity, ops)
        if arity == 3 and len(rel) > MAX_TERNARY_TUPLES:
            continue
        if rel in rels.values():
            continue
        rels[f"R{len(rels)}"] = rel
    if not rels:
        rels["R0"] = Relation.unary(d, range(d))
    return ConstraintLanguage.of(d, rels)


def random_language(rng: random.Random, max_domain: int = 3, max_relations: int = 3,
                    max_arity: int = 3) -> ConstraintLanguage:
    """Unstructured random relations; most such languages are NP-hard."""
    d = rng.randint(2, max_domain)
    rels = {}
    for i in range(rng.randint(1, max_relations)):
        arity = rng.randint(2, max_arity)
        rels[f"R{i}"] = random_relation(rng, d, arity, seeds=rng.randint(2, 5))
    return ConstraintLanguage.of(d, rels)


def random_instance(rng: random.Random, language: ConstraintLanguage, max_vars: int = 6,
                    max_constraints: int = 8, max_weight: int = 20,
                    unary_probability: float = 0.2) -> WeightedInstance:
    d = language.domain_size
    n = rng.randint(1, max_vars)
    rels = list(language)
    constraints = []
    for _ in range(rng.randint(0, max_constraints)):
        if rng.random() < unary_probability:
            rel = Relation.unary(d, rng.sample(range(d), rng.randint(1, d)))
        else:
            if not rels:
                continue
            rel = rng.choice(rels)
        scope = tuple(rng.randrange(n) for _ in range(rel.arity))
        constraints.append(Constraint(rel, scope))
    weights = tuple(tuple(rng.randint(0, max_weight) for _ in range(d)) for _ in range(n))
    return WeightedInstance(n, d, tuple(constraints), weights)


def random_graph(rng: random.Random, n: int, p: float = 0.4) -> list[tuple[int, int]]:
    return [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
