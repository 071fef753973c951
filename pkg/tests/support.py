"""Shared fixtures: boolean predicates, the boolean clone table, naive checkers."""

from __future__ import annotations

import itertools

from minhom.relations import ConstraintLanguage, OperationTable, Relation

ZERO = Relation.unary(2, [0])
ONE = Relation.unary(2, [1])
LE = Relation.of(2, [(0, 0), (0, 1), (1, 1)])
GE = Relation.of(2, [(0, 0), (1, 0), (1, 1)])
NE = Relation.of(2, [(0, 1), (1, 0)])
EQ = Relation.equality(2)
OR = Relation.of(2, [(0, 1), (1, 0), (1, 1)])
NAND = Relation.of(2, [(0, 0), (0, 1), (1, 0)])
EVEN3 = Relation.from_predicate(2, 3, lambda a, b, c: (a ^ b ^ c) == 0)

BMIN = OperationTable.from_function(2, 2, min)
BMAX = OperationTable.from_function(2, 2, max)
BMAJ = OperationTable.from_function(2, 3, lambda x, y, z: (x & y) | (y & z) | (x & z))


def discriminator(d: int) -> OperationTable:
    return OperationTable.from_function(d, 3, lambda x, y, z: z if x == y else x)


def _pred(arity, fn):
    return Relation.from_predicate(2, arity, fn)


def boolean_rows() -> dict[str, tuple[list[Relation], bool]]:
    """Generator sets of the boolean conservative clones with the expected tractability."""
    rows = {
        "T01": ([ZERO, ONE], True),
        "M01": ([ZERO, ONE, LE], True),
        "S01": ([ZERO, NE], True),
        "SM": ([NE, LE], False),
        "L01": ([ONE, EVEN3], False),
        "U01": ([ZERO, ONE, _pred(3, lambda a, b, c: a == b or a == c)], False),
        "K01": ([ZERO, ONE, _pred(3, lambda a, b, c: a == (b & c))], False),
        "D01": ([ZERO, ONE, _pred(3, lambda a, b, c: a == (b | c))], False),
    }
    for m in (2, 3):
        nand = _pred(m, lambda *x: not all(x))
        disj = _pred(m, lambda *x: any(x))
        rows[f"I1^{m}"] = ([ONE, nand], False)
        rows[f"MI1^{m}"] = ([ONE, LE, nand], False)
        rows[f"O0^{m}"] = ([ZERO, disj], False)
        rows[f"MO0^{m}"] = ([ZERO, LE, disj], False)
    return rows


def lang(d: int, *rels: Relation) -> ConstraintLanguage:
    return ConstraintLanguage.of(d, list(rels))


def naive_preserves(f: OperationTable, rho: Relation) -> bool:
    for rows in itertools.product(sorted(rho.tuples), repeat=f.arity):
        image = tuple(f(*(r[j] for r in rows)) for j in range(rho.arity))
        if image not in rho.tuples:
            return False
    return True


def naive_solutions(instance) -> list[tuple[int, ...]]:
    return [a for a in itertools.product(range(instance.domain_size), repeat=instance.num_vars)
            if instance.satisfies(a)]


def is_majority_table(mu: OperationTable) -> bool:
    d = mu.domain_size
    return all(mu(x, x, y) == x and mu(x, y, x) == x and mu(y, x, x) == x for x in range(d) for y in range(d))
