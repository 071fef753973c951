"""Brute-force ground truth.

Deliberately naive and independent of the solver: assignments are checked
against dense lookup tables, polymorphisms by looping over every tuple choice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .relations import ConstraintLanguage, OperationTable, WeightedInstance

MAX_ASSIGNMENTS = 10 ** 7
MAX_TABLE_ENTRIES = 16
_CHUNK = 1 << 16


class OracleTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleResult:
    optimum: int | None
    optimal_assignments: tuple[tuple[int, ...], ...]
    num_satisfying: int

    @property
    def satisfiable(self) -> bool:
        return self.optimum is not None

    @property
    def best(self) -> tuple[int, ...] | None:
        return self.optimal_assignments[0] if self.optimal_assignments else None


def brute_force_solve(instance: WeightedInstance, cap: int = MAX_ASSIGNMENTS) -> OracleResult:
    """Enumerate every assignment in lexicographic order."""
    n, d = instance.num_vars, instance.domain_size
    total = d ** n
    if total > cap:
        raise OracleTooLarge(f"{total} assignments exceeds the oracle cap of {cap}")
    weights = np.asarray(instance.weights, dtype=np.int64).reshape(n, d)
    checks = []
    for c in instance.constraints:
        table = np.zeros((d,) * c.relation.arity, dtype=bool)
        for t in c.relation.tuples:
            table[t] = True
        checks.append((table, list(c.scope)))
    best = None
    optimal: list[tuple[int, ...]] = []
    count = 0
    place = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        cols = (idx[:, None] // place[None, :]) % d  # (chunk, n)
        ok = np.ones(len(idx), dtype=bool)
        for table, scope in checks:
            ok &= table[tuple(cols[:, v] for v in scope)]
        if not ok.any():
            continue
        good = cols[ok]
        count += len(good)
        cost = weights[np.arange(n)[None, :], good].sum(axis=1) if n else np.zeros(len(good), dtype=np.int64)
        m = int(cost.min())
        hits = [tuple(int(v) for v in row) for row in good[cost == m]]
        if best is None or m < best:
            best, optimal = m, hits
        elif m == best:
            optimal.extend(hits)
    return OracleResult(best, tuple(optimal), count)


@dataclass(frozen=True)
class ConstraintViolated:
    index: int


def verify_solution(instance: WeightedInstance, assignment: Sequence[int]) -> int | ConstraintViolated:
    if len(assignment) != instance.num_vars:
        raise ValueError(f"assignment has length {len(assignment)}, expected {instance.num_vars}")
    for i, c in enumerate(instance.constraints):
        if tuple(assignment[v] for v in c.scope) not in c.relation.tuples:
            return ConstraintViolated(i)
    return sum(instance.weights[i][a] for i, a in enumerate(assignment))


def _naive_preserves(table: dict[tuple[int, ...], int], arity: int, tuples: list[tuple[int, ...]]) -> bool:
    members = set(tuples)
    for choice in itertools.product(tuples, repeat=arity):
        image = tuple(table[tuple(t[j] for t in choice)] for j in range(len(tuples[0])))
        if image not in members:
            return False
    return True


def enumerate_polymorphisms(language: ConstraintLanguage, arity: int,
                            cap: int = MAX_TABLE_ENTRIES) -> list[OperationTable]:
    """All conservative ``arity``-ary tables preserving every relation, by exhaustion."""
    d = language.domain_size
    if d ** arity > cap:
        raise OracleTooLarge(f"{d ** arity} table entries exceeds the cap of {cap}")
    inputs = list(itertools.product(range(d), repeat=arity))
    choices = [sorted(set(p)) for p in inputs]
    rels = [sorted(r.tuples) for r in language if r.tuples]
    out = []
    for values in itertools.product(*choices):
        table = dict(zip(inputs, values))
        if all(_naive_preserves(table, arity, tuples) for tuples in rels):
            out.append(OperationTable(arity, d, tuple(values)))
    return out


def independence_number(num_vertices: int, edges: Iterable[tuple[int, int]]) -> int:
    """Exact maximum independent set size by include/exclude branching."""
    nbr = [0] * num_vertices
    for u, v in edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u

    def alpha(live: int) -> int:
        best_v, best_deg = -1, -1
        m = live
        while m:
            low = m & -m
            v = low.bit_length() - 1
            deg = (nbr[v] & live).bit_count()
            if deg > best_deg:
                best_v, best_deg = v, deg
            m ^= low
        if best_deg <= 0:
            return live.bit_count()
        v = best_v
        without = alpha(live & ~(1 << v))
        with_v = 1 + alpha(live & ~(1 << v) & ~nbr[v])
        return max(without, with_v)

    return alpha((1 << num_vertices) - 1)


def max_cut(num_vertices: int, edges: Iterable[tuple[int, int]]) -> int:
    edge_list = list(edges)
    best = 0
    for sides in itertools.product((0, 1), repeat=num_vertices):
        best = max(best, sum(1 for u, v in edge_list if sides[u] != sides[v]))
    return best


def count_maximum_cliques(num_vertices: int, edges: Iterable[tuple[int, int]], size: int) -> int:
    """Number of cliques with exactly ``size`` vertices."""
    adj = {(u, v) for u, v in edges} | {(v, u) for u, v in edges}
    return sum(1 for subset in itertools.combinations(range(num_vertices), size)
               if all((u, v) in adj for u, v in itertools.combinations(subset, 2)))
