"""Conservative polymorphisms with prescribed values, and the constructions built from them."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .csp import table_network
from .relations import (
    ConstraintLanguage,
    OperationTable,
    compose_ops,
    conservative_closure,
    preserves,
)

Pair = tuple[int, int]


@dataclass(frozen=True)
class Prescription:
    inputs: tuple[int, ...]
    output: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "inputs", tuple(int(v) for v in self.inputs))
        if self.output not in self.inputs:
            raise ValueError(f"prescribed value {self.output} is not among the inputs {self.inputs}")


def collapse(a: int, b: int) -> list[Prescription]:
    """``f(a, b) = f(b, a) = b``."""
    return [Prescription((a, b), b), Prescription((b, a), b)]


def arithmetical_on(a: int, b: int) -> list[Prescription]:
    out = []
    for x, y in ((a, b), (b, a)):
        out += [Prescription((x, x, y), y), Prescription((y, x, x), y), Prescription((y, x, y), y)]
    return out


def find_polymorphism(language: ConstraintLanguage, arity: int,
                      prescriptions: Iterable[Prescription] = ()) -> OperationTable | None:
    """A conservative ``arity``-ary polymorphism meeting every prescription, or ``None``."""
    if arity not in (2, 3):
        raise ValueError(f"polymorphism search supports arity 2 or 3, got {arity}")
    lang = conservative_closure(language)
    net = table_network(lang, arity)
    d = lang.domain_size
    fixed: dict[int, int] = {}
    for p in prescriptions:
        if len(p.inputs) != arity:
            raise ValueError(f"prescription {p.inputs} does not have arity {arity}")
        if any(v < 0 or v >= d for v in p.inputs):
            raise ValueError(f"prescription {p.inputs} leaves the domain")
        i = net.index[p.inputs]
        fixed[i] = fixed.get(i, (1 << d) - 1) & (1 << p.output)
    sol = net.solve(fixed)
    if sol is None:
        return None
    return OperationTable(arity, d, tuple(sol))


@dataclass(frozen=True)
class PairClass:
    pair: Pair
    in_m: bool
    min_like: OperationTable | None = None
    max_like: OperationTable | None = None
    arithmetical: OperationTable | None = None

    @property
    def passes(self) -> bool:
        return self.in_m or self.arithmetical is not None


def pair_class(language: ConstraintLanguage, a: int, b: int) -> PairClass:
    if a == b:
        raise ValueError("a pair needs two distinct elements")
    a, b = min(a, b), max(a, b)
    return _pair_class(conservative_closure(language), a, b)


@lru_cache(maxsize=4096)
def _pair_class(lang: ConstraintLanguage, a: int, b: int) -> PairClass:
    low = find_polymorphism(lang, 2, collapse(b, a))
    high = find_polymorphism(lang, 2, collapse(a, b)) if low is not None else None
    if low is not None and high is not None:
        return PairClass((a, b), True, low, high)
    arith = find_polymorphism(lang, 3, arithmetical_on(a, b))
    return PairClass((a, b), False, low, high, arith)


@dataclass(frozen=True)
class LocalConditions:
    classes: dict[Pair, PairClass]
    violation: Pair | None

    @property
    def ok(self) -> bool:
        return self.violation is None

    @property
    def m_pairs(self) -> list[Pair]:
        return [p for p, c in self.classes.items() if c.in_m]

    @property
    def mbar_pairs(self) -> list[Pair]:
        return [p for p, c in self.classes.items() if not c.in_m]


def check_local_conditions(language: ConstraintLanguage) -> LocalConditions:
    """Classify every 2-element subset; stops at the first one failing both conditions."""
    lang = conservative_closure(language)
    classes: dict[Pair, PairClass] = {}
    for a, b in itertools.combinations(range(lang.domain_size), 2):
        pc = _pair_class(lang, a, b)
        classes[(a, b)] = pc
        if not pc.passes:
            return LocalConditions(classes, (a, b))
    return LocalConditions(classes, None)


@dataclass(frozen=True)
class TFGraph:
    vertices: tuple[Pair, ...]
    edges: frozenset[frozenset[Pair]]

    def neighbours(self, v: Pair) -> list[Pair]:
        return sorted(u for e in self.edges if v in e for u in e if u != v)

    def adjacency(self) -> dict[Pair, list[Pair]]:
        adj: dict[Pair, list[Pair]] = {v: [] for v in self.vertices}
        for e in self.edges:
            u, v = sorted(e)
            adj[u].append(v)
            adj[v].append(u)
        for v in adj:
            adj[v].sort()
        return adj

    def edge_list(self) -> list[tuple[Pair, Pair]]:
        return sorted(tuple(sorted(e)) for e in self.edges)


def build_tf(language: ConstraintLanguage, m_pairs: Sequence[Pair] | None = None) -> TFGraph:
    lang = conservative_closure(language)
    if m_pairs is None:
        m_pairs = check_local_conditions(lang).m_pairs
    vertices = sorted({(a, b) for a, b in m_pairs} | {(b, a) for a, b in m_pairs})
    edges = set()
    for u, v in itertools.combinations(vertices, 2):
        if find_polymorphism(lang, 2, collapse(*u) + collapse(*v)) is None:
            edges.add(frozenset((u, v)))
    return TFGraph(tuple(vertices), frozenset(edges))


def bipartition(tf: TFGraph) -> tuple[list[Pair], list[Pair]] | None:
    """Two-colouring with the least vertex of each component on the first side, or ``None``."""
    adj = tf.adjacency()
    side: dict[Pair, int] = {}
    for start in tf.vertices:
        if start in side:
            continue
        side[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in side:
                    side[v] = 1 - side[u]
                    queue.append(v)
                elif side[v] == side[u]:
                    return None
    first = [v for v in tf.vertices if side[v] == 0]
    second = [v for v in tf.vertices if side[v] == 1]
    return first, second


def shortest_odd_cycle(tf: TFGraph) -> list[Pair] | None:
    """A shortest odd cycle, preferring the lexicographically least root and closing edge."""
    adj = tf.adjacency()
    best: list[Pair] | None = None
    for root in tf.vertices:
        dist = {root: 0}
        parent: dict[Pair, Pair] = {}
        queue = deque([root])
        found = None
        while queue and found is None:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 >= len(best):
                break
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif dist[v] == dist[u] and u < v:
                    found = (u, v)
                    break
        if found is None:
            continue
        u, v = found
        left, right = [u], [v]
        while left[-1] != root:
            left.append(parent[left[-1]])
        while right[-1] != root:
            right.append(parent[right[-1]])
        cycle = list(reversed(left)) + right[:-1]
        if len(set(cycle)) != len(cycle):
            continue
        if best is None or len(cycle) < len(best):
            best = cycle
    return best


def _check(language: ConstraintLanguage, f: OperationTable) -> OperationTable:
    for rel in language:
        if not preserves(f, rel):
            raise AssertionError("constructed operation fails to preserve a relation")
    return f


@dataclass(frozen=True)
class TournamentPair:
    phi: OperationTable
    psi: OperationTable


def _collapser(lang: ConstraintLanguage, side: Sequence[Pair]) -> OperationTable:
    """One binary polymorphism collapsing every ordered pair of ``side`` downward."""
    memo: dict[tuple[Pair, ...], OperationTable] = {}

    def build(s: tuple[Pair, ...]) -> OperationTable:
        if s in memo:
            return memo[s]
        if len(s) <= 2:
            prescriptions = [p for pair in s for p in collapse(*pair)]
            f = find_polymorphism(lang, 2, prescriptions)
            if f is None:
                raise AssertionError(f"pairs {s} lie on one side but admit no joint collapse")
        else:
            f1 = build(s[1:])
            f2 = build(s[:1] + s[2:])
            f3 = build(s[:-1])
            f = compose_ops(f3, f1, f2)
        memo[s] = f
        return f

    d = lang.domain_size
    if not side:
        return OperationTable.projection(d, 2, 0)
    return build(tuple(sorted(side)))


def construct_tournament_pair(language: ConstraintLanguage, first: Sequence[Pair],
                              second: Sequence[Pair]) -> TournamentPair:
    lang = conservative_closure(language)
    if {(b, a) for a, b in first} != set(second):
        raise ValueError("the two sides must be mirror images of each other")
    d = lang.domain_size
    swap = OperationTable.from_function(d, 2, lambda x, y: y)
    first_arg = OperationTable.projection(d, 2, 0)
    out = []
    for side in (first, second):
        g = _collapser(lang, side)
        # f(x, y) = g(x, g(y, x))
        g_yx = compose_ops(g, swap, first_arg)
        out.append(_check(lang, compose_ops(g, first_arg, g_yx)))
    return TournamentPair(out[0], out[1])


def is_arithmetical_on(m: OperationTable, a: int, b: int) -> bool:
    return all(m(x, x, y) == y and m(y, x, x) == y and m(y, x, y) == y for x, y in ((a, b), (b, a)))


def construct_arithmetical(language: ConstraintLanguage, mbar_pairs: Sequence[Pair] | None = None,
                           witnesses: dict[Pair, OperationTable] | None = None) -> OperationTable:
    lang = conservative_closure(language)
    if mbar_pairs is None or witnesses is None:
        lc = check_local_conditions(lang)
        if not lc.ok:
            raise ValueError(f"local conditions fail on {lc.violation}")
        mbar_pairs = lc.mbar_pairs
        witnesses = {p: lc.classes[p].arithmetical for p in mbar_pairs}
    pairs = sorted(mbar_pairs)
    if not pairs:
        raise ValueError("no pairs on the arithmetical side")
    m = witnesses[pairs[0]]
    for k, (a, b) in enumerate(pairs[1:], start=1):
        if is_arithmetical_on(m, a, b):
            continue
        w = witnesses[(a, b)]
        swaps = ((a, b), (b, a))
        if any(m(x, x, y) != y for x, y in swaps):
            m = compose_ops(m, w, w, m)
        elif any(m(y, x, x) != y for x, y in swaps):
            m = compose_ops(m, m, w, w)
        else:
            m = compose_ops(m, m, w, m)
        for a2, b2 in pairs[:k + 1]:
            if not is_arithmetical_on(m, a2, b2):
                raise AssertionError(f"arithmetical step lost the identities on {(a2, b2)}")
    return _check(lang, m)


def is_majority(mu: OperationTable) -> bool:
    d = mu.domain_size
    return all(mu(x, y, y) == y and mu(y, x, y) == y and mu(y, y, x) == y
               for x in range(d) for y in range(d))


def construct_majority(language: ConstraintLanguage, tournament: TournamentPair | None,
                       arithmetical: OperationTable | None) -> OperationTable:
    """Majority polymorphism from a tournament pair (on the commutative side) and an arithmetical op."""
    lang = conservative_closure(language)
    d = lang.domain_size
    if d == 1:
        return OperationTable.projection(1, 3, 0)
    x, y, z = (OperationTable.projection(d, 3, i) for i in range(3))
    mu1 = mu2 = None
    if arithmetical is not None:
        m = arithmetical
        mu1 = compose_ops(m, x, m, z)
    if tournament is not None:
        phi, psi = tournament.phi, tournament.psi
        psi_xy, psi_yz, psi_xz = (compose_ops(psi, u, v) for u, v in ((x, y), (y, z), (x, z)))
        mu2 = compose_ops(phi, compose_ops(phi, psi_xy, psi_yz), psi_xz)
    if mu1 is None and mu2 is None:
        raise ValueError("need a tournament pair or an arithmetical operation")
    if mu1 is None:
        mu = mu2
    elif mu2 is None:
        mu = mu1
    else:
        rot1 = compose_ops(mu2, y, z, x)
        rot2 = compose_ops(mu2, z, x, y)
        mu = compose_ops(mu1, mu2, rot1, rot2)
    if not is_majority(mu):
        raise AssertionError("assembled operation is not a majority operation")
    return _check(lang, mu)
