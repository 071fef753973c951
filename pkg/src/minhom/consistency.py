"""Exact solving for tractable languages.

Pipeline: absorb unary constraints into weights, split every constraint
into binary projections along a majority polymorphism, enforce arc and path
consistency, then pick a minimum-weight maximum clique of the microstructure
graph by branch and bound.  Two boolean fragments have direct solvers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np
from scipy.optimize import linprog

from .relations import (
    Constraint,
    ConstraintLanguage,
    OperationTable,
    Relation,
    TooLarge,
    WeightedInstance,
    conservative_closure,
    preserves,
)


INT64_MAX = 2 ** 63 - 1
LP_TOLERANCE = 1e-6
MAX_COMPLEMENT_CLIQUES = 20_000


# ---------------------------------------------------------------- results

@dataclass(frozen=True)
class Optimal:
    assignment: tuple[int, ...]
    measure: int


@dataclass(frozen=True)
class Unsatisfiable:
    pass


@dataclass(frozen=True)
class NotCovered:
    reason: str
    witness: object = None


SolveResult = Optimal | Unsatisfiable | NotCovered


# ---------------------------------------------------------------- reductions

def shift_weights(instance: WeightedInstance, s: int) -> WeightedInstance:
    weights = tuple(tuple(w + s for w in row) for row in instance.weights)
    if any(w < 0 for row in weights for w in row):
        raise ValueError(f"shifting by {s} makes a weight negative")
    return WeightedInstance(instance.num_vars, instance.domain_size, instance.constraints, weights)


def checked_total(weights: Iterable[Iterable[int]]) -> int:
    total = 0
    for row in weights:
        for w in row:
            total += w
            if total > INT64_MAX:
                raise OverflowError("weight sum exceeds the 64-bit range")
    return total


def split_unary(instance: WeightedInstance) -> tuple[WeightedInstance, dict[int, frozenset[int]]]:
    """Separate arity-1 constraints (intersected per variable) from the rest."""
    allowed: dict[int, frozenset[int]] = {}
    rest = []
    for c in instance.constraints:
        if c.relation.arity == 1:
            vals = frozenset(t[0] for t in c.relation.tuples)
            v = c.scope[0]
            allowed[v] = allowed[v] & vals if v in allowed else vals
        else:
            rest.append(c)
    return WeightedInstance(instance.num_vars, instance.domain_size, tuple(rest), instance.weights), allowed


def absorb_unary_constraints(instance: WeightedInstance,
                             unary: Mapping[int, Iterable[int]]) -> tuple[WeightedInstance, int]:
    """Replace "x_j in C" by a penalty ``W`` on values outside ``C``; returns the instance and ``W``.

    ``W`` is one more than the total weight, so an optimum below ``W``
    exists exactly when the constrained instance is satisfiable.
    """
    W = checked_total(instance.weights) + 1
    weights = [list(row) for row in instance.weights]
    for j, allowed in unary.items():
        allowed = set(allowed)
        for a in range(instance.domain_size):
            if a not in allowed:
                weights[j][a] += W
    checked_total(weights)
    return WeightedInstance(instance.num_vars, instance.domain_size, instance.constraints,
                            tuple(map(tuple, weights))), W


@dataclass(frozen=True)
class PPFormula:
    """``R(x_0..x_{arity-1}) = exists y_0..y_{num_exists-1}: AND atoms``.

    Atom arguments index the free variables first, then the quantified ones.
    An atom whose relation is ``None`` is an equality.
    """

    arity: int
    num_exists: int
    atoms: tuple[tuple[Relation | None, tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        total = self.arity + self.num_exists
        atoms = tuple((rel, tuple(args)) for rel, args in self.atoms)
        for rel, args in atoms:
            want = 2 if rel is None else rel.arity
            if len(args) != want:
                raise ValueError(f"atom with {len(args)} arguments, expected {want}")
            if any(a < 0 or a >= total for a in args):
                raise ValueError(f"atom argument out of range in {args}")
        object.__setattr__(self, "atoms", atoms)


class _UnionFind:
    def __init__(self) -> None:
        self.parent: list[int] = []

    def add(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def expand_pp_instance(instance: WeightedInstance,
                       definitions: Mapping[Relation, PPFormula]) -> tuple[WeightedInstance, list[int]]:
    """Rewrite constraints through their pp-definitions.

    Quantified variables become fresh zero-weight variables and equality atoms
    identify variables.  Returns the new instance and, for every original
    variable, its index in the new one.
    """
    d = instance.domain_size
    uf = _UnionFind()
    for _ in range(instance.num_vars):
        uf.add()
    atoms: list[tuple[Relation, list[int]]] = []
    for c in instance.constraints:
        formula = definitions.get(c.relation)
        if formula is None:
            atoms.append((c.relation, list(c.scope)))
            continue
        if formula.arity != c.relation.arity:
            raise ValueError("pp-formula arity does not match the relation it defines")
        local = list(c.scope) + [uf.add() for _ in range(formula.num_exists)]
        for rel, args in formula.atoms:
            if rel is None:
                uf.union(local[args[0]], local[args[1]])
            else:
                if rel.domain_size != d:
                    raise ValueError("pp-formula atom over a different domain")
                atoms.append((rel, [local[a] for a in args]))
    roots = sorted({uf.find(v) for v in range(len(uf.parent))})
    new_index = {r: i for i, r in enumerate(roots)}
    weights = [[0] * d for _ in roots]
    for v in range(instance.num_vars):
        row = weights[new_index[uf.find(v)]]
        for a in range(d):
            row[a] += instance.weights[v][a]
    constraints = tuple(Constraint(rel, tuple(new_index[uf.find(v)] for v in scope)) for rel, scope in atoms)
    var_map = [new_index[uf.find(v)] for v in range(instance.num_vars)]
    return WeightedInstance(len(roots), d, constraints, tuple(map(tuple, weights))), var_map


# ---------------------------------------------------------------- binary instances

@dataclass
class BinaryInstance:
    """Unary domains ``unary[i]`` (bool, length d) and pair relations ``binary[k, l]`` (d x d)."""

    unary: np.ndarray
    binary: np.ndarray
    weights: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return self.unary.shape[0]

    @property
    def domain_size(self) -> int:
        return self.unary.shape[1]

    def unary_relation(self, i: int) -> Relation:
        return Relation.unary(self.domain_size, np.nonzero(self.unary[i])[0].tolist())

    def pair_relation(self, k: int, l: int) -> Relation:
        return Relation.from_matrix(self.binary[k, l])

    def copy(self) -> BinaryInstance:
        return BinaryInstance(self.unary.copy(), self.binary.copy(), self.weights)

    def same_as(self, other: BinaryInstance) -> bool:
        return (np.array_equal(self.unary, other.unary) and np.array_equal(self.binary, other.binary)
                and self.weights == other.weights)

    def satisfies(self, assignment: Sequence[int]) -> bool:
        n = self.n
        if not all(self.unary[i, assignment[i]] for i in range(n)):
            return False
        return all(self.binary[k, l, assignment[k], assignment[l]]
                   for k in range(n) for l in range(n) if k != l)

    def solutions(self) -> list[tuple[int, ...]]:
        return [a for a in itertools.product(range(self.domain_size), repeat=self.n) if self.satisfies(a)]


def _is_majority(mu: OperationTable) -> bool:
    d = mu.domain_size
    return all(mu(x, y, y) == y and mu(y, x, y) == y and mu(y, y, x) == y for x in range(d) for y in range(d))


def binarize(instance: WeightedInstance, mu: OperationTable | None = None) -> BinaryInstance:
    """Binary projections of every constraint, intersected per variable pair.

    With a majority polymorphism ``mu`` of every constraint relation the
    solution set is unchanged.  ``mu=None`` skips that check (binary inputs).
    """
    n, d = instance.num_vars, instance.domain_size
    if mu is not None:
        if not _is_majority(mu):
            raise ValueError("binarization needs a majority operation")
        for rel in {c.relation for c in instance.constraints}:
            if not _preserved(mu, rel):
                raise ValueError("majority operation does not preserve a constraint relation")
    else:
        if any(len(set(c.scope)) > 2 for c in instance.constraints):
            raise ValueError("constraints on more than two variables need a majority operation")
    unary = np.ones((n, d), dtype=bool)
    binary = np.ones((n, n, d, d), dtype=bool)
    for c in instance.constraints:
        scope, tuples = _collapse_repeats(c)
        if not tuples:
            unary[list(scope)] = False
            continue
        arr = np.asarray(tuples, dtype=np.int64)
        for p, k in enumerate(scope):
            mask = np.zeros(d, dtype=bool)
            mask[arr[:, p]] = True
            unary[k] &= mask
        for p, q in itertools.permutations(range(len(scope)), 2):
            k, l = scope[p], scope[q]
            m = np.zeros((d, d), dtype=bool)
            m[arr[:, p], arr[:, q]] = True
            binary[k, l] &= m
    binary &= binary.transpose(1, 0, 3, 2)
    for k in range(n):
        binary[k, k] = np.diag(unary[k])
    return BinaryInstance(unary, binary, instance.weights)


@lru_cache(maxsize=65536)
def _preserved(mu: OperationTable, rel: Relation) -> bool:
    return preserves(mu, rel)


def _collapse_repeats(c: Constraint) -> tuple[tuple[int, ...], list[tuple[int, ...]]]:
    distinct: list[int] = []
    for v in c.scope:
        if v not in distinct:
            distinct.append(v)
    out = set()
    for t in c.relation.tuples:
        seen: dict[int, int] = {}
        if all(seen.setdefault(v, a) == a for v, a in zip(c.scope, t)):
            out.add(tuple(seen[v] for v in distinct))
    return tuple(distinct), sorted(out)


def enforce_consistency(bi: BinaryInstance, trace: list[str] | None = None) -> BinaryInstance | None:
    """Arc and path consistency to a fixpoint; ``None`` when a domain empties."""
    U = bi.unary.copy()
    R = bi.binary.copy()
    n = U.shape[0]
    if n == 0:
        return bi.copy()
    off = ~np.eye(n, dtype=bool)[:, :, None, None]
    sweep = 0
    while True:
        sweep += 1
        before_u, before_r = int(U.sum()), int(R.sum())
        # pair relations inside the unary domains
        R &= U[:, None, :, None] & U[None, :, None, :]
        # symmetry
        R &= R.transpose(1, 0, 3, 2)
        # projections onto each coordinate
        U &= np.all(R.any(axis=3) | ~off[..., 0], axis=1)
        U &= np.all(R.any(axis=2) | ~off[..., 0], axis=0)
        for k in range(n):
            R[k, k] = np.diag(U[k])
        if not U.any(axis=1).all():
            if trace is not None:
                trace.append(f"sweep {sweep}: a domain became empty")
            return None
        # rho_ik := rho_ik & (rho_ij o rho_jk)
        for j in range(n):
            comp = R[:, j][:, None] @ R[j][None, :]
            R &= comp | ~off
        for k in range(n):
            R[k, k] = np.diag(U[k])
        removed_u = before_u - int(U.sum())
        removed_r = before_r - int(R.sum())
        if trace is not None:
            trace.append(f"sweep {sweep}: removed {removed_u} values, {removed_r} pairs")
        if removed_u == 0 and removed_r == 0:
            break
    if not U.any(axis=1).all():
        return None
    return BinaryInstance(U, R, bi.weights)


def is_arc_consistent(bi: BinaryInstance) -> bool:
    n = bi.n
    for i, j in itertools.permutations(range(n), 2):
        r = bi.binary[i, j]
        if not np.array_equal(r.any(axis=1), bi.unary[i]) or not np.array_equal(r.any(axis=0), bi.unary[j]):
            return False
    return True


def is_path_consistent(bi: BinaryInstance) -> bool:
    n = bi.n
    for i, j, k in itertools.permutations(range(n), 3):
        comp = bi.binary[i, j] @ bi.binary[j, k]
        if (bi.binary[i, k] & ~comp).any():
            return False
    return True


# ---------------------------------------------------------------- microstructure

@dataclass
class MicrostructureGraph:
    labels: list[tuple[int, int]]
    parts: list[list[int]]
    weights: list[int]
    adjacency: list[int] = field(repr=False)

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(len(self.labels)) for v in range(u + 1, len(self.labels))
                if self.adjacency[u] >> v & 1]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        for v, lab in enumerate(self.labels):
            g.add_node(v, label=lab, weight=self.weights[v])
        g.add_edges_from(self.edges())
        return g

    @classmethod
    def from_graph(cls, num_vertices: int, edges: Iterable[tuple[int, int]],
                   weights: Sequence[int] | None = None,
                   parts: Sequence[Sequence[int]] | None = None) -> MicrostructureGraph:
        """Wrap an arbitrary graph; by default every vertex is its own part."""
        adj = [0] * num_vertices
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not allowed")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        if parts is None:
            parts = [[v] for v in range(num_vertices)]
        labels = [(-1, -1)] * num_vertices
        for i, part in enumerate(parts):
            for a, v in enumerate(part):
                labels[v] = (i, a)
        w = list(weights) if weights is not None else [0] * num_vertices
        return cls(labels, [list(p) for p in parts], w, adj)


def build_microstructure(bi: BinaryInstance) -> MicrostructureGraph:
    labels = [(i, a) for i in range(bi.n) for a in range(bi.domain_size) if bi.unary[i, a]]
    index = {lab: v for v, lab in enumerate(labels)}
    parts = [[index[(i, a)] for a in range(bi.domain_size) if bi.unary[i, a]] for i in range(bi.n)]
    weights = [bi.weights[i][a] for i, a in labels]
    adj = [0] * len(labels)
    for u, (i, a) in enumerate(labels):
        for v, (j, b) in enumerate(labels):
            if i != j and bi.binary[i, j, a, b]:
                adj[u] |= 1 << v
    return MicrostructureGraph(labels, parts, weights, adj)


@dataclass(frozen=True)
class CliqueResult:
    vertices: tuple[int, ...]
    size: int
    measure: int


def solve_mmclique_exact(g: MicrostructureGraph) -> CliqueResult:
    """Minimum weight among maximum cliques; ties go to the least sorted vertex tuple.

    Every clique takes at most one vertex per part, so the search walks the
    parts (smallest first) choosing a vertex or skipping the part.
    """
    order = sorted(range(len(g.parts)), key=lambda i: (len(g.parts[i]), i))
    parts = [sorted(g.parts[i], key=lambda v: (g.weights[v], v)) for i in order]
    w = g.weights
    adj = g.adjacency
    full = (1 << g.num_vertices) - 1
    best: list = [0, 0, ()]  # size, weight, sorted vertices

    def part_min(k: int, cand: int) -> int | None:
        for v in parts[k]:
            if cand >> v & 1:
                return w[v]
        return None

    def better(size: int, weight: int, verts: tuple[int, ...]) -> bool:
        bs, bw, bv = best
        return size > bs or (size == bs and (weight < bw or (weight == bw and verts < bv)))

    def dfs(k: int, cand: int, chosen: list[int], weight: int) -> None:
        size = len(chosen)
        if k == len(parts):
            verts = tuple(sorted(chosen))
            if better(size, weight, verts):
                best[:] = [size, weight, verts]
            return
        mins = [m for m in (part_min(j, cand) for j in range(k, len(parts))) if m is not None]
        bound = size + len(mins)
        if bound < best[0]:
            return
        if bound == best[0]:
            need = best[0] - size
            if weight + sum(sorted(mins)[:need]) > best[1]:
                return
        for v in parts[k]:
            if cand >> v & 1:
                chosen.append(v)
                dfs(k + 1, cand & adj[v], chosen, weight + w[v])
                chosen.pop()
        dfs(k + 1, cand, chosen, weight)

    dfs(0, full, [], 0)
    return CliqueResult(best[2], best[0], best[1])


@dataclass(frozen=True)
class LPResult:
    lp_value: float
    integral: bool
    x: tuple[float, ...]
    clique_size: int


def solve_mmclique_lp(g: MicrostructureGraph, max_cliques: int = MAX_COMPLEMENT_CLIQUES) -> LPResult:
    """LP over the clique inequalities of the complement plus "sum x = clique number"."""
    nv = g.num_vertices
    if nv == 0:
        return LPResult(0.0, True, (), 0)
    G = g.to_networkx()
    omega = nx.max_weight_clique(G, weight=None)[1]
    comp = nx.complement(G)
    rows = []
    for clique in nx.find_cliques(comp):
        rows.append(clique)
        if len(rows) > max_cliques:
            raise TooLarge(f"complement has more than {max_cliques} maximal cliques")
    A_ub = np.zeros((len(rows), nv))
    for r, clique in enumerate(rows):
        A_ub[r, clique] = 1.0
    res = linprog(np.asarray(g.weights, dtype=float), A_ub=A_ub, b_ub=np.ones(len(rows)),
                  A_eq=np.ones((1, nv)), b_eq=[float(omega)], bounds=[(0, None)] * nv, method="highs-ds")
    if res.status != 0:
        raise RuntimeError(f"LP solver failed: {res.message}")
    x = res.x
    integral = bool(np.all(np.minimum(np.abs(x), np.abs(x - 1.0)) <= LP_TOLERANCE))
    return LPResult(float(res.fun), integral, tuple(float(v) for v in x), int(omega))


# ---------------------------------------------------------------- boolean fragments

def _kind(rel: Relation) -> str | None:
    if rel.domain_size != 2:
        return None
    t = rel.tuples
    if rel.arity == 1:
        return {frozenset({(0,)}): "zero", frozenset({(1,)}): "one",
                frozenset({(0,), (1,)}): "any", frozenset(): "empty"}[t]
    if rel.arity != 2:
        return None
    return {
        frozenset({(0, 0), (0, 1), (1, 1)}): "le",
        frozenset({(0, 0), (1, 0), (1, 1)}): "ge",
        frozenset({(0, 1), (1, 0)}): "ne",
        frozenset({(0, 0), (1, 1)}): "eq",
        frozenset({(0, 0), (0, 1), (1, 0), (1, 1)}): "any",
    }.get(t)


MONOTONE_KINDS = {"zero", "one", "any", "empty", "le", "ge", "eq"}
DISEQUALITY_KINDS = {"zero", "one", "any", "empty", "ne"}


def _kinds(instance: WeightedInstance) -> set[str | None]:
    return {_kind(c.relation) for c in instance.constraints}


def solve_boolean_monotone(instance: WeightedInstance) -> Optimal | Unsatisfiable:
    """Minimum cut on the implication graph (source side means value 1)."""
    if instance.domain_size != 2 or not _kinds(instance) <= MONOTONE_KINDS:
        raise ValueError("instance uses relations outside the order fragment")
    n = instance.num_vars
    if n == 0:
        return Optimal((), 0)
    scale = 1 << n
    lo = [row[0] * scale for row in instance.weights]
    hi = [row[1] * scale + (1 << (n - 1 - i)) for i, row in enumerate(instance.weights)]
    inf = sum(lo) + sum(hi) + 1
    G = nx.DiGraph()
    G.add_node("s")
    G.add_node("t")

    def add(u, v, cap):
        if G.has_edge(u, v):
            G[u][v]["capacity"] += cap
        else:
            G.add_edge(u, v, capacity=cap)

    for i in range(n):
        add("s", i, lo[i])
        add(i, "t", hi[i])
    for c in instance.constraints:
        kind = _kind(c.relation)
        if kind == "empty":
            return Unsatisfiable()
        if kind == "zero":
            add(c.scope[0], "t", inf)
        elif kind == "one":
            add("s", c.scope[0], inf)
        elif kind in ("le", "ge", "eq"):
            x, y = c.scope
            if kind == "ge":
                x, y = y, x
            if x != y:
                add(x, y, inf)
                if kind == "eq":
                    add(y, x, inf)
    cut, (source_side, _) = nx.minimum_cut(G, "s", "t")
    if cut >= inf:
        return Unsatisfiable()
    assignment = tuple(1 if i in source_side else 0 for i in range(n))
    return Optimal(assignment, instance.measure(assignment))


def solve_boolean_disequality(instance: WeightedInstance) -> Optimal | Unsatisfiable:
    """Each connected component of the disequality graph has at most two colourings."""
    if instance.domain_size != 2 or not _kinds(instance) <= DISEQUALITY_KINDS:
        raise ValueError("instance uses relations outside the disequality fragment")
    n = instance.num_vars
    forced: dict[int, set[int]] = {}
    adj: list[list[int]] = [[] for _ in range(n)]
    for c in instance.constraints:
        kind = _kind(c.relation)
        if kind == "empty":
            return Unsatisfiable()
        if kind in ("zero", "one"):
            forced.setdefault(c.scope[0], set()).add(0 if kind == "zero" else 1)
        elif kind == "ne":
            x, y = c.scope
            if x == y:
                return Unsatisfiable()
            adj[x].append(y)
            adj[y].append(x)
    assignment = [0] * n
    colour = [-1] * n
    for start in range(n):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        comp = [start]
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if colour[v] < 0:
                    colour[v] = 1 - colour[u]
                    comp.append(v)
                    stack.append(v)
                elif colour[v] == colour[u]:
                    return Unsatisfiable()
        comp.sort()
        options = []
        for flip in (0, 1):
            vals = [colour[v] ^ flip for v in comp]
            if all(val in forced.get(v, {val}) and len(forced.get(v, ())) <= 1 for v, val in zip(comp, vals)):
                cost = sum(instance.weights[v][val] for v, val in zip(comp, vals))
                options.append((cost, vals))
        if not options:
            return Unsatisfiable()
        _, vals = min(options)
        for v, val in zip(comp, vals):
            assignment[v] = val
    out = tuple(assignment)
    return Optimal(out, instance.measure(out))


# ---------------------------------------------------------------- end to end

def _check_language_membership(language: ConstraintLanguage, instance: WeightedInstance) -> None:
    if instance.domain_size != language.domain_size:
        raise ValueError("instance and language have different domain sizes")
    allowed = set(conservative_closure(language)) | {Relation.equality(language.domain_size)}
    for i, c in enumerate(instance.constraints):
        if c.relation not in allowed:
            raise ValueError(f"constraint {i} uses a relation outside the language")


def solve(language: ConstraintLanguage, instance: WeightedInstance,
          trace: list[str] | None = None) -> SolveResult:
    from .classifier import classify

    _check_language_membership(language, instance)
    verdict = classify(language)
    if not verdict.tractable:
        return NotCovered(f"the language is NP-hard: {verdict.witness.describe()}", verdict.witness)
    if instance.domain_size == 2:
        kinds = _kinds(instance)
        if kinds <= MONOTONE_KINDS:
            if trace is not None:
                trace.append("boolean order fragment: minimum cut")
            return solve_boolean_monotone(instance)
        if kinds <= DISEQUALITY_KINDS:
            if trace is not None:
                trace.append("boolean disequality fragment: component colouring")
            return solve_boolean_disequality(instance)
    return solve_general(instance, verdict.majority, trace)


def solve_general(instance: WeightedInstance, mu: OperationTable,
                  trace: list[str] | None = None) -> Optimal | Unsatisfiable:
    """Consistency plus clique search, given a majority polymorphism of every relation."""
    rest, unary = split_unary(instance)
    W = None
    if unary:
        rest, W = absorb_unary_constraints(rest, unary)
        if trace is not None:
            trace.append(f"absorbed unary constraints on {len(unary)} variables with penalty {W}")
    bi = binarize(rest, mu)
    bi = enforce_consistency(bi, trace)
    if bi is None:
        return Unsatisfiable()
    g = build_microstructure(bi)
    res = solve_mmclique_exact(g)
    if trace is not None:
        trace.append(f"microstructure: {g.num_vertices} vertices, best clique size {res.size}, weight {res.measure}")
    if res.size < instance.num_vars or (W is not None and res.measure >= W):
        return Unsatisfiable()
    assignment = [0] * instance.num_vars
    for v in res.vertices:
        i, a = g.labels[v]
        assignment[i] = a
    out = tuple(assignment)
    if not instance.satisfies(out):
        raise AssertionError("clique search returned an assignment violating a constraint")
    return Optimal(out, instance.measure(out))
