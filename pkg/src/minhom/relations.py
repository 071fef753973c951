"""Finite relations, operation tables, languages and weighted instances.

Everything here is immutable after construction.  Domain elements are the
integers ``0..domain_size-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

Tuple_ = tuple[int, ...]


class ArityError(ValueError):
    pass


class DomainMismatch(ValueError):
    pass


class TooLarge(RuntimeError):
    """A bounded exact computation would exceed its configured cap."""


@dataclass(frozen=True)
class Relation:
    arity: int
    domain_size: int
    tuples: frozenset[Tuple_]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ArityError(f"arity must be positive, got {self.arity}")
        if self.domain_size < 1:
            raise ValueError("domain_size must be positive")
        tuples = frozenset(tuple(int(v) for v in t) for t in self.tuples)
        for t in tuples:
            if len(t) != self.arity:
                raise ArityError(f"tuple {t} does not have arity {self.arity}")
            if any(v < 0 or v >= self.domain_size for v in t):
                raise ValueError(f"tuple {t} has an entry outside 0..{self.domain_size - 1}")
        object.__setattr__(self, "tuples", tuples)

    @classmethod
    def of(cls, domain_size: int, tuples: Iterable[Sequence[int]], arity: int | None = None) -> Relation:
        tuples = [tuple(t) for t in tuples]
        if arity is None:
            if not tuples:
                raise ArityError("cannot infer the arity of an empty relation")
            arity = len(tuples[0])
        return cls(arity, domain_size, frozenset(tuples))

    @classmethod
    def unary(cls, domain_size: int, values: Iterable[int]) -> Relation:
        return cls(1, domain_size, frozenset((v,) for v in values))

    @classmethod
    def full(cls, domain_size: int, arity: int) -> Relation:
        return cls(arity, domain_size, frozenset(itertools.product(range(domain_size), repeat=arity)))

    @classmethod
    def equality(cls, domain_size: int) -> Relation:
        return cls(2, domain_size, frozenset((a, a) for a in range(domain_size)))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> Relation:
        d = matrix.shape[0]
        rows, cols = np.nonzero(matrix)
        return cls(2, d, frozenset(zip(rows.tolist(), cols.tolist())))

    @classmethod
    def from_predicate(cls, domain_size: int, arity: int, pred: Callable[..., bool]) -> Relation:
        return cls(arity, domain_size, frozenset(
            t for t in itertools.product(range(domain_size), repeat=arity) if pred(*t)))

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self) -> Iterator[Tuple_]:
        return iter(sorted(self.tuples))

    def __contains__(self, t: object) -> bool:
        return t in self.tuples

    @cached_property
    def matrix(self) -> np.ndarray:
        """Boolean ``|A| x |A|`` adjacency matrix (binary relations only)."""
        if self.arity != 2:
            raise ArityError("matrix form exists only for binary relations")
        m = np.zeros((self.domain_size, self.domain_size), dtype=bool)
        for a, b in self.tuples:
            m[a, b] = True
        m.setflags(write=False)
        return m

    @cached_property
    def values(self) -> frozenset[int]:
        """Set of domain elements occurring in some tuple."""
        return frozenset(v for t in self.tuples for v in t)

    def sorted_tuples(self) -> list[Tuple_]:
        return sorted(self.tuples)

    def intersect(self, other: Relation) -> Relation:
        _same_shape(self, other)
        return Relation(self.arity, self.domain_size, self.tuples & other.tuples)

    def relabel(self, perm: Sequence[int]) -> Relation:
        return Relation(self.arity, self.domain_size,
                        frozenset(tuple(perm[v] for v in t) for t in self.tuples))

    def __repr__(self) -> str:
        body = ", ".join(str(t) for t in self.sorted_tuples()[:8])
        more = ", ..." if len(self.tuples) > 8 else ""
        return f"Relation(arity={self.arity}, d={self.domain_size}, {{{body}{more}}})"


def _same_shape(r: Relation, s: Relation) -> None:
    if r.domain_size != s.domain_size:
        raise DomainMismatch(f"domain sizes differ: {r.domain_size} vs {s.domain_size}")
    if r.arity != s.arity:
        raise ArityError(f"arities differ: {r.arity} vs {s.arity}")


def _require_binary(*rels: Relation) -> None:
    for r in rels:
        if r.arity != 2:
            raise ArityError(f"expected a binary relation, got arity {r.arity}")


def transpose(rho: Relation) -> Relation:
    _require_binary(rho)
    return Relation(2, rho.domain_size, frozenset((b, a) for a, b in rho.tuples))


def compose(alpha: Relation, beta: Relation) -> Relation:
    """``{(x, y) | exists z: alpha(x, z) and beta(z, y)}``."""
    _require_binary(alpha, beta)
    if alpha.domain_size != beta.domain_size:
        raise DomainMismatch("composition needs equal domain sizes")
    prod = alpha.matrix.astype(np.int32) @ beta.matrix.astype(np.int32)
    return Relation.from_matrix(prod > 0)


def project_binary(rho: Relation, i: int, j: int) -> Relation:
    """Projection onto 1-based coordinates ``i`` and ``j``."""
    if i == j:
        raise ValueError("projection coordinates must differ")
    if not (1 <= i <= rho.arity and 1 <= j <= rho.arity):
        raise IndexError(f"coordinates ({i}, {j}) out of range for arity {rho.arity}")
    return Relation(2, rho.domain_size, frozenset((t[i - 1], t[j - 1]) for t in rho.tuples))


def project(rho: Relation, coords: Sequence[int]) -> Relation:
    """Projection onto 0-based coordinates (repeats allowed)."""
    return Relation(len(coords), rho.domain_size, frozenset(tuple(t[c] for c in coords) for t in rho.tuples))


def pr1(rho: Relation) -> Relation:
    _require_binary(rho)
    return Relation(1, rho.domain_size, frozenset((a,) for a, _ in rho.tuples))


def pr2(rho: Relation) -> Relation:
    _require_binary(rho)
    return Relation(1, rho.domain_size, frozenset((b,) for _, b in rho.tuples))


# Named predicates used throughout the classifier and the gadgets.

def box(domain_size: int, a: int, b: int, c: int, d: int) -> Relation:
    """Three-pair predicate ``{a,b} x {c,d}`` minus the corner ``(b, d)``."""
    if a == b or c == d:
        raise ValueError("box predicate needs a != b and c != d")
    return Relation(2, domain_size, frozenset({(a, c), (a, d), (b, c), (b, d)} - {(b, d)}))


def cross(domain_size: int, a: int, b: int, c: int, d: int) -> Relation:
    """Two-pair predicate ``{(a, d), (b, c)}``."""
    if a == b or c == d:
        raise ValueError("cross predicate needs a != b and c != d")
    return Relation(2, domain_size, frozenset({(a, d), (b, c)}))


def crossed_pair(domain_size: int, a: int, b: int) -> Relation:
    """``{a,b}^2`` minus ``(b, b)``; over {0,1} with a=1, b=0 this is OR."""
    return box(domain_size, a, b, a, b)


def lin(domain_size: int, a: int, b: int) -> Relation:
    """Even-parity triples over ``{a, b}`` with ``a`` read as 0 and ``b`` as 1."""
    if a == b:
        raise ValueError("lin needs two distinct elements")
    pick = (a, b)
    return Relation(3, domain_size, frozenset(
        (pick[x], pick[y], pick[z]) for x, y, z in itertools.product((0, 1), repeat=3) if (x ^ y ^ z) == 0))


@dataclass(frozen=True)
class OperationTable:
    """Total operation ``A^arity -> A`` stored row-major (first argument most significant)."""

    arity: int
    domain_size: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ArityError("operation arity must be positive")
        table = tuple(int(v) for v in self.table)
        if len(table) != self.domain_size ** self.arity:
            raise ValueError(f"table has {len(table)} entries, expected {self.domain_size ** self.arity}")
        if any(v < 0 or v >= self.domain_size for v in table):
            raise ValueError("table value outside the domain")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_function(cls, domain_size: int, arity: int, fn: Callable[..., int]) -> OperationTable:
        return cls(arity, domain_size, tuple(
            fn(*args) for args in itertools.product(range(domain_size), repeat=arity)))

    @classmethod
    def projection(cls, domain_size: int, arity: int, index: int = 0) -> OperationTable:
        return cls.from_function(domain_size, arity, lambda *args: args[index])

    def index(self, args: Sequence[int]) -> int:
        i = 0
        for v in args:
            i = i * self.domain_size + v
        return i

    def __call__(self, *args: int) -> int:
        if len(args) != self.arity:
            raise ArityError(f"expected {self.arity} arguments, got {len(args)}")
        return self.table[self.index(args)]

    def inputs(self) -> Iterator[Tuple_]:
        return itertools.product(range(self.domain_size), repeat=self.arity)

    @cached_property
    def is_conservative(self) -> bool:
        return all(v in args for args, v in zip(self.inputs(), self.table))

    @cached_property
    def array(self) -> np.ndarray:
        a = np.asarray(self.table, dtype=np.int64).reshape((self.domain_size,) * self.arity)
        a.setflags(write=False)
        return a

    def relabel(self, perm: Sequence[int]) -> OperationTable:
        inv = [0] * len(perm)
        for i, p in enumerate(perm):
            inv[p] = i
        return OperationTable.from_function(
            self.domain_size, self.arity, lambda *args: perm[self(*(inv[v] for v in args))])

    def rows(self) -> list[list[int]]:
        """Nested-list rendering, binary tables as a matrix."""
        d = self.domain_size
        if self.arity == 1:
            return [list(self.table)]
        step = d ** (self.arity - 1)
        flat = [list(self.table[i:i + d]) for i in range(0, len(self.table), d)]
        return flat if self.arity == 2 else [flat[i:i + step // d] for i in range(0, len(flat), step // d)]


def compose_ops(outer: OperationTable, *inner: OperationTable) -> OperationTable:
    """``outer(inner_1(x..), ..., inner_k(x..))`` with all inner ops of equal arity."""
    if len(inner) != outer.arity:
        raise ArityError("need one inner operation per outer argument")
    arity = inner[0].arity
    d = outer.domain_size
    if any(g.arity != arity or g.domain_size != d for g in inner):
        raise ArityError("inner operations must share arity and domain")
    arrays = [np.asarray(g.table, dtype=np.int64) for g in inner]
    idx = np.zeros(d ** arity, dtype=np.int64)
    for a in arrays:
        idx = idx * d + a
    out = np.asarray(outer.table, dtype=np.int64)[idx]
    return OperationTable(arity, d, tuple(out.tolist()))


def preserves(f: OperationTable, rho: Relation) -> bool:
    """Whether ``f`` applied coordinatewise to any ``arity(f)`` tuples of ``rho`` stays in ``rho``."""
    if f.domain_size != rho.domain_size:
        raise DomainMismatch("operation and relation live on different domains")
    if not rho.tuples:
        return True
    d = f.domain_size
    tuples = np.asarray(rho.sorted_tuples(), dtype=np.int64)  # (m, r)
    m, r = tuples.shape
    member = np.zeros(d ** r, dtype=bool)
    weights = d ** np.arange(r - 1, -1, -1, dtype=np.int64)
    member[tuples @ weights] = True
    table = np.asarray(f.table, dtype=np.int64)
    # Chunk over the first argument to bound memory at m^(k-1) * r.
    for first in range(m):
        idx = np.broadcast_to(tuples[first], (1, r)).copy()
        for _ in range(f.arity - 1):
            idx = (idx[:, None, :] * d + tuples[None, :, :]).reshape(-1, r)
        out = table[idx]
        if not member[out @ weights].all():
            return False
    return True


def restrict(f: OperationTable, subset: Iterable[int]) -> OperationTable:
    """Restriction of ``f`` to ``S^arity``, relabelled onto ``0..|S|-1`` in increasing order."""
    elems = sorted(set(subset))
    if not elems:
        raise ValueError("cannot restrict to the empty set")
    pos = {v: i for i, v in enumerate(elems)}
    values = []
    for args in itertools.product(elems, repeat=f.arity):
        v = f(*args)
        if v not in pos:
            raise ValueError(f"subset {elems} is not closed under the operation: f{args} = {v}")
        values.append(pos[v])
    return OperationTable(f.arity, len(elems), tuple(values))


@dataclass(frozen=True)
class ConstraintLanguage:
    domain_size: int
    named: tuple[tuple[str, Relation], ...] = ()

    def __post_init__(self) -> None:
        names = [n for n, _ in self.named]
        if len(set(names)) != len(names):
            raise ValueError("relation names must be unique")
        for name, rel in self.named:
            if rel.domain_size != self.domain_size:
                raise DomainMismatch(f"relation {name!r} has domain size {rel.domain_size}")
        object.__setattr__(self, "named", tuple(self.named))

    @classmethod
    def of(cls, domain_size: int, relations: Mapping[str, Relation] | Iterable[Relation]) -> ConstraintLanguage:
        if isinstance(relations, Mapping):
            return cls(domain_size, tuple(relations.items()))
        return cls(domain_size, tuple((f"r{i}", r) for i, r in enumerate(relations)))

    @property
    def relations(self) -> dict[str, Relation]:
        return dict(self.named)

    def __getitem__(self, name: str) -> Relation:
        for n, r in self.named:
            if n == name:
                return r
        raise KeyError(name)

    def __iter__(self) -> Iterator[Relation]:
        return (r for _, r in self.named)

    def __len__(self) -> int:
        return len(self.named)

    def with_relations(self, extra: Mapping[str, Relation]) -> ConstraintLanguage:
        return ConstraintLanguage(self.domain_size, self.named + tuple(extra.items()))

    def relabel(self, perm: Sequence[int]) -> ConstraintLanguage:
        return ConstraintLanguage(self.domain_size, tuple((n, r.relabel(perm)) for n, r in self.named))


@dataclass(frozen=True)
class Constraint:
    relation: Relation
    scope: tuple[int, ...]


@dataclass(frozen=True)
class WeightedInstance:
    num_vars: int
    domain_size: int
    constraints: tuple[Constraint, ...]
    weights: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        cons = tuple(c if isinstance(c, Constraint) else Constraint(c[0], tuple(c[1])) for c in self.constraints)
        for c in cons:
            scope = tuple(int(v) for v in c.scope)
            if len(scope) != c.relation.arity:
                raise ArityError(f"scope {scope} does not match arity {c.relation.arity}")
            if any(v < 0 or v >= self.num_vars for v in scope):
                raise ValueError(f"scope {scope} references a missing variable")
            if c.relation.domain_size != self.domain_size:
                raise DomainMismatch("constraint relation has the wrong domain size")
        weights = tuple(tuple(int(w) for w in row) for row in self.weights)
        if len(weights) != self.num_vars or any(len(row) != self.domain_size for row in weights):
            raise ValueError(f"weights must be a {self.num_vars} x {self.domain_size} matrix")
        if any(w < 0 for row in weights for w in row):
            raise ValueError("weights must be nonnegative")
        object.__setattr__(self, "constraints", tuple(Constraint(c.relation, tuple(c.scope)) for c in cons))
        object.__setattr__(self, "weights", weights)

    @classmethod
    def build(cls, num_vars: int, domain_size: int,
              constraints: Iterable[tuple[Relation, Sequence[int]]],
              weights: Sequence[Sequence[int]] | None = None) -> WeightedInstance:
        if weights is None:
            weights = [[0] * domain_size for _ in range(num_vars)]
        return cls(num_vars, domain_size,
                   tuple(Constraint(r, tuple(s)) for r, s in constraints),
                   tuple(tuple(row) for row in weights))

    def measure(self, assignment: Sequence[int]) -> int:
        return sum(self.weights[i][a] for i, a in enumerate(assignment))

    def satisfies(self, assignment: Sequence[int]) -> bool:
        return all(tuple(assignment[v] for v in c.scope) in c.relation.tuples for c in self.constraints)


Assignment = tuple[int, ...]

MAX_PP_COMPLEMENT = 100_000


def conservative_closure(language: ConstraintLanguage) -> ConstraintLanguage:
    """The language extended by every nonempty subset of the domain as a unary relation."""
    d = language.domain_size
    present = {r for r in language if r.arity == 1}
    taken = {n for n, _ in language.named}
    extra = {}
    for size in range(1, d + 1):
        for subset in itertools.combinations(range(d), size):
            rel = Relation.unary(d, subset)
            if rel in present:
                continue
            name = "{" + ",".join(map(str, subset)) + "}"
            while name in taken:
                name = "_" + name
            taken.add(name)
            extra[name] = rel
    return language.with_relations(extra) if extra else language


def is_pp_member(rho: Relation, language: ConstraintLanguage) -> bool:
    """Whether ``rho`` is primitive-positive definable from ``language`` (with equality).

    Decided by searching for a ``|rho|``-ary polymorphism that moves the rows
    of ``rho`` outside ``rho``.  Raises :class:`TooLarge` when the search
    exceeds its caps.
    """
    from .csp import table_network

    if rho.domain_size != language.domain_size:
        raise DomainMismatch("relation and language live on different domains")
    if rho in set(language) or not rho.tuples:
        return True
    if rho.arity == 2 and rho == Relation.equality(rho.domain_size):
        return True
    d, r = rho.domain_size, rho.arity
    if d ** r > MAX_PP_COMPLEMENT:
        raise TooLarge(f"complement of an arity-{r} relation over {d} elements is too large")
    rows = rho.sorted_tuples()
    net = table_network(language, len(rows))
    if net.root is None:
        raise RuntimeError("projection tables were pruned; the polymorphism network is inconsistent")
    columns = tuple(net.index[tuple(row[j] for row in rows)] for j in range(r))
    outside = [t for t in itertools.product(range(d), repeat=r) if t not in rho.tuples]
    return net.solve(extra=[(columns, outside)]) is None
