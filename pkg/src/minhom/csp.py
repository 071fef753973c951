"""Finite-domain search over operation tables.

A candidate ``k``-ary operation on ``A`` is a vector of unknowns indexed by
the points of ``A^k``.  Requiring the operation to preserve a relation of
arity ``s`` yields one constraint per ``k``-tuple of its tuples, namely that
the images of the ``s`` induced points form a tuple of the relation.  The
network below holds those constraints with bitmask domains, runs generalized
arc consistency, and backtracks with a smallest-domain-first rule.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .relations import ConstraintLanguage, Relation, TooLarge

MAX_POINTS = 1024
MAX_RAW_CONSTRAINTS = 400_000


def bits(mask: int) -> list[int]:
    return _BITS[mask] if mask < len(_BITS) else [i for i in range(mask.bit_length()) if mask >> i & 1]


_BITS = [[i for i in range(16) if m >> i & 1] for m in range(1 << 10)]


@dataclass
class _Nary:
    scope: tuple[int, ...]
    tuples: list[tuple[int, ...]]


class _Support:
    """Per-direction support tables of a binary constraint, indexed by domain mask."""

    __slots__ = ("fwd", "bwd")

    def __init__(self, pairs: frozenset[tuple[int, int]], d: int) -> None:
        row = [0] * d
        col = [0] * d
        for a, b in pairs:
            row[a] |= 1 << b
            col[b] |= 1 << a
        self.fwd = _mask_table(row, d)
        self.bwd = _mask_table(col, d)


def _mask_table(row: list[int], d: int) -> list[int]:
    table = [0] * (1 << d)
    for m in range(1, 1 << d):
        low = m & -m
        table[m] = table[m ^ low] | row[low.bit_length() - 1]
    return table


class TableNetwork:
    """Constraint network whose solutions are the ``arity``-ary polymorphisms of a language."""

    def __init__(self, language: ConstraintLanguage, arity: int) -> None:
        d = language.domain_size
        self.domain_size = d
        self.arity = arity
        npoints = d ** arity
        if npoints > MAX_POINTS:
            raise TooLarge(f"{npoints} table entries exceeds the cap of {MAX_POINTS}")
        raw = sum(len(r) ** arity for r in language if r.arity > 1)
        if raw > MAX_RAW_CONSTRAINTS:
            raise TooLarge(f"{raw} preservation constraints exceeds the cap of {MAX_RAW_CONSTRAINTS}")
        self.points: list[tuple[int, ...]] = list(itertools.product(range(d), repeat=arity))
        self.index = {p: i for i, p in enumerate(self.points)}
        full = (1 << d) - 1
        doms = [full] * npoints
        for rel in language:
            if rel.arity != 1:
                continue
            allowed = 0
            for (v,) in rel.tuples:
                allowed |= 1 << v
            for i, p in enumerate(self.points):
                if all(allowed >> v & 1 for v in p):
                    doms[i] &= allowed
        self.feasible = all(doms)
        self._supports: dict[frozenset, _Support] = {}
        self.binary: list[list[tuple[int, list[int]]]] = [[] for _ in range(npoints)]
        self.nary: list[_Nary] = []
        self.nary_of: list[list[int]] = [[] for _ in range(npoints)]
        if not self.feasible:
            self.root = None
            return

        merged: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
        weights = [d ** (arity - 1 - j) for j in range(arity)]
        for rel in language:
            if rel.arity == 1 or not rel.tuples:
                continue
            tuples = rel.sorted_tuples()
            s = rel.arity
            for combo in itertools.product(tuples, repeat=arity):
                scope = tuple(sum(weights[j] * combo[j][c] for j in range(arity)) for c in range(s))
                reduced = _reduce(scope, tuples, doms)
                if reduced is None:
                    continue
                rscope, rtuples = reduced
                if not rtuples:
                    self.feasible = False
                    break
                if len(rscope) == 1:
                    mask = 0
                    for (v,) in rtuples:
                        mask |= 1 << v
                    doms[rscope[0]] &= mask
                    if not doms[rscope[0]]:
                        self.feasible = False
                        break
                    continue
                prev = merged.get(rscope)
                merged[rscope] = set(rtuples) if prev is None else prev & set(rtuples)
            if not self.feasible:
                break
        if not self.feasible:
            self.root = None
            return
        for scope, tuples in merged.items():
            self._add(scope, tuples)
        root = list(doms)
        self.root = root if self.propagate(root, range(npoints)) else None
        self.feasible = self.root is not None

    def _add(self, scope: tuple[int, ...], tuples: Iterable[tuple[int, ...]]) -> None:
        if len(scope) == 2:
            key = frozenset(tuples)
            sup = self._supports.get(key)
            if sup is None:
                sup = self._supports[key] = _Support(key, self.domain_size)
            x, y = scope
            self.binary[x].append((y, sup.fwd))
            self.binary[y].append((x, sup.bwd))
        else:
            idx = len(self.nary)
            self.nary.append(_Nary(scope, list(tuples)))
            for v in set(scope):
                self.nary_of[v].append(idx)

    def propagate(self, doms: list[int], changed: Iterable[int], extra: Sequence[_Nary] = ()) -> bool:
        queue = deque(changed)
        queued = set(queue)
        extra_of: dict[int, list[_Nary]] = {}
        for c in extra:
            for v in set(c.scope):
                extra_of.setdefault(v, []).append(c)
        if extra:
            for c in extra:
                for v in c.scope:
                    if v not in queued:
                        queued.add(v)
                        queue.append(v)
        binary, nary, nary_of = self.binary, self.nary, self.nary_of
        while queue:
            x = queue.popleft()
            queued.discard(x)
            dx = doms[x]
            for y, table in binary[x]:
                dy = doms[y]
                new = dy & table[dx]
                if new != dy:
                    if not new:
                        return False
                    doms[y] = new
                    if y not in queued:
                        queued.add(y)
                        queue.append(y)
            cons = [nary[i] for i in nary_of[x]]
            cons.extend(extra_of.get(x, ()))
            for c in cons:
                scope = c.scope
                masks = [0] * len(scope)
                live = False
                for t in c.tuples:
                    for j, v in enumerate(scope):
                        if not doms[v] >> t[j] & 1:
                            break
                    else:
                        live = True
                        for j in range(len(scope)):
                            masks[j] |= 1 << t[j]
                if not live:
                    return False
                for j, v in enumerate(scope):
                    new = doms[v] & masks[j]
                    if new != doms[v]:
                        doms[v] = new
                        if v not in queued:
                            queued.add(v)
                            queue.append(v)
        return True

    def solve(self, fixed: dict[int, int] | None = None, extra: Sequence[tuple[Sequence[int], Iterable[tuple[int, ...]]]] = ()) -> list[int] | None:
        """First solution in search order, or ``None``.

        ``fixed`` maps point indices to restricting masks; ``extra`` lists
        additional constraints as ``(scope, allowed tuples)``.
        """
        if self.root is None:
            return None
        doms = list(self.root)
        touched = []
        for i, mask in (fixed or {}).items():
            new = doms[i] & mask
            if not new:
                return None
            if new != doms[i]:
                doms[i] = new
                touched.append(i)
        extras: list[_Nary] = []
        for scope, tuples in extra:
            reduced = _reduce(tuple(scope), list(tuples), doms)
            if reduced is None:
                continue
            rscope, rtuples = reduced
            if not rtuples:
                return None
            extras.append(_Nary(rscope, rtuples))
        if (touched or extras) and not self.propagate(doms, touched, extras):
            return None
        return self._search(doms, extras)

    def _components(self, doms: list[int], extras: list[_Nary]) -> list[list[int]]:
        """Connected groups of undecided points; constraints couple only within a group."""
        parent = list(range(len(doms)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def join(scope: Iterable[int]) -> None:
            live = [v for v in scope if doms[v] & (doms[v] - 1)]
            for v in live[1:]:
                a, b = find(live[0]), find(v)
                if a != b:
                    parent[b] = a

        for x, edges in enumerate(self.binary):
            for y, _ in edges:
                join((x, y))
        for c in self.nary:
            join(c.scope)
        for c in extras:
            join(c.scope)
        groups: dict[int, list[int]] = {}
        for v, m in enumerate(doms):
            if m & (m - 1):
                groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def _search(self, doms: list[int], extras: list[_Nary]) -> list[int] | None:
        # Independent groups are searched one after another so that a failure
        # in one group never re-enumerates choices made in another.
        for group in self._components(doms, extras):
            out = self._search_group(doms, extras, group)
            if out is None:
                return None
            for v in group:
                doms[v] = out[v]
        return [m.bit_length() - 1 for m in doms]

    def _search_group(self, doms: list[int], extras: list[_Nary], group: list[int]) -> list[int] | None:
        best, best_size = -1, 1 << 30
        for i in group:
            m = doms[i]
            if m & (m - 1):
                c = m.bit_count()
                if c < best_size:
                    best, best_size = i, c
                    if c == 2:
                        break
        if best < 0:
            return doms
        for v in bits(doms[best]):
            trial = list(doms)
            trial[best] = 1 << v
            if self.propagate(trial, [best], extras):
                out = self._search_group(trial, extras, group)
                if out is not None:
                    return out
        return None


def _reduce(scope: tuple[int, ...], tuples: Sequence[tuple[int, ...]], doms: list[int]):
    """Collapse repeated and fixed positions; ``None`` when the constraint is vacuous."""
    free: list[int] = []
    pos: dict[int, int] = {}
    for v in scope:
        if v not in pos and doms[v] & (doms[v] - 1):
            pos[v] = len(free)
            free.append(v)
    out = set()
    for t in tuples:
        seen: dict[int, int] = {}
        ok = True
        for j, v in enumerate(scope):
            a = t[j]
            if not doms[v] >> a & 1 or seen.setdefault(v, a) != a:
                ok = False
                break
        if ok:
            out.add(tuple(seen[v] for v in free))
    if not free:
        return None if out else ((), [])
    size = 1
    for v in free:
        size *= doms[v].bit_count()
    if len(out) == size:
        return None
    return tuple(free), sorted(out)


@lru_cache(maxsize=512)
def table_network(language: ConstraintLanguage, arity: int) -> TableNetwork:
    return TableNetwork(language, arity)


def relation_masks(rel: Relation) -> int:
    mask = 0
    for (v,) in rel.tuples:
        mask |= 1 << v
    return mask
