"""Searches for the forbidden structures behind the tractable case.

These are test instruments: exhaustive within their size bounds, with every
certificate re-checked against its definition before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .consistency import BinaryInstance, MicrostructureGraph

Pair = tuple[int, int]


def _adjacency(g) -> list[int]:
    if isinstance(g, MicrostructureGraph):
        return list(g.adjacency)
    if isinstance(g, nx.Graph):
        nodes = sorted(g.nodes)
        if nodes != list(range(len(nodes))):
            raise ValueError("graph nodes must be 0..n-1")
        adj = [0] * len(nodes)
        for u, v in g.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj
    if hasattr(g, "num_vertices") and hasattr(g, "edges"):
        adj = [0] * g.num_vertices
        for u, v in g.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj
    raise TypeError(f"cannot read a graph from {type(g).__name__}")


def _complement(adj: list[int]) -> list[int]:
    full = (1 << len(adj)) - 1
    return [full & ~a & ~(1 << v) for v, a in enumerate(adj)]


@dataclass(frozen=True)
class Hole:
    kind: str  # "odd-hole" or "odd-antihole"
    vertices: tuple[int, ...]


def is_induced_cycle(adj: list[int], cycle: Sequence[int]) -> bool:
    k = len(cycle)
    if k < 3 or len(set(cycle)) != k:
        return False
    for i in range(k):
        for j in range(i + 1, k):
            want = (j - i) in (1, k - 1)
            if bool(adj[cycle[i]] >> cycle[j] & 1) != want:
                return False
    return True


def _induced_cycles(adj: list[int], length: int) -> Iterable[tuple[int, ...]]:
    """Induced cycles of the exact length, each starting at its least vertex."""
    n = len(adj)
    for s in range(n):
        higher = ((1 << n) - 1) & ~((1 << (s + 1)) - 1)
        # blocked: path vertices plus neighbours of interior path vertices
        stack = [(s, (s,), 1 << s)]
        while stack:
            last, path, blocked = stack.pop()
            cand = adj[last] & higher & ~blocked
            closing = len(path) + 1 == length
            grown = blocked | (adj[last] if len(path) >= 2 else 0)
            while cand:
                low = cand & -cand
                v = low.bit_length() - 1
                cand ^= low
                touches_start = adj[v] >> s & 1
                if closing:
                    if touches_start and path[1] < v:
                        yield path + (v,)
                elif not (touches_start and len(path) >= 2):
                    stack.append((v, path + (v,), grown | low))


def find_odd_hole_or_antihole(g, max_size: int = 9) -> Hole | None:
    """Smallest induced odd cycle of length at least 5 in ``g`` or its complement."""
    if max_size < 5:
        return None
    adj = _adjacency(g)
    comp = _complement(adj)
    for length in range(5, max_size + 1, 2):
        for kind, a in (("odd-hole", adj), ("odd-antihole", comp)):
            for cycle in _induced_cycles(a, length):
                if not is_induced_cycle(a, cycle):
                    raise AssertionError(f"search produced a non-induced cycle {cycle}")
                return Hole(kind, cycle)
    return None


def is_s_type(adj: list[int], verts: Sequence[int]) -> bool:
    k = len(verts)
    if k < 5 or k % 2 == 0 or len(set(verts)) != k:
        return False
    for i in range(k):
        u, v, w = verts[i], verts[(i + 1) % k], verts[(i + 2) % k]
        if adj[u] >> v & 1 or not adj[u] >> w & 1:
            return False
    return True


def find_S_type_subgraph(g, p: int) -> tuple[int, ...] | None:
    """Vertices ``v_0..v_2p`` with ``v_i, v_i+1`` non-adjacent and ``v_i, v_i+2`` adjacent."""
    if p < 2:
        raise ValueError("p must be at least 2")
    adj = _adjacency(g)
    n = len(adj)
    k = 2 * p + 1
    if n < k:
        return None
    non = _complement(adj)
    for s in range(n):
        higher = ((1 << n) - 1) & ~((1 << (s + 1)) - 1)
        first = non[s] & higher
        while first:
            low = first & -first
            v1 = low.bit_length() - 1
            first ^= low
            found = _extend_s(adj, non, higher, [s, v1], (1 << s) | (1 << v1), k)
            if found is not None:
                if not is_s_type(adj, found):
                    raise AssertionError("S-type search produced an invalid certificate")
                return found
    return None


def _extend_s(adj, non, higher, seq, used, k):
    i = len(seq)
    cand = non[seq[-1]] & adj[seq[-2]] & higher & ~used
    if i == k - 1:
        cand &= non[seq[0]] & adj[seq[1]]
        if cand and adj[seq[-1]] >> seq[0] & 1:
            low = cand & -cand
            return tuple(seq + [low.bit_length() - 1])
        return None
    if i == k - 2:
        cand &= adj[seq[0]]
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        seq.append(v)
        out = _extend_s(adj, non, higher, seq, used | low, k)
        seq.pop()
        if out is not None:
            return out
    return None


@dataclass(frozen=True)
class DeadlockCertificate:
    indices: tuple[int, ...]
    pairs: tuple[Pair, ...]  # (x_s, y_s)


def _cross_match(bi: BinaryInstance, i: int, j: int, p: Pair, q: Pair) -> bool:
    x, y = p
    x2, y2 = q
    r = bi.binary[i, j]
    got = {(a, b) for a in (x, y) for b in (x2, y2) if r[a, b]}
    return got == {(x, y2), (y, x2)}


def is_deadlock(bi: BinaryInstance, cert: DeadlockCertificate, pairs: Iterable[Pair]) -> bool:
    allowed = {frozenset(p) for p in pairs}
    k = len(cert.indices)
    if k < 3 or k % 2 == 0 or len(set(cert.indices)) != k:
        return False
    if any(frozenset(p) not in allowed for p in cert.pairs):
        return False
    return all(_cross_match(bi, cert.indices[s], cert.indices[(s + 1) % k], cert.pairs[s], cert.pairs[(s + 1) % k])
               for s in range(k))


def find_arithmetical_deadlock(bi: BinaryInstance, pairs: Iterable[Pair],
                               max_k: int = 7) -> DeadlockCertificate | None:
    """Odd cyclic chains of cross patterns over the given 2-element sets."""
    oriented = sorted({(a, b) for a, b in pairs} | {(b, a) for a, b in pairs})
    if not oriented or bi.n < 3:
        return None
    n = bi.n
    states = [(i, p) for i in range(n) for p in oriented]
    succ: dict[tuple[int, Pair], list[tuple[int, Pair]]] = {}
    for i, p in states:
        succ[(i, p)] = [(j, q) for j, q in states if j != i and _cross_match(bi, i, j, p, q)]
    for start in states:
        i0 = start[0]
        found = _deadlock_dfs(succ, start, [start], {i0}, i0, max_k)
        if found is not None:
            cert = DeadlockCertificate(tuple(s[0] for s in found), tuple(s[1] for s in found))
            if not is_deadlock(bi, cert, oriented):
                raise AssertionError("deadlock search produced an invalid certificate")
            return cert
    return None


def _deadlock_dfs(succ, start, path, used, lowest, max_k):
    last = path[-1]
    for nxt in succ[last]:
        if nxt == start:
            if len(path) >= 3 and len(path) % 2 == 1:
                return list(path)
            continue
        j = nxt[0]
        if j in used or j < lowest or len(path) >= max_k:
            continue
        path.append(nxt)
        used.add(j)
        out = _deadlock_dfs(succ, start, path, used, lowest, max_k)
        path.pop()
        used.discard(j)
        if out is not None:
            return out
    return None


def microstructure_stats(g: MicrostructureGraph) -> dict:
    sizes = [len(p) for p in g.parts]
    return {
        "vertices": g.num_vertices,
        "edges": len(g.edges()),
        "part_sizes": sizes,
        "empty_parts": int(np.sum(np.asarray(sizes, dtype=int) == 0)) if sizes else 0,
    }
