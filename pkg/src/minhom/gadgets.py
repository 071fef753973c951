"""Instance generators for the hardness reductions, used to cross-check the oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .relations import Constraint, Relation, WeightedInstance, box, lin


@dataclass(frozen=True)
class UndirectedGraph:
    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        seen = set()
        out = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u}, {v}) leaves the vertex range")
            key = (min(u, v), max(u, v))
            if key not in seen:
                seen.add(key)
                out.append(key)
        object.__setattr__(self, "edges", tuple(out))


@dataclass(frozen=True)
class TripartiteGraph:
    parts: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    e12: tuple[tuple[int, int], ...]
    e23: tuple[tuple[int, int], ...]
    e31: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        parts = tuple(tuple(p) for p in self.parts)
        if len(parts) != 3:
            raise ValueError("a tripartite graph has exactly three parts")
        flat = [v for p in parts for v in p]
        if len(set(flat)) != len(flat):
            raise ValueError("parts must be disjoint")
        if sorted(flat) != list(range(len(flat))):
            raise ValueError("parts must cover the vertices 0..n-1")
        object.__setattr__(self, "parts", parts)
        sets = [set(p) for p in parts]
        for name, edges, (i, j) in (("e12", self.e12, (0, 1)), ("e23", self.e23, (1, 2)), ("e31", self.e31, (2, 0))):
            edges = tuple((int(u), int(v)) for u, v in edges)
            for u, v in edges:
                if u not in sets[i] or v not in sets[j]:
                    raise ValueError(f"edge ({u}, {v}) in {name} does not join parts {i + 1} and {j + 1}")
            object.__setattr__(self, name, edges)

    @property
    def num_vertices(self) -> int:
        return sum(len(p) for p in self.parts)

    def graph(self) -> UndirectedGraph:
        return UndirectedGraph(self.num_vertices, self.e12 + self.e23 + self.e31)

    @classmethod
    def from_graph(cls, g: UndirectedGraph, part_of: Sequence[int]) -> TripartiteGraph:
        parts: tuple[list[int], list[int], list[int]] = ([], [], [])
        for v, p in enumerate(part_of):
            parts[p].append(v)
        buckets: dict[tuple[int, int], list[tuple[int, int]]] = {(0, 1): [], (1, 2): [], (2, 0): []}
        for u, v in g.edges:
            pu, pv = part_of[u], part_of[v]
            if (pu, pv) in buckets:
                buckets[(pu, pv)].append((u, v))
            elif (pv, pu) in buckets:
                buckets[(pv, pu)].append((v, u))
            else:
                raise ValueError(f"edge ({u}, {v}) lies inside one part")
        return cls((tuple(parts[0]), tuple(parts[1]), tuple(parts[2])),
                   tuple(buckets[(0, 1)]), tuple(buckets[(1, 2)]), tuple(buckets[(2, 0)]))


def default_cycle_pairs(length: int) -> list[tuple[int, int]]:
    """Pairs ``(2i, 2i+1)`` folded onto a domain of ``length`` elements."""
    return [((2 * i) % length, (2 * i + 1) % length) for i in range(length)]


def gadget_independent_set(g: UndirectedGraph, part_of: Sequence[int],
                           cycle: Sequence[tuple[int, int]] | None = None,
                           domain_size: int | None = None) -> WeightedInstance:
    """One variable per vertex; the optimum equals ``|V|`` minus the independence number.

    ``part_of`` maps the graph homomorphically onto the cycle of length
    ``len(cycle)``; a vertex in part ``i`` takes the value ``b_i`` when it is
    in the independent set.
    """
    if cycle is None:
        length = (max(part_of) + 1) if part_of else 3
        length = max(3, length + (1 - length % 2))
        cycle = default_cycle_pairs(length)
    k = len(cycle)
    if k < 3 or k % 2 == 0:
        raise ValueError(f"the cycle must have odd length at least 3, got {k}")
    if any(a == b for a, b in cycle):
        raise ValueError("each cycle pair needs two distinct elements")
    if domain_size is None:
        domain_size = 1 + max(max(a, b) for a, b in cycle)
    if len(part_of) != g.num_vertices:
        raise ValueError("part_of must label every vertex")
    if any(p < 0 or p >= k for p in part_of):
        raise ValueError("part label outside the cycle")
    boxes = [box(domain_size, *cycle[i], *cycle[(i + 1) % k]) for i in range(k)]
    constraints = []
    for u, v in g.edges:
        pu, pv = part_of[u], part_of[v]
        if (pu + 1) % k == pv:
            constraints.append(Constraint(boxes[pu], (u, v)))
        elif (pv + 1) % k == pu:
            constraints.append(Constraint(boxes[pv], (v, u)))
        else:
            raise ValueError(f"edge ({u}, {v}) does not join consecutive parts")
    weights = tuple(tuple(0 if a == cycle[part_of[x]][1] else 1 for a in range(domain_size))
                    for x in range(g.num_vertices))
    return WeightedInstance(g.num_vertices, domain_size, tuple(constraints), weights)


@dataclass(frozen=True)
class Subdivided:
    graph: UndirectedGraph
    part_of: tuple[int, ...]


def gadget_subdivide(g: TripartiteGraph, d: int) -> Subdivided:
    """Replace every part-1/part-2 edge by a path with ``d - 3`` inner vertices.

    Parts 1, 2, 3 map to cycle positions ``0``, ``d - 2`` and ``d - 1``; the
    inner vertices of each path take positions ``1 .. d - 3``.
    """
    if d < 5 or d % 2 == 0:
        raise ValueError(f"d must be odd and at least 5, got {d}")
    n = g.num_vertices
    part_of = [0] * n
    for label, part in zip((0, d - 2, d - 1), g.parts):
        for v in part:
            part_of[v] = label
    edges = list(g.e23) + list(g.e31)
    nxt = n
    for u, v in g.e12:
        path = [u] + list(range(nxt, nxt + d - 3)) + [v]
        part_of += list(range(1, d - 2))
        nxt += d - 3
        edges += list(zip(path, path[1:]))
    return Subdivided(UndirectedGraph(nxt, tuple(edges)), tuple(part_of))


def odd_parity(domain_size: int = 2) -> Relation:
    """Triples over {0,1} with odd sum."""
    return lin(domain_size, 1, 0)


@dataclass(frozen=True)
class MaxCutGadget:
    instance: WeightedInstance
    vertex_vars: tuple[int, ...]
    edge_vars: tuple[int, ...]

    def doubled_cost(self, optimum: int) -> int:
        """Twice the number of cut edges at an optimum of the instance."""
        return 2 * (len(self.edge_vars) - optimum)


def gadget_maxcut(g: UndirectedGraph) -> MaxCutGadget:
    """Variables ``y_v`` then ``x_uv``; each edge gets ``x_uv + y_u + y_v = 1 (mod 2)``.

    ``x_uv`` is 1 exactly when the edge is not cut and costs 1, so the optimum
    is the number of edges minus the maximum cut.
    """
    rel = odd_parity()
    nv = g.num_vertices
    constraints = tuple(Constraint(rel, (nv + e, u, v)) for e, (u, v) in enumerate(g.edges))
    weights = tuple([(0, 0)] * nv + [(0, 1)] * len(g.edges))
    inst = WeightedInstance(nv + len(g.edges), 2, constraints, weights)
    return MaxCutGadget(inst, tuple(range(nv)), tuple(range(nv, nv + len(g.edges))))
