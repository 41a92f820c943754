"""Facet-ridge graphs, diameters, and diameter-bound reports."""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

from .complex import SimplicialComplex, f_count, vertices_of

BoundKind = Literal["hirsch", "provan_billera_strong", "provan_billera_weak", "brightwell_et_al"]
BOUND_KINDS: tuple[str, ...] = ("hirsch", "provan_billera_strong", "provan_billera_weak", "brightwell_et_al")


class NotPureError(ValueError):
    pass


class DisconnectedError(ValueError):
    def __init__(self, first: int, second: int, graph: "FacetRidgeGraph"):
        self.first = first
        self.second = second
        cx = graph.complex
        super().__init__(
            "facet-ridge graph is disconnected: "
            f"{cx.format_face(graph.nodes[first])} cannot reach {cx.format_face(graph.nodes[second])}"
        )


@dataclass(frozen=True)
class FacetRidgeGraph:
    complex: SimplicialComplex
    nodes: tuple[int, ...]
    adjacency: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.nodes)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, nbrs in enumerate(self.adjacency) for j in nbrs if i < j]

    def distances_from(self, source: int) -> list[int]:
        dist = [-1] * len(self.nodes)
        dist[source] = 0
        queue = deque([source])
        while queue:
            x = queue.popleft()
            for y in self.adjacency[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def distance(self, i: int, j: int) -> int:
        d = self.distances_from(i)[j]
        if d < 0:
            raise DisconnectedError(i, j, self)
        return d

    def to_dot(self, name: str = "facet_ridge") -> str:
        cx = self.complex
        lines = [f"graph {name} {{"]
        for i, f in enumerate(self.nodes):
            label = ",".join(cx.label(v) for v in vertices_of(f))
            lines.append(f'  n{i} [label="{label}"];')
        for i, j in self.edges():
            lines.append(f"  n{i} -- n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def facet_ridge_graph(cx: SimplicialComplex) -> FacetRidgeGraph:
    if not cx.facets:
        raise ValueError("complex has no facets")
    if not cx.is_pure:
        raise NotPureError("facet-ridge graph needs a pure complex")
    by_ridge: dict[int, list[int]] = {}
    for i, f in enumerate(cx.facets):
        m = f
        while m:
            low = m & -m
            by_ridge.setdefault(f & ~low, []).append(i)
            m ^= low
    adj: list[set[int]] = [set() for _ in cx.facets]
    for members in by_ridge.values():
        for i in members:
            for j in members:
                if i != j:
                    adj[i].add(j)
    return FacetRidgeGraph(cx, cx.facets, tuple(tuple(sorted(a)) for a in adj))


def diameter(cx: SimplicialComplex, threads: int = 1) -> int:
    """Exact diameter by breadth-first search from every facet."""
    graph = facet_ridge_graph(cx)
    return graph_diameter(graph, threads)


def graph_diameter(graph: FacetRidgeGraph, threads: int = 1) -> int:
    sources = range(len(graph))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(graph.distances_from, sources))
    else:
        rows = [graph.distances_from(s) for s in sources]
    best = 0
    for s, row in enumerate(rows):
        for t, d in enumerate(row):
            if d < 0:
                raise DisconnectedError(s, t, graph)
            best = max(best, d)
    return best


@dataclass(frozen=True)
class PolytopeParams:
    """Data of the simple polytope whose polar boundary is the complex.

    ``n_facets`` and ``dim`` feed the Hirsch bound; ``rows``/``cols`` are the
    transportation shape for the 8(m+n-1) bound.
    """

    n_facets: int | None = None
    dim: int | None = None
    rows: int | None = None
    cols: int | None = None


@dataclass(frozen=True)
class BoundReport:
    diameter: int
    bound_kind: str
    bound_value: int
    satisfied: bool
    k: int | None = None

    def to_json(self) -> dict:
        return {
            "diameter": self.diameter,
            "bound_kind": self.bound_kind,
            "bound_value": self.bound_value,
            "satisfied": self.satisfied,
            "k": self.k,
        }


def bound_value(
    cx: SimplicialComplex, k: int | None, kind: str, params: PolytopeParams | None = None
) -> int:
    if kind == "hirsch":
        if params is None or params.n_facets is None or params.dim is None:
            raise ValueError("hirsch bound needs n_facets and dim")
        return params.n_facets - params.dim
    if kind == "brightwell_et_al":
        if params is None or params.rows is None or params.cols is None:
            raise ValueError("brightwell_et_al bound needs rows and cols")
        return 8 * (params.rows + params.cols - 1)
    if k is None:
        raise ValueError(f"{kind} bound needs k")
    if kind == "provan_billera_strong":
        d = cx.dim + 1
        return f_count(cx, k) - math.comb(d, k + 1)
    if kind == "provan_billera_weak":
        return 2 * f_count(cx, k)
    raise ValueError(f"unknown bound kind {kind!r}")


def bound_report(
    cx: SimplicialComplex,
    k: int | None,
    kind: str,
    params: PolytopeParams | None = None,
    diam: int | None = None,
) -> BoundReport:
    value = bound_value(cx, k, kind, params)
    if diam is None:
        diam = diameter(cx)
    return BoundReport(diam, kind, value, diam <= value, k)
