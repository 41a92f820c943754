"""Exact model of m x n transportation polytopes.

Rows and columns are 0-based throughout; an edge ``(mu, nu)`` of K(m,n)
joins row ``mu`` to column ``nu``.  All arithmetic uses ``Fraction``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .complex import SimplicialComplex, make_complex

Edge = tuple[int, int]


class DegenerateMarginsError(ValueError):
    def __init__(self, witness: tuple[tuple[int, ...], tuple[int, ...]]):
        self.witness = witness
        super().__init__(f"degenerate margins: row subset {witness[0]} and column subset {witness[1]} have equal sums")


class InfeasibleMarginsError(ValueError):
    pass


class InfeasibleTreeError(ValueError):
    """The tree system has a negative solution entry."""

    def __init__(self, edge: Edge, value: Fraction):
        self.edge = edge
        self.value = value
        super().__init__(f"tree solution has x[{edge[0]},{edge[1]}] = {value} < 0")


def parse_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass integers or 'p/q' strings")
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Margins:
    row: tuple[Fraction, ...]
    col: tuple[Fraction, ...]

    def __init__(self, row: Iterable, col: Iterable):
        r = tuple(parse_rational(x) for x in row)
        c = tuple(parse_rational(x) for x in col)
        if not r or not c:
            raise ValueError("margins need at least one row and one column")
        if any(x <= 0 for x in r + c):
            raise ValueError("margins must be positive")
        object.__setattr__(self, "row", r)
        object.__setattr__(self, "col", c)

    @property
    def m(self) -> int:
        return len(self.row)

    @property
    def n(self) -> int:
        return len(self.col)

    @property
    def total(self) -> Fraction:
        return sum(self.row, Fraction(0))

    @property
    def dimension(self) -> int:
        return (self.m - 1) * (self.n - 1)

    def to_json(self) -> dict:
        return {"row": [format_rational(x) for x in self.row], "col": [format_rational(x) for x in self.col]}

    @classmethod
    def from_json(cls, data: dict) -> "Margins":
        return cls(data["row"], data["col"])


@dataclass(frozen=True)
class TransportVertex:
    matrix: tuple[tuple[Fraction, ...], ...]

    @property
    def support(self) -> frozenset[Edge]:
        return frozenset(
            (mu, nu) for mu, row in enumerate(self.matrix) for nu, x in enumerate(row) if x > 0
        )

    def zeros(self) -> list[Edge]:
        return [(mu, nu) for mu, row in enumerate(self.matrix) for nu, x in enumerate(row) if x == 0]

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.matrix]


@dataclass(frozen=True, order=True)
class PolarFacetLabel:
    mu: int
    nu: int

    def __str__(self) -> str:
        return f"F{self.mu + 1}.{self.nu + 1}"


def is_feasible(margins: Margins) -> bool:
    return sum(margins.row, Fraction(0)) == sum(margins.col, Fraction(0))


def _proper_subsets(size: int) -> Iterator[tuple[int, ...]]:
    for r in range(1, size):
        yield from itertools.combinations(range(size), r)


def degeneracy_witness(margins: Margins) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """First proper (M, N) with equal margin sums, or ``None``."""
    if not is_feasible(margins):
        raise InfeasibleMarginsError("margins are infeasible")
    col_sums: dict[Fraction, tuple[int, ...]] = {}
    for N in _proper_subsets(margins.n):
        col_sums.setdefault(sum((margins.col[j] for j in N), Fraction(0)), N)
    for M in _proper_subsets(margins.m):
        s = sum((margins.row[i] for i in M), Fraction(0))
        if s in col_sums:
            return M, col_sums[s]
    return None


def is_nondegenerate(margins: Margins) -> bool:
    return degeneracy_witness(margins) is None


def _check_spanning_tree(m: int, n: int, tree: Sequence[Edge]) -> None:
    edges = set(tree)
    if len(edges) != len(tree):
        raise ValueError("repeated edge in tree")
    for mu, nu in edges:
        if not (0 <= mu < m and 0 <= nu < n):
            raise ValueError(f"edge {(mu, nu)} outside K({m},{n})")
    if len(edges) != m + n - 1:
        raise ValueError(f"a spanning tree of K({m},{n}) has {m + n - 1} edges, got {len(edges)}")
    parent = list(range(m + n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for mu, nu in edges:
        a, b = find(mu), find(m + nu)
        if a == b:
            raise ValueError("edge set contains a cycle")
        parent[a] = b


def solve_tree(margins: Margins, tree: Sequence[Edge]) -> dict[Edge, Fraction]:
    """Unique solution of the margin equations supported on a spanning tree.

    Leaves are peeled off smallest-node-first (rows before columns); entries
    may come out negative.
    """
    m, n = margins.m, margins.n
    _check_spanning_tree(m, n, tree)
    if not is_feasible(margins):
        raise InfeasibleMarginsError("margins are infeasible")
    residual = list(margins.row) + list(margins.col)
    incident: list[set[Edge]] = [set() for _ in range(m + n)]
    for mu, nu in tree:
        incident[mu].add((mu, nu))
        incident[m + nu].add((mu, nu))
    values: dict[Edge, Fraction] = {}
    remaining = len(tree)
    while remaining:
        node = next(i for i in range(m + n) if len(incident[i]) == 1)
        (edge,) = incident[node]
        mu, nu = edge
        other = m + nu if node == mu else mu
        x = residual[node]
        values[edge] = x
        residual[node] = Fraction(0)
        residual[other] -= x
        incident[node].discard(edge)
        incident[other].discard(edge)
        remaining -= 1
    return values


def _matrix(m: int, n: int, values: dict[Edge, Fraction]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(values.get((mu, nu), Fraction(0)) for nu in range(n)) for mu in range(m))


def vertex_from_tree(margins: Margins, tree: Sequence[Edge]) -> TransportVertex:
    """The vertex whose support lies in ``tree``.

    Raises ``InfeasibleTreeError`` naming the first negative entry (in edge
    order).  Zero entries drop out of the support.
    """
    values = solve_tree(margins, tree)
    for edge in sorted(values):
        if values[edge] < 0:
            raise InfeasibleTreeError(edge, values[edge])
    return TransportVertex(_matrix(margins.m, margins.n, values))


def spanning_trees(m: int, n: int) -> Iterator[tuple[Edge, ...]]:
    """All spanning trees of K(m,n) by include/exclude branching on edges.

    An edge is included only if it joins two components; it is excluded only
    if the graph of chosen plus still-undecided edges stays connected.
    """
    edges = [(mu, nu) for mu in range(m) for nu in range(n)]
    total_nodes = m + n

    def components(chosen, rest_from):
        parent = list(range(total_nodes))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        count = total_nodes
        for mu, nu in itertools.chain(chosen, edges[rest_from:]):
            a, b = find(mu), find(m + nu)
            if a != b:
                parent[a] = b
                count -= 1
        return count

    def rec(i, chosen, parent):
        if len(chosen) == total_nodes - 1:
            yield tuple(chosen)
            return
        if i == len(edges):
            return
        mu, nu = edges[i]
        ra, rb = _root(parent, mu), _root(parent, m + nu)
        if ra != rb:
            p2 = list(parent)
            p2[ra] = rb
            chosen.append(edges[i])
            yield from rec(i + 1, chosen, p2)
            chosen.pop()
        if components(chosen, i + 1) == 1:
            yield from rec(i + 1, chosen, parent)

    yield from rec(0, [], list(range(total_nodes)))


def _root(parent: list[int], x: int) -> int:
    while parent[x] != x:
        x = parent[x]
    return x


def enumerate_vertices(margins: Margins) -> list[TransportVertex]:
    if not is_feasible(margins):
        raise InfeasibleMarginsError("margins are infeasible")
    witness = degeneracy_witness(margins)
    if witness is not None:
        raise DegenerateMarginsError(witness)
    found = set()
    for tree in spanning_trees(margins.m, margins.n):
        try:
            found.add(vertex_from_tree(margins, tree))
        except InfeasibleTreeError:
            continue
    return sorted(found, key=lambda v: v.matrix)


def _affine_rank(points: list[tuple[Fraction, ...]]) -> int:
    if not points:
        return -1
    base = points[0]
    rows = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    rank = 0
    ncols = len(base)
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                factor = rows[r][c] / rows[rank][c]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def enumerate_facets(margins: Margins) -> list[PolarFacetLabel]:
    """Labels (mu, nu) whose zero set {x[mu,nu] = 0} is a facet.

    For mn > 4 the margin criterion decides; smaller shapes fall back to the
    affine dimension of the vertices on the zero set.
    """
    if not is_feasible(margins):
        raise InfeasibleMarginsError("margins are infeasible")
    witness = degeneracy_witness(margins)
    if witness is not None:
        raise DegenerateMarginsError(witness)
    m, n = margins.m, margins.n
    total = margins.total
    if m * n > 4:
        return [
            PolarFacetLabel(mu, nu)
            for mu in range(m)
            for nu in range(n)
            if margins.row[mu] + margins.col[nu] < total
        ]
    verts = enumerate_vertices(margins)
    dim = margins.dimension
    out = []
    seen: set[frozenset] = set()
    for mu in range(m):
        for nu in range(n):
            on = [v for v in verts if v.matrix[mu][nu] == 0]
            key = frozenset(v.matrix for v in on)
            if dim >= 1 and on and key not in seen:
                pts = [tuple(x for row in v.matrix for x in row) for v in on]
                if _affine_rank(pts) == dim - 1:
                    seen.add(key)
                    out.append(PolarFacetLabel(mu, nu))
    return out


def polar_boundary_complex(
    margins: Margins, labels: Sequence[str] | None = None
) -> tuple[SimplicialComplex, list[PolarFacetLabel]]:
    """Boundary complex of the polar of a simple transportation polytope.

    Vertex ``i`` of the complex is the facet ``facet_labels[i]``; each
    polytope vertex contributes the set of facets containing it.
    """
    facet_labels = enumerate_facets(margins)
    index = {(f.mu, f.nu): i for i, f in enumerate(facet_labels)}
    dim = margins.dimension
    facets = []
    for v in enumerate_vertices(margins):
        face = [index[e] for e in v.zeros() if e in index]
        if len(face) != dim:
            raise AssertionError(f"vertex lies on {len(face)} facets, expected {dim}: polytope not simple")
        facets.append(face)
    names = list(labels) if labels is not None else [str(f) for f in facet_labels]
    cx = make_complex(facets, len(facet_labels), names)
    return cx, facet_labels


def signature_trees(m: int, n: int, degrees: Sequence[int]) -> Iterator[tuple[Edge, ...]]:
    """Spanning trees of K(m,n) in which row ``mu`` has degree ``degrees[mu]``."""
    if len(degrees) != m:
        raise ValueError("need one degree per row")
    if sum(degrees) != m + n - 1 or any(d < 1 for d in degrees):
        raise ValueError(f"row degrees must be >= 1 and sum to m+n-1 = {m + n - 1}")
    for tree in spanning_trees(m, n):
        deg = [0] * m
        for mu, _ in tree:
            deg[mu] += 1
        if deg == list(degrees):
            yield tree


def is_signature_polytope(
    margins: Margins, degrees: Sequence[int]
) -> tuple[bool, tuple[Edge, ...] | None]:
    """Whether every tree with the given row degrees supports a vertex.

    Returns ``(True, None)`` or ``(False, first_failing_tree)``.
    """
    if not is_feasible(margins):
        raise InfeasibleMarginsError("margins are infeasible")
    for tree in signature_trees(margins.m, margins.n, degrees):
        try:
            vertex_from_tree(margins, tree)
        except InfeasibleTreeError:
            return False, tree
    return True, None


@dataclass(frozen=True)
class BalinskiMargins:
    """Margins produced literally by ``row = m*d - (m+1)``, ``col = m``.

    These are raw vectors; ``feasible`` tells whether the sums agree.
    """

    row: tuple[Fraction, ...]
    col: tuple[Fraction, ...]
    feasible: bool

    def margins(self) -> Margins:
        if not self.feasible:
            raise InfeasibleMarginsError(
                f"row sum {sum(self.row)} != column sum {sum(self.col)}"
            )
        return Margins(self.row, self.col)


def balinski_margins(degrees: Sequence[int], n: int) -> BalinskiMargins:
    m = len(degrees)
    if sum(degrees) != m + n - 1:
        raise ValueError(f"degrees must sum to m+n-1 = {m + n - 1}")
    row = tuple(Fraction(m * d - (m + 1)) for d in degrees)
    col = tuple(Fraction(m) for _ in range(n))
    return BalinskiMargins(row, col, sum(row) == sum(col))


def polytope_graph_diameter(margins: Margins) -> int:
    """Vertex-edge graph diameter, via the facet-ridge graph of the polar."""
    from .diameter import diameter

    cx, _ = polar_boundary_complex(margins)
    return diameter(cx)
