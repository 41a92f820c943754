"""Simplicial complexes stored by their facets.

Faces are Python ints used as bit-vectors: vertex ``i`` is in the face iff
bit ``i`` is set.  A complex keeps only its inclusion-maximal faces; every
subset of a facet is implicitly a face.  Vertex ids are never compacted, so a
deletion may leave some ids unused.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 64


class VoidComplexWarning(UserWarning):
    """Raised (as a warning) when a complex with vertices has no faces at all."""


class FaceError(ValueError):
    """A set that was expected to be a face of a complex is not one."""


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        if v < 0:
            raise ValueError(f"negative vertex id {v}")
        mask |= 1 << v
    return mask


def vertices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def face_sort_key(mask: int) -> tuple[int, ...]:
    return vertices_of(mask)


def maximal_faces(masks: Iterable[int]) -> tuple[int, ...]:
    """Inclusion-maximal elements of ``masks`` in canonical order."""
    unique = sorted(set(masks), key=popcount, reverse=True)
    kept: list[int] = []
    for m in unique:
        if not any(m & k == m for k in kept):
            kept.append(m)
    return tuple(sorted(kept, key=face_sort_key))


@dataclass(frozen=True)
class SimplicialComplex:
    """Immutable facet-list representation of a simplicial complex.

    ``facets`` are bitmasks, inclusion-maximal and sorted lexicographically by
    their ascending vertex tuples.  An empty ``facets`` tuple is the void
    complex (no faces at all); ``(0,)`` is the complex whose only face is the
    empty face.
    """

    vertex_count: int
    facets: tuple[int, ...]
    vertex_labels: tuple[str, ...] | None = None

    @property
    def dim(self) -> int:
        if not self.facets:
            return -2  # void complex, below the empty face
        return max(popcount(f) for f in self.facets) - 1

    @property
    def is_pure(self) -> bool:
        return len({popcount(f) for f in self.facets}) <= 1

    @property
    def is_simplex(self) -> bool:
        return len(self.facets) == 1

    def facet_tuples(self) -> list[tuple[int, ...]]:
        return [vertices_of(f) for f in self.facets]

    def is_face(self, face: int | Iterable[int]) -> bool:
        mask = face if isinstance(face, int) else mask_of(face)
        return any(f & mask == mask for f in self.facets)

    def faces(self, k: int) -> list[int]:
        """All ``k``-dimensional faces, deduplicated, in canonical order."""
        return sorted(_faces_of_size(self.facets, k + 1), key=face_sort_key)

    def label(self, v: int) -> str:
        if self.vertex_labels is None:
            return str(v)
        return self.vertex_labels[v]

    def format_face(self, face: int) -> str:
        return "{" + ",".join(self.label(v) for v in vertices_of(face)) + "}"

    def with_facets(self, facets: Iterable[int]) -> "SimplicialComplex":
        """Same vertex table and labels, new facet list (re-maximised)."""
        return SimplicialComplex(self.vertex_count, maximal_faces(facets), self.vertex_labels)

    def to_json(self) -> dict:
        out: dict = {"vertex_count": self.vertex_count}
        if self.vertex_labels is not None:
            out["vertex_labels"] = list(self.vertex_labels)
        out["facets"] = [list(t) for t in self.facet_tuples()]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialComplex":
        labels = data.get("vertex_labels")
        return make_complex(data["facets"], data["vertex_count"], labels)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _faces_of_size(facets: Iterable[int], size: int) -> set[int]:
    out: set[int] = set()
    for f in facets:
        verts = vertices_of(f)
        if size > len(verts):
            continue
        for combo in itertools.combinations(verts, size):
            out.add(mask_of(combo))
    return out


def make_complex(
    facet_list: Iterable[Iterable[int] | int],
    vertex_count: int,
    vertex_labels: Sequence[str] | None = None,
) -> SimplicialComplex:
    """Build a complex from any list of generating faces.

    Duplicates and non-maximal sets are dropped.  Sets may be given as vertex
    iterables or as bitmasks.
    """
    if vertex_count > MAX_VERTICES:
        raise ValueError(f"at most {MAX_VERTICES} vertices supported, got {vertex_count}")
    if vertex_count < 0:
        raise ValueError("vertex_count must be nonnegative")
    masks = []
    for face in facet_list:
        if isinstance(face, int):
            mask = face
        else:
            verts = list(face)
            if len(set(verts)) != len(verts):
                raise ValueError(f"duplicate vertex in {verts}")
            mask = mask_of(verts)
        if mask >> vertex_count:
            raise ValueError(f"face {vertices_of(mask)} references ids >= {vertex_count}")
        masks.append(mask)
    if not masks and vertex_count > 0:
        warnings.warn("void complex: no faces on a nonempty vertex table", VoidComplexWarning)
    labels = tuple(vertex_labels) if vertex_labels is not None else None
    if labels is not None and len(labels) != vertex_count:
        raise ValueError("vertex_labels length must equal vertex_count")
    return SimplicialComplex(vertex_count, maximal_faces(masks), labels)


def _as_mask(face: int | Iterable[int]) -> int:
    return face if isinstance(face, int) else mask_of(face)


def deletion(cx: SimplicialComplex, face: int | Iterable[int]) -> SimplicialComplex:
    """Faces of ``cx`` that do not contain ``face``."""
    tau = _as_mask(face)
    if not cx.is_face(tau):
        raise FaceError(f"{vertices_of(tau)} is not a face")
    gens = []
    tau_verts = vertices_of(tau)
    for f in cx.facets:
        if f & tau != tau:
            gens.append(f)
        else:
            gens.extend(f & ~(1 << v) for v in tau_verts)
    return cx.with_facets(gens)


def link(cx: SimplicialComplex, face: int | Iterable[int]) -> SimplicialComplex:
    """Faces disjoint from ``face`` whose union with it is a face."""
    tau = _as_mask(face)
    if not cx.is_face(tau):
        raise FaceError(f"{vertices_of(tau)} is not a face")
    return cx.with_facets(f & ~tau for f in cx.facets if f & tau == tau)


@dataclass(frozen=True)
class RankResult:
    rank: int
    corank: int
    witness: int


def rank_of(cx: SimplicialComplex, subset: int | Iterable[int]) -> RankResult:
    """Largest face inside ``subset``.

    Every face inside ``subset`` lies in ``facet & subset`` for some facet, so
    the maximum over facets is exact.
    """
    s = _as_mask(subset)
    best = 0
    best_size = 0
    for f in cx.facets:
        inter = f & s
        size = popcount(inter)
        if size > best_size or (size == best_size and face_sort_key(inter) < face_sort_key(best)):
            best, best_size = inter, size
    return RankResult(best_size, popcount(s) - best_size, best)


def f_count(cx: SimplicialComplex, k: int) -> int:
    """Number of ``k``-dimensional faces."""
    if k < -1 or k > cx.dim:
        raise ValueError(f"k={k} outside [-1, {cx.dim}]")
    if k == -1:
        return 1
    return len(_faces_of_size(cx.facets, k + 1))


def f_vector(cx: SimplicialComplex) -> list[int]:
    return [f_count(cx, k) for k in range(-1, cx.dim + 1)]


def simplex(vertices: Sequence[int], vertex_count: int | None = None) -> SimplicialComplex:
    n = vertex_count if vertex_count is not None else (max(vertices) + 1 if vertices else 0)
    return make_complex([vertices], n)


def simplex_boundary(n_vertices: int) -> SimplicialComplex:
    """Boundary of the simplex on ``n_vertices`` vertices."""
    full = range(n_vertices)
    return make_complex([[v for v in full if v != w] for w in full], n_vertices)


def cycle(n: int) -> SimplicialComplex:
    return make_complex([[i, (i + 1) % n] for i in range(n)], n)


def iter_subsets(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask
