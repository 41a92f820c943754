"""The complexes Delta(a, b) and the transportation polytopes behind them.

Vertex ids follow the order u_1..u_n, v_1..v_n with n = a + b + 1, so
``u_nu`` has id ``nu - 1`` and ``v_nu`` has id ``n + nu - 1``.  ``u_nu`` is
polar to the facet {x[1,nu] = 0}, ``v_nu`` to {x[2,nu] = 0}.

Facets of Delta(a, b) are the sets A | B with A a set of a vertices from V, B a
set of b vertices from U, and no index used twice.  The underlying polytope
is also the slice of the cube [0,2]^n by sum(x) = 2a + 1; it can be written as
a Minkowski sum of two hypersimplices, which is not modelled here.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .complex import SimplicialComplex, make_complex, mask_of, vertices_of
from .diameter import PolytopeParams
from .transportation import Margins, enumerate_vertices, polar_boundary_complex


@dataclass(frozen=True)
class DeltaLabeling:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError("a and b must be >= 1")

    @property
    def n(self) -> int:
        """Number of columns of the transportation table, a + b + 1."""
        return self.a + self.b + 1

    @property
    def vertex_count(self) -> int:
        return 2 * self.n

    def u(self, nu: int) -> int:
        """Id of u_nu (``nu`` is 1-based)."""
        return nu - 1

    def v(self, nu: int) -> int:
        return self.n + nu - 1

    @property
    def u_vertices(self) -> tuple[int, ...]:
        return tuple(range(self.n))

    @property
    def v_vertices(self) -> tuple[int, ...]:
        return tuple(range(self.n, 2 * self.n))

    @property
    def u_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def v_mask(self) -> int:
        return ((1 << self.n) - 1) << self.n

    def labels(self) -> list[str]:
        return [f"u{i}" for i in range(1, self.n + 1)] + [f"v{i}" for i in range(1, self.n + 1)]

    def index(self, vertex: int) -> int:
        """1-based column index of a vertex."""
        return vertex % self.n + 1

    def indices(self, mask: int) -> set[int]:
        return {self.index(v) for v in vertices_of(mask)}

    def side(self, mask: int) -> str | None:
        """'U', 'V', or None for mixed / empty sets."""
        if mask == 0:
            return None
        if mask & ~self.u_mask == 0:
            return "U"
        if mask & ~self.v_mask == 0:
            return "V"
        return None

    def parse(self, label: str | int) -> int:
        if isinstance(label, int):
            return label
        label = label.strip()
        side, num = label[0].lower(), int(label[1:])
        if not 1 <= num <= self.n:
            raise ValueError(f"index out of range in {label!r}")
        if side == "u":
            return self.u(num)
        if side == "v":
            return self.v(num)
        raise ValueError(f"bad vertex label {label!r}")

    def parse_face(self, items) -> int:
        return mask_of(self.parse(x) for x in items)

    def format(self, mask: int) -> list[str]:
        names = self.labels()
        return [names[v] for v in vertices_of(mask)]


def facet_count(a: int, b: int) -> int:
    return math.factorial(a + b + 1) // (math.factorial(a) * math.factorial(b))


def delta_complex(a: int, b: int) -> SimplicialComplex:
    lab = DeltaLabeling(a, b)
    n = lab.n
    facets = []
    for a_idx in itertools.combinations(range(1, n + 1), a):
        rest = [i for i in range(1, n + 1) if i not in a_idx]
        for b_idx in itertools.combinations(rest, b):
            facets.append([lab.v(i) for i in a_idx] + [lab.u(i) for i in b_idx])
    return make_complex(facets, lab.vertex_count, lab.labels())


def delta_margins(a: int, b: int) -> Margins:
    DeltaLabeling(a, b)
    return Margins((2 * a + 1, 2 * b + 1), [2] * (a + b + 1))


def delta_polytope_params(a: int, b: int) -> PolytopeParams:
    n = a + b + 1
    return PolytopeParams(n_facets=2 * n, dim=a + b, rows=2, cols=n)


def polar_delta_complex(a: int, b: int) -> SimplicialComplex:
    """Delta(a, b) built as the polar of the transportation polytope."""
    lab = DeltaLabeling(a, b)
    cx, facet_labels = polar_boundary_complex(delta_margins(a, b))
    expected = [(mu, nu) for mu in range(2) for nu in range(lab.n)]
    if [(f.mu, f.nu) for f in facet_labels] != expected:
        raise AssertionError(f"unexpected facet labels {facet_labels}")
    # row 0 facets are u_1..u_n, row 1 facets v_1..v_n: same ids as delta_complex
    return SimplicialComplex(cx.vertex_count, cx.facets, tuple(lab.labels()))


def cube_slice_vertices(a: int, b: int) -> list[tuple[Fraction, ...]]:
    """Points where sum(x) = 2a+1 crosses an edge of the cube [0,2]^n."""
    lab = DeltaLabeling(a, b)
    n = lab.n
    level = Fraction(2 * a + 1)
    points = set()
    for free in range(n):
        for fixed in itertools.product((0, 2), repeat=n - 1):
            t = level - sum(fixed)
            if 0 <= t <= 2:
                pt = list(map(Fraction, fixed))
                pt.insert(free, t)
                points.add(tuple(pt))
    points = sorted(points)
    transport = {v.matrix for v in enumerate_vertices(delta_margins(a, b))}
    mapped = {(pt, tuple(2 - x for x in pt)) for pt in points}
    if mapped != transport or len(points) != len(transport):
        raise AssertionError("cube slice vertices do not match transportation vertices")
    return points


@dataclass(frozen=True)
class CrossValidation:
    a: int
    b: int
    equal: bool
    lemma_facets: int
    polar_facets: int
    formula: int

    @property
    def ok(self) -> bool:
        return self.equal and self.lemma_facets == self.polar_facets == self.formula

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "equal": self.equal,
            "lemma_facets": self.lemma_facets,
            "polar_facets": self.polar_facets,
            "formula": self.formula,
            "ok": self.ok,
        }


def cross_validate(a: int, b: int) -> CrossValidation:
    lemma = delta_complex(a, b)
    polar = polar_delta_complex(a, b)
    return CrossValidation(
        a,
        b,
        lemma.facets == polar.facets and lemma.vertex_count == polar.vertex_count,
        len(lemma.facets),
        len(polar.facets),
        facet_count(a, b),
    )
