from fractions import Fraction

import pytest

from weakdecomp.complex import popcount
from weakdecomp.delta import (
    DeltaLabeling,
    cross_validate,
    cube_slice_vertices,
    delta_complex,
    delta_margins,
    delta_polytope_params,
    facet_count,
    polar_delta_complex,
)
from weakdecomp.diameter import bound_report, diameter, facet_ridge_graph
from weakdecomp.transportation import is_nondegenerate


def test_facet_count_formula():
    assert [facet_count(1, 1), facet_count(2, 1), facet_count(2, 2), facet_count(3, 3)] == [6, 12, 30, 140]
    for a in range(1, 5):
        for b in range(1, 5):
            assert facet_count(a, b) == facet_count(b, a)


def test_labeling(lab22):
    assert lab22.n == 5 and lab22.vertex_count == 10
    assert lab22.labels() == ["u1", "u2", "u3", "u4", "u5", "v1", "v2", "v3", "v4", "v5"]
    assert (lab22.u(1), lab22.v(1), lab22.v(5)) == (0, 5, 9)
    assert lab22.parse("v3") == 7
    face = lab22.parse_face(["u1", "v2"])
    assert lab22.format(face) == ["u1", "v2"]
    assert lab22.indices(face) == {1, 2}
    assert lab22.side(lab22.parse_face(["u1", "u4"])) == "U"
    assert lab22.side(lab22.parse_face(["v2"])) == "V"
    assert lab22.side(face) is None and lab22.side(0) is None
    for bad in ("w1", "u6", "v0"):
        with pytest.raises(ValueError):
            lab22.parse(bad)
    with pytest.raises(ValueError):
        DeltaLabeling(0, 2)


@pytest.mark.parametrize("a,b", [(1, 1), (2, 1), (1, 3), (2, 2), (3, 2), (3, 3)])
def test_facet_structure(a, b):
    lab = DeltaLabeling(a, b)
    cx = delta_complex(a, b)
    assert len(cx.facets) == facet_count(a, b)
    assert cx.is_pure and cx.dim == a + b - 1
    for f in cx.facets:
        assert popcount(f & lab.v_mask) == a
        assert popcount(f & lab.u_mask) == b
        assert len(lab.indices(f)) == a + b


def test_delta_margins_and_params():
    mg = delta_margins(2, 1)
    assert mg.row == (5, 3) and mg.col == (2, 2, 2, 2)
    assert mg.dimension == 3
    for a in range(1, 5):
        for b in range(1, 5):
            assert is_nondegenerate(delta_margins(a, b))
    p = delta_polytope_params(2, 2)
    assert (p.n_facets, p.dim, p.rows, p.cols) == (10, 4, 2, 5)


def test_cube_slice_vertices():
    pts = cube_slice_vertices(2, 1)
    assert len(pts) == facet_count(2, 1)
    for pt in pts:
        assert sum(pt) == 5
        assert sorted(pt) == [0, 1, 2, 2]
    assert all(Fraction(1) in pt for pt in cube_slice_vertices(2, 2))


@pytest.mark.parametrize("a,b", [(a, b) for a in range(1, 6) for b in range(1, 6) if a + b <= 7])
def test_two_constructions_agree(a, b):
    result = cross_validate(a, b)
    assert result.ok, result.to_json()


def test_polar_labels_follow_margin_rows():
    cx = polar_delta_complex(1, 1)
    assert cx.vertex_labels == ("u1", "u2", "u3", "v1", "v2", "v3")
    assert cx == delta_complex(1, 1)


@pytest.mark.parametrize(
    "a,b,expected", [(1, 1, 3), (2, 1, 3), (2, 2, 5), (3, 2, 5), (3, 3, 7)]
)
def test_diameter_within_hirsch(a, b, expected):
    cx = delta_complex(a, b)
    assert diameter(cx) == expected
    rep = bound_report(cx, 0, "hirsch", params=delta_polytope_params(a, b))
    assert rep.bound_value == a + b + 2
    assert rep.satisfied
    assert set(facet_ridge_graph(cx).degrees()) == {a + b}
