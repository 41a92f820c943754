import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import strongly_decomposable_brute, weakly_decomposable_brute
from weakdecomp.complex import cycle, make_complex, simplex_boundary
from weakdecomp.decomposability import (
    SheddingCertificate,
    ShedStep,
    find_strong_decomposition,
    find_weak_decomposition,
    legal_shed,
    shed_candidates,
    verify_certificate,
)
from weakdecomp.delta import delta_complex
from weakdecomp.diameter import bound_report

SMALL = {
    "c6": lambda: cycle(6),
    "c5": lambda: cycle(5),
    "triangle_boundary": lambda: simplex_boundary(3),
    "tetra_boundary": lambda: simplex_boundary(4),
    "delta11": lambda: delta_complex(1, 1),
    "delta21": lambda: delta_complex(2, 1),
    "delta22": lambda: delta_complex(2, 2),
    "two_triangles": lambda: make_complex([[0, 1, 2], [1, 2, 3]], 4),
    "bowtie": lambda: make_complex([[0, 1, 2], [2, 3, 4]], 5),
    "octahedron": lambda: make_complex(
        [[a, b, c] for a in (0, 1) for b in (2, 3) for c in (4, 5)], 6
    ),
}


def test_delta11_weak_vertex_decomposition():
    cx = delta_complex(1, 1)
    v = find_weak_decomposition(cx, 0)
    assert v.decomposable
    assert verify_certificate(cx, v.certificate)
    # the first shed drops two edges of the hexagon, every later one drops one
    assert [s.facets_after for s in v.certificate.steps] == [4, 3, 2, 1]
    lengths = set()

    def walk(state, depth):
        if len(state) == 1:
            lengths.add(depth)
            return
        for tau in shed_candidates(state, 0):
            nxt = legal_shed(state, tau)
            if nxt is not None:
                walk(nxt, depth + 1)

    walk(frozenset(cx.facets), 0)
    assert lengths == {4}


def test_delta22_not_weakly_vertex_decomposable(d22):
    v = find_weak_decomposition(d22, 0)
    assert v.decomposable is False
    assert v.certificate is None
    assert v.states_explored <= 2**10


def test_single_simplex_is_base_case():
    cx = make_complex([[0, 1, 2, 3]], 4)
    for k in range(4):
        v = find_weak_decomposition(cx, k)
        assert v.decomposable and v.certificate.steps == ()
        assert verify_certificate(cx, v.certificate)


def test_strong_examples(c6, tetra_boundary, d22):
    for cx in (c6, tetra_boundary):
        v = find_strong_decomposition(cx, 0)
        assert v.decomposable
        assert verify_certificate(cx, v.certificate)
    assert find_strong_decomposition(d22, 0).decomposable is False


def test_strong_certificate_carries_links(c6):
    cert = find_strong_decomposition(c6, 0).certificate
    assert all(step.link is not None for step in cert.steps)
    data = cert.to_json()
    assert len(data["links"]) == len(data["steps"])
    assert SheddingCertificate.from_json(json.loads(json.dumps(data))) == cert


def test_verify_reports_purity_break(c6):
    cert = SheddingCertificate("weak", 0, (ShedStep((0,), -1), ShedStep((3,), -1), ShedStep((1,), -1)), ())
    check = verify_certificate(c6, cert)
    assert not check
    assert check.step == 2
    assert "not pure" in check.reason


def test_verify_reports_absent_face(c6):
    cert = SheddingCertificate("weak", 0, (ShedStep((0,), -1), ShedStep((0,), -1)), ())
    check = verify_certificate(c6, cert)
    assert (check.ok, check.step, check.reason) == (False, 1, "face absent")


def test_verify_rejects_oversized_face_and_incomplete(c6):
    cert = SheddingCertificate("weak", 0, (ShedStep((0, 1), -1),), ())
    assert "dimension" in verify_certificate(c6, cert).reason
    short = SheddingCertificate("weak", 0, (ShedStep((0,), -1),), ())
    check = verify_certificate(c6, short)
    assert not check and check.step is None


def test_verify_empty_certificate_on_simplex():
    cx = make_complex([[0, 1, 2]], 3)
    assert verify_certificate(cx, SheddingCertificate("weak", 0, (), (0, 1, 2)))


def test_non_pure_input_rejected():
    with pytest.raises(ValueError):
        find_weak_decomposition(make_complex([[0, 1, 2], [2, 3]], 4), 0)


def test_budget_gives_unknown():
    v = find_weak_decomposition(delta_complex(3, 3), 1, max_states=5)
    assert v.decomposable is None and v.budget_exhausted
    assert v.states_explored <= 5


@pytest.mark.parametrize("name", sorted(SMALL))
def test_search_matches_definition_level_oracle(name):
    cx = SMALL[name]()
    facets = cx.facet_tuples()
    for k in range(min(2, cx.dim + 1)):
        weak = find_weak_decomposition(cx, k)
        assert weak.decomposable == weakly_decomposable_brute(facets, k)
        if cx.vertex_count <= 8:
            strong = find_strong_decomposition(cx, k)
            assert strong.decomposable == strongly_decomposable_brute(facets, k)


@pytest.mark.parametrize("name", sorted(SMALL))
def test_memo_does_not_change_verdict(name):
    cx = SMALL[name]()
    for k in range(min(2, cx.dim + 1)):
        assert find_weak_decomposition(cx, k).decomposable == find_weak_decomposition(cx, k, memo=False).decomposable
        assert (
            find_strong_decomposition(cx, k).decomposable
            == find_strong_decomposition(cx, k, memo=False).decomposable
        )


@pytest.mark.parametrize("name", sorted(SMALL))
def test_certificates_sound_monotone_and_bounded(name):
    cx = SMALL[name]()
    prev_weak = prev_strong = False
    for k in range(cx.dim + 1):
        weak = find_weak_decomposition(cx, k)
        strong = find_strong_decomposition(cx, k)
        assert not (prev_weak and not weak.decomposable)
        assert not (prev_strong and not strong.decomposable)
        if strong.decomposable:
            assert weak.decomposable
            assert verify_certificate(cx, strong.certificate)
            assert bound_report(cx, k, "provan_billera_strong").satisfied
        if weak.decomposable:
            assert verify_certificate(cx, weak.certificate)
            assert bound_report(cx, k, "provan_billera_weak").satisfied
        prev_weak, prev_strong = weak.decomposable, strong.decomposable


def test_vertex_search_visits_each_subset_once():
    for cx in (delta_complex(2, 2), delta_complex(3, 2), delta_complex(3, 3)):
        v = find_weak_decomposition(cx, 0)
        assert v.states_explored <= 2**cx.vertex_count


def test_dead_end_callback_reports_legal_prefixes(d22):
    seen = []
    find_weak_decomposition(d22, 0, on_dead_end=lambda prefix, state: seen.append((prefix, state)))
    assert seen
    for prefix, state in seen:
        assert len(state) > 1
        assert len(set(prefix)) == len(prefix)


def test_delta22_weak_1_certificate(d22):
    # open instance below the theorem's range; recorded outcome
    v = find_weak_decomposition(d22, 1)
    assert v.decomposable
    assert verify_certificate(d22, v.certificate)


@st.composite
def pure_complexes(draw):
    n = draw(st.integers(2, 7))
    size = draw(st.integers(1, min(3, n)))
    pool = st.lists(st.integers(0, n - 1), min_size=size, max_size=size, unique=True)
    gens = draw(st.lists(pool, min_size=1, max_size=7))
    return make_complex(gens, n)


@settings(max_examples=80, deadline=None)
@given(pure_complexes(), st.integers(0, 2))
def test_random_complexes_against_oracle(cx, k):
    k = min(k, cx.dim)
    weak = find_weak_decomposition(cx, k)
    assert weak.decomposable == weakly_decomposable_brute(cx.facet_tuples(), k)
    if weak.decomposable:
        assert verify_certificate(cx, weak.certificate)
    strong = find_strong_decomposition(cx, k)
    assert strong.decomposable == strongly_decomposable_brute(cx.facet_tuples(), k)
    if strong.decomposable:
        assert weak.decomposable
        assert verify_certificate(cx, strong.certificate)
