"""Corank functions along shedding sequences on Delta(a, b), the hitting-set
extraction, and a replay audit showing where a candidate weak shedding
sequence must break purity.

The faces of Delta_i (after shedding tau_1..tau_i) are exactly the faces of
Delta_0 containing no tau_j, whatever the legality of the sheds.  phi_i(S) is
the corank of S in Delta_i, defined for S inside U with |S| <= b+1 or inside
V with |S| <= a+1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Hashable, Iterable, Sequence

from .complex import FaceError, SimplicialComplex, deletion, mask_of, popcount, rank_of, vertices_of
from .delta import DeltaLabeling, delta_complex


class DomainError(ValueError):
    """Vertex set outside the domain on which phi is defined."""


def _cap(lab: DeltaLabeling, side: str) -> int:
    return lab.b + 1 if side == "U" else lab.a + 1


def check_domain(lab: DeltaLabeling, subset: int) -> str:
    side = lab.side(subset)
    if side is None:
        raise DomainError(f"{lab.format(subset)} is empty or mixes U and V")
    if popcount(subset) > _cap(lab, side):
        raise DomainError(f"{lab.format(subset)} exceeds the size cap {_cap(lab, side)} for side {side}")
    return side


def phi(state: SimplicialComplex, subset: int | Iterable[int], lab: DeltaLabeling) -> int:
    s = subset if isinstance(subset, int) else mask_of(subset)
    check_domain(lab, s)
    return rank_of(state, s).corank


def domain_sets(lab: DeltaLabeling) -> list[int]:
    """Every nonempty domain set, U side first, by size then lexicographically."""
    out = []
    for verts, cap in ((lab.u_vertices, lab.b + 1), (lab.v_vertices, lab.a + 1)):
        for size in range(1, cap + 1):
            out.extend(mask_of(c) for c in itertools.combinations(verts, size))
    return out


def phi_table(state: SimplicialComplex, sets: Sequence[int]) -> list[int]:
    facets = state.facets
    out = []
    for s in sets:
        best = max((popcount(f & s) for f in facets), default=0)
        out.append(popcount(s) - best)
    return out


# -- hitting sets -----------------------------------------------------------


def _intersection(sets: Iterable[frozenset]) -> frozenset | None:
    """Intersection of a family; ``None`` stands for the empty family."""
    return reduce(lambda x, y: x & y if x is not None else y, sets, None)


@dataclass(frozen=True)
class Extraction:
    """Result of the minimal-subfamily extraction.

    ``witnesses[j]`` is an element lying in every set of ``subcollection``
    except ``subcollection[j]``.
    """

    subcollection: tuple[frozenset, ...]
    indices: tuple[int, ...]
    witnesses: tuple[Hashable, ...]
    union_size: int
    k: int

    @property
    def termwise_bound(self) -> int:
        y = len(self.subcollection)
        return y * (self.k + 3 - y)

    @property
    def quadratic_bound(self) -> float:
        return ((self.k + 3) / 2) ** 2


def _min_elem(s: Iterable):
    return min(s, key=lambda x: (str(type(x)), x))


def minimal_empty_intersection(collection: Sequence[Iterable[Hashable]], k: int) -> Extraction:
    """Inclusion-minimal subfamily with empty intersection.

    Sets are scanned from last to first; a set is dropped when the rest still
    intersect to nothing, so earlier sets are preferred.
    """
    sets = [frozenset(x) for x in collection]
    if any(len(s) > k + 1 for s in sets):
        raise ValueError(f"every set must have at most k+1 = {k + 1} elements")
    total = _intersection(sets)
    if total is None or total:
        raise ValueError("the family has nonempty intersection")
    keep = list(range(len(sets)))
    for j in reversed(range(len(sets))):
        rest = [sets[i] for i in keep if i != j]
        inter = _intersection(rest)
        if inter is not None and not inter:
            keep.remove(j)
    chosen = tuple(sets[i] for i in keep)
    witnesses = []
    for j in range(len(chosen)):
        others = _intersection(chosen[:j] + chosen[j + 1 :])
        assert others, "kept set is not needed for empty intersection"
        witnesses.append(_min_elem(others))
    for f, x in zip(witnesses, chosen):
        assert f not in x
    assert len(set(witnesses)) == len(witnesses)
    union = frozenset().union(*chosen)
    y = len(chosen)
    assert len(union) <= y * (k + 3 - y)
    assert 4 * len(union) <= (k + 3) ** 2
    return Extraction(chosen, tuple(keep), tuple(witnesses), len(union), k)


def tight_family(k: int) -> list[frozenset[int]]:
    """Family of (k+1)-sets meeting the extraction bound with equality.

    All floor((k+1)/2)-subsets of a core of floor((k+1)/2)+1 elements, each
    padded with ceil((k+1)/2) fresh elements.  For k = 0 the core has a single
    empty subset, so two padded singletons are used instead.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return [frozenset({1}), frozenset({2})]
    r = (k + 1) // 2
    c = (k + 2) // 2
    core = range(1, r + 2)
    fresh = itertools.count(r + 2)
    family = []
    for sub in itertools.combinations(core, r):
        family.append(frozenset(sub) | {next(fresh) for _ in range(c)})
    return family


def tight_union_size(k: int) -> int:
    return ((k + 1) // 2 + 1) * ((k + 2) // 2 + 1)


# -- corank property audit ---------------------------------------------------


@dataclass
class PhiAudit:
    steps_checked: int = 0
    sets_checked: int = 0
    violations: list[tuple[int, tuple[str, ...], str]] = field(default_factory=list)
    illegal_step: int | None = None
    terminal_checked: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations and self.illegal_step is None

    def to_json(self) -> dict:
        return {
            "steps_checked": self.steps_checked,
            "sets_checked": self.sets_checked,
            "violations": [{"step": i, "set": list(s), "property": p} for i, s, p in self.violations],
            "illegal_step": self.illegal_step,
            "terminal_checked": self.terminal_checked,
            "ok": self.ok,
        }


def is_legal_shed(before: SimplicialComplex, after: SimplicialComplex) -> bool:
    return after.is_pure and after.dim == before.dim


def audit_phi_properties(
    lab: DeltaLabeling,
    sequence: Sequence[int],
    *,
    complex0: SimplicialComplex | None = None,
) -> PhiAudit:
    """Check the corank properties step by step on a weak shedding prefix.

    Property numbers: (1) phi_0 <= 1; (2) some phi_t >= 2 once a single
    facet is left; (3) mixed sheds change nothing; (4) one-sided sheds leave
    the other side unchanged; (5) phi_i(S) <= 1 iff S - v is a face of
    Delta_i for some v in S.  Auditing stops before the first illegal shed.
    """
    cx = complex0 if complex0 is not None else delta_complex(lab.a, lab.b)
    sets = domain_sets(lab)
    report = PhiAudit()
    prev = phi_table(cx, sets)
    for s, val in zip(sets, prev):
        if val > 1:
            report.violations.append((0, tuple(lab.format(s)), "1"))
    _check_property5(lab, cx, sets, prev, 0, report)
    report.sets_checked += len(sets)
    for i, tau in enumerate(sequence, start=1):
        if not cx.is_face(tau):
            report.illegal_step = i
            break
        nxt = deletion(cx, tau)
        if not is_legal_shed(cx, nxt):
            report.illegal_step = i
            break
        cur = phi_table(nxt, sets)
        side = lab.side(tau)
        for s, before, after in zip(sets, prev, cur):
            if side is None and before != after:
                report.violations.append((i, tuple(lab.format(s)), "3"))
            elif side is not None and lab.side(s) != side and before != after:
                report.violations.append((i, tuple(lab.format(s)), "4"))
        _check_property5(lab, nxt, sets, cur, i, report)
        report.sets_checked += len(sets)
        report.steps_checked += 1
        cx, prev = nxt, cur
    if report.illegal_step is None and cx.is_simplex:
        report.terminal_checked = True
        if max(prev) < 2:
            report.violations.append((len(sequence), (), "2"))
    return report


def _check_property5(lab, cx, sets, values, step, report):
    for s, val in zip(sets, values):
        verts = vertices_of(s)
        has_face = any(cx.is_face(s & ~(1 << v)) for v in verts)
        if (val <= 1) != has_face:
            report.violations.append((step, tuple(lab.format(s)), "5"))


@dataclass
class PrefixTreeAudit:
    """Corank properties checked over every legal prefix up to some length."""

    k: int
    max_length: int
    prefixes: int = 0
    sets_checked: int = 0
    terminal_states: int = 0
    violations: list[tuple[tuple[tuple[str, ...], ...], tuple[str, ...], str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "max_length": self.max_length,
            "prefixes": self.prefixes,
            "sets_checked": self.sets_checked,
            "terminal_states": self.terminal_states,
            "violations": [
                {"prefix": [list(t) for t in p], "set": list(s), "property": n} for p, s, n in self.violations
            ],
            "ok": self.ok,
        }


def _all_faces(facets: Iterable[int]) -> set[int]:
    out: set[int] = set()
    for f in facets:
        sub = f
        while True:
            out.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & f
    return out


def audit_phi_prefix_tree(
    lab: DeltaLabeling,
    k: int,
    max_length: int,
    *,
    complex0: SimplicialComplex | None = None,
) -> PrefixTreeAudit:
    """Check properties 1, 3, 4, 5 on every legal weak prefix of length <= max_length.

    Same checks as ``audit_phi_properties`` but walked as a tree so each prefix
    costs one step.  Coranks come from the facets; property 5 is tested against
    a face set maintained separately by dropping the faces that contain each
    shed face.  Property 2 is checked whenever a single facet remains.
    """
    from .decomposability import legal_shed, ridge_counts, shed_candidates

    cx = complex0 if complex0 is not None else delta_complex(lab.a, lab.b)
    sets = domain_sets(lab)
    sides = [lab.side(s) for s in sets]
    minus_one = [[s & ~(1 << v) for v in vertices_of(s)] for s in sets]
    report = PrefixTreeAudit(k, max_length)

    by_side = {side: [s for s in sets if lab.side(s) == side] for side in ("U", "V")}
    assert sets == by_side["U"] + by_side["V"]
    side_cache: dict[tuple[str, frozenset], list[int]] = {}

    def side_values(side, parts):
        key = (side, parts)
        if key not in side_cache:
            side_cache[key] = [s.bit_count() - max((p & s).bit_count() for p in parts) for s in by_side[side]]
        return side_cache[key]

    def table(state):
        # a one-sided set only sees the facet's part on its own side
        u = side_values("U", frozenset(f & lab.u_mask for f in state))
        v = side_values("V", frozenset(f & lab.v_mask for f in state))
        return u + v

    def note(prefix, s, prop):
        report.violations.append(
            (tuple(tuple(lab.format(t)) for t in prefix), tuple(lab.format(s)) if s else (), prop)
        )

    def visit(prefix, state, faces, values):
        report.prefixes += 1
        report.sets_checked += len(sets)
        for s, subs, val in zip(sets, minus_one, values):
            if (val <= 1) != any(m in faces for m in subs):
                note(prefix, s, "5")
        if len(state) == 1:
            report.terminal_states += 1
            if max(values) < 2:
                note(prefix, 0, "2")
        if len(prefix) == max_length or len(state) == 1:
            return
        ridges = ridge_counts(state)
        for tau in shed_candidates(state, k):
            nxt = legal_shed(state, tau, ridges)
            if nxt is None:
                continue
            child = table(nxt)
            side = lab.side(tau)
            for s, s_side, before, after in zip(sets, sides, values, child):
                if before == after:
                    continue
                if side is None:
                    note(prefix + (tau,), s, "3")
                elif s_side != side:
                    note(prefix + (tau,), s, "4")
            visit(prefix + (tau,), nxt, {f for f in faces if f & tau != tau}, child)

    start = frozenset(cx.facets)
    values = table(start)
    for s, val in zip(sets, values):
        if val > 1:
            note((), s, "1")
    visit((), start, _all_faces(start), values)
    return report


def legal_prefixes(
    cx: SimplicialComplex, k: int, max_length: int
) -> Iterable[tuple[tuple[int, ...], SimplicialComplex]]:
    """Every legal weak shedding prefix up to ``max_length`` with its end state."""
    from .decomposability import legal_shed, ridge_counts, shed_candidates

    def rec(prefix, state):
        yield prefix, state
        if len(prefix) == max_length or len(state) == 1:
            return
        ridges = ridge_counts(state)
        for tau in shed_candidates(state, k):
            nxt = legal_shed(state, tau, ridges)
            if nxt is not None:
                yield from rec(prefix + (tau,), nxt)

    for prefix, state in rec((), frozenset(cx.facets)):
        yield prefix, cx.with_facets(state)


# -- replay of the non-decomposability argument --------------------------------


@dataclass(frozen=True)
class TheoremWitness:
    """Why shedding step ``fail_step`` (1-based) cannot keep purity."""

    fail_step: int
    side: str
    subject_s: tuple[str, ...]
    phi_s: int
    shed_faces_in_s: tuple[tuple[str, ...], ...]
    subcollection: tuple[tuple[str, ...], ...]
    hitting_witnesses: tuple[str, ...]
    union_bound: float
    complement_t: tuple[str, ...]
    phi_t_before: int
    phi_t_after: int
    face_a: tuple[str, ...]
    largest_face_through_a: int
    violation: str

    def to_json(self) -> dict:
        return {
            "kind": "witness",
            "fail_step": self.fail_step,
            "side": self.side,
            "subject_S": list(self.subject_s),
            "phi_S": self.phi_s,
            "shed_faces_in_S": [list(x) for x in self.shed_faces_in_s],
            "subcollection": [list(x) for x in self.subcollection],
            "hitting_witnesses": list(self.hitting_witnesses),
            "union_bound": self.union_bound,
            "complement_T": list(self.complement_t),
            "phi_T_before": self.phi_t_before,
            "phi_T_after": self.phi_t_after,
            "face_A": list(self.face_a),
            "largest_face_through_A": self.largest_face_through_a,
            "violation": self.violation,
        }


@dataclass(frozen=True)
class ValidSoFar:
    steps: int
    frontier: dict[tuple[str, ...], int]

    def to_json(self) -> dict:
        return {
            "kind": "valid_so_far",
            "steps": self.steps,
            "frontier": [{"set": list(s), "phi": v} for s, v in self.frontier.items()],
        }


@dataclass(frozen=True)
class IllegalPrefix:
    """Purity broke at ``step`` before any corank reached 2."""

    step: int
    reason: str

    def to_json(self) -> dict:
        return {"kind": "illegal", "step": self.step, "reason": self.reason}


def theorem_applies(a: int, b: int, k: int) -> bool:
    return (k + 3) ** 2 <= 4 * min(a, b)


def audit_sequence_against_theorem(
    a: int,
    b: int,
    k: int,
    sequence: Sequence[int],
    *,
    strict: bool = False,
) -> TheoremWitness | ValidSoFar | IllegalPrefix:
    """Replay ``sequence`` on Delta(a, b) and reproduce the obstruction.

    At the first step where some domain set gets corank >= 2 a
    ``TheoremWitness`` is built and checked.  Such a set exists on a side
    exactly when the shed faces on that side have empty common intersection.
    ``strict`` also scans the full domain at every step and insists both
    detections agree.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if not theorem_applies(a, b, k):
        raise ValueError(f"need ((k+3)/2)^2 <= min(a,b); got k={k}, a={a}, b={b}")
    lab = DeltaLabeling(a, b)
    cx = delta_complex(a, b)
    sets = domain_sets(lab) if strict else []
    one_sided: dict[str, list[int]] = {"U": [], "V": []}
    shed: list[int] = []
    for i, tau in enumerate(sequence, start=1):
        if popcount(tau) - 1 > k or tau == 0:
            raise ValueError(f"step {i}: shed face {lab.format(tau)} has dimension > k or is empty")
        if not cx.is_face(tau):
            raise FaceError(f"step {i}: {lab.format(tau)} is not a face at shed time")
        nxt = deletion(cx, tau)
        legal = is_legal_shed(cx, nxt)
        shed.append(tau)
        side = lab.side(tau)
        triggered = None
        if side is not None:
            one_sided[side].append(tau)
            inter = reduce(lambda x, y: x & y, one_sided[side])
            if inter == 0:
                triggered = side
        if strict:
            found = any(v >= 2 for v in phi_table(nxt, sets))
            if found != (triggered is not None):
                raise AssertionError(f"step {i}: full-domain scan disagrees with lazy corank tracking")
        if triggered is not None:
            witness = _build_witness(lab, k, i, triggered, one_sided[triggered], shed, cx, nxt)
            if legal:
                raise AssertionError(f"step {i}: witness built but the shed kept purity")
            return witness
        if not legal:
            return IllegalPrefix(i, "deletion is not pure of the original dimension")
        cx = nxt
    frontier = {}
    for side, faces in one_sided.items():
        cand = {f for f in faces}
        if faces:
            cand.add(reduce(lambda x, y: x | y, faces))
        for s in sorted(cand, key=lambda m: (popcount(m), vertices_of(m))):
            if popcount(s) <= _cap(lab, side):
                frontier[tuple(lab.format(s))] = phi(cx, s, lab)
    return ValidSoFar(len(sequence), frontier)


def _build_witness(lab, k, step, side, side_faces, shed, before, after) -> TheoremWitness:
    a, b = lab.a, lab.b
    extraction = minimal_empty_intersection([vertices_of(t) for t in side_faces], k)
    s_mask = mask_of(set().union(*extraction.subcollection))
    own_cap = b if side == "U" else a
    if 4 * popcount(s_mask) > (k + 3) ** 2 or popcount(s_mask) > own_cap:
        raise AssertionError("extracted set exceeds the size bound")
    phi_s = phi(after, s_mask, lab)
    if phi_s < 2:
        raise AssertionError("corank of the extracted set dropped below 2")
    in_s = [t for t in shed if t & s_mask == t]
    if reduce(lambda x, y: x & y, in_s) != 0:
        raise AssertionError("shed faces inside S have a common vertex")

    # T: a+1 (or b+1) vertices on the other side, smallest free indices
    other_size = a + 1 if side == "U" else b + 1
    used = lab.indices(s_mask)
    free = [nu for nu in range(1, lab.n + 1) if nu not in used][:other_size]
    if len(free) < other_size:
        raise AssertionError("not enough free indices for T")
    pick = lab.v if side == "U" else lab.u
    t_mask = mask_of(pick(nu) for nu in free)
    phi_t_before = phi(before, t_mask, lab)
    phi_t_after = phi(after, t_mask, lab)
    if phi_t_after != phi_t_before or phi_t_after > 1:
        raise AssertionError("corank of T changed or exceeds 1")
    face_a = next(
        (t_mask & ~(1 << v) for v in vertices_of(t_mask) if after.is_face(t_mask & ~(1 << v))),
        None,
    )
    if face_a is None:
        raise AssertionError("no face of size |T|-1 inside T")
    top = a + b
    largest = max(popcount(f) for f in after.facets if f & face_a == face_a)
    if largest >= top:
        raise AssertionError("A extends to a full-size facet")
    return TheoremWitness(
        fail_step=step,
        side=side,
        subject_s=tuple(lab.format(s_mask)),
        phi_s=phi_s,
        shed_faces_in_s=tuple(tuple(lab.format(t)) for t in in_s),
        subcollection=tuple(tuple(lab.format(mask_of(x))) for x in extraction.subcollection),
        hitting_witnesses=tuple(lab.format(1 << w)[0] for w in extraction.witnesses),
        union_bound=extraction.quadratic_bound,
        complement_t=tuple(lab.format(t_mask)),
        phi_t_before=phi_t_before,
        phi_t_after=phi_t_after,
        face_a=tuple(lab.format(face_a)),
        largest_face_through_a=largest,
        violation=(
            f"{{{','.join(lab.format(face_a))}}} is a face of Delta_{step} lying in no face of size {top}, "
            f"so Delta_{step} is not pure of dimension {top - 1}"
        ),
    )


def check_witness(a: int, b: int, k: int, sequence: Sequence[int], w: TheoremWitness) -> list[str]:
    """Independently recheck a witness against a replay; returns failures."""
    lab = DeltaLabeling(a, b)
    cx = delta_complex(a, b)
    for tau in sequence[: w.fail_step]:
        cx = deletion(cx, tau)
    problems = []
    s = lab.parse_face(w.subject_s)
    t = lab.parse_face(w.complement_t)
    face_a = lab.parse_face(w.face_a)
    if phi(cx, s, lab) < 2:
        problems.append("phi(S) < 2")
    if 4 * popcount(s) > (k + 3) ** 2:
        problems.append("|S| exceeds ((k+3)/2)^2")
    if lab.indices(s) & lab.indices(t):
        problems.append("S and T share an index")
    if popcount(t) != (a + 1 if w.side == "U" else b + 1):
        problems.append("|T| wrong")
    if face_a & ~t or popcount(face_a) != popcount(t) - 1:
        problems.append("A is not a |T|-1 subset of T")
    if not cx.is_face(face_a):
        problems.append("A is not a face")
    if any(popcount(f) == a + b and f & face_a == face_a for f in cx.facets):
        problems.append("A extends to a full facet")
    if cx.is_pure and cx.dim == a + b - 1:
        problems.append("Delta_i is still pure")
    return problems


def explain_dead_end(a: int, b: int, k: int, prefix: Sequence[int]) -> list[TheoremWitness | IllegalPrefix | ValidSoFar]:
    """Audit every one-step extension of a legal prefix that has no legal shed."""
    from .decomposability import shed_candidates

    cx = delta_complex(a, b)
    for tau in prefix:
        cx = deletion(cx, tau)
    out = []
    for tau in shed_candidates(cx.facets, k):
        out.append(audit_sequence_against_theorem(a, b, k, list(prefix) + [tau]))
    return out
