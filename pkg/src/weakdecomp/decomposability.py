"""Exhaustive search for weak and strong k-decompositions.

A search state is the facet set of the current complex.  A shed face ``tau``
is legal when the deletion stays pure of the same dimension.  For a pure
complex this happens exactly when every ridge ``F - v`` (``F`` a facet
containing ``tau``, ``v`` in ``tau``) lies in a second facet: that second
facet misses ``v`` and therefore survives the deletion.  The facets of a legal
deletion are then just the facets not containing ``tau``.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .complex import SimplicialComplex, mask_of, popcount, vertices_of

State = frozenset


class SearchBudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class ShedStep:
    face: tuple[int, ...]
    facets_after: int
    link: "SheddingCertificate | None" = None


@dataclass(frozen=True)
class SheddingCertificate:
    mode: str
    k: int
    steps: tuple[ShedStep, ...]
    terminal: tuple[int, ...]

    def to_json(self) -> dict:
        out: dict = {
            "mode": self.mode,
            "k": self.k,
            "steps": [{"face": list(s.face), "facets_after": s.facets_after} for s in self.steps],
            "terminal": list(self.terminal),
        }
        if self.mode == "strong":
            out["links"] = [s.link.to_json() if s.link else None for s in self.steps]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SheddingCertificate":
        links = data.get("links") or [None] * len(data["steps"])
        steps = tuple(
            ShedStep(
                tuple(s["face"]),
                s.get("facets_after", -1),
                cls.from_json(lk) if lk else None,
            )
            for s, lk in zip(data["steps"], links)
        )
        return cls(data["mode"], data["k"], steps, tuple(data.get("terminal", ())))


@dataclass
class SearchVerdict:
    """Outcome of a search.

    ``decomposable`` is ``None`` when the state budget ran out first.
    """

    decomposable: bool | None
    certificate: SheddingCertificate | None
    states_explored: int
    memo_hits: int
    mode: str = "weak"
    k: int = 0

    @property
    def budget_exhausted(self) -> bool:
        return self.decomposable is None

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "k": self.k,
            "decomposable": self.decomposable,
            "states_explored": self.states_explored,
            "memo_hits": self.memo_hits,
            "certificate": self.certificate.to_json() if self.certificate else None,
        }


def ridge_counts(state: Iterable[int]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for f in state:
        m = f
        while m:
            low = m & -m
            r = f & ~low
            counts[r] = counts.get(r, 0) + 1
            m ^= low
    return counts


def shed_candidates(state: Iterable[int], k: int) -> list[int]:
    """Nonempty faces of dimension <= k, by size then lexicographically."""
    faces: set[int] = set()
    for f in state:
        verts = vertices_of(f)
        for size in range(1, min(k + 1, len(verts)) + 1):
            for combo in itertools.combinations(verts, size):
                faces.add(mask_of(combo))
    return sorted(faces, key=lambda m: (popcount(m), vertices_of(m)))


def legal_shed(state: frozenset, tau: int, ridges: dict[int, int] | None = None) -> frozenset | None:
    """Facets after shedding ``tau``, or ``None`` if purity/dimension breaks.

    ``state`` must be the facet set of a pure complex.
    """
    if ridges is None:
        ridges = ridge_counts(state)
    containing = [f for f in state if f & tau == tau]
    if not containing:
        return None
    tau_verts = vertices_of(tau)
    for f in containing:
        for v in tau_verts:
            if ridges.get(f & ~(1 << v), 0) < 2:
                return None
    return frozenset(f for f in state if f & tau != tau)


def link_state(state: frozenset, tau: int) -> frozenset:
    return frozenset(f & ~tau for f in state if f & tau == tau)


def _check_input(cx: SimplicialComplex, k: int) -> None:
    if not cx.facets:
        raise ValueError("complex has no facets")
    if not cx.is_pure:
        raise ValueError("decomposability is only defined for pure complexes")
    if k < 0:
        raise ValueError("k must be nonnegative")


def _terminal(state: frozenset) -> tuple[int, ...]:
    (only,) = state
    return vertices_of(only)


class _WeakSearch:
    def __init__(self, k, memo, max_states, on_dead_end):
        self.k = k
        self.memo = memo
        self.max_states = max_states
        self.on_dead_end = on_dead_end
        self.failed: set[frozenset] = set()
        self.explored = 0
        self.hits = 0
        self.path: list[int] = []

    def run(self, state: frozenset) -> list[tuple[int, int]] | None:
        if len(state) == 1:
            return []
        if self.memo and state in self.failed:
            self.hits += 1
            return None
        self.explored += 1
        if self.max_states is not None and self.explored > self.max_states:
            raise SearchBudgetExceeded
        ridges = ridge_counts(state)
        any_legal = False
        for tau in shed_candidates(state, self.k):
            nxt = legal_shed(state, tau, ridges)
            if nxt is None:
                continue
            any_legal = True
            self.path.append(tau)
            sub = self.run(nxt)
            self.path.pop()
            if sub is not None:
                return [(tau, len(nxt))] + sub
        if not any_legal and self.on_dead_end is not None:
            self.on_dead_end([vertices_of(t) for t in self.path], state)
        if self.memo:
            self.failed.add(state)
        return None


def find_weak_decomposition(
    cx: SimplicialComplex,
    k: int,
    *,
    memo: bool = True,
    max_states: int | None = None,
    on_dead_end: Callable[[list[tuple[int, ...]], frozenset], None] | None = None,
) -> SearchVerdict:
    """Depth-first search for a weak ``k``-decomposition of ``cx``.

    ``on_dead_end(prefix, state)`` is called for every non-simplex state with
    no legal shed, with the first prefix that reached it.
    """
    _check_input(cx, k)
    search = _WeakSearch(k, memo, max_states, on_dead_end)
    with _deep_recursion(len(cx.facets)):
        try:
            steps = search.run(frozenset(cx.facets))
        except SearchBudgetExceeded:
            return SearchVerdict(None, None, search.explored - 1, search.hits, "weak", k)
    if steps is None:
        return SearchVerdict(False, None, search.explored, search.hits, "weak", k)
    final = _replay_final(cx.facets, [t for t, _ in steps])
    cert = SheddingCertificate(
        "weak", k, tuple(ShedStep(vertices_of(t), n) for t, n in steps), _terminal(final)
    )
    return SearchVerdict(True, cert, search.explored, search.hits, "weak", k)


def _replay_final(facets: Iterable[int], faces: list[int]) -> frozenset:
    state = frozenset(facets)
    for tau in faces:
        state = frozenset(f for f in state if f & tau != tau)
    return state


class _StrongSearch:
    def __init__(self, k, memo, max_states):
        self.k = k
        self.memo = memo
        self.max_states = max_states
        self.known: dict[frozenset, SheddingCertificate | None] = {}
        self.explored = 0
        self.hits = 0

    def run(self, state: frozenset) -> SheddingCertificate | None:
        if len(state) == 1:
            return SheddingCertificate("strong", self.k, (), _terminal(state))
        if self.memo and state in self.known:
            self.hits += 1
            return self.known[state]
        self.explored += 1
        if self.max_states is not None and self.explored > self.max_states:
            raise SearchBudgetExceeded
        result = None
        ridges = ridge_counts(state)
        for tau in shed_candidates(state, self.k):
            nxt = legal_shed(state, tau, ridges)
            if nxt is None:
                continue
            link_cert = self.run(link_state(state, tau))
            if link_cert is None:
                continue
            rest = self.run(nxt)
            if rest is None:
                continue
            step = ShedStep(vertices_of(tau), len(nxt), link_cert)
            result = SheddingCertificate("strong", self.k, (step,) + rest.steps, rest.terminal)
            break
        if self.memo:
            self.known[state] = result
        return result


def find_strong_decomposition(
    cx: SimplicialComplex, k: int, *, memo: bool = True, max_states: int | None = None
) -> SearchVerdict:
    """Search for a (strong) ``k``-decomposition; link certificates are nested."""
    _check_input(cx, k)
    search = _StrongSearch(k, memo, max_states)
    with _deep_recursion(len(cx.facets)):
        try:
            cert = search.run(frozenset(cx.facets))
        except SearchBudgetExceeded:
            return SearchVerdict(None, None, search.explored - 1, search.hits, "strong", k)
    return SearchVerdict(cert is not None, cert, search.explored, search.hits, "strong", k)


@dataclass(frozen=True)
class Verification:
    ok: bool
    step: int | None = None
    reason: str = ""
    path: tuple[int, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(cx: SimplicialComplex, cert: SheddingCertificate) -> Verification:
    """Replay ``cert`` on ``cx``; report the first violated condition.

    ``step`` is the 0-based index of the offending shed (``None`` for a
    failure at the end).  For nested link certificates ``path`` holds the
    outer step indices leading to the failure.
    """
    if cert.mode not in ("weak", "strong"):
        return Verification(False, None, f"unknown mode {cert.mode!r}")
    if not cx.facets or not cx.is_pure:
        return Verification(False, None, "complex is not pure")
    return _verify(frozenset(cx.facets), cert, ())


def _verify(state: frozenset, cert: SheddingCertificate, path: tuple[int, ...]) -> Verification:
    for i, step in enumerate(cert.steps):
        tau = mask_of(step.face)
        if not step.face:
            return Verification(False, i, "empty shed face", path)
        if len(step.face) - 1 > cert.k:
            return Verification(False, i, f"shed face has dimension {len(step.face) - 1} > k={cert.k}", path)
        if not any(f & tau == tau for f in state):
            return Verification(False, i, "face absent", path)
        nxt = legal_shed(state, tau)
        if nxt is None:
            return Verification(False, i, "deletion not pure of the same dimension", path)
        if step.facets_after >= 0 and step.facets_after != len(nxt):
            return Verification(False, i, f"facet count {len(nxt)} != recorded {step.facets_after}", path)
        if cert.mode == "strong":
            if step.link is None:
                return Verification(False, i, "missing link certificate", path)
            inner = _verify(link_state(state, tau), step.link, path + (i,))
            if not inner:
                return inner
        state = nxt
    if len(state) != 1:
        return Verification(False, None, f"terminal complex has {len(state)} facets", path)
    (only,) = state
    if cert.terminal and tuple(cert.terminal) != vertices_of(only):
        return Verification(False, None, "terminal facet mismatch", path)
    return Verification(True, None, "", path)


class _deep_recursion:
    def __init__(self, depth: int):
        self.want = 4 * depth + 1000

    def __enter__(self):
        self.old = sys.getrecursionlimit()
        if self.want > self.old:
            sys.setrecursionlimit(self.want)

    def __exit__(self, *exc):
        sys.setrecursionlimit(self.old)
