"""Command-line driver.

Exit codes: 0 success / decomposable, 1 usage, 2 invalid input data,
3 search exhausted and not decomposable, 4 internal invariant breach,
5 state budget exhausted (verdict unknown).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .complex import FaceError, SimplicialComplex, mask_of
from .decomposability import SearchVerdict, find_strong_decomposition, find_weak_decomposition, verify_certificate
from .delta import (
    DeltaLabeling,
    cross_validate,
    delta_complex,
    delta_polytope_params,
    polar_delta_complex,
)
from .diameter import (
    BOUND_KINDS,
    DisconnectedError,
    NotPureError,
    PolytopeParams,
    bound_report,
    diameter,
    facet_ridge_graph,
    graph_diameter,
)
from .obstruction import (
    DomainError,
    audit_phi_properties,
    audit_sequence_against_theorem,
    explain_dead_end,
    minimal_empty_intersection,
    theorem_applies,
)
from .transportation import (
    DegenerateMarginsError,
    InfeasibleMarginsError,
    Margins,
    enumerate_vertices,
    polar_boundary_complex,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NOT_DECOMPOSABLE = 3
EXIT_INTERNAL = 4
EXIT_BUDGET = 5

THREADS_ENV = "WEAKDECOMP_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(path: Path, obj) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_dump(obj) if not isinstance(obj, str) else obj)
    return path


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return args.threads
    return int(os.environ.get(THREADS_ENV, "1"))


def _load_complex(args) -> tuple[SimplicialComplex, PolytopeParams | None, DeltaLabeling | None]:
    if getattr(args, "input", None):
        data = json.loads(Path(args.input).read_text())
        return SimplicialComplex.from_json(data), None, None
    if args.a is None or args.b is None:
        raise UsageError("give --input FILE or both --a and --b")
    return delta_complex(args.a, args.b), delta_polytope_params(args.a, args.b), DeltaLabeling(args.a, args.b)


def _load_sequence(path: str | None, lab: DeltaLabeling) -> list[int]:
    if path is None:
        return []
    data = json.loads(Path(path).read_text())
    faces = data["faces"] if isinstance(data, dict) else data
    return [lab.parse_face(face) for face in faces]


# -- subcommands --------------------------------------------------------------


def cmd_construct(args) -> int:
    if args.what == "delta":
        if args.a is None or args.b is None:
            raise UsageError("construct delta needs --a and --b")
        built = {}
        if args.via in ("lemma", "both"):
            built["lemma"] = delta_complex(args.a, args.b)
        if args.via in ("polar", "both"):
            built["polar"] = polar_delta_complex(args.a, args.b)
        for name, cx in built.items():
            print(f"{name}: {len(cx.facets)} facets on {cx.vertex_count} vertices, dimension {cx.dim}")
        if args.via == "both":
            same = built["lemma"].facets == built["polar"].facets
            print(f"routes agree: {same}")
            if not same:
                return EXIT_INTERNAL
        cx = next(iter(built.values()))
        if args.out:
            _write(Path(args.out), cx.to_json())
        else:
            sys.stdout.write(cx.dumps() + "\n")
        return EXIT_OK
    if not args.row or not args.col:
        raise UsageError("construct transportation needs --row and --col")
    margins = Margins(args.row, args.col)
    verts = enumerate_vertices(margins)
    cx, labels = polar_boundary_complex(margins)
    print(f"{margins.m}x{margins.n} transportation polytope: dimension {margins.dimension}, "
          f"{len(verts)} vertices, {len(labels)} facets")
    payload = {"margins": margins.to_json(), "complex": cx.to_json(), "vertices": [v.to_json() for v in verts]}
    if args.out:
        _write(Path(args.out), payload)
    else:
        sys.stdout.write(_dump(payload))
    return EXIT_OK


def _search(cx, mode, k, max_states, memo=True) -> SearchVerdict:
    if mode == "strong":
        return find_strong_decomposition(cx, k, memo=memo, max_states=max_states)
    return find_weak_decomposition(cx, k, memo=memo, max_states=max_states)


def _verdict_code(v: SearchVerdict) -> int:
    if v.decomposable is None:
        return EXIT_BUDGET
    return EXIT_OK if v.decomposable else EXIT_NOT_DECOMPOSABLE


def _verdict_text(v: SearchVerdict) -> str:
    if v.decomposable is None:
        return "unknown (state budget exhausted)"
    return "decomposable" if v.decomposable else "not decomposable"


def cmd_check(args) -> int:
    cx, _, _ = _load_complex(args)
    mode = "strong" if args.strong else "weak"
    verdict = _search(cx, mode, args.k, args.max_states, memo=not args.no_memo)
    print(f"{mode} {args.k}-decomposability: {_verdict_text(verdict)} "
          f"({verdict.states_explored} states, {verdict.memo_hits} memo hits)")
    if verdict.certificate is not None:
        check = verify_certificate(cx, verdict.certificate)
        if not check:
            print(f"certificate failed verification: {check.reason}")
            return EXIT_INTERNAL
        for i, step in enumerate(verdict.certificate.steps, 1):
            print(f"  {i:3d}. shed {cx.format_face(mask_of(step.face))} -> {step.facets_after} facets")
    if args.out:
        out = Path(args.out)
        _write(out / f"verdict_{mode}_k{args.k}.json", verdict.to_json())
    return _verdict_code(verdict)


def cmd_diameter(args) -> int:
    cx, _, _ = _load_complex(args)
    graph = facet_ridge_graph(cx)
    diam = graph_diameter(graph, _threads(args))
    print(f"facets: {len(graph)}; ridge-degrees: {min(graph.degrees())}..{max(graph.degrees())}; diameter: {diam}")
    if args.dot:
        _write(Path(args.dot), graph.to_dot())
    if args.out:
        _write(Path(args.out) / "diameter.json", {"diameter": diam, "facets": len(graph)})
    return EXIT_OK


def _bound_reports(cx, k, params, diam):
    reports = []
    for kind in BOUND_KINDS:
        if kind in ("hirsch", "brightwell_et_al") and params is None:
            continue
        reports.append(bound_report(cx, k, kind, params, diam=diam))
    return reports


def cmd_bounds(args) -> int:
    cx, params, _ = _load_complex(args)
    if args.n_facets is not None or args.dim is not None:
        params = PolytopeParams(args.n_facets, args.dim, args.rows, args.cols)
    if args.k > cx.dim:
        raise UsageError(f"k={args.k} exceeds the complex dimension {cx.dim}")
    diam = diameter(cx, _threads(args))
    reports = _bound_reports(cx, args.k, params, diam)
    for r in reports:
        print(f"{r.bound_kind:24s} diameter {r.diameter} <= {r.bound_value}: {r.satisfied}")
    if args.out:
        _write(Path(args.out) / f"bounds_k{args.k}.json", [r.to_json() for r in reports])
    return EXIT_OK


def cmd_audit(args) -> int:
    if args.a is None or args.b is None:
        raise UsageError("audit needs --a and --b")
    lab = DeltaLabeling(args.a, args.b)
    seq = _load_sequence(args.sequence, lab)
    if args.what == "phi":
        report = audit_phi_properties(lab, seq)
        print(f"phi audit: {report.steps_checked} steps, {report.sets_checked} set evaluations, "
              f"{len(report.violations)} violations, illegal step: {report.illegal_step}")
        payload = report.to_json()
        code = EXIT_OK if not report.violations else EXIT_INTERNAL
    else:
        if args.k is None:
            raise UsageError("audit theorem needs --k")
        result = audit_sequence_against_theorem(args.a, args.b, args.k, seq, strict=args.strict)
        payload = result.to_json()
        print(f"theorem audit: {payload['kind']}")
        if payload["kind"] == "witness":
            print(f"  step {result.fail_step}: {result.violation}")
        code = EXIT_OK
    if args.out:
        _write(Path(args.out) / f"audit_{args.what}.json", payload)
    else:
        sys.stdout.write(_dump(payload))
    return code


def cmd_hitting_set(args) -> int:
    try:
        collection = json.loads(args.collection)
    except json.JSONDecodeError as exc:
        raise ValueError(f"--collection is not valid JSON: {exc}") from exc
    ex = minimal_empty_intersection(collection, args.k)
    union = sorted(set().union(*ex.subcollection))
    payload = {
        "k": args.k,
        "subcollection": [sorted(s) for s in ex.subcollection],
        "indices": list(ex.indices),
        "witnesses": list(ex.witnesses),
        "union": union,
        "union_size": ex.union_size,
        "termwise_bound": ex.termwise_bound,
        "quadratic_bound": ex.quadratic_bound,
    }
    print(f"minimal sub-collection of {len(ex.subcollection)} sets, union size {ex.union_size} "
          f"<= {ex.termwise_bound} <= {ex.quadratic_bound}")
    if args.out:
        _write(Path(args.out) / "hitting_set.json", payload)
    else:
        sys.stdout.write(_dump(payload))
    return EXIT_OK


def cmd_report(args) -> int:
    a, b = args.a, args.b
    out = Path(args.out or f"weakdecomp-report-a{a}-b{b}")
    lab = DeltaLabeling(a, b)
    timings = {}
    artifacts = {}
    verdicts: dict = {}

    t0 = time.perf_counter()
    lemma = delta_complex(a, b)
    polar = polar_delta_complex(a, b)
    cv = cross_validate(a, b)
    timings["construct"] = time.perf_counter() - t0
    artifacts["lemma"] = str(_write(out / "delta_lemma.json", lemma.to_json()))
    artifacts["polar"] = str(_write(out / "delta_polar.json", polar.to_json()))
    artifacts["cross_validation"] = str(_write(out / "cross_validation.json", cv.to_json()))
    verdicts["cross_validation"] = cv.ok
    print(f"Delta({a},{b}): {len(lemma.facets)} facets on {lemma.vertex_count} vertices; "
          f"routes agree: {cv.equal}; formula {cv.formula}: {cv.ok}")

    t0 = time.perf_counter()
    diam = diameter(lemma, _threads(args))
    params = delta_polytope_params(a, b)
    hirsch = bound_report(lemma, None, "hirsch", params, diam=diam)
    bw = bound_report(lemma, None, "brightwell_et_al", params, diam=diam)
    timings["diameter"] = time.perf_counter() - t0
    artifacts["diameter"] = str(_write(out / "diameter.json", [hirsch.to_json(), bw.to_json()]))
    verdicts["hirsch"] = hirsch.satisfied
    verdicts["brightwell_et_al"] = bw.satisfied
    print(f"diameter {diam}; Hirsch bound {hirsch.bound_value}: {hirsch.satisfied}; "
          f"8(m+n-1) = {bw.bound_value}: {bw.satisfied}")

    failures = not cv.ok or not hirsch.satisfied or not bw.satisfied
    for k in range(args.kmax + 1):
        t0 = time.perf_counter()
        dead_ends = []
        v = find_weak_decomposition(
            lemma, k, max_states=args.max_states, on_dead_end=lambda p, s: dead_ends.append(p)
        )
        timings[f"weak_k{k}"] = time.perf_counter() - t0
        payload = v.to_json()
        if v.certificate is not None:
            check = verify_certificate(lemma, v.certificate)
            payload["verified"] = check.ok
            weak = bound_report(lemma, k, "provan_billera_weak", diam=diam)
            payload["weak_bound"] = weak.to_json()
            failures |= not check.ok or not weak.satisfied
        if v.decomposable is False and theorem_applies(a, b, k):
            explained = 0
            for prefix in dead_ends:
                masks = [mask_of(f) for f in prefix]
                results = explain_dead_end(a, b, k, masks)
                explained += all(r.to_json()["kind"] == "witness" for r in results)
            payload["dead_ends"] = len(dead_ends)
            payload["dead_ends_explained"] = explained
            failures |= explained != len(dead_ends)
        artifacts[f"weak_k{k}"] = str(_write(out / f"weak_k{k}.json", payload))
        verdicts[f"weak_k{k}"] = v.decomposable
        extra = ""
        if "dead_ends" in payload:
            extra = f"; {payload['dead_ends_explained']}/{payload['dead_ends']} dead ends explained by witnesses"
        print(f"weak k={k}: {_verdict_text(v)} ({v.states_explored} states){extra}")

    t0 = time.perf_counter()
    phi_report = audit_phi_properties(lab, [])
    timings["phi_audit"] = time.perf_counter() - t0
    artifacts["phi_audit"] = str(_write(out / "phi_audit.json", phi_report.to_json()))
    verdicts["phi_audit"] = phi_report.ok
    failures |= not phi_report.ok
    print(f"phi audit on Delta_0: {phi_report.sets_checked} sets, {len(phi_report.violations)} violations")

    run = {
        "command": ["report", "--a", str(a), "--b", str(b), "--kmax", str(args.kmax)],
        "inputs": {"a": a, "b": b, "kmax": args.kmax, "max_states": args.max_states},
        "verdicts": verdicts,
        "artifacts": artifacts,
    }
    _write(out / "report.json", run)
    for name, secs in timings.items():
        print(f"  time {name}: {secs:.3f}s")
    print(f"artifacts in {out}")
    return EXIT_INTERNAL if failures else EXIT_OK


# -- parser ------------------------------------------------------------------


def _add_source(p, need_k=False):
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--input", help="complex JSON file (instead of --a/--b)")
    if need_k:
        p.add_argument("--k", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help=f"worker threads (default from ${THREADS_ENV}, else 1)")
    parser = _Parser(prog="weakdecomp", description=__doc__.splitlines()[0], parents=[common])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", parents=[common], help="build Delta(a,b) or a transportation polar")
    p.add_argument("what", choices=["delta", "transportation"])
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--via", choices=["lemma", "polar", "both"], default="lemma")
    p.add_argument("--row", nargs="+", help="row margins (integers or p/q)")
    p.add_argument("--col", nargs="+", help="column margins")
    p.add_argument("--out", help="output JSON file")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("check", parents=[common], help="decide (weak) k-decomposability")
    p.add_argument("what", choices=["decomp"])
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--weak", action="store_true")
    mode.add_argument("--strong", action="store_true")
    _add_source(p, need_k=True)
    p.add_argument("--max-states", type=int, default=None)
    p.add_argument("--no-memo", action="store_true")
    p.add_argument("--out", help="artifact directory")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("diameter", parents=[common], help="facet-ridge diameter")
    _add_source(p)
    p.add_argument("--dot", help="write the facet-ridge graph in DOT format")
    p.add_argument("--out", help="artifact directory")
    p.set_defaults(func=cmd_diameter)

    p = sub.add_parser("bounds", parents=[common], help="diameter against the known bounds")
    _add_source(p, need_k=True)
    p.add_argument("--n-facets", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--out", help="artifact directory")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("audit", parents=[common], help="corank audits on Delta(a,b)")
    p.add_argument("what", choices=["phi", "theorem"])
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--sequence", help='JSON file {"faces": [["u1"], ["v2", "u3"], ...]}')
    p.add_argument("--strict", action="store_true", help="scan the full corank domain at every step")
    p.add_argument("--out", help="artifact directory")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("hitting-set", parents=[common], help="minimal empty-intersection sub-collection")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--collection", required=True, help="JSON list of lists")
    p.add_argument("--out", help="artifact directory")
    p.set_defaults(func=cmd_hitting_set)

    p = sub.add_parser("report", parents=[common], help="one-shot reproduction report for Delta(a,b)")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--kmax", type=int, default=0)
    p.add_argument("--max-states", type=int, default=200_000)
    p.add_argument("--out", help="artifact directory")
    p.set_defaults(func=cmd_report)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"weakdecomp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AssertionError, DisconnectedError) as exc:
        print(f"weakdecomp: invariant breach: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, KeyError, TypeError, OSError, FaceError, DomainError, NotPureError,
            DegenerateMarginsError, InfeasibleMarginsError) as exc:
        print(f"weakdecomp: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
