"""Command-line pipeline: planes, bijections, and verified complexes.

Exit codes: 0 success, 1 a verification failed, 2 usage error,
3 search exhausted or over budget.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .complex import analyze, assemble, link, write_complex_report
from .errors import (
    BudgetExceeded,
    GonplexError,
    NotBijective,
    SearchExhausted,
    UsageError,
)
from .gf import tower_for_order
from .plane import build_pg2, dualize, read_plane, validate_plane, write_plane
from .pointline import (
    read_bijection,
    search_bijection,
    trace_bijection,
    write_bijection,
)
from .presentation import (
    build_euclidean,
    build_hyperbolic,
    validate_word,
    verify_presentation,
    write_presentation,
)
from .triples import enumerate_triples, verify_crucial_lemma, write_triples

log = logging.getLogger("gonplex")

FORMAT_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SEARCH = 0, 1, 2, 3


class StageFailure(Exception):
    def __init__(self, stage: str, detail: str):
        super().__init__(f"{stage}: {detail}")
        self.stage = stage


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _load_plane(path: str):
    return read_plane(_read(path))


def cmd_plane(args) -> int:
    if args.action == "gen":
        plane = build_pg2(tower_for_order(args.q), name=args.name)
        _emit(write_plane(plane), args.output)
        return EXIT_OK
    plane = _load_plane(args.file)
    if args.action == "check":
        report = validate_plane(plane)
        print(report)
        return EXIT_OK if report.ok else EXIT_FAIL
    # dual
    report = validate_plane(plane)
    if not report.ok:
        print(report, file=sys.stderr)
        return EXIT_FAIL
    _emit(write_plane(dualize(plane)), args.output)
    return EXIT_OK


def _describe(cert) -> str:
    names = {"P1": "P1 (point on its own image line)", "P2": "P2 (x1, x2, T(x1)^T(x2) collinear)"}
    return f"fail {names.get(cert.violated, cert.violated)} witness={cert.witness}"


def cmd_bijection(args) -> int:
    if args.action == "trace":
        tower = tower_for_order(args.q)
        plane = build_pg2(tower)
        T = trace_bijection(tower, plane)
    elif args.action == "search":
        plane = _load_plane(args.plane)
        report = validate_plane(plane)
        if not report.ok:
            print(report, file=sys.stderr)
            return EXIT_FAIL
        try:
            T = search_bijection(plane, budget=args.budget, jobs=args.jobs)
        except (SearchExhausted, BudgetExceeded) as exc:
            print(f"search: {exc}", file=sys.stderr)
            return EXIT_SEARCH
    else:
        plane = _load_plane(args.plane)
        try:
            T = read_bijection(_read(args.bijection), plane)
        except NotBijective as exc:
            print(f"bijection: not bijective: {exc}", file=sys.stderr)
            return EXIT_FAIL
        print(f"bijection over {plane.name}: {T.certification if T.certified else _describe(T.certification)}")
        return EXIT_OK if T.certified else EXIT_FAIL

    if not T.certified:
        print(f"bijection over {plane.name}: {_describe(T.certification)}", file=sys.stderr)
        return EXIT_FAIL
    _emit(write_bijection(T), args.output)
    return EXIT_OK


def _run_build(args, outdir: Path, timings: dict) -> dict:
    """Staged pipeline; raises StageFailure naming the first failed stage."""
    t0 = time.perf_counter()
    plane_text = _read(args.plane)
    bij_text = _read(args.bijection)
    word = None if args.triangle else validate_word(args.word)
    plane = read_plane(plane_text)
    report = validate_plane(plane)
    if not report.ok:
        raise StageFailure("plane", "; ".join(str(c) for c in report.failures))
    try:
        T = read_bijection(bij_text, plane)
    except NotBijective as exc:
        raise StageFailure("bijection", f"not bijective: {exc}") from exc
    if not T.certified:
        raise StageFailure("bijection", _describe(T.certification))
    timings["load"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    ts = enumerate_triples(plane, T)
    lemma = verify_crucial_lemma(ts)
    if not lemma.ok:
        raise StageFailure("triples", "; ".join(str(c) for c in lemma.failures))
    timings["triples"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    pres = build_euclidean(plane, T, ts) if word is None else build_hyperbolic(plane, T, ts, word)
    check = verify_presentation(pres)
    if not check.ok:
        raise StageFailure("presentation", "; ".join(str(c) for c in check.failures))
    timings["presentation"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    X = assemble(pres)
    analysis = analyze(X)
    timings["complex"] = time.perf_counter() - t0

    source = f"# over {plane.name} {T.content_hash()}\n"
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "triples.txt").write_text(write_triples(ts), encoding="utf-8")
    (outdir / "presentation.txt").write_text(write_presentation(pres), encoding="utf-8")
    (outdir / "complex.txt").write_text(write_complex_report(analysis) + source, encoding="utf-8")
    for v in range(X.num_vertices):
        edges = link(X, v).to_graph().to_edge_list()
        (outdir / f"link_{v}.edges").write_text(source + edges, encoding="utf-8")
    sys.stdout.write(write_complex_report(analysis))

    bad = [l for l in analysis.links if l.m != 3 or l.iso == "FAIL"]
    if bad:
        raise StageFailure("links", f"vertex {bad[0].vertex}: gen-gon m={bad[0].m} iso={bad[0].iso}")
    if not (analysis.stats.edges_from_ends and analysis.stats.corners_from_faces):
        raise StageFailure("counts", "edge-end or corner identity broken")
    return {"plane": _sha(plane_text), "bijection": _sha(bij_text)}


def cmd_build(args) -> int:
    outdir = Path(args.output)
    timings: dict = {}
    manifest = {
        "tool": "gonplex",
        "version": __version__,
        "format_version": FORMAT_VERSION,
        "command": ["gonplex"] + list(args.argv),
    }
    try:
        manifest["inputs"] = _run_build(args, outdir, timings)
    except StageFailure as exc:
        print(f"build failed at stage {exc}", file=sys.stderr)
        return EXIT_FAIL
    manifest["timings_s"] = {k: round(v, 6) for k, v in timings.items()}
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gonplex", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--version",
        action="version",
        version=f"gonplex {__version__} (file formats v{FORMAT_VERSION})",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    plane = sub.add_parser("plane", help="generate, check or dualize planes")
    psub = plane.add_subparsers(dest="action", required=True)
    gen = psub.add_parser("gen", help="PG(2,q) from the field tower")
    gen.add_argument("--q", type=int, required=True)
    gen.add_argument("--name")
    gen.add_argument("-o", "--output")
    chk = psub.add_parser("check", help="validate the plane axioms")
    chk.add_argument("file")
    dual = psub.add_parser("dual", help="write the dual plane")
    dual.add_argument("file")
    dual.add_argument("-o", "--output")
    plane.set_defaults(func=cmd_plane)

    bij = sub.add_parser("bijection", help="basic point-line bijections")
    bsub = bij.add_subparsers(dest="action", required=True)
    tr = bsub.add_parser("trace", help="algebraic T(gF) = gE")
    tr.add_argument("--q", type=int, required=True)
    tr.add_argument("-o", "--output")
    se = bsub.add_parser("search", help="backtracking search")
    se.add_argument("plane")
    se.add_argument("--budget", type=int)
    se.add_argument("--jobs", type=int, default=1)
    se.add_argument("-o", "--output")
    ve = bsub.add_parser("verify", help="certify a bijection file")
    ve.add_argument("plane")
    ve.add_argument("bijection")
    bij.set_defaults(func=cmd_bijection)

    build = sub.add_parser("build", help="triples, presentation and complex")
    build.add_argument("--plane", required=True)
    build.add_argument("--bijection", required=True)
    shape = build.add_mutually_exclusive_group(required=True)
    shape.add_argument("--triangle", action="store_true")
    shape.add_argument("--word")
    build.add_argument("-o", "--output", required=True)
    build.set_defaults(func=cmd_build)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.argv = argv
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gonplex: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GonplexError as exc:
        print(f"gonplex: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
