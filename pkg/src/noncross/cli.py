"""noncross command line: construct, verify, characterize-1d, render, suite.

Exit codes: 0 when every asserted property holds and nothing was left
unresolved, 1 on a failed property or construction, 2 on usage and capacity
errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from . import constructions as C
from .exactnum import format_rat, parse_rat, sci
from .geometry import PointSet, Structure, crossing_pairs, is_noncrossing
from .line1d import (
    LineSet,
    UnsupportedError,
    all_structures,
    cycle_deficit_lemma_check,
    is_longest_cycle_1d,
    is_longest_path_1d,
    is_longest_path_1d_odd,
    longest_cycle_length_1d,
    longest_path_length_1d,
    median,
)
from .maxsolvers import CapacityError, SolveOptions, Uniqueness, report, solve

log = logging.getLogger("noncross")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
LINE_BRUTE_CAP = 10


class UsageError(Exception):
    pass


def write_atomic(path, text: str) -> None:
    """Write via a temp file in the target directory, then rename over."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _digest(*paths) -> str:
    h = hashlib.sha256()
    for p in paths:
        if p:
            h.update(Path(p).read_bytes())
    return h.hexdigest()[:16]


def _opts(args) -> SolveOptions:
    return SolveOptions(method=args.method, precision_bits=args.precision_bits)


def _emit(args, payload: dict) -> None:
    if args.out and args.command in ("verify", "characterize-1d", "suite"):
        write_atomic(args.out, _dump(payload))


# -- construct ---------------------------------------------------------------------------

SIZE_ARG = {"cycle-even": "n", "small-path": "n", "small-cycle": "n"}


def cmd_construct(args) -> int:
    kind = args.kind
    size_name = SIZE_ARG.get(kind, "k")
    size = args.n if size_name == "n" else args.k
    if size is None:
        raise UsageError(f"construct {kind} needs --{size_name}")
    try:
        if kind.startswith("small-"):
            ps, cert = C.construct_small(kind.split("-", 1)[1], size)
        else:
            ps, cert = C.build(kind, size)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    except C.ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    out = Path(args.out or ".")
    stem = f"{kind}-{size_name}{size}"
    write_atomic(out / f"{stem}.points.json", _dump(ps.to_json()))
    write_atomic(out / f"{stem}.cert.json", _dump(cert.to_json()))
    print(f"{kind}: n={len(ps)}, {len([s for s in cert.steps if s.rule != 'fixed'])} threshold steps")
    print(cert.summary())
    print(f"wrote {out / (stem + '.points.json')} and {out / (stem + '.cert.json')}")
    return EXIT_OK


# -- verify ------------------------------------------------------------------------------

def _load_expected(path) -> Structure:
    d = _read_json(path)
    if "claimed_optimum" in d:
        d = d["claimed_optimum"]
    return Structure.from_json(d)


def cmd_verify(args) -> int:
    ps = PointSet.from_json(_read_json(args.points))
    try:
        res = solve(ps, args.kind, _opts(args))
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    nc = is_noncrossing(res.best, ps)
    rep = report(res, ps, noncrossing=nc)
    status = EXIT_OK
    reasons = []
    if res.unique is Uniqueness.UNRESOLVED:
        status, reasons = EXIT_FAIL, reasons + ["uniqueness unresolved at the precision cap"]
    if args.expect:
        exp = _load_expected(args.expect)
        rep["expected"] = exp.to_json()
        rep["matches_expected"] = res.best == exp and res.unique is Uniqueness.PROVEN
        if not rep["matches_expected"]:
            status = EXIT_FAIL
            reasons.append("optimum differs from the expected structure or is not unique")
    payload = {"command": " ".join(sys.argv[1:]), "inputs_digest": _digest(args.points, args.expect),
               "result": rep, "exit_status": status, "reasons": reasons}
    print(f"optimum   {res.best}")
    print(f"length    {sci(res.best_length.mid, 12)} (+/- {sci(res.best_length.width)})")
    print(f"unique    {res.unique.value}   noncrossing {nc}   method {res.method.value}")
    if args.expect:
        print(f"expected  {'match' if rep['matches_expected'] else 'MISMATCH'}")
    for r in reasons:
        print(f"reason: {r}", file=sys.stderr)
    _emit(args, payload)
    return status


# -- characterize-1d ---------------------------------------------------------------------

def _read_values(path) -> LineSet:
    d = _read_json(path)
    vals = d["values"] if isinstance(d, dict) else d
    try:
        return LineSet(tuple(parse_rat(str(v)) for v in vals))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_characterize(args) -> int:
    ls = _read_values(args.values)
    n = len(ls)
    kind = args.kind
    out = {"values": [format_rat(v) for v in ls.values], "median": format_rat(median(ls)), "kind": kind}
    try:
        closed = longest_path_length_1d(ls) if kind == "path" else longest_cycle_length_1d(ls)
        out["closed_form"] = format_rat(closed)
    except (UnsupportedError, ValueError) as exc:
        closed = None
        out["closed_form"] = None
        out["closed_form_note"] = str(exc)
    status = EXIT_OK
    print(f"median        {median(ls)}")
    print(f"closed form   {closed}")
    if n <= LINE_BRUTE_CAP:
        allx = all_structures(ls, kind)
        best = max(l for l, _ in allx)
        optima = sorted((s for l, s in allx if l == best), key=str)
        rows = []
        for s in optima:
            if kind == "path":
                verdict = is_longest_path_1d(s, ls) if n % 2 == 0 else is_longest_path_1d_odd(s, ls)
            else:
                verdict = is_longest_cycle_1d(s, ls)
            rows.append({"structure": str(s), "characterization": verdict})
        out["optimum"] = format_rat(best)
        out["optima"] = rows
        print(f"optimum       {best} ({len(optima)} optimal {kind}s)")
        for r in rows:
            print(f"  {r['structure']:<40} {'conforms' if r['characterization'] else 'DOES NOT CONFORM'}")
        if out["closed_form"] is not None and parse_rat(out["closed_form"]) != best:
            status = EXIT_FAIL
        if not all(r["characterization"] for r in rows):
            status = EXIT_FAIL
        if kind == "cycle" and n % 2 and n >= 3:
            short = [(l, s) for l, s in allx if cycle_deficit_lemma_check(ls, s)]
            worst = min((best - l for l, _ in short), default=None)
            need = cycle_deficit_lemma_check(ls, short[0][1]) if short else None
            out["deficit"] = {"short_cycles": len(short),
                              "required": format_rat(need) if need is not None else None,
                              "smallest_observed": format_rat(worst) if worst is not None else None,
                              "holds": worst is None or worst >= need}
            print(f"deficit       {len(short)} cycles cross the outer median gap fewer than "
                  f"{n - 1} times; smallest shortfall {worst} >= required {need}: "
                  f"{out['deficit']['holds']}")
            if not out["deficit"]["holds"]:
                status = EXIT_FAIL
    else:
        print(f"(brute-force listing skipped above {LINE_BRUTE_CAP} points)")
    _emit(args, {"command": " ".join(sys.argv[1:]), "result": out, "exit_status": status})
    return status


# -- render ------------------------------------------------------------------------------

def render_svg(ps: PointSet, structure: Structure | None = None, y_scale: float = 1.0,
               size: int = 800, margin: int = 40) -> str:
    """Deterministic SVG; ``y_scale`` only exaggerates the drawing."""
    xs = [float(p.x) for p in ps]
    ys = [float(p.y) * y_scale for p in ps]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span = max(x1 - x0, y1 - y0) or 1.0
    k = (size - 2 * margin) / span

    def tx(x):
        return margin + (x - x0) * k

    def ty(y):
        return size - margin - (y - y0) * k

    pos = {p.label: (tx(float(p.x)), ty(float(p.y) * y_scale)) for p in ps}
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             '<rect width="100%" height="100%" fill="white"/>']
    bad = set()
    if structure is not None:
        for e, f in crossing_pairs(structure, ps):
            bad.add(e)
            bad.add(f)
        for a, b in structure.edges():
            (ax, ay), (bx, by) = pos[a], pos[b]
            colour = "#d62728" if (a, b) in bad else "#1f77b4"
            width = 2.5 if (a, b) in bad else 1.5
            lines.append(f'<line x1="{ax:.3f}" y1="{ay:.3f}" x2="{bx:.3f}" y2="{by:.3f}" '
                         f'stroke="{colour}" stroke-width="{width}"/>')
    for p in ps:
        x, y = pos[p.label]
        lines.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="4" fill="black"/>')
        lines.append(f'<text x="{x + 6:.3f}" y="{y - 6:.3f}" font-family="monospace" '
                     f'font-size="12">{_xml(p.label)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _xml(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace("'", "&apos;")


def cmd_render(args) -> int:
    ps = PointSet.from_json(_read_json(args.points))
    st = _load_expected(args.structure) if args.structure else None
    out = args.out or "render.svg"
    write_atomic(out, render_svg(ps, st, args.y_scale))
    print(f"wrote {out}")
    return EXIT_OK


# -- suite -------------------------------------------------------------------------------

def cmd_suite(args) -> int:
    from .suites import SUITES, run_suite

    if args.name != "all" and args.name not in SUITES:
        raise UsageError(f"unknown suite {args.name!r}")
    checks = run_suite(args.name, seeds=args.seeds, seed=args.seed or 0)
    for c in checks:
        print(c.line())
    passed = sum(c.passed for c in checks)
    print(f"{passed}/{len(checks)} passed")
    status = EXIT_OK if passed == len(checks) else EXIT_FAIL
    _emit(args, {"command": " ".join(sys.argv[1:]), "results": [c.to_json() for c in checks],
                 "passed": passed, "total": len(checks), "exit_status": status})
    return status


# -- parser ------------------------------------------------------------------------------

def _globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--precision-bits", type=int, default=d(256),
                   help="initial working precision for length comparisons (default 256)")
    p.add_argument("--method", choices=("brute", "dp", "auto"), default=d("auto"))
    p.add_argument("--seed", type=int, default=d(None))
    p.add_argument("--out", default=d(None), help="output directory or file")
    p.add_argument("-v", "--verbose", action="count", default=d(0))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noncross", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a point set and its certificate")
    p.add_argument("kind", choices=sorted(C.CONSTRUCTIONS) + ["small-path", "small-cycle"])
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    _globals(p, suppress=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="solve exactly and check the optimum")
    p.add_argument("points")
    p.add_argument("--kind", choices=("path", "cycle", "matching"), required=True)
    p.add_argument("--expect", help="structure or certificate JSON to compare against")
    _globals(p, suppress=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("characterize-1d", help="optima of points on a line")
    p.add_argument("values", help="JSON list of rationals, or {\"values\": [...]}")
    p.add_argument("--kind", choices=("path", "cycle"), required=True)
    _globals(p, suppress=True)
    p.set_defaults(func=cmd_characterize)

    p = sub.add_parser("render", help="draw a point set (and structure) as SVG")
    p.add_argument("points")
    p.add_argument("structure", nargs="?")
    p.add_argument("--y-scale", type=float, default=1.0)
    _globals(p, suppress=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("suite", help="run a property battery")
    p.add_argument("name", choices=("all", "constructions", "line1d", "properties", "solvers"))
    p.add_argument("--seeds", type=int, help="instances per randomized battery")
    _globals(p, suppress=True)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"noncross: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
