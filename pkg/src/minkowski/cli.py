"""Command-line front end: ``mink classify|certify|decompose|prove|witness|plot``.

Exit codes: 0 affirmative or PASS, 1 negative or REFUTED, 2 usage or input error.
Machine-readable JSON goes to stdout (or ``--out``); human summaries go to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import scalar as sc
from .certify import (
    SUITES,
    Verdict,
    certify_forward_preservation,
    certify_hyperboloid_preservation,
    check_corollary,
    run_property_suite,
)
from .core import MAX_SPACE_DIMENSION, Event, Line, classify_line, classify_pair, classify_vector
from .errors import (
    InfeasibleExponent,
    LightLikePair,
    NotInExtendedGroup,
    UnknownSuite,
)
from .hyperboloid import hyperboloid_through_pair
from .serialize import decomposition_to_json, parse_event, parse_map, report_to_json, to_json_value
from .transforms import classify_transform, decompose

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def parse_dimensions(text: str) -> list:
    """``"3"``, ``"1..3"`` or ``"1,2,3"``."""
    text = text.strip()
    if ".." in text:
        lo, hi = (int(s) for s in text.split("..", 1))
        dims = list(range(lo, hi + 1))
    else:
        dims = [int(s) for s in text.split(",") if s.strip()]
    if not dims or any(d < 1 or d > MAX_SPACE_DIMENSION for d in dims):
        raise UsageError(f"dimensions must lie in 1..{MAX_SPACE_DIMENSION}: {text!r}")
    return dims


def parse_event_text(text: str) -> Event:
    """``"0,1/2,3"`` or a JSON list."""
    text = text.strip()
    if text.startswith("["):
        return parse_event(json.loads(text))
    parts = [p for p in text.split(",")]
    if len(parts) < 2:
        raise UsageError(f"an event needs a time and at least one space coordinate: {text!r}")
    return Event(*(sc.coerce(p) for p in parts))


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", default="3", help="space dimension(s): 3, 1..3 or 1,2,3 (default 3)")
    common.add_argument("--backend", choices=[b.value for b in sc.Backend], default="rational")
    common.add_argument("--seed", type=int, default=None, help="default: $MINK_SEED or 0")
    common.add_argument("--trials", type=_positive_int, default=1000)
    common.add_argument("--e-min", type=int, default=-8)
    common.add_argument("--e-max", type=int, default=8)
    common.add_argument("--tolerance", type=float, default=sc.DEFAULT_TOLERANCE)
    common.add_argument("--out", default=None, help="write the JSON (or SVG) document here")

    parser = argparse.ArgumentParser(prog="mink", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="causal class of events, pairs, lines; class of maps")
    p.add_argument("input", help="JSON file (event, pair, line or map); '-' for stdin")

    p = sub.add_parser("certify", parents=[common], help="certify a map file by sampling")
    p.add_argument("input")
    p.add_argument("--surface", choices=("hyperboloid", "forward", "corollary"), default="hyperboloid")

    p = sub.add_parser("decompose", parents=[common], help="translation-Lorentz-dilation-rotation factors")
    p.add_argument("input")

    p = sub.add_parser("prove", parents=[common], help="run property suites")
    p.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)} or 'all'")

    p = sub.add_parser("witness", parents=[common], help="hyperboloid H(v, 2^e) through two events")
    p.add_argument("u", help="event such as 0,0 (use -- before negative values)")
    p.add_argument("w")
    p.add_argument("--e", type=int, default=0)

    p = sub.add_parser("plot", parents=[common], help="render a scene file to SVG")
    p.add_argument("input")
    return parser


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def _as_backend(e: Event, backend: sc.Backend) -> Event:
    return e.to_float() if backend is sc.Backend.FLOAT64 else e


def _emit(doc, args, text: Optional[str] = None) -> None:
    payload = json.dumps(doc, indent=2) if not isinstance(doc, str) else doc
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload if payload.endswith("\n") else payload + "\n")
    else:
        print(payload)
    if text:
        print(text, file=sys.stderr)


def _cmd_classify(args) -> int:
    data = _load_json(args.input)
    backend = sc.Backend(args.backend)
    if isinstance(data, dict) and "matrix" in data:
        f = parse_map(data)
        cls = classify_transform(f)
        _emit({"kind": "map", "class": cls.value}, args, cls.value)
        return EXIT_OK
    if isinstance(data, list):
        data = {"kind": "event", "event": data}
    if not isinstance(data, dict) or "kind" not in data:
        raise UsageError("expected an event list, a map, or an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "event":
            cls = classify_vector(_as_backend(parse_event(data["event"]), backend))
        elif kind == "pair":
            cls = classify_pair(_as_backend(parse_event(data["u"]), backend),
                                _as_backend(parse_event(data["w"]), backend))
        elif kind == "line":
            cls = classify_line(Line(_as_backend(parse_event(data["base"]), backend),
                                     _as_backend(parse_event(data["direction"]), backend)))
        else:
            raise UsageError(f"unknown kind {kind!r}")
    except KeyError as exc:
        raise UsageError(f"missing field {exc}") from exc
    _emit({"kind": kind, "class": cls.value}, args, cls.value)
    return EXIT_OK


def _read_map(args):
    f = parse_map(_load_json(args.input))
    return f.to_float() if args.backend == sc.Backend.FLOAT64.value else f


def _cmd_certify(args) -> int:
    f = _read_map(args)
    if args.surface == "hyperboloid":
        report = certify_hyperboloid_preservation(f, trials=args.trials, seed=args.seed)
    elif args.surface == "forward":
        report = certify_forward_preservation(f, trials=args.trials, seed=args.seed)
    else:
        report = check_corollary(f, (args.e_min, args.e_max), trials=args.trials, seed=args.seed)
    _emit(report_to_json(report), args, f"{args.surface}: {report.verdict.value} ({report.note})")
    if report.verdict is Verdict.PASS:
        return EXIT_OK
    return EXIT_NEGATIVE if report.verdict is Verdict.REFUTED else EXIT_USAGE


def _cmd_decompose(args) -> int:
    f = _read_map(args)
    try:
        d = decompose(f)
    except NotInExtendedGroup as exc:
        print(f"not in the Poincaré-dilation group: {exc}", file=sys.stderr)
        _emit({"error": "NotInExtendedGroup", "reason": str(exc)}, args)
        return EXIT_NEGATIVE
    _emit(decomposition_to_json(d, residual=d.residual(f)), args, f"a = {sc.format_scalar(d.a)}")
    return EXIT_OK


def _cmd_prove(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        if name not in SUITES:
            raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    dims = parse_dimensions(args.n)
    reports = []
    for name in names:
        for n in dims:
            r = run_property_suite(name, n, args.trials, args.seed)
            reports.append(r)
            print(f"{name:<20} n={n}  {r.verdict.value:<8} {r.trials} trials  {r.elapsed_ms:8.1f} ms",
                  file=sys.stderr)
    ok = all(r.verdict is Verdict.PASS for r in reports)
    _emit({"verdict": "PASS" if ok else "REFUTED", "reports": [report_to_json(r) for r in reports]}, args)
    return EXIT_OK if ok else EXIT_NEGATIVE


def _cmd_witness(args) -> int:
    backend = sc.Backend(args.backend)
    u = _as_backend(parse_event_text(args.u), backend)
    w = _as_backend(parse_event_text(args.w), backend)
    try:
        H = hyperboloid_through_pair(u, w, args.e)
    except LightLikePair:
        print("light-like pair: no hyperboloid contains both events", file=sys.stderr)
        _emit({"error": "LightLikePair"}, args)
        return EXIT_NEGATIVE
    except InfeasibleExponent as exc:
        bound = exc.bound
        print(f"infeasible exponent: need 2^(e+1) <= sqrt(Q(u-w)); Q(u-w) = {bound}, e = {args.e}",
              file=sys.stderr)
        _emit({"error": "InfeasibleExponent", "e": args.e, "Q": to_json_value(bound),
               "bound": f"2^(e+1) <= sqrt(Q(u-w))"}, args)
        return EXIT_NEGATIVE
    _emit(to_json_value(H), args)
    return EXIT_OK


def _cmd_plot(args) -> int:
    from .plot import render_scene

    svg = render_scene(_load_json(args.input))
    _emit(svg, args)
    return EXIT_OK


COMMANDS = {
    "classify": _cmd_classify,
    "certify": _cmd_certify,
    "decompose": _cmd_decompose,
    "prove": _cmd_prove,
    "witness": _cmd_witness,
    "plot": _cmd_plot,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.seed is None:
        env = os.environ.get("MINK_SEED")
        try:
            args.seed = int(env) if env else 0
        except ValueError:
            print(f"mink: MINK_SEED must be an integer, got {env!r}", file=sys.stderr)
            return EXIT_USAGE
    if args.e_min > args.e_max:
        print("mink: --e-min must not exceed --e-max", file=sys.stderr)
        return EXIT_USAGE
    if args.tolerance < 0:
        print("mink: --tolerance must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command != "prove":
            parse_dimensions(args.n)
        with sc.using_tolerance(args.tolerance):
            return COMMANDS[args.command](args)
    except (UsageError, UnknownSuite, ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        # GeometryError subclasses ValueError: bad input geometry is a usage error
        print(f"mink: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
