"""Command line interface.

Exit codes: 0 ok, 1 invalid input, 2 internal error (including a failed
round trip or a brute-force oracle disagreeing with a closed form).
With ``--json`` stdout carries exactly one JSON report.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import mpmath

from . import counting
from .crossing import (
    CrossingError,
    almost_virtual_distance,
    classify_triple,
    format_crossing_notation,
    is_almost_virtual,
    parse_crossing_notation,
    to_type,
    validate_crossing,
)
from .gauss import GaussCodeError, canonicalize_gauss, format_gauss, parse_gauss
from .petal import (
    PetalDiagram,
    PetalError,
    gauss_from_petal,
    petal_from_gauss,
    roundtrip,
    segment_table,
    validate_petal,
)
from .render import render_crossing_svg, render_petal_svg

OK, INVALID, INTERNAL = "ok", "invalid-input", "internal-error"
COMMANDS = ("validate", "count", "enumerate", "petal", "recover", "roundtrip", "render")
EXIT_CODES = {OK: 0, INVALID: 1, INTERNAL: 2}


@dataclass
class CliReport:
    command: str
    status: str = OK
    payload: dict = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "status": self.status,
            "payload": self.payload,
            "diagnostics": self.diagnostics,
        }

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


class InputError(Exception):
    """Bad user input; becomes an invalid-input report."""


def describe_type(ctype) -> dict:
    info: dict = {"classification": None, "almost_virtual": is_almost_virtual(ctype)}
    if ctype.n == 2:
        info["classification"] = "classical 2-crossing" if len(ctype.parts) == 1 else "virtual 2-crossing"
    elif ctype.n == 3:
        info["classification"] = f"Type {classify_triple(ctype).value}"
    if info["almost_virtual"]:
        info["distance"] = almost_virtual_distance(ctype)
        info["reflection_class"] = almost_virtual_distance(ctype, up_to_reflection=True)
    return info


def cmd_validate(args) -> CliReport:
    report = CliReport("validate")
    try:
        spec = parse_crossing_notation(args.notation)
    except CrossingError as exc:
        raise InputError(str(exc)) from exc
    verdict = validate_crossing(spec)
    report.payload = {"notation": format_crossing_notation(spec), "n": spec.n, "valid": verdict.valid}
    if not verdict.valid:
        report.status = INVALID
        report.payload["offending_triples"] = [list(t) for t in verdict.offending_triples]
        report.diagnostics.append(
            "forbidden triple(s) with two classical and one virtual crossing: "
            + ", ".join("{%d,%d,%d}" % t for t in verdict.offending_triples)
        )
        return report
    ctype = to_type(spec)
    report.payload["classes"] = [list(p) for p in ctype.parts]
    report.payload.update(describe_type(ctype))
    return report


COUNT_FIELDS = ("bell", "fragmented", "types", "almost", "estimate")


def cmd_count(args) -> CliReport:
    n = args.n
    if n < 2:
        raise InputError("n must be at least 2")
    wanted = [f for f in COUNT_FIELDS if getattr(args, f)]
    if args.all or not wanted:
        wanted = list(COUNT_FIELDS)
    report = CliReport("count")
    payload: dict = {"n": n}
    if "bell" in wanted:
        payload["bell"] = str(counting.bell(n))
    if "fragmented" in wanted:
        payload["fragmented"] = str(counting.fragmented_count(n))
        payload["fragmented_by_parts"] = [str(counting.fragmented_count_by_parts(n, k)) for k in range(1, n + 1)]
    if "types" in wanted:
        payload["fix_by_divisor"] = {str(d): str(counting.fix_count(n, d)) for d in counting.divisors(n)}
        payload["vcount"] = str(counting.vcount(n))
        if counting.is_prime(n):
            payload["vcount_prime"] = str(counting.vcount_prime(n))
    if "almost" in wanted:
        payload["almost_virtual"] = counting.almost_virtual_count(n)
        payload["almost_virtual_reflection"] = counting.almost_virtual_count(n, up_to_reflection=True)
    if "estimate" in wanted:
        payload["estimate"] = mpmath.nstr(counting.v_estimate(n), 15)
        payload["ratio"] = counting.v_ratio(n)
    report.payload = payload

    if args.oracle:
        if n > args.bound:
            raise InputError(f"n={n} exceeds the brute-force bound {args.bound}; raise --bound to allow it")
        checks = _oracle_checks(n, wanted, args)
        report.payload["oracle"] = {name: ok for name, ok in checks}
        failed = [name for name, ok in checks if not ok]
        if failed:
            report.status = INTERNAL
            report.diagnostics.append("brute force disagrees with closed form: " + ", ".join(failed))
    return report


def _oracle_checks(n: int, wanted: list[str], args) -> list[tuple[str, bool]]:
    bound = args.bound
    checks = []
    if "bell" in wanted and n <= min(bound, 7):
        checks.append(("bell", counting.count_valid_pair_patterns(n, bound) == counting.bell(n)))
    if "fragmented" in wanted:
        checks.append(
            ("fragmented", sum(1 for _ in counting.labeled_types(n, bound)) == counting.fragmented_count(n))
        )
    if "types" in wanted:
        census = counting.enumerate_types(n, bound=bound, workers=args.workers)
        checks.append(("vcount", len(census) == counting.vcount(n)))
        for d in counting.divisors(n):
            checks.append((f"fix[{d}]", counting.brute_force_fix_count(n, d, bound) == counting.fix_count(n, d)))
    if "almost" in wanted:
        checks.append(("almost_virtual", counting.almost_virtual_census(n, bound=bound, workers=args.workers) == n - 1))
        checks.append(
            (
                "almost_virtual_reflection",
                counting.almost_virtual_census(n, up_to_reflection=True, bound=bound, workers=args.workers)
                == n // 2,
            )
        )
    return checks


def cmd_enumerate(args) -> CliReport:
    if args.n < 2:
        raise InputError("n must be at least 2")
    try:
        census = counting.enumerate_types(
            args.n, include_reflection=args.reflect, bound=args.bound, workers=args.workers
        )
    except counting.BruteForceBoundError as exc:
        raise InputError(str(exc)) from exc
    entries = []
    for t in census:
        entry = {"type": [list(p) for p in t.parts], "notation": format_crossing_notation(t.to_spec())}
        entry.update(describe_type(t))
        entries.append(entry)
    return CliReport(
        "enumerate",
        payload={"n": args.n, "reflect": args.reflect, "count": len(entries), "types": entries},
    )


def _parse_code(text: str):
    try:
        return parse_gauss(text)
    except GaussCodeError as exc:
        raise InputError(str(exc)) from exc


def cmd_petal(args) -> CliReport:
    code = canonicalize_gauss(_parse_code(args.code))
    diagram = petal_from_gauss(code)
    table = segment_table(code)
    if args.out:
        Path(args.out).write_text(diagram.dumps() + "\n")
    if args.svg:
        Path(args.svg).write_text(render_petal_svg(diagram))
    return CliReport(
        "petal",
        payload={
            "gauss": format_gauss(code),
            "petals": diagram.m,
            "heights": list(diagram.heights),
            "classical_pairs": [list(p) for p in sorted(diagram.classical_pairs)],
            "segments": [[str(t), list(s)] for t, s in zip(table.tokens, table.segments)],
            "dummy_segment": table.dummy,
        },
    )


def _load_petal(path: str) -> PetalDiagram:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(str(exc)) from exc
    try:
        diagram = PetalDiagram.loads(text)
    except PetalError as exc:
        raise InputError(str(exc)) from exc
    problems = validate_petal(diagram)
    if problems:
        raise InputError("; ".join(problems))
    return diagram


def cmd_recover(args) -> CliReport:
    diagram = _load_petal(args.file)
    try:
        code = gauss_from_petal(diagram)
    except PetalError as exc:
        raise InputError(f"unsupported diagram: {exc}") from exc
    return CliReport("recover", payload={"gauss": format_gauss(code), "crossings": code.crossings})


def _roundtrip_one(text: str) -> dict:
    try:
        code = parse_gauss(text)
    except GaussCodeError as exc:
        return {"input": text, "error": str(exc)}
    original, recovered = roundtrip(code)
    a, b = format_gauss(original), format_gauss(recovered)
    return {"input": text, "canonical": a, "recovered": b, "petals": petal_from_gauss(original).m, "match": a == b}


def cmd_roundtrip(args) -> CliReport:
    if args.batch:
        try:
            source = sys.stdin.read() if args.batch == "-" else Path(args.batch).read_text()
        except OSError as exc:
            raise InputError(str(exc)) from exc
        inputs = [line.strip() for line in source.splitlines()]
    elif args.code is not None:
        inputs = [args.code]
    else:
        raise InputError("give a code or --batch FILE")

    if args.workers > 1 and len(inputs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_roundtrip_one, inputs, chunksize=16))
    else:
        results = [_roundtrip_one(t) for t in inputs]

    report = CliReport("roundtrip")
    bad_input = [r for r in results if "error" in r]
    mismatched = [r for r in results if not r.get("match", True)]
    if args.batch:
        report.payload = {
            "total": len(results),
            "matched": sum(1 for r in results if r.get("match")),
            "results": results,
        }
    else:
        report.payload = results[0]
    for r in bad_input:
        report.diagnostics.append(f"{r['input']!r}: {r['error']}")
    for r in mismatched:
        report.diagnostics.append(f"round trip changed {r['canonical']} into {r['recovered']}")
    if mismatched:
        report.status = INTERNAL
    elif bad_input:
        report.status = INVALID
    return report


def cmd_render(args) -> CliReport:
    sources = [x for x in (args.petal, args.crossing, args.gauss) if x is not None]
    if len(sources) != 1:
        raise InputError("give exactly one of --petal FILE, --crossing NOTATION, --gauss CODE")
    if args.crossing is not None:
        try:
            spec = parse_crossing_notation(args.crossing)
        except CrossingError as exc:
            raise InputError(str(exc)) from exc
        verdict = validate_crossing(spec)
        if not verdict.valid:
            raise InputError(f"invalid multicrossing, forbidden triples {[list(t) for t in verdict.offending_triples]}")
        svg = render_crossing_svg(spec)
        kind = "crossing"
    else:
        diagram = _load_petal(args.petal) if args.petal is not None else petal_from_gauss(_parse_code(args.gauss))
        svg = render_petal_svg(diagram)
        kind = "petal"
    report = CliReport("render", payload={"kind": kind, "bytes": len(svg.encode())})
    if args.out:
        Path(args.out).write_text(svg)
        report.payload["out"] = args.out
    else:
        report.payload["svg"] = svg
    return report


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage mistakes are invalid input (exit 1), not argparse's default exit 2
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    # shared by the main parser and every subparser, so flags work on either side
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = _Parser(add_help=False)
    p.add_argument("--json", action="store_true", default=default(False), help="print one JSON report")
    p.add_argument("--oracle", action="store_true", default=default(False), help="re-derive counts by brute force")
    p.add_argument("--bound", type=_positive, default=default(counting.DEFAULT_BOUND), help="brute-force size limit")
    p.add_argument("--workers", type=_positive, default=default(1), help="worker processes for census/batch")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="vmcross",
        description="Virtual multicrossings, type counts and petal diagrams of virtual knots.",
        parents=[_global_options(False)],
    )
    common = [_global_options(True)]
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=common, help="check a crossing such as '{1243; (1,2),(1,3)}'")
    p.add_argument("notation")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("count", parents=common, help="exact type counts for n arcs")
    p.add_argument("n", type=int)
    for name in COUNT_FIELDS + ("all",):
        p.add_argument(f"--{name}", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("enumerate", parents=common, help="list crossing types up to rotation")
    p.add_argument("n", type=int)
    p.add_argument("--reflect", action="store_true", help="also identify mirror images")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("petal", parents=common, help="compile a signed Gauss code into a petal diagram")
    p.add_argument("code")
    p.add_argument("--out", help="write the petal diagram JSON here")
    p.add_argument("--svg", help="write an SVG drawing here")
    p.set_defaults(func=cmd_petal)

    p = sub.add_parser("recover", parents=common, help="read the Gauss code off a petal JSON file")
    p.add_argument("file", help="petal JSON file, or - for stdin")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("roundtrip", parents=common, help="compile, recover and compare")
    p.add_argument("code", nargs="?")
    p.add_argument("--batch", help="file with one code per line, or - for stdin")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("render", parents=common, help="draw a petal diagram or a crossing side view")
    p.add_argument("--petal", help="petal JSON file")
    p.add_argument("--crossing", help="crossing notation")
    p.add_argument("--gauss", help="signed Gauss code, compiled first")
    p.add_argument("--out", "-o", help="output SVG path (default: stdout)")
    p.set_defaults(func=cmd_render)
    return parser


def _print_text(report: CliReport, out):
    if report.command == "render" and "svg" in report.payload:
        out.write(report.payload["svg"])
        return
    if report.status != OK:
        print(f"status: {report.status}", file=out)
    for key, value in report.payload.items():
        if value is None:
            continue
        if key == "types":
            for entry in value:
                tag = entry["classification"] or ""
                if entry.get("almost_virtual"):
                    tag = (tag + " " if tag else "") + f"almost-virtual d={entry['distance']}"
                print(f"  {entry['notation']}  {tag}".rstrip(), file=out)
        elif key == "results":
            for r in value:
                print(f"  {r.get('canonical', r['input'])}: {'ok' if r.get('match') else r.get('error', 'MISMATCH')}", file=out)
        elif isinstance(value, (dict, list)):
            print(f"{key}: {json.dumps(value)}", file=out)
        else:
            print(f"{key}: {value}", file=out)
    for d in report.diagnostics:
        print(f"! {d}", file=out)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        command = next((a for a in argv if a in COMMANDS), "vmcross")
        report = CliReport(command, INVALID, diagnostics=[str(exc)])
        if "--json" in argv:
            out.write(json.dumps(report.to_json()) + "\n")
        else:
            print(f"! {exc}", file=sys.stderr)
        return report.exit_code
    try:
        report = args.func(args)
    except InputError as exc:
        report = CliReport(args.command, INVALID, diagnostics=[str(exc)])
    except Exception as exc:  # noqa: BLE001 - any crash is reported, not raised
        report = CliReport(args.command, INTERNAL, diagnostics=[f"{type(exc).__name__}: {exc}"])
    if args.json:
        out.write(json.dumps(report.to_json(), sort_keys=False) + "\n")
    else:
        _print_text(report, out)
    return report.exit_code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
