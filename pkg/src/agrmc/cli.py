"""Command line front end.

Exit codes: 0 Yes, 1 No, 2 Inconclusive, 3 usage or specification error,
4 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .agr import _engine_fn, global_formula, verify_agr
from .assumptions import generate_assumption
from .composer import Caps, ResourceLimit, compose
from .export import export_dot, export_json
from .lang import (
    SpecError,
    parse_module,
    parse_spec,
    pretty_print,
    validate_spec,
)
from .runner import run_verification
from .voting import generate_simple_voting

EXIT_YES = 0
EXIT_NO = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3
EXIT_RESOURCE = 4

_VERDICT_EXIT = {"Yes": EXIT_YES, "No": EXIT_NO, "Inconclusive": EXIT_INCONCLUSIVE}


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; the contract reserves 2 for
    Inconclusive, so usage errors are remapped."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_spec(path: str):
    return parse_spec(_read_text(path))


def cmd_compose(args) -> int:
    doc = _load_spec(args.spec)
    model = compose(doc, caps=Caps.from_env())
    if args.export == "json":
        sys.stdout.write(export_json(model))
    elif args.export == "dot":
        sys.stdout.write(export_dot(model))
    else:
        print(f"modules: {', '.join(m.name for m in doc.modules)}")
        print(f"states: {model.n_states}")
        print(f"transitions: {model.n_transitions}")
        try:
            report = validate_spec(doc)
            if report.total:
                print("totality: no gaps")
            else:
                print(f"totality: {len(report.gaps)} gap(s), stutter applies")
        except ResourceWarning:
            print("totality: skipped (too many input combinations)")
    return EXIT_YES


def cmd_assume(args) -> int:
    doc = _load_spec(args.spec)
    a = generate_assumption(doc, args.module, args.distance, caps=Caps.from_env())
    if args.export == "json":
        sys.stdout.write(export_json(a))
    elif args.export == "dot":
        sys.stdout.write(export_dot(a))
    else:
        sys.stdout.write(pretty_print(a))
    print(
        f"assumption {a.name}: {len(a.states)} states, "
        f"{len(a.transitions)} transitions",
        file=sys.stderr,
    )
    return EXIT_YES


def cmd_verify(args) -> int:
    doc = _load_spec(args.spec)
    assumption = None
    if args.assumption:
        assumption = parse_module(_read_text(args.assumption))
    payload = run_verification(
        doc,
        mode=args.mode,
        engine=args.engine,
        distance=args.distance,
        assumption=assumption,
        caps=Caps.from_env(),
    )
    print(json.dumps(payload, indent=1, sort_keys=True))
    return _VERDICT_EXIT[payload["verdict"]]


def _bench_rows_mono(doc, caps) -> list[tuple]:
    rows = []
    formula = global_formula(doc)
    t0 = time.perf_counter()
    try:
        model = compose(doc, caps=caps)
    except ResourceLimit:
        dt = time.perf_counter() - t0
        for engine in ("dfs", "apprx"):
            rows.append(("mono", engine, "-", "-", "memout", dt))
        return rows
    compose_t = time.perf_counter() - t0
    for engine in ("dfs", "apprx"):
        t1 = time.perf_counter()
        res = _engine_fn(engine)(model, formula)
        dt = compose_t + (time.perf_counter() - t1)
        rows.append(
            ("mono", engine, model.n_states, model.n_transitions, res.verdict, dt)
        )
    return rows


def _bench_rows_agr(doc, caps) -> list[tuple]:
    rows = []
    for engine in ("dfs", "apprx"):
        t0 = time.perf_counter()
        try:
            report = verify_agr(doc, distance=1, engine=engine, caps=caps)
        except ResourceLimit:
            rows.append(("agr", engine, "-", "-", "memout", time.perf_counter() - t0))
            continue
        dt = time.perf_counter() - t0
        st = max(t.model_states for t in report.tasks)
        tr = max(t.model_transitions for t in report.tasks)
        rows.append(("agr", engine, st, tr, report.combined, dt))
    return rows


def cmd_bench(args) -> int:
    if args.suite != "voting":
        raise SpecError(f"unknown benchmark suite {args.suite!r}")
    doc = generate_simple_voting(args.voters)
    caps = Caps.from_env()
    rows = []
    if args.mode in ("mono", "both"):
        rows.extend(_bench_rows_mono(doc, caps))
    if args.mode in ("agr", "both"):
        rows.extend(_bench_rows_agr(doc, caps))
    print(f"voting k={args.voters}")
    print(
        f"{'pipeline':<9} {'engine':<6} {'states':>9} {'transitions':>12} "
        f"{'verdict':<13} {'time_s':>9}"
    )
    for pipeline, engine, st, tr, verdict, dt in rows:
        print(
            f"{pipeline:<9} {engine:<6} {st!s:>9} {tr!s:>12} "
            f"{verdict:<13} {dt:>9.3f}"
        )
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="agrmc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compose", help="build the full composition of a spec")
    p.add_argument("spec", help="path to a .stv specification")
    p.add_argument("--export", choices=("json", "dot"), default=None)
    p.set_defaults(fn=cmd_compose)

    p = sub.add_parser("assume", help="generate an assumption for one module")
    p.add_argument("spec")
    p.add_argument("--module", required=True, help="target module name")
    p.add_argument("--distance", type=int, default=1)
    p.add_argument("--export", choices=("json", "dot"), default=None)
    p.set_defaults(fn=cmd_assume)

    p = sub.add_parser("verify", help="run a verification request")
    p.add_argument("spec")
    p.add_argument("--mode", choices=("mono", "agr"), required=True)
    p.add_argument("--engine", choices=("dfs", "apprx"), default="dfs")
    p.add_argument("--distance", type=int, default=1)
    p.add_argument(
        "--assumption",
        default=None,
        help="path to a module file replacing the generated assumptions",
    )
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", help="run a benchmark suite row")
    p.add_argument("suite", choices=("voting",))
    p.add_argument("--voters", type=int, required=True)
    p.add_argument("--mode", choices=("mono", "agr", "both"), default="both")
    p.set_defaults(fn=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
