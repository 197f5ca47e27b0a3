"""Command-line interface.

Subcommands:

    orbits N SHAPE [--strong]        enumerate pattern classes
    enumerate-cn N                   enumerate canonical polynomials
    represent SPEC K SHAPE           discrete representative as a table file
    classify FILE [--family ...]     structural classification of a table
    falsify NAME [--mode ...]        randomized search for a counterexample
    verify-witness REPORT            replay a stored witness

Every command is a deterministic function of its arguments, input files
and seed.  Exit codes: 0 member / no violation, 1 witness found, 2 input
error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from .chains import (
    ChainMismatchError,
    RepresentationError,
    discrete_representative,
    is_smooth,
    table_predicates,
)
from .classify import (
    DEFAULT_SEED,
    CMIndependentForm,
    CMSingleForm,
    OrderInvariantForm,
    Witness,
    check_cm_independent,
    check_cm_single,
    check_order_invariant,
    falsify_cm,
    falsify_invariance,
)
from .documents import (
    ReportDocument,
    TableDocument,
    TableFormatError,
    format_table,
    parse_report,
    parse_table,
)
from .domain import IntervalSpec
from .functions import NamedFunction, constant_polynomial, resolve
from .lattice import ConstantPolynomialError, SetFunction, canonicalize, enumerate_cn
from .orbits import SizeCapError, enumerate_orbits, enumerate_strong_orbits

TOOL = f"ordagg {__version__}"

EXIT_OK = 0
EXIT_WITNESS = 1
EXIT_INPUT = 2


def _interval(arg: str) -> IntervalSpec:
    return IntervalSpec.from_name(arg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordagg",
        description="classify and enumerate aggregation functions on ordinal scales",
    )
    parser.add_argument("--version", action="version", version=TOOL)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbits", help="enumerate pattern classes of E^n")
    p.add_argument("n", type=int)
    p.add_argument("shape", help="open | left-closed | right-closed | closed")
    p.add_argument("--strong", action="store_true", help="independent-scale classes")

    p = sub.add_parser("enumerate-cn", help="enumerate canonical polynomials")
    p.add_argument("n", type=int)

    p = sub.add_parser("represent", help="discrete representative on a chain")
    p.add_argument("spec", help="function name (min, median3, proj1, mode3, "
                                "const-bottom, ...) or a min-true spec like [{1},{2}]")
    p.add_argument("size", type=int, help="chain size")
    p.add_argument("shape")
    p.add_argument("--arity", type=int, default=None,
                   help="arity for a min-true spec (default: largest index used)")
    p.add_argument("--labels", nargs="*", default=None)

    p = sub.add_parser("classify", help="classify a table file")
    p.add_argument("table")
    p.add_argument("--family", choices=("all", "oi", "cm1", "cmi"), default="all")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("falsify", help="search for a violation of a family")
    p.add_argument("function")
    p.add_argument("--mode", choices=("inv", "cm1", "cmi"), default="inv")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--shape", default="open")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("verify-witness", help="replay the witness in a report")
    p.add_argument("report")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (SizeCapError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def _dispatch(args) -> int:
    if args.command == "orbits":
        return cmd_orbits(args)
    if args.command == "enumerate-cn":
        return cmd_enumerate_cn(args)
    if args.command == "represent":
        return cmd_represent(args)
    if args.command == "classify":
        return cmd_classify(args)
    if args.command == "falsify":
        return cmd_falsify(args)
    if args.command == "verify-witness":
        return cmd_verify_witness(args)
    raise AssertionError(args.command)


def cmd_orbits(args) -> int:
    interval = _interval(args.shape)
    if args.strong:
        orbits = enumerate_strong_orbits(args.n, interval)
    else:
        orbits = enumerate_orbits(args.n, interval)
    for orbit in orbits:
        print(orbit.to_text())
    print(f"count: {len(orbits)}")
    return EXIT_OK


def cmd_enumerate_cn(args) -> int:
    members = enumerate_cn(args.n)
    for alpha in members:
        print(f"min-true: {alpha.to_min_true_text()}")
    print(f"count: {len(members)}")
    return EXIT_OK


def _parse_min_true_spec(spec: str, arity: int | None) -> SetFunction:
    body = spec.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"malformed min-true spec {spec!r}")
    body = body[1:-1].strip()
    subsets = []
    if body:
        import re

        for part in re.findall(r"\{([0-9, ]*)\}", body):
            subsets.append(
                tuple(int(tok) for tok in part.replace(",", " ").split())
            )
        rebuilt = ",".join(
            "{" + ",".join(str(i) for i in s) + "}" for s in subsets
        )
        if rebuilt.replace(",", "").replace(" ", "") != body.replace(",", "").replace(
            " ", ""
        ):
            raise ValueError(f"malformed min-true spec {spec!r}")
    used = max((i for s in subsets for i in s), default=0)
    n = arity if arity is not None else max(used, 1)
    if used > n:
        raise ValueError(f"index {used} exceeds arity {n}")
    bits = 0
    for s in subsets:
        mask = 0
        for i in s:
            if i < 1:
                raise ValueError("coordinate indices start at 1")
            mask |= 1 << (i - 1)
        bits |= 1 << mask
    return SetFunction(n, bits)


def cmd_represent(args) -> int:
    interval = _interval(args.shape)
    spec = args.spec.strip()
    if spec.startswith("["):
        raw = _parse_min_true_spec(spec, args.arity)
        source = canonicalize(raw, interval)
        arity = source.arity
    else:
        named = resolve(spec)
        arity = named.arity
        if named.polynomial is not None:
            source = named.polynomial
        elif named.constant is not None:
            source = constant_polynomial(named, interval)
        else:
            source = named.evaluate  # mode and friends: exact evaluables
    try:
        table = discrete_representative(source, args.size, interval, arity=arity)
    except RepresentationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    labels = tuple(args.labels) if args.labels else None
    if labels and len(labels) != args.size:
        print("error: need one label per rank", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(format_table(TableDocument(interval, table, labels)))
    return EXIT_OK


def _verdict(value) -> str:
    return "yes" if value else "no"


def cmd_classify(args) -> int:
    try:
        with open(args.table, "r", encoding="utf-8") as handle:
            doc = parse_table(handle.read())
    except TableFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    table, interval = doc.table, doc.interval
    wanted = {"all": ("oi", "cm1", "cmi")}.get(args.family, (args.family,))

    verdicts: list[tuple[str, str]] = []
    decomposition: list[str] = []
    notes: list[str] = []
    witness: Witness | None = None
    failed = False

    if doc.labels:
        notes.append("labels: " + " ".join(doc.labels))

    def record(witness_candidate):
        nonlocal witness, failed
        failed = True
        if witness is None:
            witness = witness_candidate

    if "oi" in wanted:
        if not table.square:
            if args.family == "oi":
                print("error: order invariance needs a square table", file=sys.stderr)
                return EXIT_INPUT
            verdicts.append(("order-invariant", "n/a"))
        else:
            outcome = check_order_invariant(table, interval)
            if isinstance(outcome, Witness):
                verdicts.append(("order-invariant", "no"))
                record(outcome)
            else:
                verdicts.append(("order-invariant", "yes"))
                for orbit, assignment in outcome.assignments:
                    decomposition.append(
                        f"orbit {orbit.to_text()}: {assignment.describe()}"
                    )

    if "cm1" in wanted:
        if not table.inputs_uniform:
            if args.family == "cm1":
                print("error: cm-single needs equal input chains", file=sys.stderr)
                return EXIT_INPUT
            verdicts.append(("cm-single", "n/a"))
        else:
            outcome = check_cm_single(table, interval, minimize_g=True)
            if isinstance(outcome, Witness):
                verdicts.append(("cm-single", "no"))
                record(outcome)
            else:
                verdicts.append(("cm-single", "yes"))
                decomposition.append(f"cm-single g-classes: {len(outcome.g_classes)}")
                for i, g in enumerate(outcome.g_classes):
                    decomposition.append(f"cm-single g {i}: {g.describe()}")
                for orbit, coord, gi in outcome.assignments:
                    decomposition.append(
                        f"cm-single class {orbit.to_text()}: coord {coord}, g {gi}"
                    )

    if "cmi" in wanted:
        outcome = check_cm_independent(table, interval, minimize_g=True)
        if isinstance(outcome, Witness):
            verdicts.append(("cm-independent", "no"))
            record(outcome)
        else:
            verdicts.append(("cm-independent", "yes"))
            decomposition.append(
                f"cm-independent g-classes: {len(outcome.g_classes)}"
            )
            for orbit, coord, gi in outcome.assignments:
                decomposition.append(
                    f"cm-independent class {orbit.to_text()}: coord {coord}, g {gi}"
                )

    verdicts.append(("nondecreasing", _verdict(_nondecreasing(table))))
    verdicts.append(("smooth", _verdict(is_smooth(table))))
    if table.square:
        predicates = table_predicates(table)
        verdicts.append(("idempotent", _verdict(predicates.idempotent)))
        verdicts.append(("internal", _verdict(predicates.internal)))
        verdicts.append(("symmetric", _verdict(predicates.symmetric)))
        verdicts.append(("self-dual", _verdict(predicates.self_dual)))

    report = ReportDocument(
        tool=TOOL,
        source=f"table {args.table}",
        interval=interval.name,
        seed=args.seed,
        verdicts=tuple(verdicts),
        decomposition=tuple(decomposition),
        witness=witness,
        notes=tuple(notes),
    )
    sys.stdout.write(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_WITNESS if failed else EXIT_OK


def _nondecreasing(table) -> bool:
    from .chains import is_nondecreasing

    return is_nondecreasing(table)


def cmd_falsify(args) -> int:
    interval = _interval(args.shape)
    named = resolve(args.function)
    if args.mode == "inv":
        witness = falsify_invariance(
            named.evaluate, named.arity, interval, trials=args.trials, seed=args.seed
        )
    else:
        witness = falsify_cm(
            named.evaluate,
            named.arity,
            interval,
            mode="single" if args.mode == "cm1" else "independent",
            trials=args.trials,
            seed=args.seed,
        )
    notes = (f"trials: {args.trials}",)
    if witness is None:
        notes += ("no violation in budget",)
    report = ReportDocument(
        tool=TOOL,
        source=f"function {named.name}",
        interval=interval.name,
        seed=args.seed,
        verdicts=((_mode_name(args.mode), _verdict(witness is None)),),
        witness=witness,
        notes=notes,
    )
    sys.stdout.write(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_WITNESS if witness is not None else EXIT_OK


def _mode_name(mode: str) -> str:
    return {"inv": "order-invariant", "cm1": "cm-single", "cmi": "cm-independent"}[mode]


def cmd_verify_witness(args) -> int:
    try:
        with open(args.report, "r", encoding="utf-8") as handle:
            report = parse_report(handle.read())
    except (ValueError, KeyError) as exc:
        print(f"error: cannot parse report: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if report.witness is None:
        print("error: report carries no witness", file=sys.stderr)
        return EXIT_INPUT
    fn = None
    if report.source.startswith("function "):
        fn = resolve(report.source.split(" ", 1)[1]).evaluate
    try:
        confirmed = report.witness.replay(fn=fn)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print("witness confirmed" if confirmed else "witness NOT confirmed")
    return EXIT_OK if confirmed else EXIT_WITNESS


if __name__ == "__main__":
    sys.exit(main())
