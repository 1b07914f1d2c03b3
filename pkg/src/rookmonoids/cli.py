"""Command-line front end.

Subcommands: elements, green, ideals, congruences {predict,enumerate,verify},
counterexample, erratum.  Output is deterministic for a fixed invocation:
JSON is emitted with sorted keys and no timestamps, so repeated runs are
byte-identical.

Exit codes: 0 success, 2 budget refusal or bad arguments, 3 internal
invariant violation (a constructed congruence failing its own checks).
"""

from __future__ import annotations

import argparse
import json
import sys

from .congruences import congruence_lattice, lattice_to_dot
from .core import (
    InvariantViolation,
    ResourceLimitError,
    compose,
    conjugation_escape_witness,
    enumerate_universe,
    format_element_text,
    in_unit_group,
    invert,
    is_member,
    theta,
    universe_to_json,
)
from .families import predicted_congruences, verify_classification
from .green import enumerate_ideals, green_partition, green_report, j_order_dot

EXIT_OK = 0
EXIT_BUDGET = 2
EXIT_INVARIANT = 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rookmonoids",
        description="orthogonal and symplectic rook monoid toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_n=4):
        p.add_argument("--family", choices=("r", "sr", "or"), default="or")
        p.add_argument("--n", type=int, default=default_n, help="even degree")
        p.add_argument("--format", choices=("json", "dot", "text"), default="text")
        p.add_argument("--out", help="write output to this path instead of stdout")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--force-budget", action="store_true",
                       help="override the congruence lattice element budget")

    common(sub.add_parser("elements", help="enumerate a monoid universe"))
    common(sub.add_parser("green", help="Green classes, counts, and formulas"))
    common(sub.add_parser("ideals", help="all absorbing down-sets of J-classes"))

    cong = sub.add_parser("congruences", help="congruence computations")
    verb = cong.add_subparsers(dest="verb", required=True)
    common(verb.add_parser("predict", help="instantiate the predicted families"))
    common(verb.add_parser("enumerate", help="brute-force congruence lattice"))
    common(verb.add_parser("verify", help="diff predictions against the lattice"))

    counter = sub.add_parser(
        "counterexample",
        help="exhibit a conjugate of an orthogonal element escaping SR",
    )
    common(counter, default_n=8)

    common(sub.add_parser(
        "erratum",
        help="report the known closed-form and ideal-list discrepancies",
    ))
    return parser


def _emit(args, payload, *, dot=None, text=None):
    if args.format == "json":
        body = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    elif args.format == "dot":
        if dot is None:
            raise ValueError(f"no dot rendering for the {args.command} command")
        body = dot
    else:
        body = text if text is not None else json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _universe(args):
    return enumerate_universe(args.family, args.n)


def cmd_elements(args):
    universe = _universe(args)
    histogram = universe.rank_histogram()
    lines = [f"{universe.family}_{universe.n}: {len(universe)} elements"]
    lines += [f"  rank {k}: {v}" for k, v in sorted(histogram.items())]
    payload = universe_to_json(universe)
    payload["size"] = len(universe)
    payload["rank_histogram"] = {str(k): v for k, v in histogram.items()}
    _emit(args, payload, text="\n".join(lines) + "\n")
    return EXIT_OK


def cmd_green(args):
    universe = _universe(args)
    green = green_partition(universe)
    report = green_report(universe, green)
    lines = [f"{universe.family}_{universe.n}: {len(universe)} elements"]
    for rel in ("L", "R", "H", "J"):
        lines.append(f"  {rel}-classes: {report['counts'][rel]['classes']}")
    for entry in report["discrepancies"]:
        lines.append(f"  note[{entry['kind']}]: {entry.get('note', entry)}")
    _emit(args, report, dot=j_order_dot(green), text="\n".join(lines) + "\n")
    return EXIT_OK


def cmd_ideals(args):
    universe = _universe(args)
    ideals = enumerate_ideals(universe)
    payload = {
        "family": universe.family,
        "n": universe.n,
        "ideals": [
            {"kind": d.kind, "k": d.k, "size": d.size, "members": list(d.members)}
            for d in ideals
        ],
    }
    lines = [f"{universe.family}_{universe.n}: {len(ideals)} absorbing down-sets"]
    lines += [f"  {d.kind}(k={d.k}): {d.size} elements" for d in ideals]
    _emit(args, payload, text="\n".join(lines) + "\n")
    return EXIT_OK


def cmd_congruences_predict(args):
    universe = _universe(args)
    predictions = predicted_congruences(universe)
    payload = {
        "family": universe.family,
        "n": universe.n,
        "predicted": [
            {
                "num_classes": part.num_classes,
                "specs": [s.to_json() for s in specs],
                "classes": part.classes(),
            }
            for part, specs in predictions
        ],
    }
    lines = [f"{universe.family}_{universe.n}: {len(predictions)} distinct predicted congruences"]
    for part, specs in predictions:
        tags = ", ".join(
            s.tag + (f"[k={s.k}]" if s.k is not None else "") for s in specs
        )
        lines.append(f"  {part.num_classes:4d} classes  <- {tags}")
    _emit(args, payload, text="\n".join(lines) + "\n")
    return EXIT_OK


def cmd_congruences_enumerate(args):
    universe = _universe(args)
    lattice = congruence_lattice(
        universe, force=args.force_budget, threads=args.threads
    )
    payload = {
        "family": universe.family,
        "n": universe.n,
        "count": len(lattice),
        "congruences": [part.to_json()["classes"] for part in lattice],
    }
    lines = [f"{universe.family}_{universe.n}: {len(lattice)} congruences"]
    lines += [f"  {part.num_classes} classes" for part in lattice]
    _emit(args, payload, dot=lattice_to_dot(lattice), text="\n".join(lines) + "\n")
    return EXIT_OK


def cmd_congruences_verify(args):
    universe = _universe(args)
    report = verify_classification(
        universe, force=args.force_budget, threads=args.threads
    )
    payload = report.to_json()
    lines = [
        f"{universe.family}_{universe.n}: lattice has {report.lattice_size} congruences",
        f"  matched predictions: {len(report.matched)}",
        f"  predicted but not found: {len(report.predicted_not_found)}",
        f"  found but not predicted: {len(report.found_not_predicted)}",
    ]
    for entry in report.found_not_predicted:
        tag = entry["tag"] or "unexplained"
        lines.append(
            f"    {entry['num_classes']} classes, zero class "
            f"{entry['zero_class_kind']} ({entry['zero_class_size']} elements), {tag}"
        )
    for note in report.notes:
        lines.append(f"  note: {note}")
    _emit(args, payload, text="\n".join(lines) + "\n")
    if not report.ok:
        sys.stderr.write("some predicted congruences are missing from the lattice\n")
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_counterexample(args):
    n = args.n
    sigma, s = conjugation_escape_witness(n)
    conj = compose(compose(invert(s), sigma), s)
    violations = [
        i for i in range(1, n + 1)
        if conj.images[theta(n, i) - 1] != theta(n, conj.images[i - 1])
    ]
    if not violations:
        raise InvariantViolation("conjugated witness unexpectedly stayed inside SR")
    first = violations[0]
    payload = {
        "n": n,
        "sigma": format_element_text(sigma),
        "s": format_element_text(s),
        "conjugate": format_element_text(conj),
        "sigma_in_OR": is_member("OR", sigma),
        "s_in_unit_group": in_unit_group("SR", s),
        "conjugate_in_SR": is_member("SR", conj),
        "violated_at": first,
    }
    lines = [
        f"n = {n}",
        f"sigma     = {payload['sigma']}",
        f"s         = {payload['s']}",
        f"conjugate = s^-1 sigma s = {payload['conjugate']}",
        f"sigma in OR_{n}: {payload['sigma_in_OR']}",
        f"s in the unit group of SR_{n}: {payload['s_in_unit_group']}",
        f"conjugate in SR_{n}: {payload['conjugate_in_SR']}",
        f"membership violated at i = {first}: "
        f"conjugate({theta(n, first)}) = {conj.images[theta(n, first) - 1]} but the "
        f"mirror of conjugate({first}) is {theta(n, conj.images[first - 1])}",
    ]
    _emit(args, payload, text="\n".join(lines) + "\n")
    return EXIT_OK


def cmd_erratum(args):
    args.family = "or"
    universe = _universe(args)
    report = green_report(universe)
    ideals = enumerate_ideals(universe)
    expected = [d for d in ideals if d.kind != "union"]
    extras = [d for d in ideals if d.kind == "union"]
    payload = {
        "family": universe.family,
        "n": universe.n,
        "rank_m_d_class_size": next(
            e for e in report["discrepancies"] if e["kind"] == "rank_m_d_class_size"
        ),
        "named_ideals": [{"kind": d.kind, "k": d.k, "size": d.size} for d in expected],
        "extra_absorbing_downsets": [
            {"kind": d.kind, "size": d.size} for d in extras
        ],
    }
    entry = payload["rank_m_d_class_size"]
    lines = [
        f"OR_{universe.n} discrepancy report",
        f"  half-rank D-class sizes: combined closed form {entry['combined_formula']}, "
        f"per-class closed form {entry['per_class_formula']}, observed "
        f"{entry['observed_per_class']}",
        f"  named ideals: {len(expected)}; extra absorbing down-sets: {len(extras)}",
    ]
    for d in extras:
        lines.append(
            f"    union of the two half-rank ideals ({d.size} elements) is absorbing"
        )
    _emit(args, payload, text="\n".join(lines) + "\n")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.n % 2 or args.n < 2:
        sys.stderr.write(f"degree must be even and >= 2, got {args.n}\n")
        return EXIT_BUDGET
    handlers = {
        "elements": cmd_elements,
        "green": cmd_green,
        "ideals": cmd_ideals,
        "counterexample": cmd_counterexample,
        "erratum": cmd_erratum,
    }
    try:
        if args.command == "congruences":
            verb_handlers = {
                "predict": cmd_congruences_predict,
                "enumerate": cmd_congruences_enumerate,
                "verify": cmd_congruences_verify,
            }
            return verb_handlers[args.verb](args)
        return handlers[args.command](args)
    except ResourceLimitError as exc:
        sys.stderr.write(f"budget refusal: {exc}\n")
        return EXIT_BUDGET
    except InvariantViolation as exc:
        sys.stderr.write(f"internal invariant violated: {exc}\n")
        return EXIT_INVARIANT
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BUDGET


def run():
    raise SystemExit(main())


if __name__ == "__main__":
    run()
