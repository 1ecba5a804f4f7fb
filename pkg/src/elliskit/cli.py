"""Command-line surface: analyze one instance, dump enveloping-semigroup
structure, check group-likeness, decide orbitality, verify structured
scenarios, run seeded suites, and run the bundled examples.

Exit codes: 0 all checks passed (or pure analysis), 1 a verified property
violation, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import io as instance_io
from .caps import DEFAULT_CAPS
from .catalog import EXAMPLES, run_example
from .ellis import enveloping_semigroup, ideal_group, minimal_left_ideals
from .errors import ElliskitError, ParseError, TheoremViolation
from .flows import Ambit, Flow, make_ambit
from .grouplike import check_group_like, compute_D, compute_ghat, identify_quotient
from .relations import is_orbital, is_weakly_orbital, maximal_witnesses
from .report import Report
from .structured import is_agreeable, verify_thm_orb, verify_thm_worb
from .suites import SUITES, run_suite


def _emit(report: Report, fmt: str) -> None:
    if fmt == "json":
        print(report.to_json())
    else:
        print(report.to_text())


def _load(path, expect_kinds):
    inst = instance_io.parse_instance(path)
    if inst.kind not in expect_kinds:
        raise ParseError(str(path),
                         f"expected {' or '.join(expect_kinds)}, got {inst.kind}")
    return inst.value


def _as_ambit(value) -> Ambit:
    if isinstance(value, Ambit):
        return value
    return make_ambit(value, 0)


def _ellis_structures(flow: Flow, rep: Report) -> None:
    S = enveloping_semigroup(flow)
    ideals = minimal_left_ideals(S)
    first = ideal_group(ideals[0], ideals[0].idempotents[0])
    rep.structures["closure_size"] = S.size
    rep.structures["minimal_ideals"] = [
        {"size": len(M.members), "idempotents": len(M.idempotents)}
        for M in ideals
    ]
    rep.structures["ideal_group_order"] = first.group_view.order


def cmd_ellis(args) -> int:
    flow = _load(args.flow, ("flow", "ambit"))
    if isinstance(flow, Ambit):
        flow = flow.flow
    rep = Report("analysis", "ellis")
    start = time.monotonic()
    _ellis_structures(flow, rep)
    rep.timing["seconds"] = round(time.monotonic() - start, 3)
    _emit(rep, args.format)
    return 0


def cmd_analyze(args) -> int:
    value = _load(args.flow, ("flow", "ambit"))
    rep = Report("analysis", "analyze")
    start = time.monotonic()
    flow = value.flow if isinstance(value, Ambit) else value
    _ellis_structures(flow, rep)
    relation = None
    if args.relation:
        relation = _load(args.relation, ("relation",)).bind(flow)
        rep.structures["class_count"] = len(relation.classes)
        rep.structures["invariant"] = relation.invariant
        if not relation.invariant:
            rep.record("relation invariant", False, relation.invariance_witness)
            rep.timing["seconds"] = round(time.monotonic() - start, 3)
            _emit(rep, args.format)
            return 0  # analysis, not verification
        if flow.is_group_flow:
            ambit = _as_ambit(value)
            verdict = check_group_like(ambit, relation)
            rep.structures["group_like"] = bool(verdict)
            ident = identify_quotient(ambit, relation)
            rep.structures["identified_group_order"] = ident.ghat.group.order
            rep.structures["stabilizer_order"] = ident.stabilizer.order
            orb = is_orbital(relation)
            rep.structures["orbital"] = bool(orb)
            weak = is_weakly_orbital(relation)
            rep.structures["weakly_orbital"] = bool(weak)
            if weak:
                m = maximal_witnesses(relation, weak.witness)
                rep.structures["maximal_witness"] = {
                    "subgroup_order": m.subgroup.order,
                    "support_size": len(m.support),
                }
    rep.timing["seconds"] = round(time.monotonic() - start, 3)
    _emit(rep, args.format)
    return 0


def cmd_grouplike(args) -> int:
    ambit = _as_ambit(_load(args.ambit, ("ambit", "flow")))
    relation = _load(args.relation, ("relation",)).bind(ambit.flow)
    rep = Report("analysis", "grouplike")
    start = time.monotonic()
    verdict = check_group_like(ambit, relation)
    rep.structures["group_like"] = bool(verdict)
    if verdict:
        cert = verdict.certificate
        rep.structures["quotient_order"] = cert.quotient_group.order
        rep.structures["kernel"] = list(cert.kernel.sorted_members)
        S = enveloping_semigroup(ambit.flow)
        ideals = minimal_left_ideals(S)
        IG = ideal_group(ideals[0], ideals[0].idempotents[0])
        D = compute_D(IG, ambit)
        ghat = compute_ghat(IG, ambit)
        rep.structures["basepoint_stabilizer_order"] = D.order
        rep.structures["identified_group_order"] = ghat.group.order
    else:
        rep.structures["refutation"] = repr(verdict.refutation)
    rep.timing["seconds"] = round(time.monotonic() - start, 3)
    _emit(rep, args.format)
    return 0


def cmd_orbital(args) -> int:
    flow = _load(args.flow, ("flow", "ambit"))
    if isinstance(flow, Ambit):
        flow = flow.flow
    relation = _load(args.relation, ("relation",)).bind(flow)
    rep = Report("analysis", "orbital")
    start = time.monotonic()
    rep.structures["invariant"] = relation.invariant
    if relation.invariant:
        verdict = is_orbital(relation)
        rep.structures["orbital"] = bool(verdict)
        rep.structures["kernel_order"] = verdict.kernel.order
        if args.decide_weak:
            from .caps import Caps

            caps = DEFAULT_CAPS
            if args.max_group_order:
                caps = Caps(subgroup_enum_cap=args.max_group_order)
            weak = is_weakly_orbital(relation, caps=caps)
            rep.structures["weakly_orbital"] = bool(weak)
            if weak:
                rep.structures["witness_subgroup_order"] = weak.witness.subgroup.order
                rep.structures["witness_support_size"] = len(weak.witness.support)
    rep.timing["seconds"] = round(time.monotonic() - start, 3)
    _emit(rep, args.format)
    return 0


def cmd_structured(args) -> int:
    inst = _load(args.scenario, ("scenario",))
    rep = Report("analysis", "structured")
    start = time.monotonic()
    agree = is_agreeable(inst)
    rep.record("agreeable", bool(agree), agree.failures[:2] or None)
    E = inst.relation.bind(inst.flow)
    if agree and E.invariant:
        orb = is_orbital(E)
        if orb:
            got = verify_thm_orb(inst)
            rep.record("orbital transfer equivalence", got.equivalent)
        elif is_weakly_orbital(E):
            got = verify_thm_worb(inst)
            rep.record("weakly orbital transfer equivalence", got.equivalent)
    rep.timing["seconds"] = round(time.monotonic() - start, 3)
    _emit(rep, args.format)
    return 0 if rep.passed else 1


def cmd_verify(args) -> int:
    rep = run_suite(args.suite, args.instances, args.seed,
                    max_points=args.max_points,
                    max_group_order=args.max_group_order,
                    corrupt=args.corrupt)
    _emit(rep, args.format)
    if not rep.passed:
        print(f"{rep.failure_count} verified property violations",
              file=sys.stderr)
        return 1
    return 0


def cmd_example(args) -> int:
    rep = run_example(args.name)
    _emit(rep, args.format)
    return 0 if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elliskit",
        description="Finite enveloping semigroups, group-like quotients, and "
                    "orbital relations, verified by brute force.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("analyze", help="full pipeline on one instance")
    p.add_argument("flow")
    p.add_argument("--relation")
    add_format(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("ellis", help="enveloping semigroup structure")
    p.add_argument("flow")
    add_format(p)
    p.set_defaults(func=cmd_ellis)

    p = sub.add_parser("grouplike", help="group-likeness of a relation on an ambit")
    p.add_argument("ambit")
    p.add_argument("--relation", required=True)
    add_format(p)
    p.set_defaults(func=cmd_grouplike)

    p = sub.add_parser("orbital", help="orbitality decisions for a relation")
    p.add_argument("flow")
    p.add_argument("--relation", required=True)
    p.add_argument("--decide-weak", action="store_true")
    p.add_argument("--max-group-order", type=int, default=None)
    add_format(p)
    p.set_defaults(func=cmd_orbital)

    p = sub.add_parser("structured", help="agreeability and transfer theorems")
    p.add_argument("scenario")
    add_format(p)
    p.set_defaults(func=cmd_structured)

    p = sub.add_parser("verify", help="run a seeded verification suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-points", type=int, default=None)
    p.add_argument("--max-group-order", type=int, default=None)
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    add_format(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("example", help="run a bundled example")
    p.add_argument("name", choices=sorted(EXAMPLES))
    add_format(p)
    p.set_defaults(func=cmd_example)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TheoremViolation as exc:
        print(f"verified violation: {exc}", file=sys.stderr)
        return 1
    except ElliskitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
