"""Seeded verification suites: per-module invariant batteries run over
generated or cataloged instances. A nonzero failure count is a verified
property violation."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import asdict

from . import catalog
from .algebra import enumerate_subgroups
from .caps import DEFAULT_CAPS, Caps
from .ellis import (
    circ,
    enveloping_semigroup,
    h_subgroup,
    ideal_group,
    ideal_group_isomorphism,
    minimal_left_ideals,
    tau_closure,
)
from .errors import ElliskitError
from .flows import Flow, make_ambit
from .generators import (
    random_ellis_flow,
    random_group_like_setup,
    random_group_flow,
    random_invariant_relation,
)
from .grouplike import identify_quotient
from .relations import (
    WitnessPair,
    fix_set,
    is_orbital,
    is_weakly_orbital,
    kernel_group,
    maximal_witnesses,
    r_relation,
)
from .report import Report
from .structured import is_agreeable, verify_thm_orb, verify_thm_worb


def _ellis_instance_checks(flow: Flow, rng: random.Random, caps: Caps):
    """The full structure battery on one flow's enveloping semigroup."""
    failures = []
    S = enveloping_semigroup(flow, caps=caps)
    ideals = minimal_left_ideals(S)  # raises on any structure-fact failure
    if not ideals:
        failures.append(("minimal ideal exists", "none found"))
        return failures, S.size
    groups = []
    for M in ideals:
        for u in M.idempotents:
            groups.append(ideal_group(M, u))
    # within one ideal: left translation isomorphism; across ideals: the
    # compatible-idempotent map (both verified inside the call)
    for gu in groups:
        for gv in groups:
            ideal_group_isomorphism(gu, gv)
    orders = {g.group_view.order for g in groups}
    if len(orders) != 1:
        failures.append(("ideal groups share one order", sorted(orders)))
    # composition-limit identities on random data
    elems = range(S.size)
    for _ in range(20):
        a, b, c = (rng.choice(elems) for _ in range(3))
        B = frozenset(rng.sample(elems, k=rng.randint(0, min(S.size, 8))))
        C = frozenset(rng.sample(elems, k=rng.randint(0, min(S.size, 8))))
        lhs = frozenset(S.mul(x, c) for x in circ(S, a, B))
        if lhs != circ(S, a, frozenset(S.mul(x, c) for x in B)):
            failures.append(("right translation identity", (a, c)))
        if not circ(S, a, circ(S, b, B)) <= circ(S, S.mul(a, b), B):
            failures.append(("iterated limit inclusion", (a, b)))
        if not frozenset(S.mul(a, x) for x in B) <= circ(S, a, B):
            failures.append(("product inclusion", a))
        if circ(S, a, B | C) != circ(S, a, B) | circ(S, a, C):
            failures.append(("union additivity", a))
    # closure-operator axioms and discreteness on the ideal groups
    for g in groups:
        members = list(g.members)
        if tau_closure(g, frozenset()) != frozenset():
            failures.append(("empty set closed", g.idempotent))
        for _ in range(5):
            A = frozenset(rng.sample(members, k=rng.randint(0, len(members))))
            B = frozenset(rng.sample(members, k=rng.randint(0, len(members))))
            if tau_closure(g, A) != A:
                failures.append(("discreteness", g.idempotent))
            if tau_closure(g, A | B) != tau_closure(g, A) | tau_closure(g, B):
                failures.append(("closure additivity", g.idempotent))
        H = h_subgroup(g)
        if H.members != {g.group_view.identity}:
            failures.append(("identity-neighbourhood intersection trivial",
                             g.idempotent))
    return failures, S.size


def run_ellis_suite(rep: Report, instances: int, rng: random.Random,
                    caps: Caps, max_points: int):
    sizes = []
    for i in range(instances):
        flow = random_ellis_flow(rng, max_points, caps)
        try:
            failures, size = _ellis_instance_checks(flow, rng, caps)
        except ElliskitError as exc:
            rep.record(f"instance {i}", False, str(exc))
            continue
        sizes.append(size)
        if failures:
            rep.record(f"instance {i}", False, failures[:3])
        else:
            rep.record(f"instance {i}", True)
    if sizes:
        rep.structures["closure_sizes"] = {
            "min": min(sizes), "max": max(sizes),
            "mean": round(sum(sizes) / len(sizes), 1),
        }


def run_grouplike_suite(rep: Report, instances: int, rng: random.Random,
                        caps: Caps, max_points: int, max_order: int):
    from .grouplike import check_group_like, compute_D, orbit_map_r

    for i in range(instances):
        flow, E = random_group_like_setup(rng, max_points, max_order, caps)
        try:
            amb = make_ambit(flow, 0)
            failures = []
            verdict = check_group_like(amb, E)
            if not verdict:
                failures.append(("constructed relation group-like",
                                 verdict.refutation))
            else:
                S = enveloping_semigroup(flow, caps=caps)
                # surjective homomorphism with idempotents in the kernel;
                # violations raise
                orbit_map_r(amb, verdict.certificate, S)
                M = minimal_left_ideals(S)[0]
                compute_D(ideal_group(M, M.idempotents[0]), amb)
            ident = identify_quotient(amb, E, caps=caps)
            if not (ident.cardinality_identity and ident.equivariant
                    and ident.class_count == len(E.classes)):
                failures.append(("identification", asdict(ident)))
            rep.record(f"instance {i}", not failures, failures[:2] or None)
        except ElliskitError as exc:
            rep.record(f"instance {i}", False, str(exc))


def brute_force_weakly_orbital(E, caps: Caps) -> bool:
    """Complete search over subgroup/support pairs."""
    flow = E.flow
    target = E.pairs()
    for H in enumerate_subgroups(flow.group, caps=caps):
        for r in range(1, flow.points + 1):
            for support in itertools.combinations(range(flow.points), r):
                got = r_relation(flow, WitnessPair(H, frozenset(support)))
                if got.pairs == target:
                    return True
    return False


def _orbital_instance_checks(E, rng: random.Random, caps: Caps,
                             full_brute_force: bool):
    failures = []
    flow = E.flow
    kern = kernel_group(E)
    if not kern.is_normal():
        failures.append(("kernel normal", kern.sorted_members))
    orb = is_orbital(E)
    weak = is_weakly_orbital(E, caps=caps)
    if orb and not weak:
        failures.append(("orbital implies weakly orbital", None))
    if orb:
        full = r_relation(flow, WitnessPair(kern, frozenset(range(flow.points))))
        if full.pairs != E.pairs():
            failures.append(("full-support witness for orbital", None))
        w = maximal_witnesses(E, WitnessPair(kern, frozenset(range(flow.points))))
        if w.support != frozenset(range(flow.points)):
            failures.append(("orbital maximal support is everything", None))
    if weak:
        got = r_relation(flow, weak.witness)
        if not got.is_equivalence or got.pairs != E.pairs():
            failures.append(("weak witness reproduces relation", None))
        m = maximal_witnesses(E, weak.witness)
        again = maximal_witnesses(E, m)
        if (again.support, again.subgroup.members) != (m.support, m.subgroup.members):
            failures.append(("maximal witnesses are a fixpoint", None))
    if full_brute_force:
        if bool(weak) != brute_force_weakly_orbital(E, caps):
            failures.append(("decision agrees with brute force", None))
    # normal-subgroup witness iff orbital
    normal_wit = False
    for H in enumerate_subgroups(flow.group, caps=caps):
        if not H.is_normal():
            continue
        sup = fix_set(E, H)
        if sup and r_relation(flow, WitnessPair(H, sup)).pairs == E.pairs():
            normal_wit = True
            break
    if bool(orb) != normal_wit:
        failures.append(("orbital iff normal witness", None))
    return failures


def run_orbital_suite(rep: Report, instances: int, rng: random.Random,
                      caps: Caps, max_points: int, max_order: int):
    for i in range(instances):
        flow = random_group_flow(rng, max_points, max_order, caps)
        E = random_invariant_relation(rng, flow, caps)
        small = flow.points <= 6 and flow.group.order <= 8
        try:
            failures = _orbital_instance_checks(E, rng, caps,
                                                full_brute_force=small)
        except ElliskitError as exc:
            rep.record(f"instance {i}", False, str(exc))
            continue
        rep.record(f"instance {i}", not failures, failures[:3] or None)


def run_structured_suite(rep: Report, instances: int, rng: random.Random,
                         caps: Caps, max_points: int, max_order: int):
    for inst, kind in catalog.structured_catalog(caps):
        agree = is_agreeable(inst)
        if kind == "counterexample":
            rep.record(f"{inst.name}: not agreeable (forced by finite unions)",
                       not agree)
            worb = verify_thm_worb(inst, require_agreeable=False,
                                   require_weakly_orbital=False, caps=caps)
            rep.record(f"{inst.name}: classes pseudo-closed",
                       worb.classes_closed)
            rep.record(f"{inst.name}: relation not pseudo-closed",
                       not worb.relation_closed)
            rep.record(f"{inst.name}: no pseudo-closed witness support",
                       not worb.classes_closed_with_witness)
            rep.record(f"{inst.name}: witness-free weakening breaks the "
                       f"equivalence", worb.classes_closed
                       and not worb.relation_closed)
            continue
        rep.record(f"{inst.name}: agreeable", bool(agree), agree.failures[:2])
        try:
            if kind == "orbital":
                got = verify_thm_orb(inst, caps=caps)
            else:
                got = verify_thm_worb(inst, caps=caps)
            rep.record(f"{inst.name}: transfer equivalence", got.equivalent)
        except ElliskitError as exc:
            rep.record(f"{inst.name}: transfer equivalence", False, str(exc))
    # random discrete-lattice instances on top of the fixed catalog
    from .structured import StructuredInstance, default_lattices, discrete_lattice

    for i in range(instances):
        flow = random_group_flow(rng, min(max_points, 6), min(max_order, 8), caps)
        E = random_invariant_relation(rng, flow, caps)
        lats = default_lattices(flow, discrete_lattice("G", flow.group.order),
                                discrete_lattice("X", flow.points), caps=caps)
        inst = StructuredInstance(flow, E, lats, f"random-{i}")
        try:
            orb = is_orbital(E)
            if orb:
                got = verify_thm_orb(inst, caps=caps)
            elif is_weakly_orbital(E, caps=caps):
                got = verify_thm_worb(inst, caps=caps)
            else:
                rep.record(f"random {i}: agreeable", bool(is_agreeable(inst)))
                continue
            rep.record(f"random {i}: transfer equivalence", got.equivalent)
        except ElliskitError as exc:
            rep.record(f"random {i}", False, str(exc))


SUITES = ("ellis", "grouplike", "orbital", "structured")


def run_suite(name: str, instances: int, seed: int, caps: Caps = DEFAULT_CAPS,
              max_points: int | None = None, max_group_order: int | None = None,
              corrupt: bool = False) -> Report:
    """Run one named suite with a seeded generator. Reports are byte-stable
    for equal inputs, up to the timing block. The corrupt flag deliberately
    injects one failing verdict so the failure path can be exercised."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    rng = random.Random(seed)
    rep = Report("suite", name, seed=seed,
                 caps={"max_points": max_points, "max_group_order": max_group_order})
    start = time.monotonic()
    max_points = max_points or 6
    max_group_order = max_group_order or 24
    if name == "ellis":
        run_ellis_suite(rep, instances, rng, caps, max_points)
    elif name == "grouplike":
        run_grouplike_suite(rep, instances, rng, caps, max_points, max_group_order)
    elif name == "orbital":
        run_orbital_suite(rep, instances, rng, caps, max_points, max_group_order)
    elif name == "structured":
        run_structured_suite(rep, instances, rng, caps, max_points, max_group_order)
    if corrupt:
        rep.record("deliberately corrupted check (harness self-test)", False,
                   "injected failure")
    rep.timing["seconds"] = round(time.monotonic() - start, 3)
    return rep
