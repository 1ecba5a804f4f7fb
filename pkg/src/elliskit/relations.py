"""Invariant equivalence relations on finite group actions: kernel
subgroups, orbit relations, witnessed relations R_{H,support}, maximal
witnesses, and decision procedures for orbitality and weak orbitality.

Relations are stored as partitions (class-level operations dominate); the
pair-set view is derived on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import FiniteGroup, Subgroup, enumerate_subgroups
from .caps import DEFAULT_CAPS, Caps
from .errors import (
    NotAPartition,
    NotAWitness,
    NotFree,
    NotInvariant,
    SizeCapExceeded,
)
from .flows import Flow


@dataclass(frozen=True)
class EquivRelation:
    points: int
    classes: tuple[tuple[int, ...], ...]
    flow: Flow | None = None
    class_of: tuple[int, ...] = field(init=False, compare=False, repr=False)
    invariant: bool | None = field(init=False, compare=False, default=None)
    invariance_witness: tuple | None = field(init=False, compare=False, default=None)

    def __post_init__(self):
        seen = [None] * self.points
        norm = []
        for cls in self.classes:
            if not cls:
                raise NotAPartition("empty class")
            for x in cls:
                if not 0 <= x < self.points:
                    raise NotAPartition(f"point {x} out of range")
                if seen[x] is not None:
                    raise NotAPartition(f"point {x} in two classes")
                seen[x] = True
            norm.append(tuple(sorted(cls)))
        if any(s is None for s in seen):
            missing = next(i for i, s in enumerate(seen) if s is None)
            raise NotAPartition(f"point {missing} uncovered")
        norm.sort(key=lambda c: c[0])
        object.__setattr__(self, "classes", tuple(norm))
        class_of = [None] * self.points
        for i, cls in enumerate(self.classes):
            for x in cls:
                class_of[x] = i
        object.__setattr__(self, "class_of", tuple(class_of))
        if self.flow is not None:
            ok, witness = _invariance(self.flow, self.class_of)
            object.__setattr__(self, "invariant", ok)
            object.__setattr__(self, "invariance_witness", witness)

    def same(self, a: int, b: int) -> bool:
        return self.class_of[a] == self.class_of[b]

    def pairs(self) -> frozenset[tuple[int, int]]:
        out = set()
        for cls in self.classes:
            for a in cls:
                for b in cls:
                    out.add((a, b))
        return frozenset(out)

    def bind(self, flow: Flow) -> "EquivRelation":
        return EquivRelation(self.points, self.classes, flow)

    def __eq__(self, other):
        return (isinstance(other, EquivRelation)
                and self.points == other.points
                and self.classes == other.classes)

    def __hash__(self):
        return hash((self.points, self.classes))


def _invariance(flow: Flow, class_of):
    """Check each acting map sends classes into classes; for a group flow
    every element is checked, for a transformation flow every generator."""
    if flow.is_group_flow:
        movers = [(g, None) for g in flow.group.elements()]
    else:
        movers = [(i, None) for i in range(len(flow.transformations.generators))]
    n = flow.points
    for g, _ in movers:
        image_class = [None] * len(set(class_of))
        for x in range(n):
            y = flow.gen_act(g, x)
            c = class_of[x]
            if image_class[c] is None:
                image_class[c] = class_of[y]
            elif image_class[c] != class_of[y]:
                x0 = next(z for z in range(n)
                          if class_of[z] == c and class_of[flow.gen_act(g, z)] == image_class[c])
                return False, (g, x0, x)
    return True, None


def make_relation(points: int, classes, flow: Flow | None = None) -> EquivRelation:
    return EquivRelation(points, tuple(tuple(c) for c in classes), flow)


def equality_relation(points: int, flow: Flow | None = None) -> EquivRelation:
    return make_relation(points, [[x] for x in range(points)], flow)


def total_relation(points: int, flow: Flow | None = None) -> EquivRelation:
    return make_relation(points, [list(range(points))], flow)


def _require_group_bound(E: EquivRelation) -> tuple[Flow, FiniteGroup]:
    if E.flow is None or not E.flow.is_group_flow:
        raise ValueError("relation must be bound to a group flow")
    return E.flow, E.flow.group


def kernel_group(E: EquivRelation) -> Subgroup:
    """All elements preserving every class setwise; always normal."""
    flow, G = _require_group_bound(E)
    if not E.invariant:
        raise NotInvariant(E.invariance_witness)
    members = set()
    for g in G.elements():
        if all(E.same(flow.act(g, x), x) for x in range(flow.points)):
            members.add(g)
    sub = Subgroup(G, frozenset(members))
    if not sub.is_normal():
        raise NotInvariant(("kernel not normal", sorted(members)))
    return sub


def orbit_relation(flow: Flow, H: Subgroup) -> EquivRelation:
    """Partition of the points into H-orbits, bound to the flow (so the
    invariance verdict is attached; it holds whenever H is normal)."""
    if not flow.is_group_flow:
        raise ValueError("orbit relations need a group flow")
    if H.parent is not flow.group:
        raise ValueError("subgroup of a different group")
    seen = [False] * flow.points
    classes = []
    for x in range(flow.points):
        if seen[x]:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for h in H.members:
                z = flow.act(h, y)
                if z not in orbit:
                    orbit.add(z)
                    frontier.append(z)
        for y in orbit:
            seen[y] = True
        classes.append(tuple(sorted(orbit)))
    return EquivRelation(flow.points, tuple(classes), flow)


@dataclass(frozen=True)
class WitnessPair:
    subgroup: Subgroup
    support: frozenset[int]


@dataclass(frozen=True)
class RRelationResult:
    pairs: frozenset[tuple[int, int]]
    reflexive: bool
    symmetric: bool
    transitive: bool
    failure_witness: tuple | None

    @property
    def is_equivalence(self) -> bool:
        return self.reflexive and self.symmetric and self.transitive

    def to_relation(self, flow: Flow) -> EquivRelation:
        if not self.is_equivalence:
            raise NotAWitness(f"relation is not an equivalence: {self.failure_witness}")
        class_of = {}
        classes = []
        for a, b in sorted(self.pairs):
            if a in class_of:
                continue
            members = sorted(x for (y, x) in self.pairs if y == a)
            classes.append(tuple(members))
            for m in members:
                class_of[m] = True
        return EquivRelation(flow.points, tuple(classes), flow)


def r_relation(flow: Flow, w: WitnessPair) -> RRelationResult:
    """The smallest invariant relation relating each support point to its
    subgroup orbit: the set of translates (g·s, g·h·s). One translation
    round suffices because the translate set is already invariant.

    Verdict-valued: the result records whether the relation is reflexive,
    symmetric, and transitive (transitivity can genuinely fail)."""
    if not flow.is_group_flow:
        raise ValueError("witnessed relations need a group flow")
    G = flow.group
    n = flow.points
    pairs = set()
    for s in sorted(w.support):
        for h in w.subgroup.sorted_members:
            hs = flow.act(h, s)
            for g in G.elements():
                pairs.add((flow.act(g, s), flow.act(g, hs)))
    reflexive = all((x, x) in pairs for x in range(n))
    witness = None
    if not reflexive:
        witness = ("irreflexive", next(x for x in range(n) if (x, x) not in pairs))
    symmetric = all((b, a) in pairs for (a, b) in pairs)
    if symmetric is False and witness is None:
        witness = ("asymmetric", next((a, b) for (a, b) in pairs if (b, a) not in pairs))
    adj: dict[int, set[int]] = {}
    for a, b in pairs:
        adj.setdefault(a, set()).add(b)
    transitive = True
    for a, outs in adj.items():
        for b in outs:
            if not adj.get(b, set()) <= outs:
                transitive = False
                if witness is None:
                    c = next(iter(adj[b] - outs))
                    witness = ("intransitive", (a, b, c))
                break
        if not transitive:
            break
    return RRelationResult(frozenset(pairs), reflexive, symmetric, transitive, witness)


def class_formula(flow: Flow, w: WitnessPair, x0: int) -> frozenset[int]:
    """Direct evaluation of the witnessed class of x0: the union of
    conjugate-orbit translates over group elements carrying x0 into the
    support. Cross-checks the translate-closure computation."""
    if not flow.is_group_flow:
        raise ValueError("witnessed relations need a group flow")
    G = flow.group
    out = set()
    for g in G.elements():
        if flow.act(g, x0) not in w.support:
            continue
        ginv = G.inverse[g]
        for h in w.subgroup.members:
            out.add(flow.act(ginv, flow.act(h, flow.act(g, x0))))
    return frozenset(out)


def fix_set(E: EquivRelation, H: Subgroup) -> frozenset[int]:
    """Points equivalent to all their H-translates; always a union of
    E-classes when E is an equivalence relation."""
    flow, _ = _require_group_bound(E)
    return frozenset(
        x for x in range(flow.points)
        if all(E.same(x, flow.act(h, x)) for h in H.members)
    )


def stabilizing_elements(E: EquivRelation, support) -> frozenset[int]:
    """Group elements g with s ~ g·s for every support point s."""
    flow, G = _require_group_bound(E)
    return frozenset(
        g for g in G.elements()
        if all(E.same(s, flow.act(g, s)) for s in support)
    )


def maximal_witnesses(E: EquivRelation, w: WitnessPair) -> WitnessPair:
    """Alternate the support-maximization and subgroup-maximization
    operators to a fixpoint. Requires that the pair witnesses E."""
    flow, G = _require_group_bound(E)
    got = r_relation(flow, w)
    if not got.is_equivalence or got.pairs != E.pairs():
        raise NotAWitness("pair does not produce the given relation")
    H, support = w.subgroup, frozenset(w.support)
    for _ in range(2 * flow.points + 2 * G.order + 2):
        new_support = fix_set(E, H)
        new_H = Subgroup(G, stabilizing_elements(E, new_support))
        if new_support == support and new_H.members == H.members:
            break
        H, support = new_H, new_support
        check = r_relation(flow, WitnessPair(H, support))
        if check.pairs != E.pairs():
            raise NotAWitness("maximization changed the relation")
    else:
        raise NotAWitness("maximization did not stabilize")
    # the maximal support is a union of classes
    for x in support:
        if not set(E.classes[E.class_of[x]]) <= support:
            raise NotAWitness(("support not saturated", x))
    return WitnessPair(H, support)


@dataclass(frozen=True)
class OrbitalityVerdict:
    orbital: bool
    kernel: Subgroup
    counterexample: tuple | None

    def __bool__(self):
        return self.orbital


def is_orbital(E: EquivRelation) -> OrbitalityVerdict:
    """Orbital means equal to the orbit relation of the kernel subgroup."""
    flow, _ = _require_group_bound(E)
    if not E.invariant:
        raise NotInvariant(E.invariance_witness)
    kern = kernel_group(E)
    orbit = orbit_relation(flow, kern)
    if orbit == E:
        return OrbitalityVerdict(True, kern, None)
    diff = next(
        (a, b) for a in range(flow.points) for b in range(flow.points)
        if E.same(a, b) != orbit.same(a, b)
    )
    return OrbitalityVerdict(False, kern, diff)


@dataclass(frozen=True)
class WeakOrbitalityVerdict:
    weakly_orbital: bool
    witness: WitnessPair | None
    subgroups_checked: int

    def __bool__(self):
        return self.weakly_orbital


def is_weakly_orbital(E: EquivRelation, caps: Caps = DEFAULT_CAPS) -> WeakOrbitalityVerdict:
    """Loop over all subgroups in canonical order. For each candidate
    subgroup the maximal support is forced (points equivalent to all their
    translates), so testing the pair (H, fix_set(H)) is complete: any other
    support witnessing with H is contained in the fix-set, and enlarging
    the support of a witness preserves the relation."""
    flow, G = _require_group_bound(E)
    if not E.invariant:
        raise NotInvariant(E.invariance_witness)
    target = E.pairs()
    checked = 0
    for H in enumerate_subgroups(G, caps=caps):
        checked += 1
        support = fix_set(E, H)
        if not support:
            continue
        got = r_relation(flow, WitnessPair(H, support))
        if got.pairs == target:
            return WeakOrbitalityVerdict(True, WitnessPair(H, support), checked)
    return WeakOrbitalityVerdict(False, None, checked)


@dataclass(frozen=True)
class CorrespondenceReport:
    entries: tuple[tuple[tuple[int, ...], int], ...]  # (normal subgroup, class count)
    all_orbital_relations_arise: bool


def free_action_correspondence(flow: Flow, caps: Caps = DEFAULT_CAPS) -> CorrespondenceReport:
    """On a free action, normal subgroups biject with orbital relations:
    N -> its orbit relation, recovered by the kernel. Verified by
    enumerating the normal subgroups, checking recovery, and (via complete
    partition enumeration) that every orbital relation arises."""
    if not flow.is_group_flow:
        raise ValueError("needs a group flow")
    G = flow.group
    for g in G.elements():
        if g == G.identity:
            continue
        for x in range(flow.points):
            if flow.act(g, x) == x:
                raise NotFree(g, x)
    normals = [H for H in enumerate_subgroups(G, caps=caps) if H.is_normal()]
    entries = []
    seen_relations = {}
    for N in normals:
        E = orbit_relation(flow, N)
        if not E.invariant:
            raise NotInvariant(("orbit relation of normal subgroup", N.sorted_members))
        back = kernel_group(E)
        if back.members != N.members:
            raise NotAWitness(("kernel does not recover subgroup", N.sorted_members))
        if E in seen_relations:
            raise NotAWitness(("two normal subgroups give one relation",
                               N.sorted_members))
        seen_relations[E] = N
        entries.append((N.sorted_members, len(E.classes)))
    if flow.points > caps.partition_points_cap:
        raise SizeCapExceeded(flow.points, caps.partition_points_cap,
                              "partition enumeration")
    complete = True
    for E in invariant_relations(flow):
        verdict = is_orbital(E)
        if verdict.orbital and E not in seen_relations:
            complete = False
    if not complete:
        raise NotAWitness("an orbital relation escapes the correspondence")
    return CorrespondenceReport(tuple(entries), complete)


def all_partitions(n: int):
    """Every partition of 0..n-1, via restricted-growth strings: a[0] = 0
    and a[i] <= max(a[:i]) + 1, stepped in lexicographic order."""
    if n == 0:
        yield ()
        return
    a = [0] * n
    while True:
        blocks: dict[int, list[int]] = {}
        for i, x in enumerate(a):
            blocks.setdefault(x, []).append(i)
        yield tuple(tuple(blocks[k]) for k in sorted(blocks))
        i = n - 1
        while i > 0 and a[i] > max(a[:i]):
            i -= 1
        if i == 0:
            return
        a[i] += 1
        for j in range(i + 1, n):
            a[j] = 0


def invariant_relations(flow: Flow, caps: Caps = DEFAULT_CAPS):
    """All invariant equivalence relations of a small flow."""
    if flow.points > caps.partition_points_cap:
        raise SizeCapExceeded(flow.points, caps.partition_points_cap,
                              "partition enumeration")
    for classes in all_partitions(flow.points):
        E = EquivRelation(flow.points, classes, flow)
        if E.invariant:
            yield E
