"""Families of distinguished subsets ("pseudo-closed" lattices) on the six
product spaces of a group action, the compatibility axioms tying them to the
action, and verifiers for the closedness-transfer equivalences for orbital
and weakly orbital relations.

A lattice here is any family of subsets closed under pairwise union and
intersection that contains the empty set and the ground set; it need not
come from a topology. Discrete lattices (all subsets) are kept intensional,
since product grounds grow to the fourth power of the point count; axiom
checks then run over union-generating families (singletons), which is
complete because sections, images, preimages, and products all distribute
over finite unions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import enumerate_subgroups
from .caps import DEFAULT_CAPS, Caps
from .errors import (
    NotAgreeable,
    NotALattice,
    NotOrbital,
    NotWeaklyOrbital,
    SizeCapExceeded,
    TheoremViolation,
)
from .flows import Flow
from .relations import (
    EquivRelation,
    WitnessPair,
    fix_set,
    is_orbital,
    is_weakly_orbital,
    kernel_group,
    orbit_relation,
    r_relation,
    stabilizing_elements,
)

GROUNDS = ("G", "X", "GxX", "X2", "X2x2", "XxG")


def ground_size(ground: str, group_order: int, points: int) -> int:
    return {
        "G": group_order,
        "X": points,
        "GxX": group_order * points,
        "X2": points * points,
        "X2x2": points ** 4,
        "XxG": points * group_order,
    }[ground]


class PseudoClosedLattice:
    """Explicit set family or an intensional 'all subsets' lattice."""

    __slots__ = ("ground", "size", "sets", "discrete", "added", "_member_set")

    def __init__(self, ground, size, sets=None, discrete=False, added=()):
        self.ground = ground
        self.size = size
        self.discrete = discrete
        self.sets = None if discrete else tuple(sets)
        self.added = tuple(added)
        self._member_set = None if discrete else frozenset(self.sets)

    def contains(self, s) -> bool:
        if self.discrete:
            return True
        return frozenset(s) in self._member_set

    def members(self):
        if self.discrete:
            raise SizeCapExceeded(2 ** self.size, 0, "discrete lattice enumeration")
        return self.sets

    def union_generators(self):
        """A family whose finite unions give every member (with the empty
        union giving the empty set)."""
        if self.discrete:
            return [frozenset({i}) for i in range(self.size)]
        return list(self.sets)

    def member_count(self):
        return 2 ** self.size if self.discrete else len(self.sets)

    def __repr__(self):
        kind = "discrete" if self.discrete else f"{len(self.sets)} sets"
        return f"PseudoClosedLattice({self.ground}, size={self.size}, {kind})"


def discrete_lattice(ground: str, size: int) -> PseudoClosedLattice:
    return PseudoClosedLattice(ground, size, discrete=True)


class SectionProductLattice:
    """Rectangle closure of an explicit lattice with a discrete one, kept
    intensional: it is exactly the family of sets each of whose sections
    along the discrete factor belongs to the explicit factor (finite unions
    of rectangles with singleton discrete side; conversely, any such set is
    the union of its per-section rectangles)."""

    __slots__ = ("ground", "size", "left", "right", "left_discrete",
                 "discrete", "sets", "added")

    def __init__(self, ground, left, right, left_discrete):
        self.ground = ground
        self.size = left.size * right.size
        self.left = left
        self.right = right
        self.left_discrete = left_discrete
        self.discrete = False
        self.sets = None
        self.added = ()

    def contains(self, s) -> bool:
        cols = self.right.size
        if self.left_discrete:
            sections: dict[int, set[int]] = {}
            for idx in s:
                sections.setdefault(idx // cols, set()).add(idx % cols)
            return all(self.right.contains(frozenset(sec))
                       for sec in sections.values())
        sections = {}
        for idx in s:
            sections.setdefault(idx % cols, set()).add(idx // cols)
        return all(self.left.contains(frozenset(sec))
                   for sec in sections.values())

    def union_generators(self):
        cols = self.right.size
        out = []
        if self.left_discrete:
            for l in range(self.left.size):
                for b in self.right.union_generators():
                    out.append(frozenset(l * cols + r for r in b))
        else:
            for a in self.left.union_generators():
                for r in range(cols):
                    out.append(frozenset(l * cols + r for l in a))
        return out

    def members(self):
        raise SizeCapExceeded(self.member_count(), 0,
                              "intensional lattice enumeration")

    def member_count(self):
        base = (self.right.member_count() if self.left_discrete
                else self.left.member_count())
        expo = self.left.size if self.left_discrete else self.right.size
        return base ** expo

    def __repr__(self):
        return f"SectionProductLattice({self.ground}, size={self.size})"


def _close_family(sets, cap):
    family = set(sets)
    frontier = list(family)
    added = []
    while frontier:
        new = []
        for a in frontier:
            for b in list(family):
                for c in (a | b, a & b):
                    if c not in family:
                        if len(family) >= cap:
                            raise SizeCapExceeded(len(family) + 1, cap, "lattice")
                        family.add(c)
                        new.append(c)
                        added.append(c)
        frontier = new
    return family, added


def make_lattice(ground: str, size: int, sets, auto_complete: bool = False,
                 caps: Caps = DEFAULT_CAPS) -> PseudoClosedLattice:
    family = {frozenset(s) for s in sets}
    for s in family:
        if any(not 0 <= x < size for x in s):
            raise NotALattice(s, s, s)
    family.add(frozenset())
    family.add(frozenset(range(size)))
    if auto_complete:
        closed, added = _close_family(family, caps.lattice_cap)
        ordered = sorted(closed, key=lambda s: (len(s), sorted(s)))
        return PseudoClosedLattice(ground, size, ordered,
                                   added=tuple(sorted(added, key=sorted)))
    fam = sorted(family, key=lambda s: (len(s), sorted(s)))
    for a in fam:
        for b in fam:
            if (a | b) not in family:
                raise NotALattice(a, b, a | b)
            if (a & b) not in family:
                raise NotALattice(a, b, a & b)
    return PseudoClosedLattice(ground, size, fam)


_PRODUCT_GROUND = {("G", "X"): "GxX", ("X", "X"): "X2",
                   ("X2", "X2"): "X2x2", ("X", "G"): "XxG"}


def product_lattice(A: PseudoClosedLattice, B: PseudoClosedLattice,
                    caps: Caps = DEFAULT_CAPS) -> PseudoClosedLattice:
    """Union/intersection closure of all rectangles; the convention used
    whenever a product lattice is not supplied explicitly."""
    ground = _PRODUCT_GROUND.get((A.ground, B.ground))
    if ground is None:
        raise NotALattice(frozenset(), frozenset(), frozenset())
    size = A.size * B.size
    if A.discrete and B.discrete:
        return discrete_lattice(ground, size)
    if A.discrete or B.discrete:
        return SectionProductLattice(ground, A, B, A.discrete)
    rects = set()
    for a in A.union_generators():
        for b in B.union_generators():
            rects.add(frozenset(x * B.size + y for x in a for y in b))
    rects.add(frozenset())
    rects.add(frozenset(range(size)))
    closed, _ = _close_family(rects, caps.lattice_cap)
    return PseudoClosedLattice(ground, size,
                               sorted(closed, key=lambda s: (len(s), sorted(s))))


@dataclass
class StructuredInstance:
    flow: Flow
    relation: EquivRelation
    lattices: dict
    name: str = ""

    def __post_init__(self):
        if not self.flow.is_group_flow:
            raise NotOrbital("structured instances need group flows")
        gn, n = self.flow.group.order, self.flow.points
        for ground in GROUNDS:
            if ground not in self.lattices:
                raise NotALattice(frozenset(), frozenset(), frozenset({ground}))
            lat = self.lattices[ground]
            if lat.size != ground_size(ground, gn, n):
                raise NotALattice(frozenset({lat.size}), frozenset(),
                                  frozenset({ground}))


def default_lattices(flow: Flow, lat_g: PseudoClosedLattice,
                     lat_x: PseudoClosedLattice,
                     caps: Caps = DEFAULT_CAPS) -> dict:
    """Fill in the four product lattices from the base two by rectangles
    plus closure."""
    lat_x2 = product_lattice(lat_x, lat_x, caps=caps)
    return {
        "G": lat_g,
        "X": lat_x,
        "GxX": product_lattice(lat_g, lat_x, caps=caps),
        "X2": lat_x2,
        "X2x2": product_lattice(lat_x2, lat_x2, caps=caps),
        "XxG": product_lattice(lat_x, lat_g, caps=caps),
    }


# -- agreeability ------------------------------------------------------------

@dataclass(frozen=True)
class AgreeabilityReport:
    agreeable: bool
    failures: tuple[tuple[int, tuple], ...]  # (axiom number, witness)

    def __bool__(self):
        return self.agreeable

    def failing_axioms(self):
        return tuple(sorted({axiom for axiom, _ in self.failures}))


def _sections_ok(inst, failures):
    """Axiom 1: sections of pseudo-closed sets are pseudo-closed."""
    n = inst.flow.points
    gn = inst.flow.group.order
    lat = inst.lattices
    specs = [
        ("GxX", gn, n, "G", "X"),
        ("X2", n, n, "X", "X"),
        ("X2x2", n * n, n * n, "X2", "X2"),
        ("XxG", n, gn, "X", "G"),
    ]
    for ground, rows, cols, row_ground, col_ground in specs:
        src = lat[ground]
        if lat[row_ground].discrete and lat[col_ground].discrete:
            continue
        if src.discrete:
            # sections of singletons are singletons: every factor singleton
            # must be pseudo-closed
            for c in range(cols):
                if not lat[col_ground].contains(frozenset({c})):
                    failures.append((1, (ground, "col-singleton", c)))
                    return
            for r in range(rows):
                if not lat[row_ground].contains(frozenset({r})):
                    failures.append((1, (ground, "row-singleton", r)))
                    return
            continue
        for S in src.union_generators():
            by_row = {}
            by_col = {}
            for idx in S:
                r, c = divmod(idx, cols)
                by_row.setdefault(r, set()).add(c)
                by_col.setdefault(c, set()).add(r)
            for r, sec in by_row.items():
                if not lat[col_ground].contains(frozenset(sec)):
                    failures.append((1, (ground, "row", r, tuple(sorted(sec)))))
                    return
            for c, sec in by_col.items():
                if not lat[row_ground].contains(frozenset(sec)):
                    failures.append((1, (ground, "col", c, tuple(sorted(sec)))))
                    return


def _products_ok(inst, failures):
    """Axiom 2: products of pseudo-closed sets are pseudo-closed."""
    lat = inst.lattices
    for left, right in _PRODUCT_GROUND:
        target = lat[_PRODUCT_GROUND[(left, right)]]
        if target.discrete:
            continue
        B_size = lat[right].size
        for a in lat[left].union_generators():
            for b in lat[right].union_generators():
                rect = frozenset(x * B_size + y for x in a for y in b)
                if not target.contains(rect):
                    failures.append((2, (left, right, tuple(sorted(a)),
                                         tuple(sorted(b)))))
                    return


def _action_continuous(inst, failures):
    """Axiom 3: preimages of pseudo-closed sets under (g, x) -> g·x."""
    flow = inst.flow
    lat = inst.lattices
    if lat["GxX"].discrete:
        return
    n = flow.points
    for S in lat["X"].union_generators():
        pre = frozenset(
            g * n + x
            for g in flow.group.elements()
            for x in range(n)
            if flow.act(g, x) in S
        )
        if not lat["GxX"].contains(pre):
            failures.append((3, (tuple(sorted(S)),)))
            return


def _graph_maps_continuous(inst, failures):
    """Axiom 4: preimages under x -> (x, g·x) for each g."""
    flow = inst.flow
    lat = inst.lattices
    if lat["X"].discrete:
        return
    n = flow.points
    for g in flow.group.elements():
        for S in lat["X2"].union_generators():
            pre = frozenset(x for x in range(n) if (x * n + flow.act(g, x)) in S)
            if not lat["X"].contains(pre):
                failures.append((4, (g, tuple(sorted(S))[:6])))
                return


def simultaneous_translation_relation(flow: Flow) -> frozenset[int]:
    """Pairs of pairs related by one simultaneous translation, as indices
    into the fourth power of the point set."""
    n = flow.points
    n2 = n * n
    out = set()
    for g in flow.group.elements():
        for x1 in range(n):
            gx1 = flow.act(g, x1)
            for x2 in range(n):
                p = x1 * n + x2
                q = gx1 * n + flow.act(g, x2)
                out.add(p * n2 + q)
    return frozenset(out)


def _restricted_projection_closed(inst, failures):
    """Axiom 5: the projection of the simultaneous-translation relation to
    its first pair coordinate maps relatively pseudo-closed sets to
    pseudo-closed sets."""
    flow = inst.flow
    lat = inst.lattices
    if lat["X2"].discrete:
        return
    n = flow.points
    n2 = n * n
    eg = simultaneous_translation_relation(flow)
    if lat["X2x2"].discrete:
        # singleton generators project to pair singletons, and every pair
        # occurs as a first coordinate (the identity translation)
        for p in range(n2):
            if not lat["X2"].contains(frozenset({p})):
                failures.append((5, ("pair-singleton", p)))
                return
        return
    for C in lat["X2x2"].union_generators():
        relative = frozenset(C) & eg
        image = frozenset(idx // n2 for idx in relative)
        if not lat["X2"].contains(image):
            failures.append((5, (tuple(sorted(image))[:6],)))
            return


def _pairing_map_closed(inst, failures):
    """Axiom 6: images of pseudo-closed sets under (x, g) -> (x, g·x)."""
    flow = inst.flow
    lat = inst.lattices
    if lat["X2"].discrete:
        return
    n = flow.points
    gn = flow.group.order
    for S in lat["XxG"].union_generators():
        image = frozenset(
            (idx // gn) * n + flow.act(idx % gn, idx // gn) for idx in S
        )
        if not lat["X2"].contains(image):
            failures.append((6, (tuple(sorted(S))[:6],)))
            return


def is_agreeable(inst: StructuredInstance) -> AgreeabilityReport:
    failures: list[tuple[int, tuple]] = []
    _sections_ok(inst, failures)
    _products_ok(inst, failures)
    _action_continuous(inst, failures)
    _graph_maps_continuous(inst, failures)
    _restricted_projection_closed(inst, failures)
    _pairing_map_closed(inst, failures)
    return AgreeabilityReport(not failures, tuple(failures))


# -- closedness-transfer verifiers --------------------------------------------

def _relation_index_set(E: EquivRelation) -> frozenset[int]:
    n = E.points
    return frozenset(a * n + b for (a, b) in E.pairs())


def _describe_lattice(lat) -> object:
    if lat.discrete:
        return "discrete"
    if lat.sets is None:
        return f"intensional({lat.ground})"
    return [sorted(s) for s in lat.sets]


def _serialize_instance(inst: StructuredInstance) -> dict:
    return {
        "name": inst.name,
        "points": inst.flow.points,
        "group_order": inst.flow.group.order,
        "classes": [list(c) for c in inst.relation.classes],
        "lattices": {
            g: _describe_lattice(lat) for g, lat in sorted(inst.lattices.items())
        },
    }


@dataclass(frozen=True)
class ThmOrbReport:
    relation_closed: bool
    classes_closed: bool
    kernel_closed: bool
    closed_subgroup_exists: bool
    equivalent: bool


def verify_thm_orb(inst: StructuredInstance, require_agreeable: bool = True,
                   caps: Caps = DEFAULT_CAPS) -> ThmOrbReport:
    """Evaluate the four closedness conditions for an orbital relation
    independently; on agreeable instances any divergence is a structural
    violation."""
    agree = is_agreeable(inst)
    if require_agreeable and not agree:
        raise NotAgreeable(agree.failures[0][0], agree.failures[0][1])
    E = inst.relation if inst.relation.flow is inst.flow else \
        inst.relation.bind(inst.flow)
    verdict = is_orbital(E)
    if not verdict:
        raise NotOrbital(f"relation is not orbital: {verdict.counterexample}")
    lat = inst.lattices
    c1 = lat["X2"].contains(_relation_index_set(E))
    c2 = all(lat["X"].contains(frozenset(c)) for c in E.classes)
    kern = kernel_group(E)
    c3 = lat["G"].contains(kern.members)
    c4 = any(
        lat["G"].contains(H.members) and orbit_relation(inst.flow, H) == E
        for H in enumerate_subgroups(inst.flow.group, caps=caps)
    )
    equivalent = c1 == c2 == c3 == c4
    if not equivalent and agree:
        raise TheoremViolation("orbital closedness-transfer equivalence",
                               _serialize_instance(inst))
    return ThmOrbReport(c1, c2, c3, c4, equivalent)


@dataclass(frozen=True)
class ThmWorbReport:
    relation_closed: bool
    classes_closed: bool                 # the witness-free weakening
    classes_closed_with_witness: bool    # full condition: + closed support
    closed_pair_exists: bool
    maximal_witnesses_closed: bool
    equivalent: bool                     # of the four full conditions


def verify_thm_worb(inst: StructuredInstance, require_agreeable: bool = True,
                    require_weakly_orbital: bool = True,
                    caps: Caps = DEFAULT_CAPS) -> ThmWorbReport:
    """Evaluate the weakly-orbital closedness-transfer conditions. The
    witness-free weakening of the second condition is reported separately:
    the equivalence is asserted only for the full conditions."""
    agree = is_agreeable(inst)
    if require_agreeable and not agree:
        raise NotAgreeable(agree.failures[0][0], agree.failures[0][1])
    E = inst.relation if inst.relation.flow is inst.flow else \
        inst.relation.bind(inst.flow)
    weak_verdict = is_weakly_orbital(E, caps=caps)
    if require_weakly_orbital and not weak_verdict:
        raise NotWeaklyOrbital("relation is not weakly orbital")
    flow = inst.flow
    lat = inst.lattices
    target = E.pairs()
    subgroups = enumerate_subgroups(flow.group, caps=caps)

    w1 = lat["X2"].contains(_relation_index_set(E))
    classes_closed = all(lat["X"].contains(frozenset(c)) for c in E.classes)

    def witnessing_supports(H):
        """Lattice members that witness E together with H."""
        sup = fix_set(E, H)
        if sup and r_relation(flow, WitnessPair(H, sup)).pairs == target:
            # the fix-set is the canonical maximal support for H
            yield sup
        if not lat["X"].discrete:
            for member in lat["X"].members():
                if not member or member == sup:
                    continue
                got = r_relation(flow, WitnessPair(H, frozenset(member)))
                if got.pairs == target:
                    yield frozenset(member)

    w2_witness = False
    w3 = False
    for H in subgroups:
        for sup in witnessing_supports(H):
            if lat["X"].contains(sup):
                w2_witness = True
                if lat["G"].contains(H.members):
                    w3 = True
                break
        if w3:
            break
    w2 = classes_closed and w2_witness

    w4 = True
    for H in subgroups:
        sup = fix_set(E, H)
        if not sup:
            continue
        if r_relation(flow, WitnessPair(H, sup)).pairs != target:
            continue
        # sup is the maximal support partnered with H
        if not lat["X"].contains(sup):
            w4 = False
            break
        if stabilizing_elements(E, sup) == H.members:
            # H is a maximal subgroup witness
            if not lat["G"].contains(H.members):
                w4 = False
                break

    equivalent = w1 == w2 == w3 == w4
    if not equivalent and agree:
        raise TheoremViolation("weakly-orbital closedness-transfer equivalence",
                               _serialize_instance(inst))
    return ThmWorbReport(w1, classes_closed, w2_witness, w3, w4, equivalent)


def stabilizer_and_fixset_closed(inst: StructuredInstance,
                                 caps: Caps = DEFAULT_CAPS) -> bool:
    """On agreeable instances: class stabilizers are pseudo-closed whenever
    the class is, and translate-fix sets are pseudo-closed whenever the
    relation is."""
    flow = inst.flow
    E = inst.relation if inst.relation.flow is flow else inst.relation.bind(flow)
    lat = inst.lattices
    G = flow.group
    for x in range(flow.points):
        cls = frozenset(E.classes[E.class_of[x]])
        if lat["X"].contains(cls):
            stab = frozenset(g for g in G.elements() if E.same(x, flow.act(g, x)))
            if not lat["G"].contains(stab):
                return False
    if lat["X2"].contains(_relation_index_set(E)):
        for h in G.elements():
            fx = frozenset(x for x in range(flow.points)
                           if E.same(x, flow.act(h, x)))
            if not lat["X"].contains(fx):
                return False
    return True
