"""Group-like relations on ambits and the identification of the class space
with a quotient of the ideal group of the enveloping semigroup.

A relation E on a pointed transitive action is group-like when the recipe
"class of g·basepoint times class of x is the class of g·x" gives a group
operation on the classes. This needs E invariant (second argument) and the
basepoint-class stabilizer to fix every class (first argument). A relation
is weakly group-like when a group-like relation on another ambit dominates
it; finitely, every invariant relation on a transitive group ambit is
dominated from the regular ambit, so the quotient identification applies to
all of them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    FiniteGroup,
    GroupQuotient,
    Subgroup,
    normal_core,
    quotient_group,
)
from .caps import DEFAULT_CAPS, Caps
from .ellis import (
    EllisSemigroup,
    IdealGroup,
    enveloping_semigroup,
    h_subgroup,
    ideal_group,
    minimal_left_ideals,
)
from .errors import (
    NotEquivalence,
    NotWeaklyGroupLike,
    TheoremViolation,
)
from .flows import Ambit, FlowMorphism, check_morphism, make_ambit, regular_flow
from .relations import EquivRelation, orbit_relation


def _transporters(ambit: Ambit) -> tuple[int, ...]:
    """For each point x some group element g with g·basepoint = x."""
    flow = ambit.flow
    G = flow.group
    transporter = [None] * flow.points
    transporter[ambit.basepoint] = G.identity
    frontier = [ambit.basepoint]
    while frontier:
        new = []
        for x in frontier:
            for g in G.gens or (G.identity,):
                y = flow.act(g, x)
                if transporter[y] is None:
                    transporter[y] = G.mul[g][transporter[x]]
                    new.append(y)
        frontier = new
    if any(t is None for t in transporter):
        raise NotWeaklyGroupLike("action is not transitive")
    return tuple(transporter)


@dataclass(frozen=True)
class GroupLikeCertificate:
    ambit: Ambit
    relation: EquivRelation
    quotient_group: FiniteGroup   # on class indices of the relation
    kernel: Subgroup              # elements moving the basepoint inside its class
    class_transporters: tuple[int, ...]  # class -> g with g·basepoint in class


@dataclass(frozen=True)
class GroupLikeVerdict:
    group_like: bool
    certificate: GroupLikeCertificate | None
    refutation: tuple | None

    def __bool__(self):
        return self.group_like


def check_group_like(ambit: Ambit, E: EquivRelation) -> GroupLikeVerdict:
    """Certificate or refutation for group-likeness of E on the ambit."""
    flow = ambit.flow
    if not flow.is_group_flow:
        raise NotEquivalence("group-likeness needs a group flow")
    if E.points != flow.points:
        raise NotEquivalence("relation on the wrong point set")
    bound = E if E.flow is flow else E.bind(flow)
    G = flow.group
    x0 = ambit.basepoint
    if not bound.invariant:
        return GroupLikeVerdict(False, None, ("not invariant",) + bound.invariance_witness)
    kernel_members = frozenset(
        g for g in G.elements() if bound.same(flow.act(g, x0), x0)
    )
    # the kernel must fix every class, i.e. lie inside the relation's kernel
    for k in sorted(kernel_members):
        for x in range(flow.points):
            if not bound.same(flow.act(k, x), x):
                return GroupLikeVerdict(False, None, (k, G.identity, x))
    kernel = Subgroup(G, kernel_members)
    if not kernel.is_normal():
        raise TheoremViolation("group-like kernel not normal", sorted(kernel_members))

    transporter = _transporters(ambit)
    k = len(bound.classes)
    class_transporter = tuple(transporter[cls[0]] for cls in bound.classes)
    table = []
    for c1 in range(k):
        g1 = class_transporter[c1]
        table.append(tuple(
            bound.class_of[flow.act(g1, bound.classes[c2][0])] for c2 in range(k)
        ))
    # totality / well-definedness across all representatives
    for g in G.elements():
        c1 = bound.class_of[flow.act(g, x0)]
        for x in range(flow.points):
            if bound.class_of[flow.act(g, x)] != table[c1][bound.class_of[x]]:
                raise TheoremViolation("class product ill-defined",
                                       (g, x, c1))
    identity = bound.class_of[x0]
    inverse = [None] * k
    for c in range(k):
        for d in range(k):
            if table[c][d] == identity and table[d][c] == identity:
                inverse[c] = d
                break
        if inverse[c] is None:
            return GroupLikeVerdict(False, None, ("no class inverse", c))
    for a in range(k):
        for b in range(k):
            for c in range(k):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    return GroupLikeVerdict(False, None,
                                            ("classes not associative", (a, b, c)))
    qgroup = FiniteGroup(tuple(table), identity, tuple(inverse),
                         gens=tuple(range(k)))
    cert = GroupLikeCertificate(ambit, bound, qgroup, kernel, class_transporter)
    _verify_quotient_is_g_mod_k(cert)
    return GroupLikeVerdict(True, cert, None)


def _verify_quotient_is_g_mod_k(cert: GroupLikeCertificate):
    """The classes form a group isomorphic to G modulo the kernel, via
    coset-of-g -> class of g·basepoint."""
    G = cert.ambit.flow.group
    flow = cert.ambit.flow
    x0 = cert.ambit.basepoint
    quo = quotient_group(G, cert.kernel)
    if quo.group.order != cert.quotient_group.order:
        raise TheoremViolation("class group has wrong order",
                               (quo.group.order, cert.quotient_group.order))
    image = {}
    for ci, coset in enumerate(quo.cosets):
        classes = {cert.relation.class_of[flow.act(g, x0)] for g in coset}
        if len(classes) != 1:
            raise TheoremViolation("coset maps to several classes", ci)
        image[ci] = classes.pop()
    if len(set(image.values())) != quo.group.order:
        raise TheoremViolation("coset-to-class map not injective", None)
    for a in range(quo.group.order):
        for b in range(quo.group.order):
            if image[quo.group.mul[a][b]] != \
                    cert.quotient_group.mul[image[a]][image[b]]:
                raise TheoremViolation("coset-to-class map not multiplicative",
                                       (a, b))


@dataclass(frozen=True)
class OrbitMapReport:
    values: tuple[int, ...]     # semigroup element -> class index
    surjective: bool
    homomorphism: bool
    idempotents_in_kernel: bool


def orbit_map_r(ambit: Ambit, cert: GroupLikeCertificate,
                S: EllisSemigroup) -> OrbitMapReport:
    """Evaluation at the basepoint followed by the class map, as a semigroup
    homomorphism onto the class group. Violations are structural failures."""
    E = cert.relation
    x0 = ambit.basepoint
    values = tuple(E.class_of[f[x0]] for f in S.elements)
    surjective = len(set(values)) == len(E.classes)
    if not surjective:
        raise TheoremViolation("orbit map not surjective", len(set(values)))
    q = cert.quotient_group
    for i in range(S.size):
        for j in range(S.size):
            if values[S.mul(i, j)] != q.mul[values[i]][values[j]]:
                raise TheoremViolation("orbit map not multiplicative", (i, j))
    for M in minimal_left_ideals(S):
        for u in M.idempotents:
            if values[u] != q.identity:
                raise TheoremViolation("idempotent outside orbit-map kernel", u)
    return OrbitMapReport(values, True, True, True)


def compute_D(G_ideal: IdealGroup, ambit: Ambit) -> Subgroup:
    """Elements of the ideal group whose basepoint value matches the
    idempotent's; its cosets are exactly the fibers of evaluation at the
    basepoint (verified on all pairs)."""
    S = G_ideal.parent
    x0 = ambit.basepoint
    u = G_ideal.idempotent
    base_value = S.elements[u][x0]
    members = frozenset(
        G_ideal.to_group[s] for s in G_ideal.members
        if S.elements[s][x0] == base_value
    )
    D = Subgroup(G_ideal.group_view, members)
    gv = G_ideal.group_view
    for i, s in enumerate(G_ideal.members):
        for j, t in enumerate(G_ideal.members):
            same_value = S.elements[s][x0] == S.elements[t][x0]
            quotient_in_d = gv.mul[gv.inverse[i]][j] in members
            if same_value != quotient_in_d:
                raise TheoremViolation("basepoint fibers are not cosets", (s, t))
    return D


def compute_ghat(G_ideal: IdealGroup, ambit: Ambit) -> GroupQuotient:
    """The ideal group modulo the normal core of H·D, where H is the
    (finitely trivial) intersection of closures of identity neighbourhoods
    and D the basepoint stabilizer."""
    gv = G_ideal.group_view
    H = h_subgroup(G_ideal)
    D = compute_D(G_ideal, ambit)
    hd = frozenset(gv.mul[h][d] for h in H.members for d in D.members)
    core = normal_core(gv, Subgroup(gv, hd))
    return quotient_group(gv, core)


@dataclass(frozen=True)
class DominationWitness:
    source: Ambit                   # the dominating ambit
    source_relation: EquivRelation  # group-like relation on it
    morphism: FlowMorphism          # onto the target ambit
    target_relation: EquivRelation


@dataclass(frozen=True)
class DominationVerdict:
    dominates: bool
    refutation: tuple | None
    orbit_map: tuple[int, ...] | None  # source class -> target class

    def __bool__(self):
        return self.dominates


def check_domination(w: DominationWitness) -> DominationVerdict:
    """Refinement plus left-invariance of the induced relation on the
    source quotient group; returns the induced surjection of class spaces."""
    rep = check_morphism(w.morphism)
    if not rep:
        return DominationVerdict(False, ("morphism", rep.witness), None)
    src_verdict = check_group_like(w.source, w.source_relation)
    if not src_verdict:
        return DominationVerdict(False, ("source not group-like",
                                         src_verdict.refutation), None)
    F = src_verdict.certificate.relation
    E = w.target_relation
    pm = w.morphism.point_map
    n = w.source.flow.points
    for z1 in range(n):
        for z2 in range(n):
            if F.same(z1, z2) and not E.same(pm[z1], pm[z2]):
                return DominationVerdict(False, ("no refinement", (z1, z2)), None)
    # induced relation on source classes, pushed through the morphism
    src_classes = F.classes
    induced = tuple(E.class_of[pm[cls[0]]] for cls in src_classes)
    q = src_verdict.certificate.quotient_group
    for wcls in range(len(src_classes)):
        for c1 in range(len(src_classes)):
            for c2 in range(len(src_classes)):
                if induced[c1] == induced[c2]:
                    if induced[q.mul[wcls][c1]] != induced[q.mul[wcls][c2]]:
                        return DominationVerdict(
                            False, ("not left invariant", (wcls, c1, c2)), None)
    if len(set(induced)) != len(E.classes):
        return DominationVerdict(False, ("induced map not onto", None), None)
    return DominationVerdict(True, None, induced)


def default_domination(ambit: Ambit, E: EquivRelation) -> DominationWitness:
    """Domination discovered from the regular ambit: the coset relation of
    the basepoint-class stabilizer when that subgroup is normal (a tighter
    witness), else equality (which always dominates an invariant relation
    on a transitive ambit)."""
    flow = ambit.flow
    G = flow.group
    x0 = ambit.basepoint
    bound = E if E.flow is flow else E.bind(flow)
    if not bound.invariant:
        raise NotWeaklyGroupLike(("not invariant",) + tuple(bound.invariance_witness or ()))
    reg = make_ambit(regular_flow(G), G.identity)
    members = frozenset(g for g in G.elements() if bound.same(flow.act(g, x0), x0))
    K = Subgroup(G, members)
    if K.is_normal():
        F = orbit_relation(reg.flow, K)  # orbits = cosets; normal, so invariant
    else:
        F = EquivRelation(G.order, tuple((g,) for g in G.elements()), reg.flow)
    pm = tuple(flow.act(g, x0) for g in G.elements())
    morphism = FlowMorphism(reg, ambit, pm)
    return DominationWitness(reg, F, morphism, bound)


@dataclass(frozen=True)
class IdentificationReport:
    ghat: GroupQuotient
    stabilizer: Subgroup            # of ghat.group
    class_count: int
    coset_to_class: tuple[int, ...]
    cardinality_identity: bool      # |X/E| * |H| == |Ghat|
    equivariant: bool
    domination: DominationWitness


def identify_quotient(ambit: Ambit, E: EquivRelation,
                      domination: DominationWitness | None = None,
                      caps: Caps = DEFAULT_CAPS) -> IdentificationReport:
    """The central identification: build the quotient of the ideal group by
    the core of H·D, act with it on the classes, and verify that the orbit
    map at the basepoint class induces an equivariant bijection between the
    quotient modulo the basepoint-class stabilizer and the class space,
    whose fibers are exactly the stabilizer's left cosets."""
    flow = ambit.flow
    if not flow.is_group_flow:
        raise NotWeaklyGroupLike("needs a group flow")
    bound = E if E.flow is flow else E.bind(flow)
    witness = domination or default_domination(ambit, bound)
    verdict = check_domination(witness)
    if not verdict:
        raise NotWeaklyGroupLike(verdict.refutation)

    S = enveloping_semigroup(flow, caps=caps)
    M = minimal_left_ideals(S)[0]
    IG = ideal_group(M, M.idempotents[0])
    ghat = compute_ghat(IG, ambit)
    gv = IG.group_view
    x0 = ambit.basepoint
    u = IG.idempotent

    # the idempotent must act trivially on classes
    for x in range(flow.points):
        if not bound.same(S.elements[u][x], x):
            raise TheoremViolation("idempotent moves a class", x)

    # class of f(x) depends only on the coset of f and the class of x
    k = ghat.group.order
    value = [None] * k  # coset -> class of f(x0)
    for ci, coset in enumerate(ghat.cosets):
        rep = S.elements[IG.from_group[coset[0]]]
        value[ci] = bound.class_of[rep[x0]]
        for gi in coset:
            f = S.elements[IG.from_group[gi]]
            if bound.class_of[f[x0]] != value[ci]:
                raise TheoremViolation("orbit map ill-defined on coset", (ci, gi))
            for x in range(flow.points):
                if bound.class_of[f[x]] != bound.class_of[rep[x]]:
                    raise TheoremViolation("action ill-defined on coset", (ci, gi, x))
    rhat = tuple(value)

    if len(set(rhat)) != len(bound.classes):
        raise TheoremViolation("identification map not onto classes",
                               len(set(rhat)))

    stab_members = frozenset(c for c in range(k) if rhat[c] == bound.class_of[x0])
    H = Subgroup(ghat.group, stab_members)

    # fibers of the orbit map are exactly the left cosets of the stabilizer
    for c1 in range(k):
        for c2 in range(k):
            same_fiber = rhat[c1] == rhat[c2]
            same_coset = ghat.group.mul[ghat.group.inverse[c1]][c2] in stab_members
            if same_fiber != same_coset:
                raise TheoremViolation("fibers are not stabilizer cosets", (c1, c2))

    if len(bound.classes) * H.order != k:
        raise TheoremViolation("cardinality identity fails",
                               (len(bound.classes), H.order, k))

    coset_to_class = []
    seen = set()
    for c in range(k):
        if rhat[c] not in seen:
            seen.add(rhat[c])
            coset_to_class.append(rhat[c])

    # equivariance along the natural map from the acting group
    G = flow.group
    equivariant = True
    for g in G.elements():
        pg = S.index[flow.map_of(g)]
        nat = ghat.projection[IG.to_group[S.mul(S.mul(u, pg), u)]]
        for c in range(k):
            lhs = rhat[ghat.group.mul[nat][c]]
            rep_point = bound.classes[rhat[c]][0]
            rhs = bound.class_of[flow.act(g, rep_point)]
            if lhs != rhs:
                raise TheoremViolation("identification not equivariant", (g, c))
    return IdentificationReport(ghat, H, len(bound.classes), tuple(coset_to_class),
                                True, equivariant, witness)


# -- properly and uniformly properly group-like witnesses ---------------------

@dataclass(frozen=True)
class ProperWitness:
    cover_group: FiniteGroup
    fiber_map: tuple[int, ...]   # cover element -> point
    ambit: Ambit
    relation: EquivRelation


@dataclass(frozen=True)
class ProperWitnessVerdict:
    valid: bool
    homomorphism: bool
    pseudocomplete: bool
    surjective: bool
    quotient_set: frozenset[int]   # points [g1^-1 g2] over fiber-equal pairs
    refutation: tuple | None

    def __bool__(self):
        return self.valid


def check_proper_witness(pw: ProperWitness) -> ProperWitnessVerdict:
    """Three checks: the induced map to the class group is a homomorphism
    (this already fails when the relation is not group-like, since then
    there is no class group); finite pseudocompleteness (all limit triples
    are realized by cover elements, with nets replaced by their eventually
    constant values); and the fiber-difference set is computed (closedness
    is automatic). Pseudocompleteness and the fiber-difference set are
    still evaluated when the homomorphism leg fails."""
    flow = pw.ambit.flow
    G = flow.group
    GT = pw.cover_group
    fm = pw.fiber_map
    if len(fm) != GT.order or any(not 0 <= x < flow.points for x in fm):
        return ProperWitnessVerdict(False, False, False, False, frozenset(),
                                    ("fiber map shape",))
    surjective = len(set(fm)) == flow.points
    refutation = None
    if not surjective:
        refutation = ("fiber map not onto",
                      min(set(range(flow.points)) - set(fm)))
    cert_verdict = check_group_like(pw.ambit, pw.relation)
    if cert_verdict:
        cert = cert_verdict.certificate
        E = cert.relation
        q = cert.quotient_group
        hom = True
        for a in range(GT.order):
            for b in range(GT.order):
                lhs = E.class_of[fm[GT.mul[a][b]]]
                rhs = q.mul[E.class_of[fm[a]]][E.class_of[fm[b]]]
                if lhs != rhs:
                    hom = False
                    if refutation is None:
                        refutation = ("not a homomorphism", (a, b))
                    break
            if not hom:
                break
    else:
        hom = False
        if refutation is None:
            refutation = ("relation not group-like", cert_verdict.refutation)
    x0 = pw.ambit.basepoint
    fibers: dict[int, list[int]] = {}
    for gt, x in enumerate(fm):
        fibers.setdefault(x, []).append(gt)
    pseudocomplete = True
    for g in G.elements():
        gx0 = flow.act(g, x0)
        for p in range(flow.points):
            target = flow.act(g, p)
            ok = any(
                fm[GT.mul[g1][g2]] == target
                for g1 in fibers.get(gx0, ())
                for g2 in fibers.get(p, ())
            )
            if not ok:
                pseudocomplete = False
                if refutation is None:
                    refutation = ("pseudocompleteness", (g, p))
                break
        if not pseudocomplete:
            break
    quotient_set = frozenset(
        fm[GT.mul[GT.inverse[g1]][g2]]
        for x, fiber in fibers.items()
        for g1 in fiber
        for g2 in fiber
    )
    valid = surjective and hom and pseudocomplete
    return ProperWitnessVerdict(valid, hom, pseudocomplete, surjective,
                                quotient_set, refutation)


@dataclass(frozen=True)
class UniformWitnessFamily:
    members: tuple[frozenset[tuple[int, int]], ...]
    successor: tuple[int, ...]   # index of D' for each member D


@dataclass(frozen=True)
class UniformWitnessVerdict:
    valid: bool
    refutation: tuple | None

    def __bool__(self):
        return self.valid


def check_uniform_witness(E: EquivRelation, fam: UniformWitnessFamily,
                          pw: ProperWitness) -> UniformWitnessVerdict:
    """Symmetric reflexive approximations whose union is the relation, each
    composition-dominated by its successor, satisfying the translation
    condition at the basepoint."""
    pw_verdict = check_proper_witness(pw)
    if not pw_verdict:
        return UniformWitnessVerdict(False, ("proper witness invalid",
                                             pw_verdict.refutation))
    n = E.points
    if len(fam.successor) != len(fam.members):
        return UniformWitnessVerdict(False, ("successor map shape",))
    for idx, D in enumerate(fam.members):
        for (a, b) in D:
            if (b, a) not in D:
                return UniformWitnessVerdict(False, ("not symmetric", (idx, a, b)))
        for x in range(n):
            if (x, x) not in D:
                return UniformWitnessVerdict(False, ("diagonal missing", (idx, x)))
    union = frozenset().union(*fam.members) if fam.members else frozenset()
    if union != E.pairs():
        return UniformWitnessVerdict(False, ("union differs from relation",
                                             len(union ^ E.pairs())))
    for idx, D in enumerate(fam.members):
        succ = fam.members[fam.successor[idx]]
        by_left: dict[int, set[int]] = {}
        for (a, b) in D:
            by_left.setdefault(a, set()).add(b)
        for (a, b) in D:
            for c in by_left.get(b, ()):
                if (a, c) not in succ:
                    return UniformWitnessVerdict(False,
                                                 ("composition escapes successor",
                                                  (idx, a, b, c)))
    GT = pw.cover_group
    fm = pw.fiber_map
    x0 = pw.ambit.basepoint
    for idx, D in enumerate(fam.members):
        succ = fam.members[fam.successor[idx]]
        for gt in range(GT.order):
            if (x0, fm[gt]) not in D:
                continue
            for gt2 in range(GT.order):
                pair = (fm[gt2], fm[GT.mul[gt][gt2]])
                if pair not in succ:
                    return UniformWitnessVerdict(False,
                                                 ("translation condition",
                                                  (idx, gt, gt2)))
    return UniformWitnessVerdict(True, None)
