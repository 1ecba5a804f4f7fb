import pytest

from elliskit.algebra import (
    are_isomorphic,
    enumerate_subgroups,
    named_group,
    subgroup_generated,
)
from elliskit.ellis import (
    enveloping_semigroup,
    ideal_group,
    minimal_left_ideals,
)
from elliskit.errors import NotWeaklyGroupLike
from elliskit.flows import make_ambit, natural_flow, regular_flow, transformation_flow
from elliskit.grouplike import (
    DominationWitness,
    ProperWitness,
    UniformWitnessFamily,
    check_domination,
    check_group_like,
    check_proper_witness,
    check_uniform_witness,
    compute_D,
    compute_ghat,
    default_domination,
    identify_quotient,
    orbit_map_r,
)
from elliskit.flows import FlowMorphism
from elliskit.relations import (
    equality_relation,
    invariant_relations,
    make_relation,
    orbit_relation,
    total_relation,
)


def s3():
    return named_group("symmetric", n=3)


def regular_ambit(G):
    return make_ambit(regular_flow(G), G.identity)


# ---- group-likeness -----------------------------------------------------------

def test_equality_on_regular_ambit_group_like():
    G = s3()
    amb = regular_ambit(G)
    verdict = check_group_like(amb, equality_relation(G.order))
    assert verdict
    cert = verdict.certificate
    assert cert.kernel.members == {G.identity}
    assert are_isomorphic(cert.quotient_group, G)


def test_total_relation_group_like():
    amb = make_ambit(natural_flow(s3()), 0)
    verdict = check_group_like(amb, total_relation(3))
    assert verdict and verdict.certificate.quotient_group.order == 1


def test_right_cosets_of_non_normal_refuted():
    G = s3()
    amb = regular_ambit(G)
    t = next(g for g in G.elements() if G.element_order(g) == 2)
    H = subgroup_generated(G, [t])
    E = orbit_relation(amb.flow, H)  # right cosets; not invariant
    verdict = check_group_like(amb, E)
    assert not verdict
    assert verdict.refutation is not None


def test_equality_on_natural_s3_not_group_like():
    # the basepoint stabilizer moves other points, so the class operation
    # is ill-defined in its first argument
    amb = make_ambit(natural_flow(s3()), 0)
    verdict = check_group_like(amb, equality_relation(3))
    assert not verdict
    g, gprime, x = verdict.refutation
    f = amb.flow
    assert f.act(g, 0) == f.act(gprime, 0)
    assert f.act(g, x) != f.act(gprime, x)


def test_normal_coset_relation_group_like():
    G = s3()
    amb = regular_ambit(G)
    a3 = next(s for s in enumerate_subgroups(G) if s.order == 3)
    E = orbit_relation(amb.flow, a3)
    verdict = check_group_like(amb, E)
    assert verdict
    assert verdict.certificate.quotient_group.order == 2
    assert verdict.certificate.kernel.members == a3.members


# ---- orbit map ------------------------------------------------------------------

def test_orbit_map_total_relation():
    amb = make_ambit(natural_flow(s3()), 0)
    cert = check_group_like(amb, total_relation(3)).certificate
    S = enveloping_semigroup(amb.flow)
    rep = orbit_map_r(amb, cert, S)
    assert set(rep.values) == {cert.quotient_group.identity}


def test_orbit_map_z6_cosets():
    G = named_group("cyclic", n=6)
    amb = regular_ambit(G)
    E = orbit_relation(amb.flow, subgroup_generated(G, [3]))
    cert = check_group_like(amb, E).certificate
    S = enveloping_semigroup(amb.flow)
    rep = orbit_map_r(amb, cert, S)
    assert rep.surjective and rep.homomorphism and rep.idempotents_in_kernel
    assert len(set(rep.values)) == 3
    kernel = {i for i, v in enumerate(rep.values)
              if v == cert.quotient_group.identity}
    assert {S.elements[i][0] for i in kernel} == {0, 3}


# ---- basepoint stabilizer in the ideal group -----------------------------------

def test_D_trivial_on_regular_ambit():
    G = s3()
    amb = regular_ambit(G)
    S = enveloping_semigroup(amb.flow)
    M = minimal_left_ideals(S)[0]
    IG = ideal_group(M, M.idempotents[0])
    D = compute_D(IG, amb)
    assert D.order == 1


def test_D_is_point_stabilizer_on_natural_s3():
    amb = make_ambit(natural_flow(s3()), 0)
    S = enveloping_semigroup(amb.flow)
    M = minimal_left_ideals(S)[0]
    IG = ideal_group(M, M.idempotents[0])
    D = compute_D(IG, amb)
    assert D.order == 2
    assert not D.is_normal()


def test_D_on_collapsing_transformation_instance():
    # swap + constant: the minimal ideal is the two constants, each ideal
    # group is trivial, so D is trivial at each idempotent
    f = transformation_flow([(1, 0), (0, 0)])
    amb = make_ambit(f, 0)
    S = enveloping_semigroup(f)
    M = minimal_left_ideals(S)[0]
    for u in M.idempotents:
        IG = ideal_group(M, u)
        D = compute_D(IG, amb)
        assert D.order == 1


def test_ghat_regular_ambit():
    G = s3()
    amb = regular_ambit(G)
    S = enveloping_semigroup(amb.flow)
    M = minimal_left_ideals(S)[0]
    IG = ideal_group(M, M.idempotents[0])
    ghat = compute_ghat(IG, amb)
    assert ghat.group.order == 6


def test_ghat_natural_s3():
    amb = make_ambit(natural_flow(s3()), 0)
    S = enveloping_semigroup(amb.flow)
    M = minimal_left_ideals(S)[0]
    IG = ideal_group(M, M.idempotents[0])
    ghat = compute_ghat(IG, amb)
    # the core of the point stabilizer is trivial, so nothing is collapsed
    assert ghat.group.order == 6
    assert are_isomorphic(ghat.group, s3())


def test_ghat_zn_rotation():
    for n in (3, 4, 5):
        G = named_group("cyclic", n=n)
        amb = make_ambit(natural_flow(G), 0)
        S = enveloping_semigroup(amb.flow)
        M = minimal_left_ideals(S)[0]
        IG = ideal_group(M, M.idempotents[0])
        ghat = compute_ghat(IG, amb)
        assert are_isomorphic(ghat.group, G)


# ---- domination ------------------------------------------------------------------

def test_self_domination():
    G = s3()
    amb = regular_ambit(G)
    a3 = next(s for s in enumerate_subgroups(G) if s.order == 3)
    E = orbit_relation(amb.flow, a3)
    ident = FlowMorphism(amb, amb, tuple(range(G.order)))
    w = DominationWitness(amb, E, ident, E)
    assert check_domination(w)


def test_equality_on_regular_dominates_everything():
    amb = make_ambit(natural_flow(s3()), 0)
    for E in invariant_relations(amb.flow):
        w = default_domination(amb, E)
        verdict = check_domination(w)
        assert verdict
        assert len(set(verdict.orbit_map)) == len(E.classes)


def test_no_refinement_refuted():
    G = s3()
    amb = regular_ambit(G)
    a3 = next(s for s in enumerate_subgroups(G) if s.order == 3)
    coarse = orbit_relation(amb.flow, a3)
    ident = FlowMorphism(amb, amb, tuple(range(G.order)))
    w = DominationWitness(amb, coarse, ident, equality_relation(G.order))
    verdict = check_domination(w)
    assert not verdict and verdict.refutation[0] == "no refinement"


# ---- quotient identification --------------------------------------------------------

def test_identify_equality_on_natural_s3():
    amb = make_ambit(natural_flow(s3()), 0)
    rep = identify_quotient(amb, equality_relation(3))
    assert rep.class_count == 3
    assert rep.ghat.group.order == 6
    assert rep.stabilizer.order == 2
    assert rep.cardinality_identity and rep.equivariant


def test_identify_total():
    amb = make_ambit(natural_flow(s3()), 0)
    rep = identify_quotient(amb, total_relation(3))
    assert rep.class_count == 1
    assert rep.stabilizer.order == rep.ghat.group.order


def test_identify_z6_cosets():
    G = named_group("cyclic", n=6)
    amb = regular_ambit(G)
    E = orbit_relation(amb.flow, subgroup_generated(G, [2]))
    rep = identify_quotient(amb, E)
    assert rep.ghat.group.order == 6
    assert rep.stabilizer.order == 3
    assert rep.class_count == 2


def test_identify_rejects_non_invariant():
    G = s3()
    amb = regular_ambit(G)
    t = next(g for g in G.elements() if G.element_order(g) == 2)
    E = orbit_relation(amb.flow, subgroup_generated(G, [t]))
    with pytest.raises(NotWeaklyGroupLike):
        identify_quotient(amb, E)


def test_identify_all_invariant_relations_small():
    for f in [natural_flow(s3()), natural_flow(named_group("dihedral", n=4))]:
        amb = make_ambit(f, 0)
        for E in invariant_relations(f):
            rep = identify_quotient(amb, E)
            assert rep.class_count * rep.stabilizer.order == rep.ghat.group.order


def test_identification_reproduces_stabilizer_index():
    # on any transitive instance, the class count equals the index of the
    # basepoint-class stabilizer in the acting group
    for f in [natural_flow(s3()), regular_ambit(named_group("cyclic", n=6)).flow,
              natural_flow(named_group("dihedral", n=4))]:
        amb = make_ambit(f, 0)
        G = f.group
        for E in invariant_relations(f):
            stab = sum(1 for g in G.elements() if E.same(f.act(g, 0), 0))
            rep = identify_quotient(amb, E)
            assert rep.class_count == G.order // stab
            # and the domination discovered along the way verifies
            assert check_domination(rep.domination)


# ---- proper and uniform witnesses -----------------------------------------------------

def test_proper_witness_regular():
    G = s3()
    amb = regular_ambit(G)
    a3 = next(s for s in enumerate_subgroups(G) if s.order == 3)
    E = orbit_relation(amb.flow, a3)
    pw = ProperWitness(G, tuple(range(G.order)), amb, E)
    verdict = check_proper_witness(pw)
    assert verdict and verdict.homomorphism and verdict.pseudocomplete


def test_proper_witness_s3_natural_total():
    # cover the natural ambit by the group itself through evaluation
    G = s3()
    amb = make_ambit(natural_flow(G), 0)
    fm = tuple(G.perms[g][0] for g in G.elements())
    pw = ProperWitness(G, fm, amb, total_relation(3))
    verdict = check_proper_witness(pw)
    assert verdict
    # the fiber-difference set contains the basepoint
    assert 0 in verdict.quotient_set


def test_proper_witness_non_surjective_refuted():
    G = s3()
    amb = make_ambit(natural_flow(G), 0)
    pw = ProperWitness(G, tuple(0 for _ in G.elements()), amb, total_relation(3))
    verdict = check_proper_witness(pw)
    assert not verdict and not verdict.surjective


def test_proper_witness_evaluation_covering_natural_ambit():
    # covering the natural ambit by evaluation: the homomorphism leg fails
    # (equality is not group-like there: the basepoint stabilizer is not
    # normal), but pseudocompleteness holds and the fiber-difference set is
    # the basepoint's stabilizer orbit, i.e. the fixed-point set
    G = s3()
    amb = make_ambit(natural_flow(G), 0)
    fm = tuple(G.perms[g][0] for g in G.elements())
    pw = ProperWitness(G, fm, amb, equality_relation(3))
    verdict = check_proper_witness(pw)
    assert verdict.surjective
    assert verdict.pseudocomplete
    assert not verdict.homomorphism
    assert verdict.quotient_set == frozenset({0})


def test_uniform_witness_single_member():
    G = s3()
    amb = regular_ambit(G)
    a3 = next(s for s in enumerate_subgroups(G) if s.order == 3)
    E = orbit_relation(amb.flow, a3)
    pw = ProperWitness(G, tuple(range(G.order)), amb, E)
    fam = UniformWitnessFamily((E.pairs(),), (0,))
    assert check_uniform_witness(E, fam, pw)


def test_uniform_witness_word_length_chain():
    # distance-k approximations to the coset relation of a generated
    # subgroup, with successor k -> 2k+2
    G = named_group("dihedral", n=4)
    amb = regular_ambit(G)
    gens = [g for g in G.elements() if G.element_order(g) == 2][:2]
    H = subgroup_generated(G, gens)
    E = orbit_relation(amb.flow, H)
    if not E.invariant:
        E = make_relation(G.order, E.classes, amb.flow)
    # word-length balls inside H: D_k relates g to wg for words w of length <= k
    sym_gens = sorted({*gens, *(G.inverse[g] for g in gens)})
    balls = [{G.identity}]
    while True:
        last = balls[-1]
        nxt = set(last)
        for w in last:
            for s in sym_gens:
                nxt.add(G.mul[s][w])
        if nxt == last:
            break
        balls.append(nxt)
    depth = len(balls)
    members = []
    for k in range(depth):
        ball = balls[k]
        members.append(frozenset(
            (x, G.mul[w][x]) for x in G.elements() for w in ball
        ))
    successor = tuple(min(2 * k + 2, depth - 1) for k in range(depth))
    fam = UniformWitnessFamily(tuple(members), successor)
    pw = ProperWitness(G, tuple(range(G.order)), amb, E)
    verdict = check_uniform_witness(E, fam, pw)
    assert verdict, verdict.refutation


def test_uniform_witness_missing_diagonal_refuted():
    G = s3()
    amb = regular_ambit(G)
    a3 = next(s for s in enumerate_subgroups(G) if s.order == 3)
    E = orbit_relation(amb.flow, a3)
    pw = ProperWitness(G, tuple(range(G.order)), amb, E)
    broken = frozenset(p for p in E.pairs() if p != (0, 0))
    fam = UniformWitnessFamily((broken,), (0,))
    verdict = check_uniform_witness(E, fam, pw)
    assert not verdict and verdict.refutation[0] == "diagonal missing"
