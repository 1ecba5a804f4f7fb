"""Enveloping semigroup of a finite flow and its ideal/idempotent structure.

The enveloping semigroup here is the composition closure of the flow's
acting maps inside the (finite, discrete) space of self-maps of the point
set. In this discrete setting every net of maps is eventually constant, so
the limit-based operations collapse to algebra: a∘B evaluates to aB, the
induced closure operator on an ideal group is the identity, and the
intersection of closures of neighbourhoods of the identity is a singleton.
The operations below still evaluate the defining formulas literally and
raise TheoremViolation if the collapse ever failed to hold.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import FiniteGroup, Subgroup, small_generating_set
from .caps import DEFAULT_CAPS, Caps
from .errors import (
    ClosureCapExceeded,
    IsomorphismViolated,
    NotIdempotent,
    NotInIdeal,
    NotWellDefined,
    TheoremViolation,
)
from .flows import Flow, FlowMorphism, check_morphism


def _compose(outer, inner):
    return tuple(outer[i] for i in inner)


class EllisSemigroup:
    """Composition closure of the acting maps, in discovery order.

    Full multiplication tables are only materialized for small closures;
    above the cap, products are memoized on demand (an explicit table at the
    default closure cap would not fit in memory).
    """

    __slots__ = ("flow", "elements", "index", "generators", "_table", "_memo")

    def __init__(self, flow, elements, index, generators, table):
        self.flow = flow
        self.elements = elements
        self.index = index
        self.generators = generators
        self._table = table
        self._memo = {} if table is None else None

    @property
    def size(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        """Index of the map x -> elements[i](elements[j](x))."""
        if self._table is not None:
            return self._table[i][j]
        got = self._memo.get((i, j))
        if got is None:
            got = self.index[_compose(self.elements[i], self.elements[j])]
            self._memo[(i, j)] = got
        return got

    def is_idempotent(self, i: int) -> bool:
        return self.mul(i, i) == i

    def left_reach(self, s: int) -> set[int]:
        """S·s: everything reachable by left multiplication (words >= 1)."""
        seen = set()
        frontier = [self.mul(g, s) for g in self.generators]
        for y in frontier:
            seen.add(y)
        while frontier:
            new = []
            for x in frontier:
                for g in self.generators:
                    y = self.mul(g, x)
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
            frontier = new
        return seen

    def __repr__(self):
        return f"EllisSemigroup(size={self.size}, points={self.flow.points})"


@dataclass(frozen=True)
class MinimalIdeal:
    parent: EllisSemigroup
    members: tuple[int, ...]
    idempotents: tuple[int, ...]

    @property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)


@dataclass(frozen=True)
class IdealGroup:
    ideal: MinimalIdeal
    idempotent: int
    members: tuple[int, ...]            # semigroup element indices
    group_view: FiniteGroup             # same elements re-indexed 0..k-1
    to_group: dict                      # semigroup index -> group index
    from_group: tuple[int, ...]         # group index -> semigroup index

    @property
    def parent(self) -> EllisSemigroup:
        return self.ideal.parent


def enveloping_semigroup(flow: Flow, caps: Caps = DEFAULT_CAPS) -> EllisSemigroup:
    """Breadth-first composition closure of the flow's generator maps.

    For a group flow the closure of any generating set of the (finite) group
    equals the full image of the group, so generators suffice.
    """
    gens = flow.generator_maps()
    elements: list[tuple[int, ...]] = []
    index: dict[tuple[int, ...], int] = {}
    for m in gens:
        m = tuple(m)
        if m not in index:
            index[m] = len(elements)
            elements.append(m)
    gen_ids = tuple(range(len(elements)))
    cursor = 0
    while cursor < len(elements):
        w = elements[cursor]
        cursor += 1
        for gi in gen_ids:
            cand = _compose(w, elements[gi])
            if cand not in index:
                if len(elements) >= caps.closure_cap:
                    raise ClosureCapExceeded(len(elements), caps.closure_cap)
                index[cand] = len(elements)
                elements.append(cand)
            cand2 = _compose(elements[gi], w)
            if cand2 not in index:
                if len(elements) >= caps.closure_cap:
                    raise ClosureCapExceeded(len(elements), caps.closure_cap)
                index[cand2] = len(elements)
                elements.append(cand2)
    n = len(elements)
    table = None
    if n <= caps.mul_table_cap:
        table = tuple(
            tuple(index[_compose(elements[i], elements[j])] for j in range(n))
            for i in range(n)
        )
    S = EllisSemigroup(flow, tuple(elements), index, gen_ids, table)
    # one-step stability: the closure is closed and every element reachable
    for i in gen_ids:
        for j in range(n):
            if S.mul(i, j) >= n or S.mul(j, i) >= n:
                raise TheoremViolation("composition closure not closed", (i, j))
    return S


def _tarjan_sccs(n, successors):
    """Iterative Tarjan; returns list of components (each a list of nodes)."""
    index_of = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index_of[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index_of[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            succ = successors(v)
            while pi < len(succ):
                w = succ[pi]
                pi += 1
                if index_of[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index_of[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index_of[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    return comps


def minimal_left_ideals(S: EllisSemigroup) -> list[MinimalIdeal]:
    """All minimal left ideals, as the sink strongly-connected components of
    the left Cayley graph f -> g·f over the generators.

    Reachability through generator edges is exactly left multiplication by
    nonempty words, i.e. by arbitrary semigroup elements, so a component
    with no outgoing edges C satisfies S·f = C for every f in C, which is
    minimality. Every ideal is validated against the structure facts before
    being returned.
    """
    n = S.size
    succ_cache = [None] * n

    def successors(v):
        got = succ_cache[v]
        if got is None:
            got = [S.mul(g, v) for g in S.generators]
            succ_cache[v] = got
        return got

    comps = _tarjan_sccs(n, successors)
    ideals = []
    for comp in comps:
        cset = set(comp)
        if any(w not in cset for v in comp for w in successors(v)):
            continue
        members = tuple(sorted(comp))
        idempotents = tuple(s for s in members if S.mul(s, s) == s)
        ideal = MinimalIdeal(S, members, idempotents)
        _validate_minimal_ideal(ideal)
        ideals.append(ideal)
    ideals.sort(key=lambda m: m.members[0])
    return ideals


def _validate_minimal_ideal(M: MinimalIdeal):
    S = M.parent
    mset = M.member_set
    # every element generates the ideal: S·s = M
    for s in M.members:
        if S.left_reach(s) != mset:
            raise TheoremViolation("minimal ideal not generated by member", s)
    if not M.idempotents:
        raise TheoremViolation("minimal ideal without idempotents", M.members[:4])
    # M is the disjoint union of the groups u·M over idempotents u
    seen: set[int] = set()
    for u in M.idempotents:
        block = {S.mul(u, m) for m in M.members}
        if block & seen:
            raise TheoremViolation("idempotent blocks overlap", u)
        seen |= block
    if seen != mset:
        raise TheoremViolation("idempotent blocks do not cover ideal",
                               sorted(mset - seen)[:4])
    # right identity law: s·u = s for all s in M, idempotent u
    for u in M.idempotents:
        for s in M.members:
            if S.mul(s, u) != s:
                raise TheoremViolation("s·u != s inside minimal ideal", (s, u))


def ideal_group(M: MinimalIdeal, u: int) -> IdealGroup:
    """The group u·M with identity u; verified via left identity and left
    inverses (which force a group), plus closure."""
    S = M.parent
    if u not in M.member_set:
        raise NotInIdeal(u)
    if S.mul(u, u) != u:
        raise NotIdempotent(u)
    members = tuple(sorted({S.mul(u, m) for m in M.members}))
    pos = {s: i for i, s in enumerate(members)}
    k = len(members)
    for s in members:
        if S.mul(u, s) != s:
            raise TheoremViolation("u is not a left identity on u·M", s)
    for a in members:
        for b in members:
            if S.mul(a, b) not in pos:
                raise TheoremViolation("u·M not closed under composition", (a, b))
    for s in members:
        if all(S.mul(t, s) != u for t in members):
            raise TheoremViolation("missing left inverse in u·M", s)
    mul = tuple(
        tuple(pos[S.mul(a, b)] for b in members) for a in members
    )
    # composition is associative, so left identity + left inverses make this
    # a group; locate two-sided inverses directly
    inverse = [None] * k
    identity = pos[u]
    for i, a in enumerate(members):
        for j, b in enumerate(members):
            if mul[i][j] == identity and mul[j][i] == identity:
                inverse[i] = j
                break
        if inverse[i] is None:
            raise TheoremViolation("u·M element without two-sided inverse", a)
    gview = FiniteGroup(mul, identity, tuple(inverse),
                        gens=small_generating_set(mul, identity))
    return IdealGroup(M, u, members, gview, pos, members)


def compatible_idempotent(gu: IdealGroup, N: MinimalIdeal) -> int:
    """The idempotent w in N with w·u = u (equivalently u·w = w).

    Existence: N·u is a left ideal inside u's ideal, hence equal to it, so
    some element of N sends u to u, and the set of such elements is a
    subsemigroup of N, hence contains an idempotent. Within u's own ideal
    the right-identity law forces w = u.
    """
    S = gu.parent
    u = gu.idempotent
    for w in N.idempotents:
        if S.mul(w, u) == u:
            if S.mul(u, w) != w:
                raise TheoremViolation("compatible idempotent fails u·w = w", (u, w))
            return w
    raise TheoremViolation("no compatible idempotent in target ideal", u)


def ideal_group_isomorphism(gu: IdealGroup, gv: IdealGroup) -> tuple[int, ...]:
    """An explicit verified group isomorphism u·M -> v·N: s -> v·(s·w), where
    w is the idempotent of N compatible with u (w·u = u).

    When v itself is compatible with u this is the two-sided conjugation
    s -> v·s·v, and within a single ideal it collapses to s -> v·s; the
    two-sided form is NOT a homomorphism for incompatible idempotent pairs
    across distinct ideals (an 8-element transformation semigroup on 4
    points witnesses this), so the compatible intermediate is required.
    Failure of the constructed map is fatal: it would falsify the structure
    theory on a finite instance. Returns the image, indexed like gu.members.
    """
    S = gu.parent
    if S is not gv.parent:
        raise ValueError("ideal groups from different semigroups")
    u, v = gu.idempotent, gv.idempotent
    w = compatible_idempotent(gu, gv.ideal)
    image = tuple(S.mul(v, S.mul(s, w)) for s in gu.members)
    tgt = set(gv.members)
    if set(image) != tgt or len(set(image)) != len(image):
        raise IsomorphismViolated(("not a bijection", image[:4]))
    for i, a in enumerate(gu.members):
        for j, b in enumerate(gu.members):
            ab = S.mul(a, b)
            lhs = S.mul(v, S.mul(ab, w))
            rhs = S.mul(image[i], image[j])
            if lhs != rhs:
                raise IsomorphismViolated(("not a homomorphism", a, b))
    if S.mul(v, u) == u:
        # compatible pair: the conjugation form must agree
        for i, s in enumerate(gu.members):
            if S.mul(S.mul(v, s), v) != image[i]:
                raise IsomorphismViolated(("conjugation form disagrees", s))
    return image


def circ(S: EllisSemigroup, a: int, B) -> frozenset[int]:
    """a∘B. In a finite discrete space the maps converging to a are
    eventually a itself, so the set of limits of products is exactly aB."""
    return frozenset(S.mul(a, b) for b in B)


def tau_closure(G: IdealGroup, A) -> frozenset[int]:
    """Closure of A inside the ideal group: u(u∘A), verified to agree with
    (u·M) ∩ (u∘A), to be a closure operator, and (finite discreteness) to
    return A itself."""
    S = G.parent
    u = G.idempotent
    A = frozenset(A)
    if not A <= set(G.members):
        raise NotInIdeal(sorted(A - set(G.members))[0])
    u_circ_a = circ(S, u, A)
    closed = frozenset(S.mul(u, x) for x in u_circ_a)
    alt = frozenset(G.members) & u_circ_a
    if closed != alt:
        raise TheoremViolation("two closure formulas disagree", (sorted(closed)[:4],
                                                                 sorted(alt)[:4]))
    if not A <= closed:
        raise TheoremViolation("closure not extensive", sorted(A - closed)[:4])
    again = frozenset(S.mul(u, x) for x in circ(S, u, closed))
    if again != closed:
        raise TheoremViolation("closure not idempotent", sorted(again ^ closed)[:4])
    if closed != A:
        raise TheoremViolation("finite ideal-group topology not discrete",
                               sorted(closed - A)[:4])
    return closed


def h_subgroup(G: IdealGroup) -> Subgroup:
    """Intersection of closures of neighbourhoods of the identity in the
    ideal-group topology. Discreteness is certified first (every singleton
    and co-singleton is closed), after which the smallest neighbourhood of
    the identity is the singleton itself and the intersection is {u}."""
    members = set(G.members)
    u = G.idempotent
    for s in G.members:
        single = tau_closure(G, {s})
        if single != {s}:
            raise TheoremViolation("singleton not closed", s)
        co = frozenset(members - {s})
        if tau_closure(G, co) != co:
            raise TheoremViolation("co-singleton not closed", s)
    core = tau_closure(G, {u})
    if core != {u}:
        raise TheoremViolation("identity neighbourhood closure not trivial",
                               sorted(core))
    sub = Subgroup(G.group_view, frozenset({G.to_group[u]}))
    if not sub.is_normal():
        raise TheoremViolation("trivial subgroup reported non-normal", u)
    return sub


@dataclass(frozen=True)
class EllisEpimorphism:
    source: EllisSemigroup
    target: EllisSemigroup
    element_map: tuple[int, ...]
    surjective: bool
    homomorphism_pairs_checked: int
    ideal_images: tuple[tuple[int, int], ...]       # (source ideal, target ideal)
    idempotent_images: tuple[tuple[int, int], ...]  # (source idem, target idem)


def induced_epimorphism(m: FlowMorphism, source_semigroup=None,
                        target_semigroup=None,
                        caps: Caps = DEFAULT_CAPS) -> EllisEpimorphism:
    """Push the source enveloping semigroup through an ambit morphism:
    the image of f sends phi(z) to phi(f(z)). Verified well-defined,
    surjective, multiplicative, and structure-preserving (minimal ideals
    onto minimal ideals, idempotents to idempotents)."""
    rep = check_morphism(m)
    if not rep:
        raise ValueError(f"invalid morphism: {rep.witness}")
    src = source_semigroup or enveloping_semigroup(m.source.flow, caps=caps)
    tgt = target_semigroup or enveloping_semigroup(m.target.flow, caps=caps)
    pm = m.point_map
    fibers: list[list[int]] = [[] for _ in range(m.target.flow.points)]
    for z, x in enumerate(pm):
        fibers[x].append(z)

    element_map = []
    for fi, f in enumerate(src.elements):
        img = [None] * m.target.flow.points
        for x, fiber in enumerate(fibers):
            vals = {pm[f[z]] for z in fiber}
            if len(vals) != 1:
                bad = sorted(fiber)[:2]
                raise NotWellDefined(fi, bad[0], bad[-1])
            img[x] = vals.pop()
        img = tuple(img)
        got = tgt.index.get(img)
        if got is None:
            raise TheoremViolation("induced image escapes target semigroup", fi)
        element_map.append(got)
    element_map = tuple(element_map)

    surjective = len(set(element_map)) == tgt.size
    if not surjective:
        raise TheoremViolation("induced map not surjective",
                               tgt.size - len(set(element_map)))

    pairs_checked = 0
    budget = 2_000_000
    if src.size * src.size <= budget:
        pair_iter = ((i, j) for i in range(src.size) for j in range(src.size))
    else:
        pair_iter = ((i, j) for i in src.generators for j in range(src.size))
    for i, j in pair_iter:
        if element_map[src.mul(i, j)] != tgt.mul(element_map[i], element_map[j]):
            raise TheoremViolation("induced map not multiplicative", (i, j))
        pairs_checked += 1

    src_ideals = minimal_left_ideals(src)
    tgt_ideals = minimal_left_ideals(tgt)
    tgt_lookup = {m2.member_set: k for k, m2 in enumerate(tgt_ideals)}
    ideal_images = []
    idem_images = []
    for si, M in enumerate(src_ideals):
        img = frozenset(element_map[s] for s in M.members)
        ti = tgt_lookup.get(img)
        if ti is None:
            raise TheoremViolation("ideal image is not a minimal ideal", si)
        ideal_images.append((si, ti))
        for u in M.idempotents:
            pushed = element_map[u]
            if tgt.mul(pushed, pushed) != pushed:
                raise TheoremViolation("idempotent image not idempotent", u)
            idem_images.append((u, pushed))
    return EllisEpimorphism(src, tgt, element_map, surjective, pairs_checked,
                            tuple(ideal_images), tuple(idem_images))
