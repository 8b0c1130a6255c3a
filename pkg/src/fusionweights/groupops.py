"""Structure computations on materialized groups.

Conjugacy classes, center series, centralizers/normalizers, Sylow subgroups,
O^{ell'} residuals, commutator subgroups and abelianization with an explicit
invariant-factor decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ElementNotInGroup, MalformedSpec, NotAbelian, NotNormal
from .groups import FiniteGroup, Homomorphism, Subgroup, quotient_group, coset_projection
from .lattice import snf_with_transforms
from .numutil import ell_part, v_adic


@dataclass(frozen=True)
class ConjugacyData:
    """Partition of a group into conjugacy classes.

    Classes are sorted by (order of representative, representative encoding);
    the identity class is always first.  Representatives are the minimal
    encodings in their class.
    """

    group: FiniteGroup
    reps: tuple
    sizes: tuple
    rep_orders: tuple
    class_of: dict

    @property
    def count(self) -> int:
        return len(self.reps)

    def class_index(self, x) -> int:
        try:
            return self.class_of[x]
        except KeyError:
            raise ElementNotInGroup(f"element {x!r} not in {self.group.name}")

    def inverse_class(self, i: int) -> int:
        return self.class_index(self.group.inv(self.reps[i]))


def conjugacy_classes(G: FiniteGroup) -> ConjugacyData:
    if "conj" in G._cache:
        return G._cache["conj"]
    gens = G.generators
    unseen = set(G.elements)
    classes = []
    while unseen:
        x = min(unseen)
        orbit = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for g in gens:
                    z = G.conj(g, y)
                    if z not in orbit:
                        orbit.add(z)
                        nxt.append(z)
            frontier = nxt
        unseen -= orbit
        classes.append(orbit)
    keyed = sorted(
        (G.element_order(min(c)), min(c), c) for c in classes
    )
    reps = tuple(k[1] for k in keyed)
    sizes = tuple(len(k[2]) for k in keyed)
    rep_orders = tuple(k[0] for k in keyed)
    class_of = {}
    for i, (_, _, c) in enumerate(keyed):
        for y in c:
            class_of[y] = i
    assert sum(sizes) == G.order
    data = ConjugacyData(G, reps, sizes, rep_orders, class_of)
    G._cache["conj"] = data
    return data


def center(G: FiniteGroup) -> Subgroup:
    gens = G.generators
    members = [x for x in G.elements if all(G.op(x, g) == G.op(g, x) for g in gens)]
    return G.subgroup_from_elements(members, name=f"Z({G.name})")


def center_series(G: FiniteGroup, k: int) -> Subgroup:
    """k-th term of the upper central series (k=1 center, k=2 second center)."""
    if k < 1:
        raise MalformedSpec("center series index must be >= 1")
    Z = center(G)
    for _ in range(k - 1):
        zset = Z.element_set
        members = [
            x
            for x in G.elements
            if all(_commutator(G, x, g) in zset for g in G.generators)
        ]
        Z = G.subgroup_from_elements(members, name=f"Z{k}({G.name})")
    return Z


def _commutator(G: FiniteGroup, a, b):
    return G.op(G.op(G.inv(a), G.inv(b)), G.op(a, b))


def centralizer(G: FiniteGroup, s) -> Subgroup:
    G.index_of(s)
    members = [g for g in G.elements if G.op(g, s) == G.op(s, g)]
    return G.subgroup_from_elements(members, name=f"C_{G.name}({s!r})")


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    hset = H.element_set
    members = [
        g for g in G.elements if all(G.conj(g, h) in hset for h in H.generators)
    ]
    return G.subgroup_from_elements(members, name=f"N_{G.name}({H.name})")


def sylow(G: FiniteGroup, ell: int) -> Subgroup:
    """A Sylow ell-subgroup, by deterministic normalizer climbing."""
    target = ell_part(ell, G.order)
    if target == 1:
        return G.trivial_subgroup()
    seed = None
    for x in G.elements:
        o = G.element_order(x)
        if o % ell == 0:
            seed = G.power(x, o // ell_part(ell, o))
            break
    assert seed is not None
    P = G.subgroup([seed], name=f"sylow{ell}({G.name})")
    while P.order < target:
        N = normalizer(G, P)
        extended = False
        for y in sorted(N.element_set):
            if y in P.element_set:
                continue
            o = G.element_order(y)
            z = G.power(y, o // ell_part(ell, o))
            if z not in P.element_set and z != G.identity:
                P = G.subgroup(P.generators + (z,), name=P.name)
                extended = True
                break
        if not extended:
            raise RuntimeError("sylow climb stalled; this is a bug")
    assert P.order == target
    return P


def normal_closure(G: FiniteGroup, seed_gens) -> Subgroup:
    gens = list(dict.fromkeys(seed_gens))
    H = G.subgroup(gens)
    changed = True
    while changed:
        changed = False
        for g in G.generators:
            for s in list(gens):
                c = G.conj(g, s)
                if c not in H.element_set:
                    gens.append(c)
                    H = G.subgroup(gens)
                    changed = True
    return H


def o_ellprime_residual(G: FiniteGroup, ell: int) -> Subgroup:
    """O^{ell'}(G): the normal closure of a Sylow ell-subgroup."""
    P = sylow(G, ell)
    if P.order == 1:
        return G.trivial_subgroup()
    H = normal_closure(G, P.generators)
    return Subgroup(
        parent=G,
        element_set=H.element_set,
        generators=H.generators,
        name=f"O^{ell}'({G.name})",
    )


def commutator_subgroup(G: FiniteGroup) -> Subgroup:
    gens = [
        _commutator(G, a, b) for a in G.generators for b in G.generators
    ]
    gens = [g for g in gens if g != G.identity]
    if not gens:
        return G.trivial_subgroup()
    H = normal_closure(G, gens)
    return Subgroup(
        parent=G,
        element_set=H.element_set,
        generators=H.generators,
        name=f"[{G.name},{G.name}]",
    )


# ---------------------------------------------------------------------------
# abelian structure

@dataclass(frozen=True)
class AbelianDecomposition:
    """Explicit isomorphism of an abelian group with a product of cyclic groups.

    `invariants` are the cyclic orders d_1 | d_2 | ... ; `basis[j]` generates
    the j-th cyclic factor; `coords` maps every element to its exponent tuple.
    The decomposition is fully verified at construction (orders and
    bijectivity), so downstream code can rely on it without re-checking.
    """

    group: FiniteGroup
    invariants: tuple
    basis: tuple
    coords: dict

    def element_from_coords(self, tup) -> object:
        G = self.group
        out = G.identity
        for b, (t, d) in zip(self.basis, zip(tup, self.invariants)):
            out = G.op(out, G.power(b, t % d))
        return out


def abelian_decomposition(A: FiniteGroup) -> AbelianDecomposition:
    if not A.is_abelian():
        raise NotAbelian(f"{A.name} is not abelian")
    if "abelian_dec" in A._cache:
        return A._cache["abelian_dec"]
    gens = [g for g in A.generators if g != A.identity]
    if not gens:
        dec = AbelianDecomposition(A, (), (), {A.identity: ()})
        A._cache["abelian_dec"] = dec
        return dec
    s = len(gens)
    # exponent vectors along a BFS; every Cayley edge yields a relation
    vec = {A.identity: tuple([0] * s)}
    frontier = [A.identity]
    relations = set()
    while frontier:
        nxt = []
        for x in frontier:
            vx = vec[x]
            for j, g in enumerate(gens):
                y = A.op(x, g)
                vy_new = tuple(v + (1 if i == j else 0) for i, v in enumerate(vx))
                if y in vec:
                    rel = tuple(a - b for a, b in zip(vy_new, vec[y]))
                    if any(rel):
                        relations.add(rel)
                else:
                    vec[y] = vy_new
                    nxt.append(y)
        frontier = nxt
    for j, g in enumerate(gens):
        o = A.element_order(g)
        relations.add(tuple(o if i == j else 0 for i in range(s)))
    # columns of B generate the relation lattice
    cols = sorted(relations)
    B = [[c[i] for c in cols] for i in range(s)]
    D, U, V, Uinv, Vinv = snf_with_transforms(B)
    basis, invariants = [], []
    for j in range(s):
        d = D[j][j] if j < len(D[0]) else 0
        if d == 0:
            raise MalformedSpec("relation lattice not of full rank; this is a bug")
        if d == 1:
            continue
        h = A.identity
        for i in range(s):
            h = A.op(h, A.power(gens[i], Uinv[i][j] % A.element_order(gens[i])))
        basis.append(h)
        invariants.append(d)
    # ascending invariant-factor convention
    pairs = sorted(zip(invariants, basis), key=lambda p: p[0])
    invariants = tuple(p[0] for p in pairs)
    basis = tuple(p[1] for p in pairs)
    for h, d in zip(basis, invariants):
        if A.element_order(h) != d:
            raise MalformedSpec("abelian basis element has wrong order; this is a bug")
    coords = {}
    _enumerate_coords(A, basis, invariants, coords)
    if len(coords) != A.order:
        raise MalformedSpec("abelian decomposition is not bijective; this is a bug")
    dec = AbelianDecomposition(A, invariants, basis, coords)
    A._cache["abelian_dec"] = dec
    return dec


def _enumerate_coords(A, basis, invariants, out):
    tuples = [()]
    for d in invariants:
        tuples = [t + (r,) for t in tuples for r in range(d)]
    for t in tuples:
        x = A.identity
        for b, e in zip(basis, t):
            x = A.op(x, A.power(b, e))
        if x in out:
            return
        out[x] = t


@dataclass(frozen=True)
class Abelianization:
    invariants: tuple
    quotient: FiniteGroup
    projection: Homomorphism
    decomposition: AbelianDecomposition


def abelianization(G: FiniteGroup) -> Abelianization:
    if "abelianization" in G._cache:
        return G._cache["abelianization"]
    D = commutator_subgroup(G)
    Q = quotient_group(G, D, name=f"{G.name}^ab")
    proj = coset_projection(G, Q)
    dec = abelian_decomposition(Q)
    result = Abelianization(dec.invariants, Q, proj, dec)
    G._cache["abelianization"] = result
    return result


def ell_valuation_of_order(G: FiniteGroup, ell: int) -> int:
    return v_adic(ell, G.order)


def normal_subgroups(G: FiniteGroup, max_classes: int = 14) -> list:
    """All normal subgroups, as subgroup-closed unions of conjugacy classes.

    Exponential in the class count, so guarded by max_classes; fine at desk
    scale where it is used (locating a named normal subgroup, minimality
    scans in tests)."""
    from itertools import combinations

    data = conjugacy_classes(G)
    if data.count > max_classes:
        raise MalformedSpec(
            f"normal-subgroup enumeration needs <= {max_classes} classes, "
            f"{G.name} has {data.count}"
        )
    classes = [frozenset(x for x in G.elements if data.class_of[x] == i)
               for i in range(data.count)]
    out = []
    for r in range(1, data.count + 1):
        for combo in combinations(range(data.count), r):
            if 0 not in combo:
                continue
            union = frozenset().union(*(classes[i] for i in combo))
            if G.order % len(union):
                continue
            sub = G.subgroup_from_elements(union)
            if all(G.op(a, b) in union for a in sub.generators for b in union):
                out.append(sub)
    return out


def find_normal_subgroup_like(G: FiniteGroup, model: FiniteGroup) -> Subgroup:
    """The normal subgroup of G matching the model's isomorphism fingerprint
    (order, exponent, class count, and abelian invariants when abelian)."""
    candidates = []
    for N in normal_subgroups(G):
        if N.order != model.order:
            continue
        N_grp = N.as_group()
        if N_grp.exponent() != model.exponent():
            continue
        if conjugacy_classes(N_grp).count != conjugacy_classes(model).count:
            continue
        if model.is_abelian():
            if not N_grp.is_abelian():
                continue
            if (abelian_decomposition(N_grp).invariants
                    != abelian_decomposition(model).invariants):
                continue
        candidates.append(N)
    if not candidates:
        raise NotNormal(
            f"{G.name} has no normal subgroup matching {model.name}"
        )
    return min(candidates, key=lambda N: sorted(N.element_set))
