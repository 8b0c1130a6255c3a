"""Finite group engine: closure enumeration, subgroups, homomorphisms, products.

Elements are canonical hashable encodings (tuples): permutations are image
tuples, matrices are row tuples (entries reduced mod m, or exact integers
for lattice groups), product elements are pairs, quotient elements are
minimal coset representatives.  Every group is fully materialized; all
structures are immutable after construction.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .errors import (
    BudgetExceeded,
    ElementNotInGroup,
    MalformedSpec,
    NonMatchingTargets,
    NonSurjective,
    NotNormal,
)
from .numutil import lcm_all

DEFAULT_BUDGET = 100_000


def closure_budget() -> int:
    raw = os.environ.get("FUSIONWEIGHTS_BUDGET", "")
    if raw.strip():
        try:
            return int(raw)
        except ValueError:
            raise MalformedSpec(f"FUSIONWEIGHTS_BUDGET is not an integer: {raw!r}")
    return DEFAULT_BUDGET


# ---------------------------------------------------------------------------
# element encodings

def perm_identity(n: int):
    return tuple(range(n))


def perm_mul(p, q):
    # apply q first, then p
    return tuple(p[q[i]] for i in range(len(p)))


def perm_inv(p):
    out = [0] * len(p)
    for i, pi in enumerate(p):
        out[pi] = i
    return tuple(out)


def mat_identity(n: int):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul_mod(a, b, modulus: int):
    n = len(a)
    if modulus:
        return tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(n)) % modulus for j in range(n))
            for i in range(n)
        )
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def mat_det(rows, modulus: int = 0) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(rows)
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    det = sign * a[n - 1][n - 1]
    return det % modulus if modulus else det


# ---------------------------------------------------------------------------
# groups

@dataclass(frozen=True)
class FiniteGroup:
    """A fully enumerated finite group with canonical element ordering."""

    name: str
    elements: tuple
    op: Callable
    identity: object
    generators: tuple
    spec: object = None
    _index: dict = field(default_factory=dict, repr=False, compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @staticmethod
    def from_generators(
        generators: Iterable,
        op: Callable,
        identity,
        name: str = "group",
        budget: Optional[int] = None,
        spec=None,
    ) -> "FiniteGroup":
        budget = budget if budget is not None else closure_budget()
        gens = tuple(dict.fromkeys(g for g in generators if g != identity))
        seen = {identity: 0}
        order_list = [identity]
        frontier = [identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = op(x, g)
                    if y not in seen:
                        if len(seen) >= budget:
                            raise BudgetExceeded(
                                f"closure of {name} exceeded budget {budget}"
                            )
                        seen[y] = len(order_list)
                        order_list.append(y)
                        nxt.append(y)
            frontier = nxt
        elements = tuple(sorted(order_list))
        group = FiniteGroup(
            name=name,
            elements=elements,
            op=op,
            identity=identity,
            generators=gens if gens else (identity,),
            spec=spec,
        )
        group._index.update({x: i for i, x in enumerate(elements)})
        return group

    # -- basic queries ------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    def index_of(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise ElementNotInGroup(f"element {x!r} not in {self.name}")

    def mul(self, a, b):
        return self.op(a, b)

    def power(self, a, n: int):
        if n < 0:
            return self.power(self.inv(a), -n)
        out = self.identity
        base = a
        while n:
            if n & 1:
                out = self.op(out, base)
            base = self.op(base, base)
            n >>= 1
        return out

    def inv(self, a):
        cache = self._cache.setdefault("inv", {})
        if a not in cache:
            if a not in self._index:
                raise ElementNotInGroup(f"element {a!r} not in {self.name}")
            k = self.element_order(a)
            cache[a] = self.power(a, k - 1)
        return cache[a]

    def conj(self, g, x):
        """g * x * g^{-1}"""
        return self.op(self.op(g, x), self.inv(g))

    def element_order(self, a) -> int:
        cache = self._cache.setdefault("ord", {})
        if a not in cache:
            if a not in self._index:
                raise ElementNotInGroup(f"element {a!r} not in {self.name}")
            k, x = 1, a
            while x != self.identity:
                x = self.op(x, a)
                k += 1
            cache[a] = k
        return cache[a]

    def exponent(self) -> int:
        if "exp" not in self._cache:
            self._cache["exp"] = lcm_all(self.element_order(x) for x in self.elements)
        return self._cache["exp"]

    def is_abelian(self) -> bool:
        if "abelian" not in self._cache:
            gens = self.generators
            self._cache["abelian"] = all(
                self.op(a, b) == self.op(b, a) for a in gens for b in gens
            )
        return self._cache["abelian"]

    def verify_closed(self) -> bool:
        """Full table scan: composition and inversion stay inside the element set."""
        for a in self.elements:
            for b in self.elements:
                if self.op(a, b) not in self._index:
                    return False
        return all(self.inv(a) in self._index for a in self.elements)

    # -- subgroups ----------------------------------------------------------

    def subgroup(self, generators: Iterable, name: str = "") -> "Subgroup":
        gens = tuple(dict.fromkeys(generators))
        for g in gens:
            self.index_of(g)
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.op(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return Subgroup(
            parent=self,
            element_set=frozenset(seen),
            generators=gens if gens else (self.identity,),
            name=name or f"subgroup-of-{self.name}",
        )

    def subgroup_from_elements(self, elements: Iterable, name: str = "") -> "Subgroup":
        elems = frozenset(elements)
        return Subgroup(
            parent=self,
            element_set=elems,
            generators=tuple(sorted(elems)),
            name=name or f"subgroup-of-{self.name}",
        )

    def trivial_subgroup(self) -> "Subgroup":
        return self.subgroup([], name="trivial")

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(
            parent=self,
            element_set=frozenset(self.elements),
            generators=self.generators,
            name=self.name,
        )


@dataclass(frozen=True)
class Subgroup:
    """Subgroup backed by an explicit element subset of its parent."""

    parent: FiniteGroup
    element_set: frozenset
    generators: tuple
    name: str = "subgroup"

    @property
    def order(self) -> int:
        return len(self.element_set)

    def __contains__(self, x) -> bool:
        return x in self.element_set

    def elements_sorted(self) -> list:
        return sorted(self.element_set)

    def is_normal(self) -> bool:
        G = self.parent
        return all(
            G.conj(g, h) in self.element_set
            for g in G.generators
            for h in self.generators
        )

    def as_group(self, name: str = "") -> FiniteGroup:
        """Standalone FiniteGroup on the same elements and operation."""
        elements = tuple(sorted(self.element_set))
        group = FiniteGroup(
            name=name or self.name,
            elements=elements,
            op=self.parent.op,
            identity=self.parent.identity,
            generators=self.generators if self.generators else (self.parent.identity,),
            spec=None,
        )
        group._index.update({x: i for i, x in enumerate(elements)})
        return group


# ---------------------------------------------------------------------------
# homomorphisms

@dataclass(frozen=True)
class Homomorphism:
    """Total map between materialized groups, verified multiplicative.

    Verification checks f(x*g) == f(x)*f(g) for every element x and every
    generator g, which by induction on word length proves multiplicativity
    on all pairs.
    """

    source: FiniteGroup
    target: FiniteGroup
    mapping: dict
    gen_images: dict

    @staticmethod
    def from_gen_images(source: FiniteGroup, target: FiniteGroup, images: dict) -> "Homomorphism":
        mapping = {source.identity: target.identity}
        frontier = [source.identity]
        gens = [g for g in source.generators if g != source.identity]
        while frontier:
            nxt = []
            for x in frontier:
                fx = mapping[x]
                for g in gens:
                    y = source.op(x, g)
                    fy = target.op(fx, images[g])
                    if y in mapping:
                        if mapping[y] != fy:
                            raise MalformedSpec(
                                "generator images do not define a homomorphism"
                            )
                    else:
                        mapping[y] = fy
                        nxt.append(y)
            frontier = nxt
        hom = Homomorphism(source=source, target=target, mapping=mapping,
                           gen_images=dict(images))
        hom._verify_edges()
        return hom

    @staticmethod
    def from_map(source: FiniteGroup, target: FiniteGroup, fn: Callable) -> "Homomorphism":
        mapping = {x: fn(x) for x in source.elements}
        hom = Homomorphism(
            source=source,
            target=target,
            mapping=mapping,
            gen_images={g: mapping[g] for g in source.generators},
        )
        hom._verify_edges()
        return hom

    def _verify_edges(self) -> None:
        src, tgt, f = self.source, self.target, self.mapping
        if f[src.identity] != tgt.identity:
            raise MalformedSpec("map does not send identity to identity")
        for x in src.elements:
            fx = f[x]
            for g in src.generators:
                if f[src.op(x, g)] != tgt.op(fx, f[g]):
                    raise MalformedSpec("map is not multiplicative")

    def __call__(self, x):
        try:
            return self.mapping[x]
        except KeyError:
            raise ElementNotInGroup(f"element {x!r} not in {self.source.name}")

    def image_set(self) -> frozenset:
        return frozenset(self.mapping.values())

    def is_surjective(self) -> bool:
        return len(self.image_set()) == self.target.order


# ---------------------------------------------------------------------------
# products and quotients

def direct_product(G: FiniteGroup, H: FiniteGroup, name: str = "") -> FiniteGroup:
    def op(a, b):
        return (G.op(a[0], b[0]), H.op(a[1], b[1]))

    identity = (G.identity, H.identity)
    gens = [(g, H.identity) for g in G.generators if g != G.identity]
    gens += [(G.identity, h) for h in H.generators if h != H.identity]
    elements = tuple(sorted((x, y) for x in G.elements for y in H.elements))
    group = FiniteGroup(
        name=name or f"{G.name} x {H.name}",
        elements=elements,
        op=op,
        identity=identity,
        generators=tuple(gens) if gens else (identity,),
    )
    group._index.update({x: i for i, x in enumerate(elements)})
    return group


def semidirect_product(
    N: FiniteGroup, H: FiniteGroup, action: Callable, name: str = ""
) -> FiniteGroup:
    """N ⋊ H where action(h) is the automorphism of N induced by h.

    Element (n, h); (n, h)(n', h') = (n * action(h)(n'), h h').  The action
    is verified to consist of automorphisms compatible with H's product.
    """
    maps = {h: action(h) for h in H.elements}
    for h in H.elements:
        m = maps[h]
        if m(N.identity) != N.identity:
            raise MalformedSpec("semidirect action does not fix identity")
    for h1 in H.generators:
        for h2 in H.generators:
            h12 = H.op(h1, h2)
            for n in N.generators:
                if maps[h12](n) != maps[h1](maps[h2](n)):
                    raise MalformedSpec("semidirect action is not a homomorphism")
    for h in H.generators:
        m = maps[h]
        for a in N.elements:
            for b in N.generators:
                if m(N.op(a, b)) != N.op(m(a), m(b)):
                    raise MalformedSpec("semidirect action is not by automorphisms")

    def op(x, y):
        return (N.op(x[0], maps[x[1]](y[0])), H.op(x[1], y[1]))

    identity = (N.identity, H.identity)
    gens = [(n, H.identity) for n in N.generators if n != N.identity]
    gens += [(N.identity, h) for h in H.generators if h != H.identity]
    return FiniteGroup.from_generators(
        gens, op, identity, name=name or f"{N.name} : {H.name}"
    )


def quotient_group(G: FiniteGroup, N: Subgroup, name: str = "") -> FiniteGroup:
    """G/N with canonical (minimal) coset representatives as elements."""
    if N.parent is not G:
        raise NonMatchingTargets("subgroup does not belong to the given group")
    if not N.is_normal():
        raise NotNormal(f"{N.name} is not normal in {G.name}")
    n_elems = sorted(N.element_set)
    rep_of = {}
    for x in G.elements:
        if x in rep_of:
            continue
        coset = sorted(G.op(x, n) for n in n_elems)
        rep = coset[0]
        for y in coset:
            rep_of[y] = rep
    reps = tuple(sorted(set(rep_of.values())))

    def op(a, b):
        return rep_of[G.op(a, b)]

    group = FiniteGroup(
        name=name or f"{G.name}/{N.name}",
        elements=reps,
        op=op,
        identity=rep_of[G.identity],
        generators=tuple(dict.fromkeys(rep_of[g] for g in G.generators)),
    )
    group._index.update({x: i for i, x in enumerate(reps)})
    group._cache["coset_rep"] = rep_of
    return group


def coset_projection(G: FiniteGroup, Q: FiniteGroup) -> Homomorphism:
    """The natural projection onto a quotient produced by quotient_group."""
    rep_of = Q._cache["coset_rep"]
    return Homomorphism.from_map(G, Q, lambda x: rep_of[x])


def fiber_product(
    X1: FiniteGroup,
    X2: FiniteGroup,
    phi1: Homomorphism,
    phi2: Homomorphism,
    name: str = "",
) -> FiniteGroup:
    """H = {(a,b) : phi1(a) = phi2(b)} inside X1 x X2.

    The maps take values in a common cyclic target C_e and must jointly
    cover it (so that H is normal of index exactly e with cyclic quotient
    and |H| = |X1||X2|/e, both verified).
    """
    if phi1.target is not phi2.target and phi1.target.elements != phi2.target.elements:
        raise NonMatchingTargets("quotient maps have different targets")
    C = phi1.target
    e = C.order
    gen = _cyclic_generator(C)
    if gen is None:
        raise NonMatchingTargets("common target is not cyclic")
    joint = set()
    for a in phi1.image_set():
        for b in phi2.image_set():
            joint.add(C.op(a, C.inv(b)))
    if len(joint) != e:
        raise NonSurjective("the quotient maps do not jointly cover the cyclic target")

    product = direct_product(X1, X2)
    members = tuple(
        sorted((a, b) for a in X1.elements for b in X2.elements
               if phi1(a) == phi2(b))
    )
    expected = X1.order * X2.order // e
    if len(members) != expected:
        raise MalformedSpec(
            f"fiber product size {len(members)} != |X1||X2|/e = {expected}"
        )
    group = FiniteGroup(
        name=name or f"fiber({X1.name},{X2.name},e={e})",
        elements=members,
        op=product.op,
        identity=product.identity,
        generators=small_generating_set(members, product.op, product.identity),
    )
    group._index.update({x: i for i, x in enumerate(members)})
    # Lemma-shape check: H normal in X1 x X2 with exactly e cosets.
    member_set = frozenset(members)
    H_sub = product.subgroup_from_elements(member_set, name=group.name)
    if not H_sub.is_normal():
        raise MalformedSpec("fiber product is not normal in the direct product")
    cosets = set()
    for x in product.elements:
        cosets.add(min(product.op(x, h) for h in members) if len(members) < 64
                   else _coset_key(product, x, phi1, phi2))
        if len(cosets) > e:
            break
    if len(cosets) != e:
        raise MalformedSpec("fiber product does not have index e")
    group._cache["ambient"] = product
    group._cache["ambient_subgroup"] = H_sub
    return group


def _coset_key(product, x, phi1, phi2):
    a, b = x
    diff = phi1.target.op(phi1(a), phi1.target.inv(phi2(b)))
    return diff


def small_generating_set(elements, op, identity) -> tuple:
    """Greedy generating set for an explicitly listed finite group."""
    target = len(elements)
    gens: list = []
    closure = {identity}
    for x in sorted(elements, key=lambda e: (0, e) if e != identity else (1, e)):
        if x in closure:
            continue
        gens.append(x)
        frontier = list(closure)
        closure = set(closure)
        while frontier:
            nxt = []
            for y in frontier:
                for g in gens:
                    z = op(y, g)
                    if z not in closure:
                        closure.add(z)
                        nxt.append(z)
            frontier = nxt
        if len(closure) == target:
            break
    return tuple(gens) if gens else (identity,)


def _cyclic_generator(C: FiniteGroup):
    for x in C.elements:
        if C.element_order(x) == C.order:
            return x
    return None


def kernel_elements(phi: Homomorphism) -> frozenset:
    t_id = phi.target.identity
    return frozenset(x for x in phi.source.elements if phi(x) == t_id)
