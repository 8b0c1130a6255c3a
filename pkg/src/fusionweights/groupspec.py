"""Declarative group specifications and the catalog of named constructions.

A GroupSpec pins down a group by catalog name + parameters, by explicit
permutation or matrix generators, or by a product expression (direct or
fiber).  build_group materializes it; identical specs always produce the
same canonical element ordering, and results are memoized for reuse.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

from .errors import BudgetExceeded, MalformedSpec, NoSuchQuotient, UnknownName
from .groups import (
    FiniteGroup,
    Homomorphism,
    closure_budget,
    direct_product,
    fiber_product,
    mat_det,
    mat_identity,
    mat_mul_mod,
    perm_identity,
    perm_mul,
)
from .numutil import is_prime, primitive_root_mod

CATALOG_NAMES = ("C", "D", "S", "A", "SL2", "GL2", "NGL2U", "Frob")


@dataclass(frozen=True)
class GroupSpec:
    kind: str                 # "catalog" | "perm" | "mat" | "direct" | "fiber"
    name: str = ""
    params: tuple = ()
    modulus: int = 0          # mat groups; 0 means exact integer entries
    generators: tuple = ()
    factors: tuple = ()       # sub-specs for products
    e: int = 0                # fiber quotient order

    def canonical_key(self):
        return (
            self.kind,
            self.name,
            self.params,
            self.modulus,
            self.generators,
            tuple(f.canonical_key() for f in self.factors),
            self.e,
        )

    def label(self) -> str:
        if self.kind == "catalog":
            if self.name in ("C", "D", "S", "A"):
                return f"{self.name}{self.params[0]}"
            return f"{self.name}({','.join(str(p) for p in self.params)})"
        if self.kind == "direct":
            return " x ".join(f.label() for f in self.factors)
        if self.kind == "fiber":
            return f"fiber({self.factors[0].label()},{self.factors[1].label()},e={self.e})"
        return self.kind


def standard_group(name: str, *params: int) -> GroupSpec:
    """Catalog lookup; validates parameters against the catalog rules."""
    if name not in CATALOG_NAMES:
        raise UnknownName(f"unknown catalog name {name!r}")
    p = tuple(int(x) for x in params)
    if name == "C":
        if len(p) != 1 or p[0] < 1:
            raise MalformedSpec("C requires one positive parameter")
    elif name == "D":
        if len(p) != 1 or p[0] < 6 or p[0] % 2:
            raise MalformedSpec("D requires one even parameter >= 6 (the group order)")
    elif name == "S":
        if len(p) != 1 or p[0] < 1:
            raise MalformedSpec("S requires one positive parameter")
    elif name == "A":
        if len(p) != 1 or p[0] < 3:
            raise MalformedSpec("A requires one parameter >= 3")
    elif name in ("SL2", "GL2", "NGL2U"):
        if len(p) != 1 or not is_prime(p[0]):
            raise MalformedSpec(f"{name} requires one prime parameter")
    elif name == "Frob":
        if len(p) != 2:
            raise MalformedSpec("Frob requires parameters (ell, d)")
        ell, d = p
        if not is_prime(ell) or d < 1 or (ell - 1) % d:
            raise MalformedSpec("Frob(ell, d) requires ell prime and d | ell-1")
    return GroupSpec(kind="catalog", name=name, params=p)


def perm_group_spec(generators, name: str = "perm-group") -> GroupSpec:
    gens = tuple(tuple(int(i) for i in g) for g in generators)
    if not gens:
        raise MalformedSpec("permutation group needs at least one generator")
    n = len(gens[0])
    for g in gens:
        if len(g) != n or sorted(g) != list(range(n)):
            raise MalformedSpec(f"invalid permutation {g!r}")
    return GroupSpec(kind="perm", name=name, generators=gens)


def mat_group_spec(modulus: int, generators, name: str = "mat-group") -> GroupSpec:
    gens = tuple(
        tuple(tuple(int(x) % modulus if modulus else int(x) for x in row) for row in g)
        for g in generators
    )
    if not gens:
        raise MalformedSpec("matrix group needs at least one generator")
    n = len(gens[0])
    for g in gens:
        if len(g) != n or any(len(row) != n for row in g):
            raise MalformedSpec("matrix generators must be square and same size")
        det = mat_det(g, modulus)
        if modulus:
            if math.gcd(det, modulus) != 1:
                raise MalformedSpec(f"generator not invertible mod {modulus}: det={det}")
        elif det not in (1, -1):
            raise MalformedSpec(f"integer generator not unimodular: det={det}")
    return GroupSpec(kind="mat", name=name, modulus=modulus, generators=gens)


def direct_spec(*factors: GroupSpec) -> GroupSpec:
    if len(factors) < 2:
        raise MalformedSpec("direct product needs at least two factors")
    return GroupSpec(kind="direct", factors=tuple(factors))


def fiber_spec(x1: GroupSpec, x2: GroupSpec, e: int) -> GroupSpec:
    if e < 1:
        raise MalformedSpec("fiber product needs e >= 1")
    return GroupSpec(kind="fiber", factors=(x1, x2), e=int(e))


def spec_from_json(doc: dict, name: str = "custom") -> GroupSpec:
    """External schema: {"kind": "perm"|"mat", "modulus": m, "generators": [...]}."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise MalformedSpec("group JSON must be an object with a 'kind' field")
    kind = doc["kind"]
    if kind == "perm":
        return perm_group_spec(doc.get("generators", []), name=name)
    if kind == "mat":
        modulus = int(doc.get("modulus", 0))
        return mat_group_spec(modulus, doc.get("generators", []), name=name)
    raise MalformedSpec(f"unsupported group JSON kind {kind!r}")


# ---------------------------------------------------------------------------
# materialization

_BUILD_CACHE: dict = {}
_BUILD_LOCK = threading.Lock()


def catalog_order(spec: GroupSpec) -> int | None:
    """Known order for catalog specs (used for the budget pre-check)."""
    if spec.kind != "catalog":
        return None
    n = spec.params[0]
    if spec.name == "C":
        return n
    if spec.name == "D":
        return n
    if spec.name == "S":
        return math.factorial(n)
    if spec.name == "A":
        return math.factorial(n) // 2
    if spec.name == "SL2":
        return n * (n * n - 1)
    if spec.name == "GL2":
        return (n * n - 1) * (n * n - n)
    if spec.name == "NGL2U":
        return n * (n - 1) ** 2
    if spec.name == "Frob":
        return spec.params[0] * spec.params[1]
    return None


def build_group(spec: GroupSpec, budget: int | None = None) -> FiniteGroup:
    key = spec.canonical_key()
    with _BUILD_LOCK:
        if key in _BUILD_CACHE:
            return _BUILD_CACHE[key]
    budget = budget if budget is not None else closure_budget()
    est = catalog_order(spec)
    if est is not None and est > budget:
        raise BudgetExceeded(f"{spec.label()} has order {est} > budget {budget}")
    group = _materialize(spec, budget)
    with _BUILD_LOCK:
        _BUILD_CACHE[key] = group
    return group


def _materialize(spec: GroupSpec, budget: int) -> FiniteGroup:
    if spec.kind == "catalog":
        return _build_catalog(spec, budget)
    if spec.kind == "perm":
        n = len(spec.generators[0])
        return FiniteGroup.from_generators(
            spec.generators, perm_mul, perm_identity(n),
            name=spec.label() if spec.name == "" else spec.name,
            budget=budget, spec=spec,
        )
    if spec.kind == "mat":
        n = len(spec.generators[0])
        m = spec.modulus

        def op(a, b):
            return mat_mul_mod(a, b, m)

        return FiniteGroup.from_generators(
            spec.generators, op, mat_identity(n),
            name=spec.name, budget=budget, spec=spec,
        )
    if spec.kind == "direct":
        parts = [build_group(f, budget) for f in spec.factors]
        total = 1
        for g in parts:
            total *= g.order
        if total > budget:
            raise BudgetExceeded(f"{spec.label()} has order {total} > budget {budget}")
        out = parts[0]
        for nxt in parts[1:]:
            out = direct_product(out, nxt)
        return FiniteGroup(
            name=spec.label(), elements=out.elements, op=out.op,
            identity=out.identity, generators=out.generators, spec=spec,
            _index=out._index, _cache=out._cache,
        )
    if spec.kind == "fiber":
        return _build_fiber(spec, budget)
    raise MalformedSpec(f"unknown spec kind {spec.kind!r}")


def _build_catalog(spec: GroupSpec, budget: int) -> FiniteGroup:
    name, p = spec.name, spec.params
    if name == "C":
        n = p[0]
        gens = [tuple((i + 1) % n for i in range(n))] if n > 1 else []
        return FiniteGroup.from_generators(
            gens, perm_mul, perm_identity(max(n, 1)), name=spec.label(),
            budget=budget, spec=spec)
    if name == "D":
        n = p[0] // 2
        rot = tuple((i + 1) % n for i in range(n))
        ref = tuple((-i) % n for i in range(n))
        return FiniteGroup.from_generators(
            [rot, ref], perm_mul, perm_identity(n), name=spec.label(),
            budget=budget, spec=spec)
    if name == "S":
        n = p[0]
        if n == 1:
            return FiniteGroup.from_generators([], perm_mul, perm_identity(1),
                                               name=spec.label(), budget=budget, spec=spec)
        cyc = tuple((i + 1) % n for i in range(n))
        swap = tuple([1, 0] + list(range(2, n)))
        return FiniteGroup.from_generators(
            [swap, cyc], perm_mul, perm_identity(n), name=spec.label(),
            budget=budget, spec=spec)
    if name == "A":
        n = p[0]
        three = tuple([1, 2, 0] + list(range(3, n)))
        if n % 2:
            big = tuple((i + 1) % n for i in range(n))
        else:
            big = tuple([0] + [(i % (n - 1)) + 1 for i in range(1, n)])
        return FiniteGroup.from_generators(
            [three, big], perm_mul, perm_identity(n), name=spec.label(),
            budget=budget, spec=spec)
    if name in ("SL2", "GL2", "NGL2U"):
        ell = p[0]

        def op(a, b):
            return mat_mul_mod(a, b, ell)

        e1 = ((1, 1), (0, 1))
        rho = primitive_root_mod(ell)
        if name == "SL2":
            gens = [e1, ((1, 0), (1, 1))]
        elif name == "GL2":
            gens = [e1, ((1, 0), (1, 1)), ((rho, 0), (0, 1))]
        else:
            gens = [e1, ((rho, 0), (0, 1)), ((1, 0), (0, rho))]
        return FiniteGroup.from_generators(
            gens, op, mat_identity(2), name=spec.label(), budget=budget, spec=spec)
    if name == "Frob":
        ell, d = p
        rho = primitive_root_mod(ell)
        a = pow(rho, (ell - 1) // d, ell)
        translate = tuple((x + 1) % ell for x in range(ell))
        scale = tuple((a * x) % ell for x in range(ell))
        gens = [translate] + ([scale] if d > 1 else [])
        return FiniteGroup.from_generators(
            gens, perm_mul, perm_identity(ell), name=spec.label(),
            budget=budget, spec=spec)
    raise UnknownName(f"unknown catalog name {name!r}")


# ---------------------------------------------------------------------------
# canonical cyclic quotients (shared by fiber products)

def cyclic_group(e: int) -> FiniteGroup:
    return build_group(standard_group("C", e))


def canonical_cyclic_quotient(G: FiniteGroup, e: int) -> Homomorphism:
    """The canonical surjection G -> C_e, through the largest invariant factor
    of the abelianization.  Raises NoSuchQuotient if none exists."""
    from .groupops import abelianization

    Ce = cyclic_group(e)
    if e == 1 or G.order == 1:
        # a trivial X1 pairs with any surjective partner map; the fiber
        # product then carves out the kernel on the other side
        return Homomorphism.from_map(G, Ce, lambda x: Ce.identity)
    ab = abelianization(G)
    if not ab.invariants or ab.invariants[-1] % e != 0:
        raise NoSuchQuotient(f"{G.name} has no cyclic quotient of order {e}")
    dec = ab.decomposition
    gen = Ce.generators[0]

    def fn(x):
        coords = dec.coords[ab.projection(x)]
        return Ce.power(gen, coords[-1] % e)

    return Homomorphism.from_map(G, Ce, fn)


def _build_fiber(spec: GroupSpec, budget: int) -> FiniteGroup:
    x1 = build_group(spec.factors[0], budget)
    x2 = build_group(spec.factors[1], budget)
    e = spec.e
    phi1 = canonical_cyclic_quotient(x1, e)
    phi2 = canonical_cyclic_quotient(x2, e)
    expected = x1.order * x2.order // e
    if expected > budget:
        raise BudgetExceeded(f"{spec.label()} has order {expected} > budget {budget}")
    H = fiber_product(x1, x2, phi1, phi2, name=spec.label())
    return FiniteGroup(
        name=spec.label(), elements=H.elements, op=H.op, identity=H.identity,
        generators=H.generators, spec=spec, _index=H._index, _cache=H._cache,
    )
