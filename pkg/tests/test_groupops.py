"""Structure computations: classes, centers, Sylow, residuals, abelianization."""

from __future__ import annotations

import pytest

from fusionweights.errors import NotAbelian
from fusionweights.groups import perm_mul
from fusionweights.groupops import (
    abelian_decomposition,
    abelianization,
    center,
    center_series,
    centralizer,
    commutator_subgroup,
    conjugacy_classes,
    normalizer,
    o_ellprime_residual,
    sylow,
)
from fusionweights.groupspec import (
    build_group,
    direct_spec,
    mat_group_spec,
    perm_group_spec,
    standard_group,
)


def naive_classes(G):
    """Oracle: conjugate every element by every element."""
    remaining = set(G.elements)
    out = []
    while remaining:
        x = remaining.pop()
        orbit = {G.conj(g, x) for g in G.elements}
        remaining -= orbit
        out.append(orbit)
    return out


@pytest.mark.parametrize("name,params,count", [
    ("C", (3,), 3),        # abelian: one class per element
    ("S", (5,), 7),        # number of partitions of 5
    ("SL2", (5,), 9),
    ("S", (3,), 3),
    ("A", (5,), 5),
    ("SL2", (3,), 7),
])
def test_class_counts(name, params, count):
    G = build_group(standard_group(name, *params))
    data = conjugacy_classes(G)
    assert data.count == count
    assert sum(data.sizes) == G.order


@pytest.mark.parametrize("name,params", [("S", (4,)), ("D", (12,)), ("SL2", (3,))])
def test_classes_match_naive_oracle(name, params):
    G = build_group(standard_group(name, *params))
    data = conjugacy_classes(G)
    oracle = naive_classes(G)
    assert sorted(len(c) for c in oracle) == sorted(data.sizes)
    assert {min(c) for c in oracle} == set(data.reps)


def test_classes_identity_first():
    G = build_group(standard_group("S", 4))
    data = conjugacy_classes(G)
    assert data.reps[0] == G.identity
    assert data.sizes[0] == 1


def heisenberg3():
    """Extraspecial 3^{1+2} of exponent 3 as unitriangular matrices mod 3."""
    return build_group(mat_group_spec(3, [
        ((1, 1, 0), (0, 1, 0), (0, 0, 1)),
        ((1, 0, 0), (0, 1, 1), (0, 0, 1)),
    ], name="3^(1+2)"))


def test_center_series():
    A = build_group(standard_group("C", 12))
    assert center_series(A, 1).order == 12      # abelian: Z1 = G
    E = heisenberg3()
    assert E.order == 27
    assert center_series(E, 1).order == 3
    assert center_series(E, 2).order == 27      # class 2 forces Z2 = G


def test_center_series_bracket_property():
    # [Z2(G), G] <= Z1(G)
    for spec in (standard_group("S", 4), standard_group("SL2", 3)):
        G = build_group(spec)
        Z1, Z2 = center_series(G, 1), center_series(G, 2)
        for x in Z2.element_set:
            for g in G.generators:
                comm = G.op(G.op(G.inv(x), G.inv(g)), G.op(x, g))
                assert comm in Z1.element_set
        assert Z1.element_set <= Z2.element_set


def test_centralizer_normalizer():
    S5 = build_group(standard_group("S", 5))
    c5 = next(x for x in S5.elements if S5.element_order(x) == 5)
    U = S5.subgroup([c5])
    assert normalizer(S5, U).order == 20
    S3 = build_group(standard_group("S", 3))
    t3 = next(x for x in S3.elements if S3.element_order(x) == 3)
    assert centralizer(S3, t3).order == 3
    assert normalizer(S3, S3.full_subgroup()).order == 6


@pytest.mark.parametrize("name,params,ell,expected", [
    ("GL2", (3,), 3, 3),
    ("S", (5,), 5, 5),
    ("S", (4,), 2, 8),
    ("C", (12,), 2, 4),   # abelian: the 2-torsion part
    ("C", (12,), 5, 1),   # ell does not divide |G|
])
def test_sylow(name, params, ell, expected):
    G = build_group(standard_group(name, *params))
    P = sylow(G, ell)
    assert P.order == expected
    for x in P.element_set:
        o = G.element_order(x)
        assert o == 1 or o % ell == 0 or all(o % q for q in range(2, o) if q != ell)


def test_o_ellprime_residual():
    GL23 = build_group(standard_group("GL2", 3))
    R = o_ellprime_residual(GL23, 3)
    assert R.order == 24
    assert conjugacy_classes(R.as_group()).count == 7  # SL2(3) fingerprint
    C6 = build_group(standard_group("C", 6))
    assert o_ellprime_residual(C6, 5).order == 1       # 5'-group: trivial
    prod = build_group(direct_spec(standard_group("C", 2), standard_group("SL2", 5)))
    R5 = o_ellprime_residual(prod, 5)
    assert R5.order == 120


def test_residual_minimality_exhaustive():
    """O^{ell'}(G) lies in every normal subgroup with ell'-quotient (|G| <= 500)."""
    from itertools import combinations
    for spec, ell in [(standard_group("SL2", 3), 3), (standard_group("S", 4), 2)]:
        G = build_group(spec)
        R = o_ellprime_residual(G, ell)
        assert R.is_normal()
        data = conjugacy_classes(G)
        classes = [frozenset(x for x in G.elements if data.class_of[x] == i)
                   for i in range(data.count)]
        # enumerate all normal subgroups as subgroup-closed unions of classes
        for r in range(1, data.count + 1):
            for combo in combinations(range(data.count), r):
                if 0 not in combo:
                    continue
                union = frozenset().union(*(classes[i] for i in combo))
                if len(union) == G.order or G.order % len(union):
                    continue
                H = G.subgroup_from_elements(union)
                closed = all(G.op(a, b) in union for a in H.generators for b in union)
                if not closed:
                    continue
                quotient_order = G.order // len(union)
                if quotient_order % ell == 0:
                    continue
                assert R.element_set <= union


def test_abelianization():
    C6 = build_group(standard_group("C", 6))
    assert abelianization(C6).invariants == (6,)
    SL23 = build_group(standard_group("SL2", 3))
    assert abelianization(SL23).invariants == (3,)
    S4 = build_group(standard_group("S", 4))
    assert abelianization(S4).invariants == (2,)
    A5 = build_group(standard_group("A", 5))
    assert abelianization(A5).invariants == ()


def test_abelianization_projection_is_hom():
    G = build_group(standard_group("SL2", 3))
    ab = abelianization(G)
    proj = ab.projection
    for a in G.generators:
        for b in G.generators:
            assert proj(G.op(a, b)) == ab.quotient.op(proj(a), proj(b))


def test_abelian_decomposition_redundant_generators():
    """C4 x C2 presented with the dependent generator set {a, b, ab}."""
    a = (1, 2, 3, 0, 4, 5)     # 4-cycle on first block
    b = (0, 1, 2, 3, 5, 4)     # swap on second block
    ab = perm_mul(a, b)
    G = build_group(perm_group_spec([a, b, ab], name="C4xC2-redundant"))
    dec = abelian_decomposition(G)
    assert dec.invariants == (2, 4)
    assert len(dec.coords) == 8
    # coordinates really invert element_from_coords
    for x, t in dec.coords.items():
        assert dec.element_from_coords(t) == x


def test_abelian_decomposition_rejects_nonabelian():
    with pytest.raises(NotAbelian):
        abelian_decomposition(build_group(standard_group("S", 3)))


def test_commutator_subgroup():
    S3 = build_group(standard_group("S", 3))
    assert commutator_subgroup(S3).order == 3
    D12 = build_group(standard_group("D", 12))
    assert commutator_subgroup(D12).order == 3
