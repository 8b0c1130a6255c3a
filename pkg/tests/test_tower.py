"""Tower levels: lattice data, cross-mode agreement, counts, connectivity."""

from __future__ import annotations

import pytest

from fusionweights.errors import MalformedSpec
from fusionweights.families import family_A_spec, family_B_spec
from fusionweights.tower import (
    build_s,
    connectivity_check,
    m_count,
    r_count,
    subgroup_reps,
    torus_level,
    verify_am,
)


@pytest.fixture(scope="module")
def a3():
    return family_A_spec(3)


@pytest.fixture(scope="module")
def a5():
    return family_A_spec(5)


@pytest.fixture(scope="module")
def g2():
    return family_B_spec(preset="G2")


def test_torus_level_sizes(a3):
    info = torus_level(a3.action, 2)
    assert info["torus_order"] == 81
    assert info["modulus"] == 9


def test_fixed_sublattice_order_three_every_level(a3):
    # |det(u-1)| = 3 on this lattice
    for n in range(1, 5):
        assert torus_level(a3.action, n)["u_fixed_order"] == 3


def test_g2_reduction_faithful_at_level_one(g2):
    assert torus_level(g2.action, 1)["reduction_faithful"] is True


def test_build_s_basic(a3):
    lvl = build_s(a3, 1)
    assert lvl.order == 27
    assert lvl.z_order == 3
    assert lvl.group is not None           # materialized and cross-checked


def test_build_s_rejects_level_zero(a3):
    with pytest.raises(MalformedSpec):
        build_s(a3, 0)


def test_sab_invariants_level_independent(a3):
    for n in range(1, 5):
        assert build_s(a3, n).sab_invariants == (3, 3)


def test_cross_mode_agreement(a3, g2, a5):
    # build_s raises if the group-theoretic center / second center /
    # abelianization disagree with the lattice computations
    for spec, levels in ((a3, (1, 2, 3)), (g2, (1, 2)), (a5, (1,))):
        for n in levels:
            lvl = build_s(spec, n)
            assert lvl.group is not None


def test_dual_pairing_invariance(a3):
    # <Mx, M^{-T} psi> = <x, psi> for the torus action and its dual
    import numpy as np
    q = 9
    u = [list(r) for r in a3.action.u_matrix()]
    M = np.array(u) % q
    Minv_T = np.array(_inv2_mod(u, q)).T % q
    rng = np.random.default_rng(5)
    for _ in range(20):
        x = rng.integers(0, q, size=2)
        psi = rng.integers(0, q, size=2)
        lhs = int((M @ x) @ (Minv_T @ psi)) % q
        rhs = int(x @ psi) % q
        assert lhs == rhs


def _inv2_mod(m, q):
    det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % q
    dinv = pow(det, -1, q)
    return [[(m[1][1] * dinv) % q, (-m[0][1] * dinv) % q],
            [(-m[1][0] * dinv) % q, (m[0][0] * dinv) % q]]


def test_subgroup_reps_family_a_level_one(a3):
    rep = subgroup_reps(a3, 1)
    assert rep.kind == "abelian-pair"
    assert len(rep.q_elements) == 9
    assert len(rep.q_tilde) == 9           # Qtilde = Q, Ztilde trivial
    assert len(rep.z_tilde) == 1
    assert rep.family_size == 3


def test_subgroup_reps_g2_extraspecial(g2):
    rep = subgroup_reps(g2, 2)
    assert rep.kind == "extraspecial"
    assert len(rep.q_tilde) == 27


def test_subgroup_reps_class_split_matches_cokernel(a3, g2):
    # at finite levels the family splits into cokernel-many classes
    for spec, n in ((a3, 1), (a3, 2), (g2, 2)):
        rep = subgroup_reps(spec, n)
        assert rep.s_class_count == 3
        assert rep.family_size % rep.s_class_count == 0


def test_m_count_hand_oracle_a3(a3):
    """Level 1: S^ab = C3 x C3, the coset group acts by negating both
    coordinates; 1 fixed dual contributes 2, four 2-orbits contribute 1."""
    by_hand = 0
    duals = [(i, j) for i in range(3) for j in range(3)]
    seen = set()
    for d in duals:
        if d in seen:
            continue
        orbit = {d, ((-d[0]) % 3, (-d[1]) % 3)}
        seen |= orbit
        by_hand += 2 if len(orbit) == 1 else 1
    assert by_hand == 6
    assert m_count(a3, 1) == 6


def test_r_count_hand_oracle_a3(a3):
    """Level 1: orbits {0}, {±v} on the order-3 center; Irr_0(S3, 3) +
    Irr_0(C3, 3) = 3 + 3."""
    assert r_count(a3, 1) == 6


def test_m_r_level_independence_a3(a3):
    for n in (1, 2, 3, 4):
        lvl = build_s(a3, n)
        assert m_count(a3, n, lvl) == 6
        assert r_count(a3, n, lvl) == 6


def test_m_r_a5(a5):
    assert m_count(a5, 1) == 10
    assert r_count(a5, 1) == 10


def test_m_r_g2(g2):
    for n in (1, 2):
        lvl = build_s(g2, n)
        m = m_count(g2, n, lvl)
        r = r_count(g2, n, lvl)
        assert m == r == 9


def test_m_r_beyond_materialization_budget(a3):
    """Levels past the group budget run on the lattice path alone."""
    lvl = build_s(a3, 6)
    assert lvl.group is None
    assert m_count(a3, 6, lvl) == r_count(a3, 6, lvl) == 6


def test_m_r_ell_seven():
    """Hand oracle: the C6-action on the two C7 factors fixes only the
    trivial dual (6 pairs) and has 8 free orbits: m = 6+1+1+6 = 14; the
    orbit side is Irr_0(C7:C6) + Irr_0(C7) = 7 + 7."""
    from fusionweights.families import family_A_spec
    a7 = family_A_spec(7)
    lvl = build_s(a7, 1)
    assert lvl.group is None                  # |S_1| = 7^7 exceeds the budget
    assert m_count(a7, 1, lvl) == 14
    assert r_count(a7, 1, lvl) == 14


def test_verify_am_reports(a3, g2):
    rep = verify_am(a3, [1, 2])
    assert rep.passed
    assert [r["m"] for r in rep.records] == [6, 6]
    assert rep.integers["stabilization_level"] == 1
    assert all(set(r) >= {"level", "m", "r", "z_center_order", "sab_invariants",
                          "verdicts"} for r in rep.records)
    assert all(r["verdicts"]["m_equals_r"] for r in rep.records)
    rep = verify_am(g2, [1, 2], workers=2)
    assert rep.passed
    assert [r["level"] for r in rep.records] == [1, 2]


def test_verify_am_rejects_empty_levels(a3):
    with pytest.raises(MalformedSpec):
        verify_am(a3, [])


@pytest.mark.parametrize("which,n", [("a3", 1), ("a3", 2), ("g2", 1), ("g2", 2)])
def test_connectivity(which, n, a3, g2):
    spec = {"a3": a3, "g2": g2}[which]
    rep = connectivity_check(spec, n)
    assert rep.passed
    assert all(r["fused_into_T"] for r in rep.records)


def test_connectivity_commutator_refinement(a3, g2):
    # the stronger landing spot holds away from the degenerate level
    rep = connectivity_check(a3, 2)
    assert all(r["meets_Q_cap_commutator"] for r in rep.records)
    rep = connectivity_check(g2, 1)
    # Q ∩ [S,S] is central in Q at this level; the refinement fails honestly
    assert all(not r["meets_Q_cap_commutator"] for r in rep.records)
    assert rep.passed                      # ...but fusion into T still holds
