"""Family constructions, automizer data, and the weight-count verifier."""

from __future__ import annotations

import pytest

from fusionweights.charcounts import irr_count, z_count
from fusionweights.errors import BadPrime, HypothesisFailed, MalformedSpec, NoSuchQuotient
from fusionweights.families import (
    ActionSpec,
    automizer_data,
    chars_group,
    check_or1_hypotheses,
    family_A_spec,
    family_B_spec,
    family_spec_from_json,
    g2_action,
    verify_awc,
    verify_chars,
)
from fusionweights.groupops import center, conjugacy_classes
from fusionweights.groupspec import build_group, standard_group


def test_family_a_u_matrix_frozen():
    # the order-3 torus action in the rank-2 basis
    spec = family_A_spec(3)
    assert spec.action.u_matrix() == ((0, -1), (1, -1))


@pytest.mark.parametrize("ell,order", [(3, 6), (5, 20), (7, 42)])
def test_family_a_weyl_orders(ell, order):
    spec = family_A_spec(ell)
    W = spec.action.weyl_group()
    assert W.order == order
    assert W.element_order(spec.action.u_matrix()) == ell


def test_family_a_rejects_bad_prime_and_rank():
    with pytest.raises(BadPrime):
        family_A_spec(2)
    with pytest.raises(MalformedSpec):
        family_A_spec(3, rank=1)


def test_family_a_rank_override_full_lattice():
    spec = family_A_spec(3, rank=3)
    assert spec.action.rank == 3
    assert spec.action.weyl_group().order == 6


def test_g2_preset():
    spec = family_B_spec(preset="G2")
    W = spec.action.weyl_group()
    assert W.order == 12
    assert W.element_order(spec.action.u_matrix()) == 3
    assert z_count(W, 3) == 0          # dihedral degrees 1,1,1,1,2,2


def test_family_b_rejects_wrong_valuation():
    # S4-like action with v_2... use an order-9 u: v_3(|W|) = 2 via C9 action
    bad = ActionSpec(
        rank=2,
        generators=(((1, 1), (0, 1)),),   # infinite order over Z
        u_word=(0,),
        ell=3,
    )
    with pytest.raises(Exception):
        bad.validate()
    # v_ell(|W|) = 2: direct product of two order-3 rotations
    rot = ((0, -1), (1, -1))
    two = tuple(
        tuple(list(row) + [0, 0]) for row in rot
    ) + tuple(
        tuple([0, 0] + list(row)) for row in rot
    )
    one = tuple(
        tuple(list(row) + [0, 0]) for row in rot
    ) + ((0, 0, 1, 0), (0, 0, 0, 1))
    spec = ActionSpec(rank=4, generators=(one, two), u_word=(0,), ell=3)
    with pytest.raises(HypothesisFailed):
        family_B_spec(ell=3, t=0, x1=standard_group("C", 1), e=1, action=spec)


def test_chars_group_orders_and_cases():
    assert chars_group(1, standard_group("C", 1), 1, 5).order == 480
    H = chars_group(1, standard_group("C", 1), 4, 5)
    assert H.order == 120              # determinant fiber picks out SL2(5)
    assert chars_group(2, standard_group("C", 2), 2, 3).order == 12
    with pytest.raises(NoSuchQuotient):
        chars_group(1, standard_group("S", 3), 4, 5)
    with pytest.raises(HypothesisFailed):
        chars_group(1, standard_group("C", 3), 1, 3)   # X1 not an ell'-group


@pytest.mark.parametrize("case,x1,e,ell", [
    (1, ("C", 1), 1, 5),
    (1, ("C", 2), 2, 3),
    (1, ("C", 4), 4, 5),
    (1, ("S", 3), 2, 5),   # X1 = S3 needs ell = 5: it is not a 3'-group
    (2, ("C", 1), 1, 5),
    (2, ("C", 2), 2, 3),
    (2, ("C", 4), 2, 5),
])
def test_verify_chars_cells(case, x1, e, ell):
    rep = verify_chars(case, standard_group(*x1), e, ell)
    assert rep.passed, rep.to_dict()


def test_verify_chars_paper_value_gl25():
    rep = verify_chars(1, standard_group("C", 1), 1, 5)
    assert rep.integers["z_H"] == 4    # |GL2(5) : SL2(5)| = 4


def test_verify_chars_case2_borel_count():
    rep = verify_chars(2, standard_group("C", 1), 1, 5)
    assert rep.integers["irr_H"] == 20  # 1 * 5 * 4


def test_automizer_data_family_a():
    data = automizer_data(family_A_spec(5))
    assert data.out_q.order == 120                 # SL2(5)
    assert conjugacy_classes(data.out_q).count == 9
    assert data.out_s.order == 4                   # C4
    assert data.nwu.order == 20
    assert data.c_value == 1


def test_automizer_data_g2():
    data = automizer_data(family_B_spec(preset="G2"))
    assert data.out_q.order == 48
    # the direct-product shape C2 x SL2(3): center of order 4 pins it down
    assert center(data.out_q).order == 4
    assert data.out_s.order == 4
    assert irr_count(data.nwu_group()) == 6        # 2 * 3 * 2 / 2
    assert data.nwu.order == 12


@pytest.mark.parametrize("ell,weight", [(3, 3), (5, 5), (7, 7)])
def test_verify_awc_family_a(ell, weight):
    rep = verify_awc(family_A_spec(ell))
    assert rep.passed
    assert rep.integers["weight_count"] == weight
    assert rep.integers["irr_W"] == weight
    assert rep.integers["z_out_S"] == ell - 1
    assert rep.integers["z_out_Q"] == 1
    assert any("rank" in f for f in rep.flags)


def test_verify_awc_g2():
    rep = verify_awc(family_B_spec(preset="G2"))
    assert rep.passed
    assert rep.integers["z_W"] == 0
    assert rep.integers["z_out_S"] == 4
    assert rep.integers["z_out_Q"] == 2
    assert rep.integers["weight_count"] == 6
    assert rep.integers["irr_W"] == 6


def test_awc_cancellation_chain_zero():
    for spec in (family_A_spec(3), family_B_spec(preset="G2")):
        rep = verify_awc(spec)
        chain = next(c for c in rep.chains if c.name == "cancellation")
        assert chain.links[0].left == 0
        assert chain.links[0].right == 0


def test_check_or1_identity_and_membership():
    spec = family_A_spec(3)
    rep = check_or1_hypotheses(spec, 2)
    assert rep.passed
    identity_rec = next(r for r in rep.records if r["r"] == 1 and r["s"] == 1)
    assert identity_rec["delta_t_member"]          # (1,1) lies in every Delta_t
    assert all(r["in_aut_vee"] for r in rep.records)
    assert all(r["representative_independent"] for r in rep.records)


def test_check_or1_g2_case1():
    rep = check_or1_hypotheses(family_B_spec(preset="G2"), 2)
    assert rep.passed
    assert rep.integers["dim_omega1"] == 2         # = ell - 1
    assert rep.inputs["consistent_case"] == 1


def test_mu_pairs_multiplicative():
    spec = family_B_spec(preset="G2")
    rep = check_or1_hypotheses(spec, 2)
    pairs = {r["element"]: (r["r"], r["s"]) for r in rep.records}
    W = spec.action.weyl_group()
    elems = [w for w in sorted(W.elements) if repr(w) in pairs]
    for a in elems:
        for b in elems:
            ab = W.op(a, b)
            if repr(ab) in pairs:
                ra, sa = pairs[repr(a)]
                rb, sb = pairs[repr(b)]
                rab, sab = pairs[repr(ab)]
                assert rab == (ra * rb) % 3
                assert sab == (sa * sb) % 3


def test_family_spec_from_json_roundtrip():
    doc = {"preset": "G2"}
    spec = family_spec_from_json(doc)
    assert spec.label() == "preset:G2"
    doc = {"ell": 5, "variant": "A"}
    assert family_spec_from_json(doc).ell == 5
    act = g2_action()
    doc = {
        "ell": 3, "variant": "B", "t": 0, "x1": "C2", "e": 2,
        "action": {"rank": 2, "generators": [list(map(list, g)) for g in act.generators],
                   "u": list(act.u_word)},
    }
    spec = family_spec_from_json(doc)
    assert spec.action.weyl_group().order == 12
