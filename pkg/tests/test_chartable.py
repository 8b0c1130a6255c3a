"""Exact character tables: degrees, invariants, orthogonality, determinism.

Degree multisets below are frozen from independent hand derivations
(class-algebra computations for the small groups, standard parameter counts
for SL2/GL2), not from the engine's own output.
"""

from __future__ import annotations

import json

import numpy as np
import pytest

from fusionweights.chartable import character_table
from fusionweights.cyclotomic import cyclotomic_context
from fusionweights.groupspec import build_group, direct_spec, standard_group

FROZEN_DEGREES = {
    ("S", (3,)): [1, 1, 2],
    ("SL2", (3,)): [1, 1, 1, 2, 2, 2, 3],
    ("S", (5,)): [1, 1, 4, 4, 5, 5, 6],
    ("GL2", (3,)): [1, 1, 2, 2, 2, 3, 3, 4],
    ("A", (5,)): [1, 3, 3, 4, 5],
    ("SL2", (5,)): [1, 2, 2, 3, 3, 4, 4, 5, 6],
    ("D", (12,)): [1, 1, 1, 1, 2, 2],
    ("Frob", (5, 4)): [1, 1, 1, 1, 4],
    ("Frob", (7, 6)): [1, 1, 1, 1, 1, 1, 6],
    ("NGL2U", (3,)): [1, 1, 1, 1, 2, 2],
    ("C", (6,)): [1] * 6,
}


@pytest.mark.parametrize("name,params", sorted(FROZEN_DEGREES, key=str))
def test_frozen_degree_multisets(name, params):
    G = build_group(standard_group(name, *params))
    t = character_table(G)
    assert sorted(t.degrees) == FROZEN_DEGREES[(name, params)]


@pytest.mark.parametrize("name,params", sorted(FROZEN_DEGREES, key=str))
def test_invariants_and_orthogonality(name, params):
    G = build_group(standard_group(name, *params))
    t = character_table(G)
    t.check_basic_invariants()
    t.verify_orthogonality()


@pytest.mark.parametrize("name,params", [("S", (3,)), ("SL2", (3,)), ("D", (12,)),
                                         ("C", (6,)), ("A", (4,))])
def test_regular_character_cross_oracle(name, params):
    # independent convolution route, no DFT involved
    G = build_group(standard_group(name, *params))
    character_table(G).verify_regular_diagonal_direct()


def test_s3_value_spot_checks():
    G = build_group(standard_group("S", 3))
    t = character_table(G)
    ctx = cyclotomic_context(t.basis_order)
    data = t.classes
    i2 = next(i for i in range(3) if data.rep_orders[i] == 2)
    i3 = next(i for i in range(3) if data.rep_orders[i] == 3)
    c2 = next(c for c in range(3) if t.degrees[c] == 2)
    # the 2-dimensional character: 0 on transpositions, -1 on 3-cycles
    assert ctx.rational_value(t.mults[c2, i2]) == 0
    assert ctx.rational_value(t.mults[c2, i3]) == -1


def test_c3_table_is_cube_roots():
    G = build_group(standard_group("C", 3))
    t = character_table(G)
    assert t.basis_order == 3
    assert t.count == 3
    assert all(d == 1 for d in t.degrees)
    # each value is a single root of unity
    assert np.all(t.mults.sum(axis=2) == 1)


def test_trivial_group_table():
    G = build_group(standard_group("C", 1))
    t = character_table(G)
    assert t.count == 1
    assert t.degrees == (1,)
    t.verify_orthogonality()


def test_table_determinism():
    import fusionweights.groupspec as gs
    a = character_table(build_group(standard_group("SL2", 3))).to_json_dict()
    gs._BUILD_CACHE.clear()
    b = character_table(build_group(standard_group("SL2", 3))).to_json_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_direct_product_table():
    spec = direct_spec(standard_group("C", 2), standard_group("SL2", 3))
    G = build_group(spec)
    t = character_table(G)
    assert sorted(t.degrees) == sorted(d for d in [1, 1, 1, 2, 2, 2, 3] for _ in (0, 1))
    t.verify_orthogonality()


def test_json_export_shape():
    t = character_table(build_group(standard_group("S", 3)))
    doc = t.to_json_dict()
    assert doc["basis_order"] == 6
    assert len(doc["characters"]) == 3
    assert all(len(ch["values"]) == 3 for ch in doc["characters"])
    assert all(len(v) == 6 for ch in doc["characters"] for v in ch["values"])
