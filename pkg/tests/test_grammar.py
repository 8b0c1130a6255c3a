"""Group-spec grammar: parsing, printing, round-trips, file atoms."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusionweights.errors import ParseError, UnknownAtom
from fusionweights.grammar import parse_group_spec, print_group_spec
from fusionweights.groupspec import build_group


def order_of(text, resolver=None):
    return build_group(parse_group_spec(text, resolver)).order


def test_parse_atoms():
    assert order_of("C3") == 3
    assert order_of("D8") == 8
    assert order_of("S4") == 24
    assert order_of("A4") == 12
    assert order_of("SL2(5)") == 120
    assert order_of("GL2(3)") == 48
    assert order_of("NGL2U(3)") == 12
    assert order_of("Frob(5,4)") == 20


def test_parse_products_and_fibers():
    assert order_of("C2 x SL2(5)") == 240
    assert order_of("C2 x C3 x C5") == 30
    assert order_of("fiber(C2,GL2(3),e=2)") == 48
    assert order_of("fiber(C1,GL2(5),e=4)") == 120


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse_group_spec("C2 x ")
    assert exc.value.position >= 4
    with pytest.raises(UnknownAtom):
        parse_group_spec("Q8")
    with pytest.raises(ParseError):
        parse_group_spec("")
    with pytest.raises(ParseError):
        parse_group_spec("C2 C3")


def test_file_atom(tmp_path):
    doc = {"kind": "perm", "generators": [[1, 2, 0]]}
    path = tmp_path / "grp.json"
    path.write_text(json.dumps(doc))
    spec = parse_group_spec(f"@{path}")
    assert build_group(spec).order == 3
    # inline resolver, as the service uses
    spec = parse_group_spec("@custom.json", resolver=lambda p: doc)
    assert build_group(spec).order == 3


def test_print_canonical_forms():
    for text in ("C3", "SL2(5)", "C2 x SL2(5)", "fiber(C2,GL2(3),e=2)",
                 "Frob(7,3)", "C2 x C2 x C2"):
        assert print_group_spec(parse_group_spec(text)) == text


_atoms = st.one_of(
    st.integers(2, 12).map(lambda n: f"C{n}"),
    st.sampled_from(["D8", "D12", "S3", "S4", "A4", "SL2(3)", "GL2(3)",
                     "NGL2U(3)", "NGL2U(5)", "Frob(5,4)", "Frob(7,2)"]),
)


def _exprs(depth):
    if depth == 0:
        return _atoms
    sub = _exprs(depth - 1)
    return st.one_of(
        _atoms,
        st.lists(sub, min_size=2, max_size=3).map(" x ".join),
        st.tuples(sub, st.sampled_from(["GL2(3)", "NGL2U(3)"]),
                  st.sampled_from([1, 2])).map(
            lambda t: f"fiber({t[0]},{t[1]},e={t[2]})"
        ),
    )


@settings(max_examples=60, deadline=None)
@given(_exprs(1))
def test_round_trip_property(text):
    spec = parse_group_spec(text)
    printed = print_group_spec(spec)
    assert parse_group_spec(printed) == spec
