"""The group-spec mini-grammar.

    expr  := atom (' x ' atom)*                      direct products
    atom  := C<n> | D<2n> | S<n> | A<n>
           | SL2(<ell>) | GL2(<ell>) | NGL2U(<ell>) | Frob(<ell>,<d>)
           | fiber(<expr>, <expr>, e=<n>)
           | @<file.json>                            custom group document

Parsing is position-aware; printing produces the canonical form, and
parse(print(spec)) is the identity on canonical trees.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Callable, Optional

from .errors import ParseError, UnknownAtom
from .groupspec import (
    GroupSpec,
    direct_spec,
    fiber_spec,
    spec_from_json,
    standard_group,
)

_SIMPLE_ATOM = re.compile(r"([CDSA])(\d+)$")
_CALL_ATOM = re.compile(r"(SL2|GL2|NGL2U|Frob)$")
_TOKEN = re.compile(r"[A-Za-z@][A-Za-z0-9_.\-/]*|\d+|[(),=]|x\b")


def default_file_resolver(path: str) -> dict:
    return json.loads(Path(path).read_text())


class _Parser:
    def __init__(self, text: str, resolver: Callable[[str], dict]):
        self.text = text
        self.pos = 0
        self.resolver = resolver

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take_word(self) -> str:
        self.skip_ws()
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            raise self.error("expected a token")
        self.pos = m.end()
        return m.group(0)

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def parse_int(self) -> int:
        self.skip_ws()
        m = re.match(r"\d+", self.text[self.pos:])
        if not m:
            raise self.error("expected an integer")
        self.pos += m.end()
        return int(m.group(0))

    def parse(self) -> GroupSpec:
        spec = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error("trailing input")
        return spec

    def expr(self) -> GroupSpec:
        parts = [self.atom()]
        while True:
            save = self.pos
            self.skip_ws()
            m = re.match(r"x(?![A-Za-z0-9_])", self.text[self.pos:])
            if not m:
                self.pos = save
                break
            self.pos += 1
            parts.append(self.atom())
        if len(parts) == 1:
            return parts[0]
        return direct_spec(*parts)

    def atom(self) -> GroupSpec:
        self.skip_ws()
        start = self.pos
        if self.peek() == "@":
            word = self.take_word()
            doc = self.resolver(word[1:])
            return spec_from_json(doc, name=word)
        word_match = re.match(r"[A-Za-z][A-Za-z0-9]*", self.text[self.pos:])
        if not word_match:
            raise self.error("expected a group atom")
        word = word_match.group(0)
        self.pos += len(word)
        if word == "fiber":
            self.expect("(")
            x1 = self.expr()
            self.expect(",")
            x2 = self.expr()
            self.expect(",")
            self.skip_ws()
            if not self.text[self.pos:].startswith("e"):
                raise self.error("expected e=<int>")
            self.pos += 1
            self.expect("=")
            e = self.parse_int()
            self.expect(")")
            return fiber_spec(x1, x2, e)
        m = _SIMPLE_ATOM.match(word)
        if m:
            return standard_group(m.group(1), int(m.group(2)))
        if _CALL_ATOM.match(word):
            self.expect("(")
            params = [self.parse_int()]
            while self.peek() == ",":
                self.expect(",")
                params.append(self.parse_int())
            self.expect(")")
            return standard_group(word, *params)
        self.pos = start
        raise UnknownAtom(f"unknown atom {word!r}", start)


def parse_group_spec(text: str,
                     resolver: Optional[Callable[[str], dict]] = None) -> GroupSpec:
    if not text or not text.strip():
        raise ParseError("empty group expression", 0)
    return _Parser(text, resolver or default_file_resolver).parse()


def print_group_spec(spec: GroupSpec) -> str:
    if spec.kind == "catalog":
        return spec.label()
    if spec.kind == "direct":
        return " x ".join(print_group_spec(f) for f in spec.factors)
    if spec.kind == "fiber":
        return (f"fiber({print_group_spec(spec.factors[0])},"
                f"{print_group_spec(spec.factors[1])},e={spec.e})")
    if spec.name.startswith("@"):
        return spec.name
    raise ValueError(f"spec of kind {spec.kind!r} has no printable form")
