"""The small text languages used on the command line.

    view   := IDENT ( '|' IDENT (',' IDENT)* )?
    filter := clause (';' clause)*
    clause := IDENT '=' VALUE (',' VALUE)*

Whitespace around tokens is ignored.  Error columns are 1-based.
"""
from __future__ import annotations

import re

from .combinatorics import ViewSpec
from .errors import DomainError, ParseError
from .ops import DiceFilter

__all__ = ["parse_view_expr", "parse_filter_expr", "parse_key_expr", "format_view_expr"]

_IDENT = re.compile(r"[^\W\d]\w*")
_VALUE = re.compile(r"[^,;=]+")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.pos + 1, self.text)

    def accept(self, ch: str) -> bool:
        self.skip_ws()
        if self.text.startswith(ch, self.pos):
            self.pos += len(ch)
            return True
        return False

    def expect(self, ch: str) -> None:
        if not self.accept(ch):
            raise self.error(f"expected {ch!r}")

    def ident(self) -> tuple[str, int]:
        self.skip_ws()
        m = _IDENT.match(self.text, self.pos)
        if m is None:
            raise self.error("expected dimension name")
        start = self.pos
        self.pos = m.end()
        return m.group(), start

    def value(self) -> str:
        self.skip_ws()
        m = _VALUE.match(self.text, self.pos)
        if m is None or not m.group().strip():
            raise self.error("expected value")
        self.pos = m.end()
        return m.group().strip()


def parse_view_expr(text: str) -> ViewSpec:
    """``"ang | jenj, jenkel"`` -> ``ViewSpec("ang", ("jenj", "jenkel"))``."""
    sc = _Scanner(text)
    horizontal, _ = sc.ident()
    pivots: list[str] = []
    seen = {horizontal}
    if sc.accept("|"):
        while True:
            name, start = sc.ident()
            if name in seen:
                raise ParseError(f"duplicate dimension {name!r}", start + 1, text)
            seen.add(name)
            pivots.append(name)
            if not sc.accept(","):
                break
    if not sc.at_end():
        raise sc.error("unexpected text")
    return ViewSpec(horizontal, tuple(pivots))


def format_view_expr(view: ViewSpec) -> str:
    return str(view)


def _clauses(text: str) -> dict[str, list[str]]:
    sc = _Scanner(text)
    clauses: dict[str, list[str]] = {}
    while True:
        dim, start = sc.ident()
        if dim in clauses:
            raise ParseError(f"dimension {dim!r} filtered twice", start + 1, text)
        sc.expect("=")
        values = [sc.value()]
        while sc.accept(","):
            values.append(sc.value())
        clauses[dim] = values
        if not sc.accept(";"):
            break
    if not sc.at_end():
        raise sc.error("unexpected text")
    return clauses


def parse_filter_expr(text: str) -> DiceFilter:
    """``"ang=2000,2001; jenkel=p"`` -> ``{ang: {2000, 2001}, jenkel: {p}}``."""
    try:
        return DiceFilter(_clauses(text))
    except DomainError as exc:
        raise ParseError(str(exc), 1, text) from None


def parse_key_expr(text: str) -> dict[str, str]:
    """Filter syntax restricted to one value per dimension, e.g. ``ang=2000;jenj=5``."""
    key = {}
    for dim, values in _clauses(text).items():
        if len(values) != 1:
            raise ParseError(f"key for {dim!r} must have exactly one value", text.find(dim) + 1, text)
        key[dim] = values[0]
    return key
