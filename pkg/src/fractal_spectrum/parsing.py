"""Reading vectors from inline expressions or JSON files."""

from __future__ import annotations

import json
import re
from pathlib import Path

from .errors import ParseError
from .vectors import FreqVector

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?j?|j")
_INDEX = re.compile(r"e(-?\d+)")


def _skip(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _coefficient(text: str, pos: int) -> tuple:
    """Parse an optional ``c*`` prefix; returns (value, new position)."""
    if text.startswith("(", pos):
        close = text.find(")", pos)
        if close < 0:
            raise ParseError("unclosed parenthesis", pos)
        raw = text[pos + 1:close].replace(" ", "")
        try:
            value = complex(raw)
        except ValueError:
            raise ParseError(f"bad complex literal {raw!r}", pos + 1) from None
        pos = close + 1
    else:
        # a bare 'e' starts the basis symbol, not a number
        m = _NUMBER.match(text, pos)
        if not m:
            return 1.0 + 0j, pos
        value = complex("1j" if m.group(0) == "j" else m.group(0))
        pos = m.end()
    pos = _skip(text, pos)
    if text.startswith("*", pos):
        pos = _skip(text, pos + 1)
    return value, pos


def parse_vector(text: str) -> FreqVector:
    """Parse ``"e0+e5"``, ``"0.5*e1-0.5*e4"``, ``"(1+2j)*e3"`` or ``"2*e-1"`` style input.

    Terms are ``c*e<int>`` joined by ``+`` or ``-``; the coefficient defaults
    to 1 and may be any Python complex literal (parenthesized if it has a sign).
    A coefficient must be joined to a negative index with ``*``: ``2e-1`` reads
    as the number 0.2.
    """
    entries: dict = {}
    pos = _skip(text, 0)
    if pos == len(text):
        raise ParseError("empty vector expression", 0)
    first = True
    while pos < len(text):
        sign = 1
        if text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos = _skip(text, pos + 1)
        elif not first:
            raise ParseError(f"expected '+' or '-' but found {text[pos]!r}", pos)
        coef, pos = _coefficient(text, pos)
        m = _INDEX.match(text, pos)
        if not m:
            raise ParseError("expected a basis symbol like e5", pos)
        n = int(m.group(1))
        entries[n] = entries.get(n, 0j) + sign * coef
        pos = _skip(text, m.end())
        first = False
    return FreqVector(entries)


def load_vector(source: str) -> FreqVector:
    """Vector from a JSON file path, or else an inline expression."""
    path = Path(source)
    if source.endswith(".json") or path.is_file():
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise ParseError(f"cannot read vector file {source}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in {source}: {exc.msg}", exc.pos) from None
        try:
            return FreqVector.from_json_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed vector file {source}: {exc}") from None
    return parse_vector(source)
