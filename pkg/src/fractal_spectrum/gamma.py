"""Exact arithmetic on the spectrum {sum a_i 4^i : a_i in {0, 1}}.

Words are tuples of bits stored least-significant digit first, so
``(a_0, a_1, ..., a_N)`` encodes ``sum a_i 4**i``.  Trailing zeros are
meaningful: they fix the word length used when concatenating.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DepthTooLarge, NotInGamma

MAX_DEPTH = 24

GammaWord = tuple  # tuple[int, ...] of 0/1 bits


def _check_bits(bits: Iterable[int]) -> tuple:
    word = tuple(int(b) for b in bits)
    for b in word:
        if b not in (0, 1):
            raise ValueError(f"word entries must be 0 or 1, got {b}")
    return word


def word_to_index(word: Sequence[int]) -> int:
    """Value ``sum word[i] * 4**i`` of a bit word."""
    value = 0
    for bit in reversed(_check_bits(word)):
        value = 4 * value + bit
    return value


def index_to_word(n: int, min_len: int = 0) -> tuple:
    """Inverse of :func:`word_to_index`, zero-padded to at least ``min_len``.

    Raises NotInGamma when ``n`` is negative or has a base-4 digit 2 or 3.
    """
    if n < 0:
        raise NotInGamma(f"{n} is negative")
    bits = []
    m = n
    while m:
        m, d = divmod(m, 4)
        if d > 1:
            raise NotInGamma(f"{n} has base-4 digit {d}")
        bits.append(d)
    bits.extend([0] * (min_len - len(bits)))
    return tuple(bits)


def is_in_gamma(n: int) -> bool:
    if n < 0:
        return False
    while n:
        n, d = divmod(n, 4)
        if d > 1:
            return False
    return True


def word_length(n: int) -> int:
    """Length of the minimal word of ``n`` (0 for ``n == 0``)."""
    return len(index_to_word(n))


def concat(g: Sequence[int], x: Sequence[int]) -> tuple:
    return _check_bits(g) + _check_bits(x)


def enumerate_gamma(depth: int, max_depth: int = MAX_DEPTH) -> list:
    """All ``2**depth`` spectrum points with words of length <= depth, sorted."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > max_depth:
        raise DepthTooLarge(f"depth {depth} exceeds limit {max_depth}")
    points = [0]
    for i in range(depth):
        step = 4**i
        points = points + [p + step for p in points]
    # each new block lies above the previous one, so the list is sorted
    return points


def residue_mod4(n: int) -> int:
    """Residue of ``n`` in {0, 1, 2, 3} (Python's floor-mod convention)."""
    return n % 4


def strip_fours(n: int) -> int:
    """Divide out every factor of 4; ``0`` maps to ``0``."""
    if n == 0:
        return 0
    while n % 4 == 0:
        n //= 4
    return n


def has_prefix(n: int, prefix: Sequence[int]) -> bool:
    """True if the zero-padded word of spectrum point ``n`` starts with ``prefix``."""
    p = len(prefix)
    return n % (4**p) == word_to_index(prefix)


def format_word(word: Sequence[int]) -> str:
    return "".join(str(b) for b in word)


def parse_word(text: str) -> tuple:
    text = text.strip()
    if any(ch not in "01" for ch in text):
        raise ValueError(f"word must consist of 0/1 characters: {text!r}")
    return tuple(int(ch) for ch in text)
