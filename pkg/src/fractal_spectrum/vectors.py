"""Finite exponential combinations in L^2 of the quarter-Cantor measure.

A :class:`FreqVector` is a finite map ``frequency -> amplitude`` standing for
``sum a_n e_n`` with ``e_n(t) = exp(2 pi i n t)``.  Frequencies are Python
ints, so arbitrarily large indices (``5**k * gamma``) are exact.

Inner products are conjugate-linear in the first slot and use the Gram
entries ``<e_m, e_n> = mu_hat(m - n)``.  On vectors supported in the
spectrum the Gram matrix is the identity and every norm is exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import DepthTooLarge, SupportNotInGamma, ZeroVector
from .gamma import MAX_DEPTH, enumerate_gamma, is_in_gamma, word_length
from .transform import DEFAULT_CONFIG, TransformConfig, mu_hat_int


class FreqVector:
    """Finite linear combination of exponentials.

    ``truncated`` marks results of a finite expansion of something with
    infinite support; ``deficit`` is the Parseval mass that expansion missed.
    """

    __slots__ = ("_entries", "truncated", "deficit")

    def __init__(self, entries: Mapping[int, complex] | Iterable | None = None, *,
                 truncated: bool = False, deficit: float = 0.0):
        clean = {}
        if entries is not None:
            items = entries.items() if isinstance(entries, Mapping) else entries
            for n, a in items:
                a = complex(a)
                if a != 0:
                    clean[int(n)] = clean.get(int(n), 0j) + a
        self._entries = {n: a for n, a in sorted(clean.items()) if a != 0}
        self.truncated = truncated
        self.deficit = float(deficit)

    @classmethod
    def basis(cls, n: int, amplitude: complex = 1.0) -> "FreqVector":
        return cls({n: amplitude})

    @classmethod
    def zero(cls) -> "FreqVector":
        return cls()

    @property
    def entries(self) -> dict:
        return dict(self._entries)

    def support(self) -> list:
        return list(self._entries)

    def amplitudes(self) -> np.ndarray:
        return np.array(list(self._entries.values()), dtype=complex)

    def items(self):
        return self._entries.items()

    def __getitem__(self, n: int) -> complex:
        return self._entries.get(n, 0j)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries.items())

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreqVector):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(tuple(self._entries.items()))

    def __repr__(self) -> str:
        if not self._entries:
            return "FreqVector(0)"
        terms = " + ".join(f"({a:.6g})*e{n}" for n, a in self._entries.items())
        flag = ", truncated" if self.truncated else ""
        return f"FreqVector({terms}{flag})"

    def _combine(self, other: "FreqVector", sign: int) -> "FreqVector":
        out = dict(self._entries)
        for n, a in other._entries.items():
            out[n] = out.get(n, 0j) + sign * a
        return FreqVector(out, truncated=self.truncated or other.truncated,
                          deficit=self.deficit + other.deficit)

    def __add__(self, other):
        if not isinstance(other, FreqVector):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other):
        if not isinstance(other, FreqVector):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, c):
        c = complex(c)
        return FreqVector({n: c * a for n, a in self._entries.items()},
                          truncated=self.truncated, deficit=abs(c) ** 2 * self.deficit)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1.0 / complex(c))

    def map_indices(self, fn: Callable[[int], int]) -> "FreqVector":
        """Push every frequency through ``fn``; amplitudes of collisions add."""
        out: dict = {}
        for n, a in self._entries.items():
            m = fn(n)
            out[m] = out.get(m, 0j) + a
        return FreqVector(out, truncated=self.truncated, deficit=self.deficit)

    def restrict(self, keep: Callable[[int], bool]) -> "FreqVector":
        return FreqVector({n: a for n, a in self._entries.items() if keep(n)},
                          truncated=self.truncated)

    def is_gamma_supported(self) -> bool:
        return all(is_in_gamma(n) for n in self._entries)

    def max_word_length(self) -> int:
        """Longest minimal word among the support (vector must be in the spectrum)."""
        require_gamma(self)
        return max((word_length(n) for n in self._entries), default=0)

    def to_json_dict(self) -> dict:
        return {"entries": [{"index": str(n), "re": a.real, "im": a.imag}
                            for n, a in self._entries.items()]}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "FreqVector":
        return cls((int(e["index"]), complex(e.get("re", 0.0), e.get("im", 0.0)))
                   for e in data["entries"])

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())


def require_gamma(v: FreqVector) -> None:
    bad = [n for n in v.support() if not is_in_gamma(n)]
    if bad:
        raise SupportNotInGamma(f"frequencies outside the spectrum: {bad[:5]}")


def gamma_sq_norm(v: FreqVector) -> float:
    """Exact (correctly rounded) squared norm of a spectrum-supported vector.

    Uses ``fsum`` so the result does not depend on summation order; any two
    routes to the same multiset of amplitudes give bit-identical masses.
    """
    return math.fsum(t for a in v.amplitudes() for t in (a.real * a.real, a.imag * a.imag))


def gamma_norm(v: FreqVector) -> float:
    return math.sqrt(gamma_sq_norm(v))


@lru_cache(maxsize=512)
def _gram_cached(rows: tuple, cols: tuple, cfg: TransformConfig) -> tuple:
    values = np.empty((len(rows), len(cols)), dtype=complex)
    bounds = np.empty((len(rows), len(cols)))
    for i, m in enumerate(rows):
        for j, n in enumerate(cols):
            mh = mu_hat_int(m - n, cfg)
            values[i, j] = mh.value
            bounds[i, j] = mh.error_bound
    values.setflags(write=False)
    bounds.setflags(write=False)
    return values, bounds


def gram_block(rows, cols, cfg: TransformConfig = DEFAULT_CONFIG) -> tuple:
    """Matrix of ``<e_m, e_n> = mu_hat(m - n)`` and its entrywise error bounds."""
    return _gram_cached(tuple(int(m) for m in rows), tuple(int(n) for n in cols), cfg)


def inner_with_bound(f: FreqVector, g: FreqVector, cfg: TransformConfig = DEFAULT_CONFIG) -> tuple:
    if not f or not g:
        return 0j, 0.0
    G, B = gram_block(f.support(), g.support(), cfg)
    a = f.amplitudes()
    b = g.amplitudes()
    value = complex(a.conj() @ G @ b)
    bound = float(np.abs(a) @ B @ np.abs(b))
    return value, bound


def inner(f: FreqVector, g: FreqVector, cfg: TransformConfig = DEFAULT_CONFIG) -> complex:
    """``<f, g>``, conjugate-linear in ``f``."""
    return inner_with_bound(f, g, cfg)[0]


def norm(f: FreqVector, cfg: TransformConfig = DEFAULT_CONFIG) -> float:
    if f.is_gamma_supported():
        return gamma_norm(f)
    return math.sqrt(max(inner(f, f, cfg).real, 0.0))


def normalize(f: FreqVector, cfg: TransformConfig = DEFAULT_CONFIG) -> FreqVector:
    n = norm(f, cfg)
    if n == 0:
        raise ZeroVector("cannot normalize the zero vector")
    return f / n


@dataclass
class OnbCoeffs:
    depth: int
    coeffs: dict
    parseval_deficit: float
    error_bound: float = 0.0
    scaled: bool = False

    def as_vector(self) -> FreqVector:
        """Coefficients as a spectrum-supported vector (indexed by gamma)."""
        return FreqVector(self.coeffs, truncated=self.parseval_deficit != 0.0,
                          deficit=self.parseval_deficit)


def _check_depth(depth: int) -> None:
    if depth > MAX_DEPTH:
        raise DepthTooLarge(f"depth {depth} exceeds limit {MAX_DEPTH}")


def _expand(f: FreqVector, basis_points: list, labels: list, depth: int,
            cfg: TransformConfig, scaled: bool) -> OnbCoeffs:
    support = set(f.support())
    if support <= set(basis_points):
        lookup = dict(zip(basis_points, labels))
        coeffs = {lookup[n]: a for n, a in f.items()}
        return OnbCoeffs(depth, coeffs, 0.0, 0.0, scaled)
    G, B = gram_block(basis_points, f.support(), cfg)
    a = f.amplitudes()
    values = G @ a
    bounds = B @ np.abs(a)
    coeffs = {g: complex(c) for g, c in zip(labels, values) if c != 0}
    captured = math.fsum(abs(c) ** 2 for c in coeffs.values())
    deficit = norm(f, cfg) ** 2 - captured
    return OnbCoeffs(depth, coeffs, deficit, float(bounds.max(initial=0.0)), scaled)


def onb_coeffs(f: FreqVector, depth: int, cfg: TransformConfig = DEFAULT_CONFIG) -> OnbCoeffs:
    """Coefficients ``<e_gamma, f>`` for gamma of word length <= depth."""
    _check_depth(depth)
    points = enumerate_gamma(depth)
    return _expand(f, points, points, depth, cfg, scaled=False)


def onb_coeffs_scaled(f: FreqVector, depth: int, cfg: TransformConfig = DEFAULT_CONFIG) -> OnbCoeffs:
    """Coefficients against the second basis ``{e_{5 gamma}}``, keyed by gamma."""
    _check_depth(depth)
    points = enumerate_gamma(depth)
    return _expand(f, [5 * g for g in points], points, depth, cfg, scaled=True)
