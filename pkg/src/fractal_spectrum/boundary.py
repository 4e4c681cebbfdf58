"""Measures on infinite binary words induced by spectrum coefficients.

For a spectrum-supported ``v = sum c(gamma) e_gamma`` the mass of the
cylinder of all words starting with ``prefix`` is the sum of ``|c(gamma)|^2``
over the gamma whose zero-padded word extends ``prefix``.  A point gamma
contributes to the cylinders along the infinite word ``gamma 000...``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator

from .cuntz import s0_adjoint, s1_adjoint
from .gamma import format_word, word_to_index
from .report import Report
from .vectors import FreqVector, gamma_sq_norm, require_gamma


def _sq(a: complex) -> tuple:
    return (a.real * a.real, a.imag * a.imag)


def cylinder_mass(v: FreqVector, prefix) -> float:
    require_gamma(v)
    prefix = tuple(prefix)
    modulus = 4 ** len(prefix)
    target = word_to_index(prefix)
    return math.fsum(t for n, a in v.items() if n % modulus == target for t in _sq(a))


@dataclass
class CylinderReport:
    masses: dict
    total: float
    depth: int
    additivity_error: float

    def ok(self, tol: float = 1e-12) -> bool:
        return self.additivity_error <= tol * max(self.total, 1.0)

    def rows(self) -> Iterator[tuple]:
        for word, mass in self.masses.items():
            yield format_word(word), mass

    def to_json_dict(self) -> dict:
        return {"depth": self.depth, "total": self.total,
                "additivity_error": self.additivity_error,
                "masses": {format_word(w): m for w, m in self.masses.items()}}


def cylinder_tree(v: FreqVector, depth: int) -> CylinderReport:
    """Masses of every cylinder with prefix length <= depth."""
    require_gamma(v)
    buckets: dict = {}
    for length in range(depth + 1):
        modulus = 4**length
        for n, a in v.items():
            buckets.setdefault((length, n % modulus), []).extend(_sq(a))
    masses = {}
    for length in range(depth + 1):
        for word in product((0, 1), repeat=length):
            terms = buckets.get((length, word_to_index(word)), [])
            masses[word] = math.fsum(terms)
    worst = 0.0
    for word, mass in masses.items():
        if len(word) < depth:
            worst = max(worst, abs(mass - masses[word + (0,)] - masses[word + (1,)]))
    total = masses[()]
    worst = max(worst, abs(total - gamma_sq_norm(v)))
    return CylinderReport(masses, total, depth, worst)


def zeros_path() -> Iterator[int]:
    while True:
        yield 0


def atom_scan(v: FreqVector, path: Iterable[int], depth: int) -> list:
    """Masses of ``A(w(n))`` for ``n = 0..depth``, where ``w(n) = (w_0, ..., w_n)``."""
    require_gamma(v)
    bits = []
    it = iter(path)
    masses = []
    for _ in range(depth + 1):
        bits.append(next(it))
        masses.append(cylinder_mass(v, bits))
    return masses


def level_weight(v: FreqVector, k: int) -> float:
    """``||S_1^* S_0^{*k} v||^2`` by exact index stripping."""
    require_gamma(v)
    w = v
    for _ in range(k):
        w = s0_adjoint(w)
    return gamma_sq_norm(s1_adjoint(w))


def weight_identity_check(v: FreqVector, levels: int) -> Report:
    """``||S_1^* S_0^{*k} v||^2`` equals the mass of the cylinder ``0^k 1`` exactly."""
    pairs = []
    for k in range(levels + 1):
        prefix = (0,) * k + (1,)
        pairs.append((level_weight(v, k), cylinder_mass(v, prefix)))
    mismatches = [k for k, (a, b) in enumerate(pairs) if a != b]
    return Report("weight-identity", not mismatches,
                  {"levels": levels, "weights": [p[0] for p in pairs],
                   "cylinder_masses": [p[1] for p in pairs], "mismatches": mismatches})


def convexity_gap(v: FreqVector, levels: int) -> float:
    """``||v||^2 - |<e_0, v>|^2 - sum_{k <= levels} mass(0^k 1)``.

    Both sides are summed from the same squared amplitudes, so the gap is
    exactly zero once ``levels`` reaches the longest word of ``v``.
    """
    require_gamma(v)
    prefixes = [(4 ** (k + 1), 4**k) for k in range(levels + 1)]
    kept = [t for n, a in v.items()
            if n == 0 or any(n % mod == target for mod, target in prefixes) for t in _sq(a)]
    return gamma_sq_norm(v) - math.fsum(kept)
