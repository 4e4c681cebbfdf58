"""Independent reference computations used to derive and freeze test values.

None of these share code with the package: the transform is a brute-force
average over the 2**d points of the d-th IFS level, the operators are plain
integer maps, and Fejer means are summed term by term.
"""

from __future__ import annotations

import cmath
import math

import numpy as np


def _digit_phases(s: float, d: int) -> np.ndarray:
    """frac(2 s / 4**i) for i = 1..d, exact for integer s."""
    if float(s).is_integer():
        n = int(s)
        return np.array([((2 * n) % 4**i) / 4**i for i in range(1, d + 1)])
    return np.array([math.fmod(2 * s / 4**i, 1.0) for i in range(1, d + 1)])


def quadrature_mu_hat(s: float, d: int = 20, chunk: int = 1 << 18) -> complex:
    """Average of exp(-2 pi i s x) over the 2**d level-d points.

    The point with binary label b_1..b_d is x = sum_i b_i * 2 / 4**i, so
    s x = sum_i b_i * 2 s / 4**i and each term is reduced modulo 1 first.
    Differs from the transform by at most 2 pi |s| / (3 * 4**d).
    """
    f = _digit_phases(s, d)
    total = 0j
    count = 1 << d
    shifts = np.arange(d, dtype=np.int64)
    for start in range(0, count, chunk):
        labels = np.arange(start, min(start + chunk, count), dtype=np.int64)
        bits = (labels[:, None] >> shifts) & 1
        phase = np.fmod(bits @ f, 1.0)
        total += np.exp(-2j * np.pi * phase).sum()
    return total / count


def quadrature_bound(s: float, d: int) -> float:
    return 2 * math.pi * abs(s) / (3 * 4.0**d)


def in_gamma(n: int) -> bool:
    if n < 0:
        return False
    while n:
        if n % 4 > 1:
            return False
        n //= 4
    return True


def gamma_points(depth: int) -> list:
    return sorted(sum(b << (2 * i) for i, b in enumerate(bits))
                  for bits in np.ndindex(*(2,) * depth)) if depth else [0]


def chain(n: int, ops: str) -> int:
    """Apply index maps right to left: '0' S_0, '1' S_1, 'U' scale, 'M' shift."""
    for op in reversed(ops):
        n = {"0": 4 * n, "1": 4 * n + 1, "U": 5 * n, "M": n + 1}[op]
    return n


def fejer_direct(moments: dict, N: int, theta: float) -> float:
    """Term-by-term Fejer mean; ``moments`` maps k >= 0 to c_k."""
    total = 0j
    for k in range(-N, N + 1):
        c = moments[k] if k >= 0 else moments[-k].conjugate()
        total += (1 - abs(k) / (N + 1)) * c * cmath.exp(-1j * k * theta)
    return total.real


def closed_form_orbit_moments(mu_hat, v: dict, kmax: int) -> list:
    """Formal sums sum conj(a_g') a_g mu_hat(g' - 5**k g).

    These are <v, U^k v> only while every 5**j g stays in the spectrum, so
    they need not form a positive-definite sequence.
    """
    out = []
    for k in range(kmax + 1):
        out.append(sum(a2.conjugate() * a1 * mu_hat(g2 - 5**k * g1)
                       for g1, a1 in v.items() for g2, a2 in v.items()))
    return out
