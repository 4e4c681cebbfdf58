"""Fourier transform of the quarter-Cantor measure.

The measure is the invariant measure of the maps ``x -> x/4`` and
``x -> (x + 2)/4``.  With the convention

    mu_hat(s) = integral of exp(-2 pi i s t) d mu(t)

inner products of exponentials are ``<e_m, e_n> = mu_hat(m - n)``, and

    mu_hat(s) = prod_{k >= 1} (1 + exp(-i pi s 4**(1-k))) / 2
              = prod_k cos(theta_k) * exp(-i sum_k theta_k),
    theta_k = pi s 4**(1-k) / 2.

Integer arguments are first reduced exactly: ``mu_hat(4m) = mu_hat(m)``,
``mu_hat(odd) = 0``, ``mu_hat(-n) = conj(mu_hat(n))``, so the product is only
ever evaluated at positive ``n = 2 (mod 4)``, where no factor vanishes.
Phases of integer arguments are reduced modulo 2 in exact integer arithmetic,
so arguments far beyond 2**53 lose no accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ToleranceUnreachable
from .gamma import strip_fours

_EPS = 2.0**-53


@dataclass(frozen=True)
class TransformConfig:
    extra_terms: int = 30
    abs_tol: float = 1e-12
    max_factors: int = 512

    def __post_init__(self):
        if self.extra_terms < 1:
            raise ValueError("extra_terms must be >= 1")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_factors < 1:
            raise ValueError("max_factors must be >= 1")


DEFAULT_CONFIG = TransformConfig()


@dataclass(frozen=True)
class MuHatValue:
    value: complex
    error_bound: float

    def conjugate(self) -> "MuHatValue":
        return MuHatValue(self.value.conjugate(), self.error_bound)


_ONE = MuHatValue(1.0 + 0.0j, 0.0)
_ZERO = MuHatValue(0.0j, 0.0)


def _ceil_log4(x: float) -> int:
    """Smallest k >= 0 with 4**k >= x, for x >= 1."""
    k = 0
    while 4.0**k < x:
        k += 1
    return k


def factor_count(t: float, cfg: TransformConfig) -> int:
    return _ceil_log4(max(abs(t), 1.0)) + cfg.extra_terms


def tail_bound(t, factors: int) -> float:
    """Truncation error bound sum_{k > K} pi |t| 4**(1-k) plus rounding."""
    scale = abs(t) / 4 ** (factors - 1) if isinstance(t, int) else abs(t) * 4.0 ** (1 - factors)
    return math.pi * scale / 3.0 + 8 * factors * _EPS


def _integer_factor_count(n: int, cfg: TransformConfig) -> int:
    # smallest k with 4**k >= n, without leaving integer arithmetic
    return (max(n - 1, 0).bit_length() + 1) // 2 + cfg.extra_terms


def _certified_factors(t, cfg: TransformConfig) -> tuple:
    factors = _integer_factor_count(t, cfg) if isinstance(t, int) else factor_count(t, cfg)
    if factors > cfg.max_factors:
        raise ToleranceUnreachable(
            f"argument {t} needs {factors} factors, budget is {cfg.max_factors}"
        )
    bound = tail_bound(t, factors)
    if bound > cfg.abs_tol:
        raise ToleranceUnreachable(
            f"error bound {bound:.3e} with {factors} factors exceeds abs_tol {cfg.abs_tol:.3e}"
        )
    return factors, bound


@lru_cache(maxsize=1 << 16)
def _product_at_integer(n: int, cfg: TransformConfig) -> MuHatValue:
    # n > 0 and n = 2 (mod 4); keyed on the reduced argument only
    factors, bound = _certified_factors(n, cfg)
    magnitude = 1.0
    angles = []
    for k in range(1, factors + 1):
        shift = 2 * (k - 1)
        r = n % (2 << shift)  # n / 4**(k-1) mod 2, kept exact
        theta = math.pi * (r / (1 << shift)) / 2.0
        magnitude *= math.cos(theta)
        angles.append(theta)
    phase = math.fsum(angles)
    return MuHatValue(complex(magnitude * math.cos(phase), -magnitude * math.sin(phase)), bound)


def mu_hat_int(n: int, cfg: TransformConfig = DEFAULT_CONFIG) -> MuHatValue:
    """Transform at an integer with exact reductions applied first."""
    m = strip_fours(int(n))
    if m == 0:
        return _ONE
    if m % 2:
        return _ZERO
    if m < 0:
        return _product_at_integer(-m, cfg).conjugate()
    return _product_at_integer(m, cfg)


_ARRAY_LIMIT = 2**52


def mu_hat_array(n, cfg: TransformConfig = DEFAULT_CONFIG) -> tuple:
    """Vectorized :func:`mu_hat_int` for integer arrays with ``|n| < 2**52``.

    Returns ``(values, error_bounds)``.  The same exact reductions and the
    same per-factor phases are used; only the phase sum is an ordinary
    floating sum instead of ``fsum``, which the error bound already covers.
    """
    n = np.asarray(n, dtype=np.int64)
    if n.size and np.abs(n).max() >= _ARRAY_LIMIT:
        raise ValueError("mu_hat_array needs |n| < 2**52; use mu_hat_int for larger arguments")
    flat = n.ravel()
    sign = np.sign(flat)
    m = np.abs(flat)
    while True:
        div = (m != 0) & (m % 4 == 0)
        if not div.any():
            break
        m = np.where(div, m // 4, m)
    values = np.zeros(flat.shape, dtype=complex)
    bounds = np.zeros(flat.shape)
    values[m == 0] = 1.0
    live = np.nonzero(m % 4 == 2)[0]
    if live.size:
        mm = m[live]
        # smallest k with 4**k >= m, plus the extra terms
        count = np.full(mm.shape, cfg.extra_terms)
        power = np.ones(mm.shape, dtype=np.int64)
        while (grow := power < mm).any():
            count += grow
            power = np.where(grow, power * 4, power)
        top = int(count.max())
        if top > cfg.max_factors:
            raise ToleranceUnreachable(f"arguments need {top} factors, budget is {cfg.max_factors}")
        magnitude = np.ones(mm.shape)
        phase = np.zeros(mm.shape)
        for k in range(1, top + 1):
            shift = 2 * (k - 1)
            r = mm % (2 << shift) if shift < 60 else mm
            theta = np.pi * (r / float(1 << shift)) / 2.0
            active = count >= k
            magnitude = np.where(active, magnitude * np.cos(theta), magnitude)
            phase = np.where(active, phase + theta, phase)
        b = np.pi * mm * 4.0 ** (1 - count) / 3.0 + 8 * count * _EPS
        if b.max() > cfg.abs_tol:
            raise ToleranceUnreachable(f"error bound {b.max():.3e} exceeds abs_tol {cfg.abs_tol:.3e}")
        vals = magnitude * np.exp(-1j * phase)
        values[live] = np.where(sign[live] < 0, vals.conj(), vals)
        bounds[live] = b
    return values.reshape(n.shape), bounds.reshape(n.shape)


def mu_hat_real(t: float, cfg: TransformConfig = DEFAULT_CONFIG) -> MuHatValue:
    """Transform at a real argument via the truncated product."""
    t = float(t)
    if t == 0.0:
        return _ONE
    factors, bound = _certified_factors(t, cfg)
    magnitude = 1.0
    angles = []
    for k in range(1, factors + 1):
        theta = math.pi * t * 4.0 ** (1 - k) / 2.0
        magnitude *= math.cos(theta)
        angles.append(theta)
    phase = math.fsum(angles)
    return MuHatValue(complex(magnitude * math.cos(phase), -magnitude * math.sin(phase)), bound)


def is_zero_of_mu_hat(n: int) -> bool:
    """True iff ``n = 4**k * (odd)``; decided exactly."""
    m = strip_fours(int(n))
    return m != 0 and m % 2 == 1


def reduction_trace(n: int) -> list:
    """Human-readable list of the exact reductions applied to ``n``."""
    steps = []
    m = int(n)
    if m < 0:
        steps.append(f"{m} -> {-m} (conjugate symmetry)")
        m = -m
    while m != 0 and m % 4 == 0:
        steps.append(f"{m} -> {m // 4} (scaling by 4)")
        m //= 4
    if m == 0:
        steps.append("argument 0: total mass 1")
    elif m % 2:
        steps.append(f"{m} is odd: exact zero")
    else:
        steps.append(f"{m} = 2 (mod 4): truncated product")
    return steps


def clear_cache() -> None:
    _product_at_integer.cache_clear()
