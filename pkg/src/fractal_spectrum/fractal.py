"""The scaling unitary ``U e_gamma = e_{5 gamma}`` and the multiplier ``M e_n = e_{n+1}``.

``U`` is only defined through the spectrum basis, so the exact index map is
applied only to spectrum-supported vectors.  Anything else goes through an
explicit finite basis expansion that records its Parseval deficit.

In particular ``U^2 e_1 = e_25`` but ``U^3 e_1 != e_125``: 25 is not a
spectrum point, so the third step needs the expansion of ``e_25``.  Powers
of ``U`` and ``MU`` are therefore computed with the compressions

    A_L[xi, g] = <e_xi, U e_g>  = mu_hat(xi - 5 g)
    B_L[xi, g] = <e_xi, MU e_g> = mu_hat(xi - 5 g - 1),     xi, g in Gamma_L.

These are contractions, so ``<v, A_L^k v>`` is a genuine moment sequence
(that of a unitary dilation) and converges to ``<v, U^k v>`` as L grows.
Because ``mu_hat(4m) = mu_hat(m)`` and ``mu_hat(odd) = 0``, ``A_L`` splits
exactly into ``S_0 A_{L-1} S_0^*`` plus ``S_1 B_{L-1} S_1^*``, which is the
finite-depth form of the operator-fractal structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cuntz import s0_apply, s1_adjoint, s1_apply
from .errors import DepthMismatch, DepthTooLarge
from .gamma import enumerate_gamma, is_in_gamma
from .report import Report
from .transform import DEFAULT_CONFIG, TransformConfig, mu_hat_array
from .vectors import FreqVector, gamma_sq_norm, onb_coeffs, onb_coeffs_scaled, require_gamma


def u_apply(v: FreqVector) -> FreqVector:
    require_gamma(v)
    return v.map_indices(lambda g: 5 * g)


def u_apply_general(f: FreqVector, depth: int, cfg: TransformConfig = DEFAULT_CONFIG) -> FreqVector:
    """Expand ``f`` in the depth-L spectrum basis, then scale indices by 5."""
    c = onb_coeffs(f, depth, cfg)
    out = FreqVector({5 * g: a for g, a in c.coeffs.items()})
    out.truncated = c.parseval_deficit != 0.0
    out.deficit = c.parseval_deficit
    return out


def u_adjoint(f: FreqVector, depth: int, cfg: TransformConfig = DEFAULT_CONFIG) -> FreqVector:
    """``U^* f`` via coefficients against ``{e_{5 gamma}}``; exact on 5*Gamma."""
    if all(n % 5 == 0 and is_in_gamma(n // 5) for n in f.support()):
        return f.map_indices(lambda n: n // 5)
    c = onb_coeffs_scaled(f, depth, cfg)
    out = FreqVector(c.coeffs)
    out.truncated = True
    out.deficit = c.parseval_deficit
    return out


def m_apply(f: FreqVector) -> FreqVector:
    return f.map_indices(lambda n: n + 1)


def mu_power_index(n: int, k: int) -> int:
    """k-fold iterate of ``n -> 5n + 1``: ``5**k n + (5**k - 1)/4``."""
    p = 5**k
    return p * n + (p - 1) // 4


def mu_pow_apply(v: FreqVector, k: int) -> FreqVector:
    """Formal k-fold iterate of the index map ``n -> 5n + 1`` on a spectrum-supported vector.

    This is ``(MU)^k v`` only while every intermediate index stays in the
    spectrum (always for ``k <= 1``); use :func:`mu_power` for the operator
    power itself.
    """
    require_gamma(v)
    if k < 0:
        raise ValueError("k must be nonnegative")
    return v.map_indices(lambda g: mu_power_index(g, k))


def orbit_in_gamma(g: int, k: int, shift: int = 0) -> bool:
    """True if ``n -> 5n + shift`` keeps ``g`` in the spectrum for k - 1 steps.

    Exactly then ``X^k e_g = e_{n_k}`` holds with ``X = U`` (shift 0) or
    ``X = MU`` (shift 1).
    """
    n = g
    for _ in range(k):
        if not is_in_gamma(n):
            return False
        n = 5 * n + shift
    return True


COMPRESSION_MAX_DEPTH = 11


@lru_cache(maxsize=64)
def _compression(row_depth: int, col_depth: int, shift: int, cfg: TransformConfig) -> tuple:
    for d in (row_depth, col_depth):
        if d > COMPRESSION_MAX_DEPTH:
            raise DepthTooLarge(f"compressed operators are limited to depth {COMPRESSION_MAX_DEPTH}")
    rows = np.array(enumerate_gamma(row_depth), dtype=np.int64)
    cols = np.array(enumerate_gamma(col_depth), dtype=np.int64)
    values, bounds = mu_hat_array(rows[:, None] - 5 * cols[None, :] - shift, cfg)
    values.setflags(write=False)
    return values, float(bounds.max(initial=0.0))


def u_compression(depth: int, cfg: TransformConfig = DEFAULT_CONFIG) -> np.ndarray:
    """``A_L``, the compression of U to the span of ``Gamma_L`` (read-only)."""
    return _compression(depth, depth, 0, cfg)[0]


def mu_compression(depth: int, cfg: TransformConfig = DEFAULT_CONFIG) -> np.ndarray:
    """``B_L``, the compression of MU to the span of ``Gamma_L`` (read-only)."""
    return _compression(depth, depth, 1, cfg)[0]


def compression_entry_bound(depth: int, shift: int, cfg: TransformConfig = DEFAULT_CONFIG) -> float:
    return _compression(depth, depth, shift, cfg)[1]


def to_dense(v: FreqVector, depth: int) -> np.ndarray:
    """Coefficient array of a spectrum-supported vector on ``Gamma_depth``."""
    require_gamma(v)
    if v.max_word_length() > depth:
        raise DepthMismatch(f"vector needs depth {v.max_word_length()}, got {depth}")
    points = enumerate_gamma(depth)
    index = {g: i for i, g in enumerate(points)}
    a = np.zeros(len(points), dtype=complex)
    for g, c in v.items():
        a[index[g]] = c
    return a


def from_dense(a: np.ndarray, depth: int) -> FreqVector:
    return FreqVector(zip(enumerate_gamma(depth), a))


def _power(v: FreqVector, k: int, depth: int, shift: int, cfg: TransformConfig) -> FreqVector:
    A = _compression(depth, depth, shift, cfg)[0]
    a = to_dense(v, depth)
    op = A if k >= 0 else A.conj().T
    for _ in range(abs(k)):
        a = op @ a
    out = from_dense(a, depth)
    out.deficit = max(gamma_sq_norm(v) - gamma_sq_norm(out), 0.0)
    out.truncated = out.deficit > 0.0
    return out


def u_power(v: FreqVector, k: int, depth: int, cfg: TransformConfig = DEFAULT_CONFIG) -> FreqVector:
    """``U^k v`` compressed to depth L (``k < 0`` uses the adjoint); deficit is the lost mass."""
    return _power(v, k, depth, 0, cfg)


def mu_power(v: FreqVector, k: int, depth: int, cfg: TransformConfig = DEFAULT_CONFIG) -> FreqVector:
    """``(MU)^k v`` compressed to depth L (``k < 0`` uses the adjoint)."""
    return _power(v, k, depth, 1, cfg)


def relation_checks(depth: int) -> Report:
    """``S_0 U = U S_0``, ``S_1^* U S_1 = MU`` and ``[U, S_1 S_1^*] = 0`` on basis vectors."""
    fails = {"S0U=US0": [], "S1*US1=MU": [], "U commutes with S1S1*": []}
    points = enumerate_gamma(depth)
    for g in points:
        e = FreqVector.basis(g)
        if s0_apply(u_apply(e)) != u_apply(s0_apply(e)):
            fails["S0U=US0"].append(g)
        if s1_adjoint(u_apply(s1_apply(e))) != m_apply(u_apply(e)):
            fails["S1*US1=MU"].append(g)
        # U e_g = e_{5g} has residue g mod 4, so S1^* acts exactly here
        if u_apply(s1_apply(s1_adjoint(e))) != s1_apply(s1_adjoint(u_apply(e))):
            fails["U commutes with S1S1*"].append(g)
    return Report("operator-relations", not any(fails.values()),
                  {"depth": depth, "checked": len(points),
                   "relations": {k: not v for k, v in fails.items()},
                   "failures": {k: v[:10] for k, v in fails.items() if v}})


def block_structure_check(depth: int, levels: int) -> Report:
    """``U e_0 = e_0`` and ``U S_0^k S_1 e_g = S_0^k S_1 MU e_g`` for k <= levels."""
    failures = []
    e0 = FreqVector.basis(0)
    fixed = u_apply(e0) == e0
    points = enumerate_gamma(depth)
    for k in range(levels + 1):
        for g in points:
            e = FreqVector.basis(g)
            lhs = s1_apply(e)
            rhs = s1_apply(m_apply(u_apply(e)))
            for _ in range(k):
                lhs = s0_apply(lhs)
                rhs = s0_apply(rhs)
            if u_apply(lhs) != rhs:
                failures.append((k, g))
    return Report("block-structure", fixed and not failures,
                  {"depth": depth, "levels": levels, "u_e0_fixed": fixed,
                   "diagonal_e0": 1.0 if fixed else 0.0,
                   "checked": (levels + 1) * len(points), "failures": failures[:10]})


@dataclass
class UMatrix:
    """Entries ``A[xi, gamma] = <e_xi, U e_gamma> = mu_hat(xi - 5 gamma)``.

    Rows run over the spectrum points of ``depth``; columns over those of
    ``column_depth`` (equal to ``depth`` for the square truncation).
    ``unitarity_deficit`` is the largest column 2-norm of ``I - A^* A``.
    """

    depth: int
    column_depth: int
    matrix: np.ndarray
    error_bound: float
    unitarity_deficit: float
    column_norms: np.ndarray

    @property
    def rows(self) -> list:
        return enumerate_gamma(self.depth)

    @property
    def cols(self) -> list:
        return enumerate_gamma(self.column_depth)


def u_matrix(depth: int, cfg: TransformConfig = DEFAULT_CONFIG, column_depth: int | None = None) -> UMatrix:
    if column_depth is None:
        column_depth = depth
    A, bound = _compression(depth, column_depth, 0, cfg)
    gram = A.conj().T @ A
    deficit = np.linalg.norm(np.eye(A.shape[1]) - gram, axis=0)
    return UMatrix(depth, column_depth, np.array(A), bound,
                   float(deficit.max(initial=0.0)), np.linalg.norm(A, axis=0))
