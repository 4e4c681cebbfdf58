"""The two Cuntz isometries ``S_0 e_n = e_{4n}``, ``S_1 e_n = e_{4n+1}``.

Forward maps are exact index maps on every integer frequency.  Adjoints are
exact on residues 0 and 1 (mod 4); ``S_0^*`` on residue 2 and ``S_1^*`` on
residue 3 have infinite expansions and are truncated to the spectrum
points of a given depth, with the result flagged ``truncated``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DepthMismatch
from .gamma import enumerate_gamma, word_to_index
from .report import Report
from .transform import DEFAULT_CONFIG, TransformConfig, mu_hat_int
from .vectors import FreqVector, gamma_norm, require_gamma

DEFAULT_DEPTH = 8


def s0_apply(f: FreqVector) -> FreqVector:
    return f.map_indices(lambda n: 4 * n)


def s1_apply(f: FreqVector) -> FreqVector:
    return f.map_indices(lambda n: 4 * n + 1)


def _truncated_expansion(shift: int, n: int, depth: int, cfg: TransformConfig) -> dict:
    # <e_gamma, S_i^* e_n> = <e_{4 gamma + i}, e_n> = mu_hat(4 gamma + i - n)
    out = {}
    for g in enumerate_gamma(depth):
        value = mu_hat_int(4 * g + shift - n, cfg).value
        if value != 0:
            out[g] = value
    return out


def _adjoint(f: FreqVector, digit: int, depth: int, cfg: TransformConfig) -> FreqVector:
    out: dict = {}
    truncated = f.truncated
    for n, a in f.items():
        r = (n - digit) % 4
        if r == 0:
            m = (n - digit) // 4
            out[m] = out.get(m, 0j) + a
        elif r == 2:
            # S_0^* on n = 2 and S_1^* on n = 3 (mod 4) have no finite formula
            truncated = True
            for g, c in _truncated_expansion(digit, n, depth, cfg).items():
                out[g] = out.get(g, 0j) + a * c
        # remaining residues are annihilated exactly
    return FreqVector(out, truncated=truncated)


def s0_adjoint(f: FreqVector, depth: int = DEFAULT_DEPTH, cfg: TransformConfig = DEFAULT_CONFIG) -> FreqVector:
    return _adjoint(f, 0, depth, cfg)


def s1_adjoint(f: FreqVector, depth: int = DEFAULT_DEPTH, cfg: TransformConfig = DEFAULT_CONFIG) -> FreqVector:
    return _adjoint(f, 1, depth, cfg)


def word_apply(eta, f: FreqVector) -> FreqVector:
    """``S_eta f`` with ``S_eta = S_{c_0} ... S_{c_M}``, so ``S_eta e_xi = e_{eta xi}``."""
    out = f
    for bit in reversed(tuple(eta)):
        out = s1_apply(out) if bit else s0_apply(out)
    return out


def word_adjoint(eta, f: FreqVector, depth: int = DEFAULT_DEPTH,
                 cfg: TransformConfig = DEFAULT_CONFIG) -> FreqVector:
    """``S_eta^* f``; on ``e_{gamma xi}`` this erases a matching prefix."""
    out = f
    for bit in tuple(eta):
        out = s1_adjoint(out, depth, cfg) if bit else s0_adjoint(out, depth, cfg)
    return out


def cuntz_identity_check(depth: int) -> Report:
    """Cuntz relations on every basis vector of the given depth, exactly."""
    points = enumerate_gamma(depth)
    fails = {k: [] for k in ("S0*S0=I", "S1*S1=I", "S0*S1=0", "S1*S0=0", "S0S0*+S1S1*=I")}
    for g in points:
        e = FreqVector.basis(g)
        if s0_adjoint(s0_apply(e)) != e:
            fails["S0*S0=I"].append(g)
        if s1_adjoint(s1_apply(e)) != e:
            fails["S1*S1=I"].append(g)
        if s0_adjoint(s1_apply(e)):
            fails["S0*S1=0"].append(g)
        if s1_adjoint(s0_apply(e)):
            fails["S1*S0=0"].append(g)
        if s0_apply(s0_adjoint(e)) + s1_apply(s1_adjoint(e)) != e:
            fails["S0S0*+S1S1*=I"].append(g)
    return Report(
        "cuntz-relations",
        not any(fails.values()),
        {"depth": depth, "checked": len(points),
         "relations": {k: not v for k, v in fails.items()},
         "failures": {k: v[:10] for k, v in fails.items() if v}},
    )


def wold_sequence(v: FreqVector, n_max: int) -> list:
    """Norms ``||S_0^{*n} v||`` for ``n = 0..n_max`` by exact index stripping."""
    require_gamma(v)
    norms = []
    current = v
    for _ in range(n_max + 1):
        norms.append(gamma_norm(current))
        current = s0_adjoint(current)
    return norms


def wold_limit(v: FreqVector) -> float:
    """``|<e_0, v>|``, the norm of the projection onto the unitary part."""
    require_gamma(v)
    return gamma_norm(FreqVector({0: v[0]}))


def wold_report(v: FreqVector, n_max: int) -> Report:
    norms = wold_sequence(v, n_max)
    limit = wold_limit(v)
    settle = v.max_word_length()
    nonincreasing = all(b <= a for a, b in zip(norms, norms[1:]))
    settled = all(x == limit for x in norms[settle:])
    return Report("wold", nonincreasing and settled,
                  {"norms": norms, "limit": limit, "settles_at": settle,
                   "nonincreasing": nonincreasing})


def p_k_project(v: FreqVector, k: int) -> FreqVector:
    """Projection onto the range of ``S_0^k S_1``: words starting ``0...01``."""
    require_gamma(v)
    modulus = 4 ** (k + 1)
    target = 4**k
    return v.restrict(lambda n: n % modulus == target)


def p_e0_project(v: FreqVector) -> FreqVector:
    require_gamma(v)
    return v.restrict(lambda n: n == 0)


@dataclass(frozen=True)
class TruncOperator:
    """Matrix of an operator compressed to ``span{e_gamma : gamma in Gamma_L}``.

    Rows and columns are ordered like :func:`enumerate_gamma`.
    """

    depth: int
    matrix: np.ndarray
    compressed: bool = False

    def __post_init__(self):
        n = 2**self.depth
        if self.matrix.shape != (n, n):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match depth {self.depth}")

    @property
    def points(self) -> list:
        return enumerate_gamma(self.depth)

    def __matmul__(self, other: "TruncOperator") -> "TruncOperator":
        if other.depth != self.depth:
            raise DepthMismatch(f"depths {self.depth} and {other.depth}")
        return TruncOperator(self.depth, self.matrix @ other.matrix,
                             self.compressed or other.compressed)

    def __add__(self, other: "TruncOperator") -> "TruncOperator":
        if other.depth != self.depth:
            raise DepthMismatch(f"depths {self.depth} and {other.depth}")
        return TruncOperator(self.depth, self.matrix + other.matrix,
                             self.compressed or other.compressed)

    def adjoint(self) -> "TruncOperator":
        return TruncOperator(self.depth, self.matrix.conj().T, self.compressed)

    @classmethod
    def identity(cls, depth: int) -> "TruncOperator":
        return cls(depth, np.eye(2**depth, dtype=complex))


def shift_operator(depth: int, digit: int) -> TruncOperator:
    """``S_digit`` compressed to depth ``L`` (drops images that leave the span)."""
    points = enumerate_gamma(depth)
    index = {g: i for i, g in enumerate(points)}
    mat = np.zeros((len(points), len(points)), dtype=complex)
    for j, g in enumerate(points):
        i = index.get(4 * g + digit)
        if i is not None:
            mat[i, j] = 1.0
    return TruncOperator(depth, mat, compressed=True)


def _block_positions(depth: int) -> tuple:
    """Positions of ``4 gamma`` and ``4 gamma + 1`` inside ``Gamma_{depth+1}``."""
    big = {g: i for i, g in enumerate(enumerate_gamma(depth + 1))}
    small = enumerate_gamma(depth)
    return ([big[4 * g] for g in small], [big[4 * g + 1] for g in small])


def alpha2(X: TruncOperator) -> list:
    """Blocks ``S_i^* X S_j`` of a depth-(L+1) operator, each of depth L."""
    if X.depth < 1:
        raise DepthMismatch("alpha2 needs an operator of depth >= 1")
    pos = _block_positions(X.depth - 1)
    return [[TruncOperator(X.depth - 1, X.matrix[np.ix_(pos[i], pos[j])], X.compressed)
             for j in (0, 1)] for i in (0, 1)]


def beta2(blocks) -> TruncOperator:
    """``sum_{i,j} S_i M_ij S_j^*`` for depth-L blocks, giving a depth-(L+1) operator."""
    depths = {b.depth for row in blocks for b in row}
    if len(depths) != 1 or len(blocks) != 2 or any(len(row) != 2 for row in blocks):
        raise DepthMismatch(f"need a 2x2 block matrix of equal depths, got depths {sorted(depths)}")
    depth = depths.pop()
    pos = _block_positions(depth)
    n = 2 ** (depth + 1)
    mat = np.zeros((n, n), dtype=complex)
    for i in (0, 1):
        for j in (0, 1):
            mat[np.ix_(pos[i], pos[j])] = blocks[i][j].matrix
    return TruncOperator(depth + 1, mat, any(b.compressed for row in blocks for b in row))


def id1_residual(X: TruncOperator) -> float:
    """Max entry of ``X - (S_0 X S_0^* + S_1 S_1^* X S_1 S_1^*)`` at X's depth.

    Zero (up to compression effects) whenever X commutes with S_0 and S_0^*.
    """
    s0 = shift_operator(X.depth, 0)
    s1 = shift_operator(X.depth, 1)
    q1 = s1 @ s1.adjoint()
    rhs = s0 @ X @ s0.adjoint() + q1 @ X @ q1
    return float(np.abs(X.matrix - rhs.matrix).max())


def operator_from_index_map(depth: int, fn) -> TruncOperator:
    """Compression of an exact index map (e.g. ``S_0``, ``U``) to depth L."""
    points = enumerate_gamma(depth)
    index = {g: i for i, g in enumerate(points)}
    mat = np.zeros((len(points), len(points)), dtype=complex)
    compressed = False
    for j, g in enumerate(points):
        i = index.get(fn(g))
        if i is None:
            compressed = True
        else:
            mat[i, j] = 1.0
    return TruncOperator(depth, mat, compressed)


def prefix_index(k: int) -> int:
    """Value of the word ``0...01`` with k zeros."""
    return word_to_index((0,) * k + (1,))
