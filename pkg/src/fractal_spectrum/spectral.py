"""Scalar spectral measures of ``U`` and ``MU`` through their moments.

A unitary X and a vector v define a measure on the circle with moments

    c_k = integral z^k dm^X_v = <v, X^k v>,     c_{-k} = conj(c_k).

Two finite measures on the circle agree iff all their moments agree, so every
measure identity here is checked moment by moment.

Moments are computed at an explicit depth L from the compressions of U and
MU to ``span{e_g : g in Gamma_L}`` (see :mod:`fractal_spectrum.fractal`).
The result is always a positive-definite sequence and comes with a rigorous
bound on its distance to the exact moments, built from the mass that each
power pushes outside the truncation:

    |<v, U^k v> - <v, A^k v>| <= ||v|| sum_{j<k} ||(I - P) U A^j v||,
    ||(I - P) U w||^2 = ||w||^2 - ||A w||^2.

Identities between measures are checked with matched depths: a vector at
depth L is compared with ``S_0^* v`` and ``S_1^* v`` at depth ``L - 1``,
where the block structure of the compressions makes them hold exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .boundary import cylinder_mass
from .cuntz import p_k_project, s0_adjoint, s0_apply, s1_adjoint, s1_apply
from .errors import DegreeTooLarge, DepthMismatch, ParseError
from .fractal import compression_entry_bound, mu_compression, to_dense, u_compression
from .gamma import is_in_gamma
from .report import Report
from .transform import DEFAULT_CONFIG, TransformConfig
from .vectors import FreqVector, gamma_sq_norm, require_gamma


@dataclass
class MomentSequence:
    """Moments ``c_0..c_kmax`` of a measure on the circle, with error bounds."""

    c: np.ndarray
    bounds: np.ndarray = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=complex)
        if self.bounds is None:
            self.bounds = np.zeros(len(self.c))
        self.bounds = np.asarray(self.bounds, dtype=float)

    @property
    def kmax(self) -> int:
        return len(self.c) - 1

    @property
    def mass(self) -> float:
        return float(self.c[0].real)

    def at(self, k: int) -> complex:
        if abs(k) > self.kmax:
            raise DegreeTooLarge(f"moment {k} beyond kmax {self.kmax}")
        return complex(self.c[k]) if k >= 0 else complex(self.c[-k]).conjugate()

    def two_sided(self, n: int) -> np.ndarray:
        """Moments ``c_{-n}, ..., c_n``."""
        return np.array([self.at(k) for k in range(-n, n + 1)])

    def toeplitz(self, size: int) -> np.ndarray:
        """Hermitian matrix ``T[j, k] = c_{k-j}``; positive semidefinite for a measure."""
        return np.array([[self.at(k - j) for k in range(size)] for j in range(size)])

    def leading_minors(self, size: int) -> list:
        T = self.toeplitz(size)
        return [float(np.linalg.det(T[:n, :n]).real) for n in range(1, size + 1)]

    def __add__(self, other: "MomentSequence") -> "MomentSequence":
        n = min(self.kmax, other.kmax) + 1
        return MomentSequence(self.c[:n] + other.c[:n], self.bounds[:n] + other.bounds[:n])

    def scaled(self, s: float) -> "MomentSequence":
        return MomentSequence(self.c * s, self.bounds * abs(s))

    def max_diff(self, other: "MomentSequence") -> float:
        n = min(self.kmax, other.kmax) + 1
        return float(np.abs(self.c[:n] - other.c[:n]).max(initial=0.0))

    def to_json_dict(self) -> dict:
        return {"kmax": self.kmax,
                "moments": [{"k": k, "re": float(c.real), "im": float(c.imag),
                             "error_bound": float(b)}
                            for k, (c, b) in enumerate(zip(self.c, self.bounds))]}


def dirac_moments(kmax: int, weight: float = 1.0) -> MomentSequence:
    """Moments of ``weight * delta_1``."""
    return MomentSequence(np.full(kmax + 1, weight, dtype=complex))


DEFAULT_MARGIN = 3


def default_depth(*vectors: FreqVector, margin: int = DEFAULT_MARGIN) -> int:
    """Truncation depth: the longest word among the vectors plus ``margin``."""
    for v in vectors:
        require_gamma(v)
    return max((v.max_word_length() for v in vectors), default=0) + margin


def _moments(v: FreqVector, kmax: int, depth: int | None, shift: int,
             cfg: TransformConfig) -> MomentSequence:
    require_gamma(v)
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    if not v:
        return MomentSequence(np.zeros(kmax + 1, dtype=complex))
    if depth is None:
        depth = default_depth(v)
    A = u_compression(depth, cfg) if shift == 0 else mu_compression(depth, cfg)
    entry_bound = compression_entry_bound(depth, shift, cfg)
    a = to_dense(v, depth)
    norm_a = math.sqrt(gamma_sq_norm(v))
    # an entrywise error of at most entry_bound moves each power by at most size * entry_bound
    step_error = A.shape[0] * entry_bound
    c = np.empty(kmax + 1, dtype=complex)
    bounds = np.zeros(kmax + 1)
    c[0] = gamma_sq_norm(v)
    w, w_sq, leaked = a, c[0].real, 0.0
    for k in range(1, kmax + 1):
        w = A @ w
        next_sq = float(np.vdot(w, w).real)
        leaked += math.sqrt(max(w_sq - next_sq, 0.0))
        w_sq = next_sq
        c[k] = np.vdot(a, w)
        bounds[k] = norm_a * leaked + k * step_error * norm_a**2
    return MomentSequence(c, bounds)


def u_moments(v: FreqVector, kmax: int, cfg: TransformConfig = DEFAULT_CONFIG,
              depth: int | None = None) -> MomentSequence:
    """Moments ``<v, U^k v>`` for spectrum-supported ``v`` at truncation depth L."""
    return _moments(v, kmax, depth, 0, cfg)


def mu_moments(w: FreqVector, kmax: int, cfg: TransformConfig = DEFAULT_CONFIG,
               depth: int | None = None) -> MomentSequence:
    """Moments ``<w, (MU)^k w>`` for spectrum-supported ``w`` at truncation depth L."""
    return _moments(w, kmax, depth, 1, cfg)


@dataclass
class OneStepDecomposition:
    whole: MomentSequence
    s0_part: MomentSequence
    s1_part: MomentSequence
    residual: float
    error_bound: float
    depth: int

    def report(self, tol: float = 1e-9) -> Report:
        return Report("one-step-decomposition", self.residual <= tol,
                      {"depth": self.depth, "residual": self.residual,
                       "truncation_bound": self.error_bound,
                       "tolerance": tol, "whole": self.whole,
                       "s0_part": self.s0_part, "s1_part": self.s1_part})


def _start_depth(v: FreqVector, depth: int | None) -> int:
    depth = default_depth(v) if depth is None else depth
    if depth < max(v.max_word_length(), 1):
        raise DepthMismatch(f"depth {depth} is below the longest word of the vector")
    return depth


def decompose_once(v: FreqVector, kmax: int, cfg: TransformConfig = DEFAULT_CONFIG,
                   depth: int | None = None) -> OneStepDecomposition:
    """Compare ``m^U_v`` with ``m^U_{S_0^* v} + m^{MU}_{S_1^* v}``.

    ``v`` is taken at depth L and both pieces at depth ``L - 1``.
    """
    require_gamma(v)
    depth = _start_depth(v, depth)
    whole = u_moments(v, kmax, cfg, depth)
    s0_part = u_moments(s0_adjoint(v), kmax, cfg, depth - 1)
    s1_part = mu_moments(s1_adjoint(v), kmax, cfg, depth - 1)
    total = s0_part + s1_part
    bound = float((whole.bounds + total.bounds).max(initial=0.0))
    return OneStepDecomposition(whole, s0_part, s1_part, whole.max_diff(total), bound, depth)


@dataclass
class MeasureDecomposition:
    """Dirac weight at 1, level weights and normalized level measures of ``m^U_v``."""

    dirac_weight: float
    level_weights: list
    components: list  # normalized MomentSequence per level, None for empty levels
    residual: float
    error_bound: float
    norm_sq: float
    depth: int
    cylinder_weights: list = field(default_factory=list)

    @property
    def convexity_gap(self) -> float:
        return self.norm_sq - math.fsum([self.dirac_weight, *self.level_weights])

    @property
    def weights_match_cylinders(self) -> bool:
        return self.level_weights == self.cylinder_weights

    def to_json_dict(self) -> dict:
        return {"dirac_weight": self.dirac_weight, "level_weights": self.level_weights,
                "cylinder_weights": self.cylinder_weights,
                "weights_match_cylinders": self.weights_match_cylinders,
                "norm_sq": self.norm_sq, "convexity_gap": self.convexity_gap,
                "depth": self.depth, "residual": self.residual,
                "truncation_bound": self.error_bound,
                "components": [None if c is None else c.to_json_dict() for c in self.components]}


def iterate_decomposition(v: FreqVector, kmax: int, cfg: TransformConfig = DEFAULT_CONFIG,
                          depth: int | None = None) -> MeasureDecomposition:
    """Full expansion of ``m^U_v`` into ``delta_1`` plus one ``MU``-measure per level.

    For spectrum-supported ``v`` only the levels below the longest word are
    nonempty, so the sum is finite.  Level k is taken at depth ``L - k - 1``.
    """
    require_gamma(v)
    levels = v.max_word_length()
    depth = _start_depth(v, depth)
    lhs = u_moments(v, kmax, cfg, depth)
    dirac_weight = gamma_sq_norm(FreqVector({0: v[0]}))
    rhs = dirac_moments(kmax, dirac_weight)
    weights, cylinders, components = [], [], []
    current = v
    for k in range(levels):
        w = s1_adjoint(current)
        weight = gamma_sq_norm(w)
        weights.append(weight)
        cylinders.append(cylinder_mass(v, (0,) * k + (1,)))
        m = mu_moments(w, kmax, cfg, depth - k - 1)
        rhs = rhs + m
        components.append(m.scaled(1.0 / weight) if weight > 0 else None)
        current = s0_adjoint(current)
    bound = float((lhs.bounds + rhs.bounds).max(initial=0.0))
    return MeasureDecomposition(dirac_weight, weights, components, lhs.max_diff(rhs),
                                bound, gamma_sq_norm(v), depth, cylinders)


@dataclass
class DensityEstimate:
    theta: np.ndarray
    values: np.ndarray
    N: int
    tolerance: float = 1e-8

    @property
    def min_value(self) -> float:
        return float(self.values.min())

    @property
    def nonnegative(self) -> bool:
        return self.min_value >= -self.tolerance

    def rows(self):
        return zip(self.theta.tolist(), self.values.tolist())


def fejer_weights(N: int) -> np.ndarray:
    k = np.arange(N + 1)
    return 1.0 - k / (N + 1)


def fejer_density(ms: MomentSequence, N: int, gridsize: int = 512, tolerance: float = 1e-8) -> DensityEstimate:
    """Fejer mean ``sum_{|k|<=N} (1 - |k|/(N+1)) c_k exp(-i k theta)`` on a uniform grid.

    The density is relative to ``d theta / 2 pi``; for ``delta_1`` the value
    at ``theta = 0`` is ``N + 1``.
    """
    if N > ms.kmax:
        raise DegreeTooLarge(f"Fejer degree {N} exceeds available moments ({ms.kmax})")
    theta = 2 * np.pi * np.arange(gridsize) / gridsize
    w = fejer_weights(N)
    k = np.arange(1, N + 1)
    # c_{-k} = conj(c_k) makes the two-sided sum real
    osc = np.exp(-1j * np.outer(theta, k))
    values = w[0] * ms.c[0].real + 2 * (osc @ (w[1:] * ms.c[1:N + 1])).real
    return DensityEstimate(theta, values, N, tolerance)


@dataclass
class RNEstimate:
    theta: np.ndarray
    ratio: np.ndarray  # NaN where the denominator is below the floor
    floor: float
    numerator: DensityEstimate
    denominator: DensityEstimate

    @property
    def defined(self) -> np.ndarray:
        return ~np.isnan(self.ratio)

    def rows(self):
        return zip(self.theta.tolist(), self.ratio.tolist())


def rn_estimate(m_h: MomentSequence, m_v: MomentSequence, N: int, gridsize: int = 512,
                floor: float | None = None) -> RNEstimate:
    """Pointwise ratio of Fejer densities, a smoothed estimate of ``dm_h / dm_v``.

    ``floor`` defaults to ``1e-6`` times the peak of the denominator.
    """
    num = fejer_density(m_h, N, gridsize)
    den = fejer_density(m_v, N, gridsize)
    if floor is None:
        floor = 1e-6 * float(den.values.max(initial=0.0))
    ratio = np.full(gridsize, np.nan)
    mask = den.values > floor
    ratio[mask] = num.values[mask] / den.values[mask]
    return RNEstimate(num.theta, ratio, floor, num, den)


@dataclass
class ProjectionResult:
    projection_norm: float
    residual_norm: float
    rank: int
    size: int
    condition: float
    coefficients: np.ndarray

    @property
    def ill_conditioned(self) -> bool:
        return self.rank < self.size

    def to_json_dict(self) -> dict:
        return {"projection_norm": self.projection_norm, "residual_norm": self.residual_norm,
                "effective_rank": self.rank, "size": self.size, "condition": self.condition,
                "ill_conditioned": self.ill_conditioned}


def cyclic_project(w: FreqVector, v: FreqVector, M: int, cfg: TransformConfig = DEFAULT_CONFIG,
                   rcond: float = 1e-10, depth: int | None = None) -> ProjectionResult:
    """Least-squares projection of ``w`` onto ``span{U^m v : |m| <= M}``.

    The Gram matrix is the Toeplitz matrix of the moments of ``m^U_v`` and
    the cross terms are ``<U^m v, w>``, all at one truncation depth; small
    singular values (relative ``rcond``) are discarded.
    """
    require_gamma(w)
    require_gamma(v)
    if depth is None:
        depth = default_depth(v, w)
    shifts = list(range(-M, M + 1))
    G = u_moments(v, 2 * M, cfg, depth).toeplitz(len(shifts))
    A = u_compression(depth, cfg)
    a, wd = to_dense(v, depth), to_dense(w, depth)
    forward, backward = [a], [wd]
    for _ in range(M):
        forward.append(A @ forward[-1])
        backward.append(A @ backward[-1])
    # <U^m v, w> for m >= 0 and <v, U^|m| w> for m < 0
    b = np.array([np.vdot(forward[m], wd) if m >= 0 else np.vdot(a, backward[-m]) for m in shifts])
    s = np.linalg.svd(G, compute_uv=False, hermitian=True)
    smax = float(s.max(initial=0.0))
    kept = s[s > rcond * smax] if smax > 0 else s[:0]
    x = np.linalg.pinv(G, rcond=rcond, hermitian=True) @ b
    proj_sq = max(float(np.vdot(b, x).real), 0.0)
    condition = float(kept.max() / kept.min()) if len(kept) else math.inf
    return ProjectionResult(math.sqrt(proj_sq), math.sqrt(max(gamma_sq_norm(w) - proj_sq, 0.0)),
                            len(kept), len(shifts), condition, x)


def equal_measure_check(k: int, kmax: int, cfg: TransformConfig = DEFAULT_CONFIG,
                        tol: float = 1e-10, depth: int | None = None) -> Report:
    """``m^U_{e_1}`` against ``m^U_{e_{4^k}}``, moment by moment.

    ``e_1`` is taken at depth L and ``e_{4^k}`` at depth ``L + k``, the same
    margin beyond each word.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    e1 = FreqVector.basis(1)
    depth = default_depth(e1) if depth is None else depth
    a = u_moments(e1, kmax, cfg, depth)
    b = u_moments(FreqVector.basis(4**k), kmax, cfg, depth + k)
    diff = a.max_diff(b)
    return Report(f"equal-measures-k{k}", diff <= tol,
                  {"k": k, "kmax": kmax, "depth": depth, "max_diff": diff, "tolerance": tol})


@dataclass
class ExponentialClass:
    n: int
    kind: str  # "even/U" or "odd/MU"
    reduced: FreqVector
    deficit: float
    moment_gap: float | None = None

    def to_json_dict(self) -> dict:
        return {"n": self.n, "class": self.kind, "reduced": self.reduced.to_json_dict(),
                "truncated": self.reduced.truncated, "deficit": self.deficit,
                "moment_gap": self.moment_gap}


def exponential_measure_class(n: int, depth: int, cfg: TransformConfig = DEFAULT_CONFIG,
                              kmax: int = 8) -> ExponentialClass:
    """Write ``e_n = S_0 h`` (n even) or ``e_n = S_1 h'`` (n odd) and return h or h'.

    When ``e_n`` and the reduced vector both lie in the spectrum span, the
    claimed measure equality is also checked on ``kmax`` moments.
    """
    e = FreqVector.basis(n)
    if n % 2 == 0:
        kind, h = "even/U", s0_adjoint(e, depth, cfg)
    else:
        kind, h = "odd/MU", s1_adjoint(e, depth, cfg)
    deficit = 1.0 - gamma_sq_norm(h) if h.truncated else 0.0
    h.deficit = deficit
    gap = None
    if is_in_gamma(n) and h.is_gamma_supported():
        L = default_depth(e)
        lhs = u_moments(e, kmax, cfg, L)
        part = u_moments if kind == "even/U" else mu_moments
        gap = lhs.max_diff(part(h, kmax, cfg, L - 1))
    return ExponentialClass(n, kind, h, deficit, gap)


class TrigPoly:
    """Laurent polynomial ``sum a_m z^m`` used as a test function on the circle."""

    def __init__(self, coeffs: dict):
        self.coeffs = {int(m): complex(a) for m, a in coeffs.items() if a != 0}

    @property
    def degree(self) -> int:
        return max((abs(m) for m in self.coeffs), default=0)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return sum(a * z**m for m, a in self.coeffs.items()) if self.coeffs else np.zeros_like(z)

    def integrate(self, ms: MomentSequence) -> complex:
        """``integral phi dm`` from the moments of m."""
        return sum((a * ms.at(m) for m, a in self.coeffs.items()), 0j)

    def __repr__(self):
        return f"TrigPoly({self.coeffs})"

    _TERM = re.compile(
        r"\s*([+-])?\s*(?:(\([^)]*\)|[0-9.]+(?:[eE][+-]?\d+)?j?|j)\s*\*?\s*)?"
        r"(z(?:\s*\^\s*(-?\d+))?)?\s*"
    )

    @classmethod
    def parse(cls, text: str) -> "TrigPoly":
        """Parse expressions like ``"z^2+1"``, ``"0.5*z^-1 - 2z"``."""
        coeffs: dict = {}
        pos = 0
        text = text.strip()
        if not text:
            raise ParseError("empty polynomial", 0)
        while pos < len(text):
            m = cls._TERM.match(text, pos)
            if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
                raise ParseError(f"cannot parse polynomial term in {text!r}", pos)
            if pos > 0 and m.group(1) is None:
                raise ParseError("missing '+' or '-' between terms", pos)
            sign = -1 if m.group(1) == "-" else 1
            coef = 1.0 + 0j
            if m.group(2) is not None:
                raw = m.group(2).strip("()").replace(" ", "")
                try:
                    coef = complex("1j" if raw == "j" else raw)
                except ValueError:
                    raise ParseError(f"bad coefficient {raw!r}", m.start(2)) from None
            power = 0
            if m.group(3) is not None:
                power = int(m.group(4)) if m.group(4) is not None else 1
            coeffs[power] = coeffs.get(power, 0j) + sign * coef
            pos = m.end()
        return cls(coeffs)


def transitivity_check(v: FreqVector, k: int, phi: TrigPoly, cfg: TransformConfig = DEFAULT_CONFIG,
                       tol: float = 1e-9, depth: int | None = None) -> Report:
    """``integral phi dm^{MU}_{S_1^* S_0^{*k} v}`` against ``<P_k v, phi(U) v>``.

    The right side uses U at depth L, the left side MU at depth ``L - k - 1``.
    """
    require_gamma(v)
    depth = _start_depth(v, depth)
    w = v
    for _ in range(k):
        w = s0_adjoint(w)
    w = s1_adjoint(w)
    lhs = phi.integrate(mu_moments(w, phi.degree, cfg, max(depth - k - 1, 0)))
    A = u_compression(depth, cfg)
    a = to_dense(v, depth)
    pk = to_dense(p_k_project(v, k), depth)
    rhs = 0j
    for m, coef in phi.coeffs.items():
        # <P_k v, U^m v> for m >= 0 and <U^|m| P_k v, v> for m < 0
        x, y = (pk, a) if m >= 0 else (a, pk)
        for _ in range(abs(m)):
            y = A @ y
        rhs += coef * (np.vdot(x, y) if m >= 0 else np.vdot(y, x))
    gap = abs(lhs - rhs)
    return Report("transitivity", gap <= tol,
                  {"k": k, "depth": depth, "phi": {str(m): a for m, a in phi.coeffs.items()},
                   "lhs": lhs, "rhs": rhs, "discrepancy": gap, "tolerance": tol})


def range_projection_vector(v: FreqVector, k: int) -> FreqVector:
    """``S_0^k S_1 S_1^* S_0^{*k} v`` built from the isometries (equals ``P_k v``)."""
    w = v
    for _ in range(k):
        w = s0_adjoint(w)
    w = s1_apply(s1_adjoint(w))
    for _ in range(k):
        w = s0_apply(w)
    return w
