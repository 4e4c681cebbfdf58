"""The acceptance checks, shared by ``verify-all`` and the test suite.

Each ``check_*`` function returns a :class:`Report`.  Randomized checks draw
their vectors from a seeded generator so every run is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boundary import atom_scan, zeros_path
from .cuntz import (TruncOperator, alpha2, beta2, cuntz_identity_check, id1_residual,
                    wold_limit, wold_sequence)
from .fractal import block_structure_check, relation_checks, u_matrix
from .gamma import enumerate_gamma
from .report import Report
from .spectral import (cyclic_project, decompose_once, default_depth, equal_measure_check,
                       fejer_density, iterate_decomposition, rn_estimate, u_moments)
from .transform import DEFAULT_CONFIG, TransformConfig, mu_hat_int
from .utils import parallel_map, rng
from .vectors import FreqVector, gamma_norm, onb_coeffs

KMAX = 12
E2_PATH_RATIO = 0.3


def random_gamma_vector(gen: np.random.Generator, depth: int, dense: bool = False,
                        unit: bool = False) -> FreqVector:
    points = enumerate_gamma(depth)
    if dense:
        chosen = points
    else:
        size = int(gen.integers(1, len(points) + 1))
        chosen = sorted(gen.choice(points, size=size, replace=False).tolist())
    amps = gen.normal(size=len(chosen)) + 1j * gen.normal(size=len(chosen))
    v = FreqVector(zip(chosen, amps))
    return v / gamma_norm(v) if unit else v


@dataclass
class VerifyContext:
    seed: int = 0
    depth: int = 6
    cfg: TransformConfig = DEFAULT_CONFIG

    def __post_init__(self):
        gen = rng(self.seed)
        self.wold_vectors = [random_gamma_vector(gen, 8) for _ in range(100)]
        self.unit_vectors = [random_gamma_vector(gen, self.depth, dense=True, unit=True)
                             for _ in range(50)]
        self.operators = [gen.normal(size=(8, 8)) + 1j * gen.normal(size=(8, 8))
                          for _ in range(20)]


def check_orthonormality(ctx: VerifyContext, tol: float = 1e-10) -> Report:
    points = enumerate_gamma(ctx.depth)
    worst, pairs, diagonal_exact = 0.0, 0, True
    for g in points:
        for x in points:
            value = mu_hat_int(g - x, ctx.cfg).value
            if g == x:
                diagonal_exact &= value == 1
            else:
                pairs += 1
                worst = max(worst, abs(value))
    return Report("1 orthonormality", worst <= tol and diagonal_exact,
                  {"depth": ctx.depth, "pairs": pairs, "max_offdiagonal": worst,
                   "diagonal_exact": diagonal_exact, "tolerance": tol})


def check_cuntz(ctx: VerifyContext) -> Report:
    r = cuntz_identity_check(8)
    return Report("2 cuntz relations", r.passed, r.metrics)


def check_operator_relations(ctx: VerifyContext) -> Report:
    rel = relation_checks(8)
    blocks = block_structure_check(8, 6)
    return Report("3 operator relations", rel.passed and blocks.passed,
                  {"relations": rel.metrics, "blocks": blocks.metrics})


def check_wold(ctx: VerifyContext, n_max: int = 12, settle: int = 9) -> Report:
    failures = []
    for i, v in enumerate(ctx.wold_vectors):
        norms = wold_sequence(v, n_max)
        limit = wold_limit(v)
        ok = all(b <= a for a, b in zip(norms, norms[1:])) and all(x == limit for x in norms[settle:])
        if not ok:
            failures.append(i)
    return Report("4 wold decomposition", not failures,
                  {"vectors": len(ctx.wold_vectors), "settle_from": settle, "failures": failures})


def check_one_step(ctx: VerifyContext, tol: float = 1e-9) -> Report:
    residuals = parallel_map(lambda v: decompose_once(v, KMAX, ctx.cfg).residual, ctx.unit_vectors)
    worst = max(residuals)
    return Report("5 one-step decomposition", worst <= tol,
                  {"vectors": len(residuals), "kmax": KMAX, "max_residual": worst, "tolerance": tol})


def check_iterate(ctx: VerifyContext, tol: float = 1e-9, weight_tol: float = 1e-12) -> Report:
    worst_res, worst_gap, mismatched = 0.0, 0.0, []
    decompositions = parallel_map(lambda v: iterate_decomposition(v, KMAX, ctx.cfg), ctx.unit_vectors)
    for i, d in enumerate(decompositions):
        worst_res = max(worst_res, d.residual)
        worst_gap = max(worst_gap, abs(1.0 - math.fsum([d.dirac_weight, *d.level_weights])))
        if not d.weights_match_cylinders:
            mismatched.append(i)
    passed = worst_res <= tol and worst_gap <= weight_tol and not mismatched
    return Report("6 operator-fractal expansion", passed,
                  {"max_residual": worst_res, "max_weight_gap": worst_gap,
                   "cylinder_mismatches": mismatched, "tolerance": tol,
                   "weight_tolerance": weight_tol})


def check_equal_measures(ctx: VerifyContext, tol: float = 1e-10) -> Report:
    reports = [equal_measure_check(k, KMAX, ctx.cfg, tol) for k in (1, 2, 3)]
    return Report("7 equal measures", all(r.passed for r in reports),
                  {"max_diff": {r.metrics["k"]: r.metrics["max_diff"] for r in reports},
                   "tolerance": tol})


def check_projection(ctx: VerifyContext, tol: float = 1e-10) -> Report:
    p = cyclic_project(FreqVector.basis(4), FreqVector.basis(1), 16, ctx.cfg)
    return Report("8 cyclic projection of e4", p.projection_norm <= tol,
                  {**p.to_json_dict(), "tolerance": tol})


def e2_truncation(depth: int = 6, cfg: TransformConfig = DEFAULT_CONFIG) -> FreqVector:
    """Normalized depth-L spectrum expansion of ``e_2``."""
    v = onb_coeffs(FreqVector.basis(2), depth, cfg).as_vector()
    return v / gamma_norm(v)


def check_boundary(ctx: VerifyContext, ratio: float = E2_PATH_RATIO) -> Report:
    e0_masses = atom_scan(FreqVector.basis(0), zeros_path(), 8)
    e0_ok = all(m == 1.0 for m in e0_masses)
    masses = atom_scan(e2_truncation(6, ctx.cfg), zeros_path(), 5)
    decreasing = all(b < a for a, b in zip(masses, masses[1:]))
    final_ratio = masses[-1] / masses[0]
    return Report("9 boundary path masses", e0_ok and decreasing and final_ratio < ratio,
                  {"e0_masses": e0_masses, "e2_masses": masses,
                   "strictly_decreasing": decreasing, "final_ratio": final_ratio,
                   "threshold": ratio})


def check_block_reconstruction(ctx: VerifyContext, tol: float = 1e-8) -> Report:
    exact = all(np.array_equal(beta2(alpha2(TruncOperator(3, X))).matrix, X)
                for X in ctx.operators)
    residual = id1_residual(TruncOperator(5, u_matrix(5, ctx.cfg).matrix, compressed=True))
    return Report("10 block reconstruction", exact and residual <= tol,
                  {"operators": len(ctx.operators), "exact_reconstruction": exact,
                   "id1_residual_truncated_u": residual, "tolerance": tol})


def check_unitarity_deficit(ctx: VerifyContext, column_depth: int = 4) -> Report:
    deficits = [u_matrix(L, ctx.cfg, column_depth=column_depth).unitarity_deficit for L in (4, 5, 6)]
    decreasing = all(b < a for a, b in zip(deficits, deficits[1:]))
    return Report("11 truncated U unitarity deficit", decreasing,
                  {"row_depths": [4, 5, 6], "column_depth": column_depth, "deficits": deficits})


def check_densities(ctx: VerifyContext, grid: int = 512, tol: float = 1e-8,
                    band: tuple = (0.9, 1.1)) -> Report:
    """Fejer positivity for the measures of checks 5 to 7 and the e_4 / e_1 density ratio."""
    sequences = []
    for v in ctx.unit_vectors:
        one = decompose_once(v, KMAX, ctx.cfg)
        sequences.extend([one.whole, one.s0_part, one.s1_part])
        d = iterate_decomposition(v, KMAX, ctx.cfg)
        sequences.extend(c for c in d.components if c is not None)
    e1 = FreqVector.basis(1)
    base = default_depth(e1)
    sequences.append(u_moments(e1, KMAX, ctx.cfg, base))
    for k in (1, 2, 3):
        sequences.append(u_moments(FreqVector.basis(4**k), KMAX, ctx.cfg, base + k))
    minimum = min(fejer_density(ms, KMAX, grid).min_value for ms in sequences)
    rn = rn_estimate(u_moments(FreqVector.basis(4), KMAX, ctx.cfg),
                     u_moments(e1, KMAX, ctx.cfg), KMAX, grid)
    ratios = rn.ratio[rn.defined]
    in_band = bool(ratios.size) and bool(((ratios >= band[0]) & (ratios <= band[1])).all())
    return Report("12 fejer densities", minimum >= -tol and in_band,
                  {"measures": len(sequences), "grid": grid, "min_density": minimum,
                   "rn_min": float(ratios.min(initial=np.inf)),
                   "rn_max": float(ratios.max(initial=-np.inf)),
                   "rn_defined_points": int(ratios.size), "tolerance": tol})


CHECKS = [check_orthonormality, check_cuntz, check_operator_relations, check_wold,
          check_one_step, check_iterate, check_equal_measures, check_projection,
          check_boundary, check_block_reconstruction, check_unitarity_deficit, check_densities]


def verify_all(seed: int = 0, depth: int = 6, cfg: TransformConfig = DEFAULT_CONFIG) -> list:
    ctx = VerifyContext(seed, depth, cfg)
    return [check(ctx) for check in CHECKS]
