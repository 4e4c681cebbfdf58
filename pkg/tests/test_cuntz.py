import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fractal_spectrum import (DepthMismatch, FreqVector, SupportNotInGamma, TruncOperator, alpha2,
                              beta2, cuntz_identity_check, enumerate_gamma, id1_residual, inner,
                              mu_hat_int, p_e0_project, p_k_project, s0_adjoint, s0_apply,
                              s1_adjoint, s1_apply, wold_limit, wold_report, wold_sequence,
                              word_adjoint, word_apply)
from fractal_spectrum.cuntz import operator_from_index_map, prefix_index, shift_operator
from oracles import chain, gamma_points

e = FreqVector.basis


@pytest.mark.parametrize("n, image", [(1, 4), (0, 0), (-1, -4)])
def test_s0_examples(n, image):
    assert s0_apply(e(n)) == e(image)


@pytest.mark.parametrize("n, image", [(0, 1), (1, 5), (-1, -3)])
def test_s1_examples(n, image):
    assert s1_apply(e(n)) == e(image)


def test_s0_adjoint_examples():
    assert s0_adjoint(e(20)) == e(5)
    assert s0_adjoint(e(5)) == FreqVector()
    h = s0_adjoint(e(2), 4)
    assert h.truncated
    assert set(h.support()) == set(enumerate_gamma(4))
    for g, a in h.items():
        assert a == mu_hat_int(4 * g - 2).value


def test_s1_adjoint_examples():
    assert s1_adjoint(e(5)) == e(1)
    assert s1_adjoint(e(4)) == FreqVector()
    h = s1_adjoint(e(3), 4)
    assert h.truncated
    for g in enumerate_gamma(4):
        assert h[g] == mu_hat_int(4 * g - 2).value


def test_s1_adjoint_matches_matrix_adjoint():
    # <e_gamma, S1* e_3> = conj(<e_3, S1 e_gamma>) from the Gram definition
    h = s1_adjoint(e(3), 3)
    for g in enumerate_gamma(3):
        assert h[g] == pytest.approx(inner(s1_apply(e(g)), e(3)))


def test_word_apply_order():
    # S_eta e_xi = e_{eta xi}: the word (1, 0) prepends digits 1 then 0
    assert word_apply((1, 0), e(0)) == e(chain(0, "10")) == e(1)
    assert word_apply((0, 1), e(0)) == e(4)
    assert word_apply((1, 1), e(1)) == e(21)


def test_word_adjoint_examples():
    assert word_adjoint((1,), e(5)) == e(1)
    assert word_adjoint((0,), e(5)) == FreqVector()
    assert word_adjoint((1, 1), e(21)) == e(1)
    assert word_adjoint((1, 0), e(21)) == FreqVector()


def test_cuntz_identity_report():
    r = cuntz_identity_check(3)
    assert r.passed and all(r.metrics["relations"].values())
    for g in enumerate_gamma(3):
        assert s0_adjoint(s1_apply(e(g))) == FreqVector()
    assert s0_apply(s0_adjoint(e(5))) + s1_apply(s1_adjoint(e(5))) == e(5)


def test_wold_examples():
    assert wold_sequence(e(0), 5) == [1.0] * 6
    assert wold_sequence(e(1), 4) == [1.0, 0.0, 0.0, 0.0, 0.0]
    v = (e(0) + e(4)) / math.sqrt(2)
    norms = wold_sequence(v, 5)
    assert norms[0] == pytest.approx(1.0) and norms[1] == pytest.approx(1.0)
    assert norms[2:] == [wold_limit(v)] * 4
    assert wold_limit(v) == pytest.approx(1 / math.sqrt(2))
    assert wold_report(v, 5).passed


def test_wold_rejects_non_gamma():
    with pytest.raises(SupportNotInGamma):
        wold_sequence(e(2), 3)


def test_p_k_examples():
    assert p_k_project(e(5), 0) == e(5)
    assert p_k_project(e(5), 1) == FreqVector()
    assert p_k_project(e(4), 1) == e(4)
    assert p_e0_project(e(0) * 2 + e(1)) == e(0) * 2
    assert prefix_index(2) == 16


def test_alpha2_of_identity():
    blocks = alpha2(TruncOperator.identity(3))
    assert np.array_equal(blocks[0][0].matrix, np.eye(4))
    assert np.array_equal(blocks[1][1].matrix, np.eye(4))
    assert not blocks[0][1].matrix.any() and not blocks[1][0].matrix.any()


def test_beta2_depth_mismatch():
    I2, I3 = TruncOperator.identity(2), TruncOperator.identity(3)
    with pytest.raises(DepthMismatch):
        beta2([[I2, I2], [I2, I3]])
    with pytest.raises(DepthMismatch):
        I2 @ I3


def test_id1_residual():
    assert id1_residual(TruncOperator.identity(4)) == 0
    # compressing S0 cuts off its top level, which the residual exposes
    assert id1_residual(shift_operator(4, 0)) == 1.0


def test_operator_from_index_map_flags_compression():
    op = operator_from_index_map(3, lambda g: 4 * g)
    assert op.compressed
    assert not operator_from_index_map(3, lambda g: g).compressed


gamma_vectors = st.dictionaries(st.sampled_from(gamma_points(6)),
                                st.complex_numbers(max_magnitude=3, allow_nan=False,
                                                   allow_infinity=False),
                                min_size=1, max_size=8).map(FreqVector)


@settings(max_examples=40, deadline=None)
@given(gamma_vectors, gamma_vectors)
def test_adjoint_consistency(f, g):
    for apply, adjoint in ((s0_apply, s0_adjoint), (s1_apply, s1_adjoint)):
        assert inner(apply(f), g) == pytest.approx(inner(f, adjoint(g)), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(gamma_vectors, gamma_vectors)
def test_range_orthogonality(f, g):
    assert inner(s0_apply(f), s1_apply(g)) == 0


@settings(max_examples=60)
@given(gamma_vectors)
def test_wold_limit_and_orthogonal_decomposition(v):
    L = v.max_word_length()
    norms = wold_sequence(v, L + 2)
    assert all(x == wold_limit(v) for x in norms[L + 1:])
    total = p_e0_project(v)
    for k in range(L + 1):
        total = total + p_k_project(v, k)
    assert total == v


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_block_round_trip(seed):
    gen = np.random.default_rng(seed)
    X = gen.normal(size=(8, 8)) + 1j * gen.normal(size=(8, 8))
    assert np.array_equal(beta2(alpha2(TruncOperator(3, X))).matrix, X)
