import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fractal_spectrum import (DepthMismatch, DepthTooLarge, FreqVector, SupportNotInGamma,
                              block_structure_check, enumerate_gamma, inner, m_apply, mu_compression,
                              mu_hat_int, mu_pow_apply, mu_power, relation_checks, s0_apply,
                              s1_apply, u_adjoint, u_apply, u_apply_general, u_compression, u_matrix,
                              u_power)
from fractal_spectrum.fractal import (COMPRESSION_MAX_DEPTH, from_dense, mu_power_index,
                                      orbit_in_gamma, to_dense)
from fractal_spectrum.vectors import gamma_sq_norm
from oracles import chain, gamma_points, in_gamma

e = FreqVector.basis


@pytest.mark.parametrize("n, image", [(0, 0), (1, 5), (4, 20)])
def test_u_apply_examples(n, image):
    assert u_apply(e(n)) == e(image)


def test_u_apply_rejects_non_gamma():
    with pytest.raises(SupportNotInGamma):
        u_apply(e(2))


def test_u_apply_general_examples():
    r = u_apply_general(e(5), 4)
    assert r == e(25) and r.deficit == 0
    assert u_apply_general(e(0) + e(1), 3) == e(0) + e(5)
    r = u_apply_general(e(2), 4)
    assert r.truncated and r.deficit > 0
    for g in enumerate_gamma(4):
        assert r[5 * g] == mu_hat_int(g - 2).value


def test_u_adjoint_examples():
    r = u_adjoint(e(5), 4)
    assert r == e(1) and r.deficit == 0
    assert u_adjoint(e(0), 4) == e(0)
    r = u_adjoint(e(1), 4)
    assert r.truncated
    for g in enumerate_gamma(4):
        assert r[g] == mu_hat_int(5 * g - 1).value


@pytest.mark.parametrize("n, image", [(0, 1), (4, 5), (-1, 0)])
def test_m_apply_examples(n, image):
    assert m_apply(e(n)) == e(image)


def test_mu_pow_apply_examples():
    assert mu_pow_apply(e(0), 1) == e(1)
    assert mu_pow_apply(e(1), 2) == e(chain(1, "MUMU")) == e(31)
    v = e(0) + e(5) * 2j
    assert mu_pow_apply(v, 0) == v


def test_index_map_is_not_the_operator_power():
    # U^2 e_1 = e_25 exactly, but 25 is not a spectrum point, so U^3 e_1 leaves the index map
    assert orbit_in_gamma(1, 2) and not orbit_in_gamma(1, 3)
    assert not in_gamma(25)
    w = u_power(e(1), 3, 8)
    assert abs(inner(e(125), w)) < 0.9  # the formal image e_125 is far from U^3 e_1
    assert orbit_in_gamma(0, 5, 1) is False and orbit_in_gamma(0, 1, 1)


def test_compression_entries():
    A, B = u_compression(3), mu_compression(3)
    pts = enumerate_gamma(3)
    for i, x in enumerate(pts):
        for j, g in enumerate(pts):
            assert abs(A[i, j] - mu_hat_int(x - 5 * g).value) < 1e-14
            assert abs(B[i, j] - mu_hat_int(x - 5 * g - 1).value) < 1e-14
    assert not A.flags.writeable


def test_compression_is_a_contraction():
    for L in (3, 5, 7):
        assert np.linalg.norm(u_compression(L), 2) <= 1 + 1e-12
        assert np.linalg.norm(mu_compression(L), 2) <= 1 + 1e-12


def test_compression_block_structure():
    # A_L = S0 A_{L-1} S0^* + S1 B_{L-1} S1^*; cross blocks vanish because mu_hat(odd) = 0
    L = 5
    A, A0, B0 = u_compression(L), u_compression(L - 1), mu_compression(L - 1)
    pos = {g: i for i, g in enumerate(enumerate_gamma(L))}
    small = enumerate_gamma(L - 1)
    even = [pos[4 * g] for g in small]
    odd = [pos[4 * g + 1] for g in small]
    assert np.array_equal(A[np.ix_(even, even)], A0)
    assert np.array_equal(A[np.ix_(odd, odd)], B0)
    assert not A[np.ix_(even, odd)].any() and not A[np.ix_(odd, even)].any()


def test_compression_depth_limit():
    with pytest.raises(DepthTooLarge):
        u_compression(COMPRESSION_MAX_DEPTH + 1)


def test_dense_round_trip():
    v = e(0) + e(21) * 1j
    assert from_dense(to_dense(v, 4), 4) == v
    with pytest.raises(DepthMismatch):
        to_dense(e(64), 3)


def test_u_power_on_spectrum_orbit_is_exact():
    assert u_power(e(1), 1, 6) == e(5)
    assert u_power(e(4), 1, 6) == e(20)
    r = u_power(e(5), -1, 6)
    assert np.allclose(to_dense(r, 6), to_dense(e(1), 6), atol=1e-12)


def test_u_power_deficit_records_lost_mass():
    r = u_power(e(1), 3, 6)
    assert r.truncated and r.deficit == pytest.approx(1 - gamma_sq_norm(r))
    assert mu_power(e(0), 1, 4) == e(1)


def test_u_matrix_columns():
    um = u_matrix(6, column_depth=3)
    assert um.matrix.shape == (64, 8)
    assert (um.column_norms <= 1 + 1e-12).all()
    deficits = [u_matrix(L, column_depth=4).unitarity_deficit for L in (4, 5, 6, 7)]
    assert all(b < a for a, b in zip(deficits, deficits[1:]))
    assert um.cols == enumerate_gamma(3)


def test_relation_and_block_reports():
    assert relation_checks(5).passed
    r = block_structure_check(4, 3)
    assert r.passed and r.metrics["u_e0_fixed"]


def test_block_identity_example():
    # U S0 S1 e_0 = S0 S1 MU e_0, i.e. U e_4 = e_20
    assert u_apply(s0_apply(s1_apply(e(0)))) == s0_apply(s1_apply(m_apply(u_apply(e(0))))) == e(20)


gamma_vectors = st.dictionaries(st.sampled_from(gamma_points(5)),
                                st.complex_numbers(max_magnitude=3, allow_nan=False,
                                                   allow_infinity=False),
                                min_size=1, max_size=6).map(FreqVector)


@given(gamma_vectors)
def test_u_adjoint_inverts_u(v):
    assert u_adjoint(u_apply(v), 4) == v


@given(st.integers(0, 10**6), st.integers(0, 6), st.integers(0, 6))
def test_mu_index_semigroup(n, j, k):
    assert mu_power_index(mu_power_index(n, j), k) == mu_power_index(n, j + k)
    assert mu_power_index(n, k) == chain(n, "MU" * k)


@settings(max_examples=30, deadline=None)
@given(gamma_vectors, gamma_vectors)
def test_u_preserves_inner_products(f, g):
    assert inner(u_apply(f), u_apply(g)) == pytest.approx(inner(f, g), abs=1e-12)
