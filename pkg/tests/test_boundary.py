import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fractal_spectrum import (FreqVector, SupportNotInGamma, atom_scan, convexity_gap, cylinder_mass,
                              cylinder_tree, index_to_word, level_weight, mu_hat_int,
                              weight_identity_check, zeros_path)
from fractal_spectrum.verify import e2_truncation
from fractal_spectrum.vectors import gamma_sq_norm
from oracles import gamma_points

e = FreqVector.basis


def test_e0_all_zero_prefixes():
    for n in range(8):
        assert cylinder_mass(e(0), (0,) * n) == 1


@pytest.mark.parametrize("g", [1, 5, 20, 21])
def test_basis_vector_atom(g):
    word = index_to_word(g)
    assert cylinder_mass(e(g), word + (0, 0, 0)) == 1
    assert cylinder_mass(e(g), word + (0, 1)) == 0


def test_single_coefficient_mass():
    assert cylinder_mass((e(0) + e(1)) / math.sqrt(2), (1,)) == pytest.approx(0.5)


def test_tree_examples():
    r = cylinder_tree(e(0), 3)
    assert r.masses[(0, 0, 0)] == 1 and r.masses[(0, 1, 0)] == 0
    v = (e(1) + e(5)) / math.sqrt(2)
    r = cylinder_tree(v, 2)
    assert r.masses[(1,)] == pytest.approx(1)
    assert r.masses[(1, 0)] == pytest.approx(0.5) and r.masses[(1, 1)] == pytest.approx(0.5)
    assert r.total == pytest.approx(1) and r.ok()


def test_atom_scan_examples():
    assert atom_scan(e(0), zeros_path(), 6) == [1.0] * 7
    assert atom_scan(e(1), zeros_path(), 3) == [0.0] * 4


def test_e2_truncation_path_masses_frozen():
    # The path keeps only the e_0 coefficient, so the last mass is
    # |mu_hat(2)|^2 / sum_{g in Gamma_6} |mu_hat(g - 2)|^2.  mu_hat(2) is the frozen
    # quadrature value; the Parseval sum over Gamma_6 was frozen from the first run.
    mu2 = complex(0.3463144563497251, -0.5998342337933127)
    parseval_gamma6 = 0.999829801881355
    masses = atom_scan(e2_truncation(6), zeros_path(), 5)
    assert all(b < a for a, b in zip(masses, masses[1:]))
    assert masses[0] == pytest.approx(1.0, abs=1e-15)
    assert masses[-1] == pytest.approx(abs(mu2) ** 2 / parseval_gamma6, abs=1e-12)
    assert masses[-1] == pytest.approx(0.4798164745684826, abs=1e-12)


def test_e2_truncation_atom_is_the_e0_coefficient():
    # the all-zeros path keeps only the e_0 coefficient, for every truncation depth
    for L in (4, 6, 8):
        v = e2_truncation(L)
        assert atom_scan(v, zeros_path(), L)[-1] == pytest.approx(abs(v[0]) ** 2, rel=1e-14)
        assert abs(v[0]) ** 2 > 0.47


def test_weight_identity_examples():
    assert level_weight(e(5), 0) == 1 and cylinder_mass(e(5), (1,)) == 1
    assert level_weight(e(5), 1) == 0 and cylinder_mass(e(5), (0, 1)) == 0
    assert level_weight(e(4), 1) == 1 and cylinder_mass(e(4), (0, 1)) == 1
    assert weight_identity_check(e(4) + e(5), 3).passed


def test_rejects_non_gamma():
    with pytest.raises(SupportNotInGamma):
        cylinder_mass(e(2), (0,))
    with pytest.raises(SupportNotInGamma):
        cylinder_tree(e(3), 2)


gamma_vectors = st.dictionaries(st.sampled_from(gamma_points(6)),
                                st.complex_numbers(max_magnitude=5, allow_nan=False,
                                                   allow_infinity=False),
                                min_size=1, max_size=10).map(FreqVector)


@given(gamma_vectors)
def test_additivity_and_total(v):
    r = cylinder_tree(v, 6)
    assert r.total == gamma_sq_norm(v)
    assert r.ok(1e-12)


@given(gamma_vectors, st.lists(st.integers(0, 1), min_size=8, max_size=8))
def test_path_masses_nonincreasing(v, path):
    masses = atom_scan(v, iter(path), 7)
    assert all(b <= a for a, b in zip(masses, masses[1:]))


@given(gamma_vectors)
def test_weight_identity_is_exact(v):
    assert weight_identity_check(v, 7).passed


@given(gamma_vectors)
def test_convexity_gap_vanishes(v):
    assert convexity_gap(v, v.max_word_length()) == 0
