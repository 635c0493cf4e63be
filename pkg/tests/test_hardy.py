import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratprony.errors import DiskPointError, InvalidInputError
from ratprony.hardy import (
    BOUNDARY_TOL,
    CircleSampling,
    GeneratingSequence,
    RationalAtomSet,
    adjoint_shift_apply,
    blaschke_eval,
    blaschke_product_eval,
    circle_grid,
    h2_inner,
    rational_atom_sampling,
    tm_basis,
    tm_eval,
    tm_sampling,
)

disk_points = st.builds(
    lambda r, t: r * np.exp(1j * t),
    st.floats(0.0, 0.9),
    st.floats(0.0, 2 * np.pi),
)
circle_points = st.floats(0.0, 2 * np.pi).map(lambda t: np.exp(1j * t))


# --- Blaschke factors -------------------------------------------------------

def test_blaschke_identity_factor():
    assert blaschke_eval(0, 0.3 + 0.4j) == pytest.approx(0.3 + 0.4j)


def test_blaschke_vanishes_at_its_zero():
    assert blaschke_eval(0.5, 0.5) == 0


def test_blaschke_unimodular_at_sample_point():
    assert abs(blaschke_eval(0.6j, np.exp(1j * np.pi / 3))) == pytest.approx(1, abs=1e-15)


@given(disk_points, circle_points)
def test_blaschke_unimodular_on_circle(a, z):
    assert abs(abs(blaschke_eval(a, z)) - 1) < 1e-14


def test_blaschke_rejects_boundary_point():
    with pytest.raises(DiskPointError):
        blaschke_eval(1.0, 0.2)
    with pytest.raises(DiskPointError):
        blaschke_eval(1 - BOUNDARY_TOL / 2, 0.2)


def test_blaschke_product_examples():
    assert blaschke_product_eval(GeneratingSequence([0]), 0.3j) == pytest.approx(0.3j)
    assert blaschke_product_eval(GeneratingSequence([0.5, -0.5]), 0) == pytest.approx(-0.25)
    z = np.exp(1j * np.linspace(0, 6, 17))
    vals = blaschke_product_eval(GeneratingSequence([0.2, 0.7j, -0.4 - 0.1j]), z)
    np.testing.assert_allclose(np.abs(vals), 1, atol=1e-14)


# --- generating sequences ---------------------------------------------------

def test_generating_sequence_wraps_periodically():
    gen = GeneratingSequence([0.1, 0.2j, -0.3])
    assert gen.period == 3
    assert gen[4] == gen[1] == 0.2j
    assert gen.appended(0.5).entries == (0.1, 0.2j, -0.3, 0.5)


def test_generating_sequence_validation():
    with pytest.raises(InvalidInputError):
        GeneratingSequence([])
    with pytest.raises(DiskPointError):
        GeneratingSequence([0.1, 1.0])


def test_szasz_partial_sum_diverges_linearly():
    gen = GeneratingSequence([0.5, 0.9])
    assert gen.szasz_partial_sum(10) == pytest.approx(6.0)
    assert gen.szasz_partial_sum(1000) == pytest.approx(600.0)


# --- TM functions -----------------------------------------------------------

def test_tm_monomial_case():
    z = 0.3 - 0.5j
    assert tm_eval(GeneratingSequence([0]), 3, z) == pytest.approx(z**3)


def test_tm_index_zero_normalisation():
    assert tm_eval(GeneratingSequence([0.4]), 0, 0) == pytest.approx(np.sqrt(0.84))


def test_tm_rejects_negative_index():
    with pytest.raises(InvalidInputError):
        tm_eval(GeneratingSequence([0]), -1, 0.1)


@pytest.mark.parametrize("entries", [[0.0], [0.5, -0.3j], [0.2, 0.6j, -0.7], [0.1, 0.3, 0.8j, -0.5]])
def test_tm_gram_is_identity(entries):
    gen = GeneratingSequence(entries)
    B = tm_basis(gen, 12, circle_grid(8192))
    gram = B @ B.conj().T / 8192
    np.testing.assert_allclose(gram, np.eye(13), atol=1e-8)


@given(st.lists(disk_points, min_size=1, max_size=4), st.integers(0, 8), circle_points)
@settings(max_examples=50)
def test_tm_periodic_factorisation(entries, n, z):
    gen = GeneratingSequence(entries)
    lhs = tm_eval(gen, n + gen.period, z)
    rhs = tm_eval(gen, n, z) * blaschke_product_eval(gen, z)
    assert abs(lhs - rhs) < 1e-12


def test_tm_basis_matches_pointwise_evaluation():
    gen = GeneratingSequence([0.3, -0.2 + 0.5j])
    z = np.array([0.1, -0.4j, 0.7 + 0.1j])
    B = tm_basis(gen, 6, z)
    for n in range(7):
        np.testing.assert_allclose(B[n], tm_eval(gen, n, z), atol=1e-15)


def test_tm_basis_extended_precision_agrees():
    gen = GeneratingSequence([0.3, -0.2 + 0.5j])
    z = circle_grid(64)
    B = tm_basis(gen, 20, z)
    Bl = tm_basis(gen, 20, circle_grid(64, np.clongdouble), np.clongdouble)
    assert Bl.dtype == np.clongdouble
    np.testing.assert_allclose(B, Bl.astype(complex), atol=1e-13)


def test_tm_sampling_is_unit_norm():
    s = tm_sampling(GeneratingSequence([0.6j, -0.2]), 5, 1024)
    assert s.norm() == pytest.approx(1, abs=1e-10)


# --- grid and samplings -----------------------------------------------------

def test_circle_grid_convention():
    z = circle_grid(8)
    assert z[0] == 1
    np.testing.assert_allclose(z[2], 1j, atol=1e-15)
    with pytest.raises(InvalidInputError):
        circle_grid(1)
    with pytest.raises(InvalidInputError):
        circle_grid(7.5)


def test_circle_sampling_is_read_only_and_validated():
    s = CircleSampling([1, 2, 3])
    with pytest.raises(ValueError):
        s.values[0] = 5
    with pytest.raises(InvalidInputError):
        CircleSampling([1])


def test_circle_sampling_arithmetic():
    f = CircleSampling.from_function(lambda z: z, 16)
    g = CircleSampling.from_function(lambda z: 2 * z, 16)
    np.testing.assert_allclose((f + g).values, 3 * f.values)
    np.testing.assert_allclose((g - f).values, f.values)
    np.testing.assert_allclose((2 * f).values, g.values)
    with pytest.raises(InvalidInputError):
        f + CircleSampling.from_function(lambda z: z, 32)


def test_from_function_broadcasts_constants():
    s = CircleSampling.from_function(lambda z: 3.0, 8)
    np.testing.assert_array_equal(s.values, 3.0)


# --- inner products and atoms -----------------------------------------------

def test_inner_product_monomials():
    z2 = CircleSampling.from_function(lambda z: z**2, 64)
    z1 = CircleSampling.from_function(lambda z: z, 64)
    assert h2_inner(z2, z2) == pytest.approx(1)
    assert abs(h2_inner(z1, z2)) < 1e-15


def test_inner_product_reproducing_example():
    r = rational_atom_sampling(0.5, 4096)
    h = CircleSampling.from_function(lambda z: 1 / (1 - 0.3 * z), 4096)
    assert h2_inner(r, h) == pytest.approx(1 / 0.85, abs=1e-12)


def test_inner_product_grid_mismatch():
    with pytest.raises(InvalidInputError):
        h2_inner(CircleSampling([1, 2]), CircleSampling([1, 2, 3]))


@given(disk_points, st.lists(st.tuples(st.floats(1.1, 3.0), st.floats(0, 2 * np.pi)),
                              min_size=1, max_size=3))
@settings(max_examples=40)
def test_reproducing_identity(lam, outer):
    # rational test function with poles outside the closed disk
    poles = [r * np.exp(1j * t) for r, t in outer]

    def f(z):
        return sum(1 / (z - p) for p in poles)

    lhs = h2_inner(rational_atom_sampling(lam, 4096), CircleSampling.from_function(f, 4096))
    assert abs(lhs - np.conj(f(lam))) < 1e-8


def test_rational_atom_examples():
    np.testing.assert_allclose(rational_atom_sampling(0, 16).values, 1)
    assert rational_atom_sampling(0.5, 16).values[0] == pytest.approx(2)


# --- adjoint shift ----------------------------------------------------------

def test_adjoint_shift_monomial_and_constant():
    z3 = CircleSampling.from_function(lambda z: z**3, 64)
    np.testing.assert_allclose(adjoint_shift_apply(z3).values, circle_grid(64) ** 2, atol=1e-14)
    one = CircleSampling.from_function(lambda z: 1.0, 64)
    np.testing.assert_allclose(adjoint_shift_apply(one).values, 0, atol=1e-15)


@given(st.floats(0.0, 0.95), st.floats(0, 2 * np.pi))
@settings(max_examples=30)
def test_adjoint_shift_eigenrelation(r, t):
    lam = r * np.exp(1j * t)
    atom = rational_atom_sampling(lam, 4096)
    shifted = adjoint_shift_apply(atom)
    assert np.max(np.abs(shifted.values - np.conj(lam) * atom.values)) < 1e-9


# --- atom sets --------------------------------------------------------------

def test_atom_set_validation():
    with pytest.raises(InvalidInputError):
        RationalAtomSet([0.1, 0.1])
    with pytest.raises(InvalidInputError):
        RationalAtomSet([0.1, 0.2], [1.0])
    with pytest.raises(InvalidInputError):
        RationalAtomSet([0.1, 0.2], [1.0, 0.0])
    with pytest.raises(DiskPointError):
        RationalAtomSet([0.1, 1.2])
    with pytest.raises(InvalidInputError):
        RationalAtomSet([0.1]).sampling(8)


def test_atom_set_sampling_matches_direct_evaluation():
    rs = RationalAtomSet([0.9 * np.exp(0.3j), -0.2], [1.5, 2j])
    s = rs.sampling(256)
    np.testing.assert_allclose(s.values, rs(circle_grid(256)), rtol=1e-13)


def test_taylor_coefficients_match_grid_moments():
    rs = RationalAtomSet([0.5, -0.3j], [1.0, 2.0])
    h = rs.taylor_coefficients(5)
    np.testing.assert_allclose(h, [3.0, 0.5 + 0.6j, 0.25 - 0.18, 0.125 - 0.054j, 0.0625 + 0.0162])
