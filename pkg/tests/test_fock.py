import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fwmblockade import HilbertSpace, annihilation, commutator, compose, creation, expectation, identity, number
from fwmblockade.fock import embed, single_mode_lowering
from fwmblockade.liouvillian import DensityMatrix

dims_st = st.tuples(*(st.integers(1, 4),) * 3)


def test_annihilation_ladder_single_mode():
    s = HilbertSpace((3, 1, 1))
    a = annihilation(s, 0).matrix
    assert np.allclose(a @ s.basis(1, 0, 0), s.basis(0, 0, 0))
    assert np.allclose(a @ s.basis(2, 0, 0), np.sqrt(2) * s.basis(1, 0, 0))
    assert np.allclose(a @ s.basis(0, 0, 0), 0)


@pytest.mark.parametrize("dims", [(3, 1, 1), (2, 3, 2), (4, 3, 3)])
@pytest.mark.parametrize("mode", [0, 1, 2])
def test_annihilation_kills_vacuum(dims, mode):
    s = HilbertSpace(dims)
    assert np.allclose(annihilation(s, mode).matrix @ s.basis(0, 0, 0), 0)


def test_annihilation_middle_mode_embedding():
    s = HilbertSpace((2, 2, 1))
    out = annihilation(s, 1).matrix @ s.basis(0, 1, 0)
    assert np.allclose(out, s.basis(0, 0, 0))


def test_creation_ladder_and_truncation_edge():
    s = HilbertSpace((3, 1, 1))
    ad = creation(s, 0).matrix
    assert np.allclose(ad @ s.basis(1, 0, 0), np.sqrt(2) * s.basis(2, 0, 0))
    assert np.allclose(ad @ s.basis(2, 0, 0), 0)
    assert np.array_equal(ad, annihilation(s, 0).matrix.conj().T)


@pytest.mark.parametrize("mode", [-1, 3, 1.5])
def test_invalid_mode(mode):
    with pytest.raises(ValueError):
        annihilation(HilbertSpace((2, 2, 2)), mode)


def test_mode_a_is_slowest_index():
    s = HilbertSpace((2, 3, 4))
    assert s.index(1, 0, 0) == 12
    assert s.index(0, 1, 0) == 4
    assert s.index(0, 0, 1) == 1
    assert s.occupations(s.index(1, 2, 3)) == (1, 2, 3)


def test_compose_identity_and_number():
    s = HilbertSpace((4, 1, 1))
    a, ad = annihilation(s, 0), creation(s, 0)
    H = 0.3 * (ad @ a) + 0.1j * (ad + a)
    assert (identity(s) @ H).allclose(H)
    n = compose([(1.0, [ad, a])])
    assert np.allclose(n.matrix, np.diag([0, 1, 2, 3]))


def test_compose_scalar_terms_and_empty_product():
    s = HilbertSpace((3, 2, 1))
    a = annihilation(s, 0)
    op = compose([(2.0, []), (-1.0, [a.dag(), a])], space=s)
    assert op.allclose(2 * identity(s) - number(s, 0))


@pytest.mark.parametrize("N", [2, 3, 5, 7])
def test_commutator_with_truncation_edge(N):
    # [a, a^dag] = 1 except the top level, where a a^dag has no n = N contribution
    s = HilbertSpace((N, 1, 1))
    c = commutator(annihilation(s, 0), creation(s, 0))
    expected = np.diag([1.0] * (N - 1) + [-(N - 1.0)])
    assert np.allclose(c.matrix, expected)


def test_dimension_mismatch():
    a = annihilation(HilbertSpace((2, 2, 2)), 0)
    b = annihilation(HilbertSpace((3, 2, 2)), 0)
    with pytest.raises(ValueError):
        a @ b
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ValueError):
        compose([(1, [a, b])])
    with pytest.raises(ValueError):
        expectation(DensityMatrix.vacuum(HilbertSpace((3, 2, 2))), a)


def test_expectation_examples():
    s = HilbertSpace((2, 1, 1))
    assert expectation(DensityMatrix.vacuum(s), number(s, 0)) == 0
    assert expectation(DensityMatrix.pure(s, 1, 0, 0), number(s, 0)) == pytest.approx(1)
    assert expectation(DensityMatrix.maximally_mixed(s), number(s, 0)) == pytest.approx(0.5)


def test_operator_is_immutable():
    a = annihilation(HilbertSpace((2, 2, 2)), 0)
    with pytest.raises(ValueError):
        a.matrix[0, 0] = 1.0


@given(dims_st, st.integers(0, 2))
def test_ladder_band_structure(dims, mode):
    s = HilbertSpace(dims)
    low = single_mode_lowering(s.dims[mode])
    rows, cols = np.nonzero(low)
    assert np.all(cols - rows == 1)
    rows, cols = np.nonzero(low.conj().T)
    assert np.all(rows - cols == 1)
    assert annihilation(s, mode).dag().dag().allclose(annihilation(s, mode), atol=0)


@given(dims_st, st.integers(0, 2), st.integers(0, 2))
def test_commutator_off_edge_is_delta(dims, i, j):
    s = HilbertSpace(dims)
    c = commutator(annihilation(s, i), creation(s, j)).matrix
    for k in range(s.total_dim):
        occ = s.occupations(k)
        if occ[i] < s.dims[i] - 1 and occ[j] < s.dims[j] - 1:
            expected = s.basis(*occ) * (1.0 if i == j else 0.0)
            assert np.allclose(c @ s.basis(*occ), expected)
    if i == j:
        top = [0, 0, 0]
        top[i] = s.dims[i] - 1
        k = s.index(*top)
        assert c[k, k] == pytest.approx(-(s.dims[i] - 1))


@given(dims_st, st.integers(0, 2))
def test_embedding_commutes_with_products(dims, mode):
    s = HilbertSpace(dims)
    rng = np.random.default_rng(sum(dims) + mode)
    d = s.dims[mode]
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    B = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    assert (embed(s, mode, A) @ embed(s, mode, B)).allclose(embed(s, mode, A @ B), atol=1e-12)


@given(dims_st, st.integers(0, 2), st.integers(0, 2), st.complex_numbers(max_magnitude=10, allow_nan=False))
def test_adjoint_reverses_products(dims, i, j, z):
    s = HilbertSpace(dims)
    A = z * annihilation(s, i) + creation(s, j) @ annihilation(s, j)
    B = annihilation(s, j) @ annihilation(s, i) + identity(s)
    assert (A @ B).dag().allclose(B.dag() @ A.dag(), atol=1e-12)
