import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from mifkit import model_fd as fd
from mifkit.errors import SharedZero, ZeroDegree
from mifkit.model_fd import RationalInner

from conftest import upper_points


def random_inner(rng, n):
    return RationalInner(rng.uniform(-5, 5, n) + 1j * rng.uniform(0.2, 3, n))


def inner_pairs(max_deg=6):
    return st.tuples(upper_points(max_size=max_deg, re=5.0, im=(0.2, 3.0)),
                     upper_points(max_size=max_deg, re=5.0, im=(0.2, 3.0)))


# -- orthonormal basis --------------------------------------------------------------

def test_tm_basis_degree_one():
    (e,) = fd.tm_basis(RationalInner([1j]))
    assert e(0.7) == pytest.approx(1 / math.sqrt(math.pi) / (0.7 + 1j))
    assert fd.l2_inner(e, e).real == pytest.approx(1.0, abs=1e-10)


def test_tm_basis_degree_two_gram():
    I = RationalInner([1j, 2 + 0.5j])
    G = fd.gram_matrix(fd.tm_basis(I), breakpoints=[0.0, 2.0])
    assert np.allclose(G, np.eye(2), atol=1e-8)


def test_tm_basis_degree_zero():
    with pytest.raises(ZeroDegree):
        fd.tm_basis(RationalInner([]))


@given(upper_points(min_size=1, max_size=4, re=5.0, im=(0.3, 3.0)))
def test_gram_by_quadrature_matches_residues(zeros):
    # the residue route assumes simple poles
    assume(zeros.size < 2 or np.min(np.abs(zeros[:, None] - zeros[None, :])
                                    + np.eye(zeros.size)) > 0.1)
    basis = fd.tm_basis(RationalInner(zeros))
    G = fd.gram_matrix(basis, breakpoints=zeros.real)
    R = np.array([[fd.residue_inner(f, g) for g in basis] for f in basis])
    assert np.allclose(G, np.eye(len(basis)), atol=1e-8)
    assert np.allclose(R, np.eye(len(basis)), atol=1e-8)


# -- Toeplitz kernels -----------------------------------------------------------------

def test_kernel_dimension_two_over_one():
    res = fd.toeplitz_kernel_rational(RationalInner([1j, 1 + 2j]), RationalInner([3 + 1j]))
    assert res.dim == 1 and res.certified


def test_kernel_identity_symbol():
    I = RationalInner([1j, 2 + 1j])
    assert fd.toeplitz_kernel(I, I).dim == 0


def test_kernel_constant_I():
    assert fd.toeplitz_kernel_rational(RationalInner([]), RationalInner([1j, 2j])).dim == 0


def test_kernel_shared_zero_rejected():
    with pytest.raises(SharedZero):
        fd.toeplitz_kernel_rational(RationalInner([1j, 2j]), RationalInner([1j]))


def test_kernel_model_space():
    # N[conj(I)] is the whole model space K_I
    I = RationalInner([1j, -1 + 2j, 3 + 0.5j])
    res = fd.toeplitz_kernel_rational(I, RationalInner([]))
    assert res.dim == 3 and res.certified


@given(inner_pairs())
def test_index_law_and_coburn(pair):
    a, b = pair
    I, J = fd.cancel_common_zeros(RationalInner(a), RationalInner(b))
    d_ij = fd.toeplitz_kernel_rational(I, J)
    d_ji = fd.toeplitz_kernel_rational(J, I)
    assert d_ij.dim - d_ji.dim == I.degree - J.degree
    assert d_ij.dim == 0 or d_ji.dim == 0
    assert d_ij.certified and d_ji.certified


@given(inner_pairs(max_deg=4))
def test_kernel_elements_satisfy_conjugation(pair):
    I, J = fd.cancel_common_zeros(RationalInner(pair[0]), RationalInner(pair[1]))
    for f in fd.toeplitz_kernel_rational(I, J).basis:
        # on the line conj(I) J f must extend to the lower half-plane: check
        # that its values are conjugates of an H^2_0 function via decay and poles
        assert fd.certify_kernel_element(I, J, f)
        x = np.array([-3.0, 0.1, 2.0])
        g = np.conj(I(x)) * J(x) * f(x)
        assert np.all(np.isfinite(g))


def test_non_kernel_element_rejected():
    I, J = RationalInner([1j]), RationalInner([2j])
    f = fd.tm_basis(J)[0]
    assert not fd.certify_kernel_element(I, J, f)


def test_blaschke_degree_table(rng):
    for n, k in itertools.product(range(6), repeat=2):
        Bn, Bk = random_inner(rng, n), random_inner(rng, k)
        assert fd.kernel_dim(Bn, Bk) == max(0, n - k)
        # D(B_n) in D(B_k) iff every witness dominated by B_n is dominated by B_k
        included = all(fd.dominance_rational(random_inner(rng, m), Bk)
                       for m in range(n) for _ in range(2))
        assert included == (n <= k)
        assert (fd.order_relation(Bn, Bk) == "equivalent") == (n == k)


def test_dominance_small_cases():
    th = RationalInner([1j, 2j, 3j])
    assert fd.dominance_rational(RationalInner([1 + 1j]), th)
    assert not fd.dominance_rational(RationalInner([1 + 1j, 2 + 1j, 5j]), th)
    assert fd.dominance_rational(RationalInner([]), th)


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.integers(0, 10_000))
def test_finite_rank_difference(n1, n2, m, seed):
    rng = np.random.default_rng(seed)
    I1, I2, th = random_inner(rng, n1), random_inner(rng, n2), random_inner(rng, m)
    if fd.toeplitz_kernel(I1, I2).dim > 0 and fd.dominance_rational(th, I2):
        assert fd.dominance_rational(th, I1)


def test_kernel_csv_header():
    res = fd.toeplitz_kernel_rational(RationalInner([1j, 2j]), RationalInner([]))
    lines = fd.kernel_basis_csv(res).splitlines()
    assert lines[0] == "element,part,power,re,im" and len(lines) > 1


# -- de Branges function and multipliers ------------------------------------------------

@given(upper_points(min_size=1, max_size=5))
def test_hb_function_reproduces_inner(zeros):
    I = RationalInner(zeros, np.exp(0.3j))
    E = fd.hb_function(I)
    z = np.array([0.5 + 1j, -2 + 0.1j, 3j])
    sharp = np.conj(E(np.conj(z)))
    assert np.allclose(sharp / E(z), I(z), atol=1e-10)


def test_multiplier_identity():
    I = RationalInner([1j, 2 + 1j])
    res = fd.multiplier_operator(I, I)
    assert np.allclose(res.matrix, np.eye(2), atol=1e-8)


def test_multiplier_one_dimensional():
    res = fd.multiplier_operator(RationalInner([1j]), RationalInner([2j]))
    assert res.matrix.shape == (1, 1)
    # <h e_I, e_J> with h = (z+i)/(z+2i), e_I = 1/(sqrt(pi)(z+i)), e_J = sqrt(2/pi)/(z+2i):
    # sqrt(2)/pi * int dx/(x^2+4) = sqrt(2)/2
    assert abs(res.matrix[0, 0]) == pytest.approx(math.sqrt(2) / 2, rel=1e-8)
    assert res.invertible


def test_multiplier_rank_deficient():
    res = fd.multiplier_operator(RationalInner([1j]), RationalInner([2j, 1 + 1j]))
    assert res.matrix.shape == (2, 1)
    assert res.rank == 1 and not res.invertible


@given(upper_points(min_size=1, max_size=3, re=4.0, im=(0.5, 2.0)),
       upper_points(min_size=1, max_size=3, re=4.0, im=(0.5, 2.0)))
def test_equal_degree_multipliers_invertible(a, b):
    n = min(a.size, b.size)
    res = fd.multiplier_operator(RationalInner(a[:n]), RationalInner(b[:n]))
    assert res.invertible
