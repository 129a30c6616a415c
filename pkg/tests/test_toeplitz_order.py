import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mifkit import inner_core as ic, model_fd as fd, toeplitz_order as to
from mifkit.errors import MifError, NotApplicable, TailDivergent
from mifkit.inner_core import GridFunction, MifDescriptor, pure_singular

from conftest import descriptors, upper_points

GRID = np.linspace(-10, 10, 41)


def rational(zeros, rot=1.0):
    return MifDescriptor(np.asarray(zeros, complex), 0.0, rot)


def example(name, **kw):
    return MifDescriptor(generator=ic.generator_from_spec(name, kw))


# -- difference of arguments ----------------------------------------------------------

def test_phi_diff_self_is_zero():
    d = rational([1j, 2 + 3j])
    assert np.all(to.phi_diff(d, d, GRID).ys == 0)


def test_phi_diff_linear():
    a = 1.7
    phi = to.phi_diff(pure_singular(2 * a), pure_singular(a), GRID)
    assert np.allclose(phi.ys, a * GRID / 2, atol=1e-13)


@given(descriptors(), descriptors(), descriptors())
def test_phi_diff_antisymmetric_and_additive(I, J, L):
    a, b = to.phi_diff(I, J, GRID).ys, to.phi_diff(J, I, GRID).ys
    assert np.array_equal(a, -b)
    c = to.phi_diff(I, L, GRID).ys
    assert np.allclose(c, a + to.phi_diff(J, L, GRID).ys, atol=1e-12)


# -- harmonic conjugation -------------------------------------------------------------

def test_conjugate_of_zero():
    phi = GridFunction(GRID, np.zeros_like(GRID), {"evaluator": lambda x: np.zeros_like(np.asarray(x, float))})
    assert np.allclose(to.harmonic_conjugate(phi, "hilbert-quadrature").ys, 0, atol=1e-12)


def test_conjugate_known_pair():
    # boundary values of i/(z+i): real part 1/(1+x^2), imaginary part x/(1+x^2);
    # the conjugate of x/(1+x^2) is -1/(1+x^2), i.e. x^2/(1+x^2) after vanishing at 0
    ev = lambda x: np.asarray(x, float) / (1 + np.asarray(x, float) ** 2)
    xs = np.linspace(-5, 5, 11)
    got = to.harmonic_conjugate(GridFunction(xs, ev(xs), {"evaluator": ev}), "hilbert-quadrature")
    assert np.allclose(got.ys, xs**2 / (1 + xs**2), atol=1e-6)


def test_conjugate_quadrature_linear():
    f = lambda x: np.asarray(x, float) / (1 + np.asarray(x, float) ** 2)
    g = lambda x: 1 / (1 + np.asarray(x, float) ** 2)
    xs = np.linspace(-3, 3, 7)
    conj = lambda ev: to.harmonic_conjugate(GridFunction(xs, ev(xs), {"evaluator": ev}), "hilbert-quadrature").ys
    both = conj(lambda x: 2 * f(x) - 3 * g(x))
    assert np.allclose(both, 2 * conj(f) - 3 * conj(g), atol=1e-6)


@pytest.mark.parametrize("zi,zj", [([1j], [2 + 1j]), ([1j, -1 + 2j], [3 + 0.5j, 2j])])
def test_conjugate_paths_agree(zi, zj):
    I, J = rational(zi), rational(zj)
    phi = to.phi_diff(I, J, np.linspace(-10, 10, 21))
    closed = to.harmonic_conjugate(phi, "closed-form-rational").ys
    quad = to.harmonic_conjugate(phi, "hilbert-quadrature").ys
    assert np.max(np.abs(closed - quad)) < 1e-3


def test_conjugate_rejects_linear_difference():
    with pytest.raises(TailDivergent):
        to.harmonic_conjugate(to.phi_diff(pure_singular(1), pure_singular(2), GRID))


# -- drift ---------------------------------------------------------------------------------

def test_drift_self():
    d = rational([1j, 2j])
    assert to.drift_test(d, d).verdict == "both-trivial-evidence"


@given(descriptors(max_zeros=3, max_mass=0.0), descriptors(max_zeros=3, max_mass=0.0))
def test_drift_swap_symmetry(I, J):
    a, b = to.drift_test(I, J, xmax=1e3), to.drift_test(J, I, xmax=1e3)
    assert a.drift_IJ == pytest.approx(b.drift_JI, abs=1e-9)
    assert a.drift_JI == pytest.approx(b.drift_IJ, abs=1e-9)
    assert (a.kernel_IJ, a.kernel_JI) == (b.kernel_JI, b.kernel_IJ)


def test_drift_rational_matches_degrees():
    # for finite products psi winds 2 pi (deg J - deg I) over the line
    I, J = rational([1j, 2 + 1j]), rational([3j])
    res = to.drift_test(I, J)
    assert res.kernel_IJ == "nontrivial" and res.kernel_JI == "trivial"
    assert fd.kernel_dim(fd.RationalInner([1j, 2 + 1j]), fd.RationalInner([3j])) == 1


def test_drift_shifted_lattice_pair():
    res = to.drift_test(example("example3_I"), example("example3_L"))
    assert res.verdict == "kernel-nontrivial-evidence"


# -- ratio, integrability and comparability checks ------------------------------------------------------

def test_ratio_check_self():
    d = rational([1j, 1 + 2j])
    res = to.lemma3_check(d, d, GRID)
    assert np.all(res.ratio.ys == 1) and res.passed


def test_ratio_check_linear_refused():
    with pytest.raises(TailDivergent):
        to.lemma3_check(pure_singular(1), pure_singular(2), GRID)


def test_ratio_check_rational_equivalent_pair_passes():
    res = to.lemma3_check(rational([1j]), rational([5 + 2j]), np.linspace(-1e3, 1e3, 201))
    assert res.passed


@pytest.mark.xfail(strict=True, reason=(
    "the pulled-in zeros 2^n + i c_k make darg J / darg I dip to about c_k 2^-n at x = 2^n; "
    "on the dyadic points of [-2^22, 2^22] the spread is about 8.8e5, far above the 1e3 bound, "
    "so the ratio is not bounded there and the expected pass is not reproduced"))
def test_ratio_check_sparse_dyadic_pair():
    I, J = example("example2", role="I"), example("example2", role="J")
    xs = np.unique(np.concatenate([
        -np.logspace(math.log10(2.0**22), -1, 80), [0.0], np.logspace(-1, math.log10(2.0**22), 80),
        2.0 ** np.arange(1, 23)]))
    assert to.lemma3_check(I, J, xs).passed


def test_integrability_rational_self():
    d = rational([1j])
    assert to.theorem2_sufficient(d, d).sufficient


def test_integrability_rational_pair():
    res = to.theorem2_sufficient(rational([1j]), rational([2 + 1j]))
    assert res.sufficient and res.certified
    assert math.isfinite(res.integral_I) and math.isfinite(res.integral_J)


def test_integrability_singular_self():
    assert to.theorem2_sufficient(pure_singular(1.5), pure_singular(1.5)).sufficient


def test_integrability_singular_vs_rational():
    res = to.theorem2_sufficient(pure_singular(1.0), rational([1j]))
    assert not res.sufficient


def test_comparability_self():
    d = rational([1j, 2j])
    assert to.lemma4_equiv_comparable(d, d).verdict == "equivalent-evidence"


def test_comparability_single_factor_discrepancy_grows():
    # phi~(I, L) = log|x + 10i| + const grows like log|x| on each doubling
    res = to.lemma4_equiv_comparable(example("example3_I"), example("example3_L"))
    assert res.verdict == "not-equivalent-evidence"
    assert np.allclose(np.diff(res.sups), math.log(2), atol=0.05)


def test_comparability_not_comparable():
    with pytest.raises(NotApplicable):
        to.lemma4_equiv_comparable(pure_singular(1.0), rational([1j]))


def test_comparability_singular_vs_sparse_dyadic():
    # derivatives stay within the bound on the default window; the linear
    # difference of arguments is then refused
    with pytest.raises(MifError):
        to.lemma4_equiv_comparable(pure_singular(1.0), example("example2", role="J"))


# -- Log|H^2| and decay -------------------------------------------------------------------

def test_logh2_zero_is_not_log_modulus():
    # log|g| = 0 means |g| = 1 on the line, which is not square integrable
    res = to.logH2_membership(lambda x: np.zeros_like(np.asarray(x, float)))
    assert not res.passed
    assert res.poisson_value == 0.0 and res.exp_value == math.inf


def test_logh2_log_growth_fails():
    assert not to.logH2_membership(lambda x: np.log1p(np.abs(x))).passed


def test_logh2_log_decay_passes():
    res = to.logH2_membership(lambda x: -np.log1p(np.asarray(x, float) ** 2))
    assert res.passed


def test_necessary_condition_reports_zero():
    res, a = to.theorem2_necessary(rational([3j, 1j]), rational([2j]))
    assert a == 1j
    assert isinstance(res.passed, bool)


@pytest.mark.parametrize("f,slope", [
    (lambda z: 1 / (z + 1j), -1.0),
    (lambda z: 1 / (z + 1j) ** 2, -2.0),
    (lambda z: z + 1j, 1.0),
])
def test_decay_slopes(f, slope):
    assert to.decay_rate_iy(f).slope == pytest.approx(slope, abs=0.05)


@given(st.integers(-3, 3), st.integers(-3, 3), st.floats(0.5, 3))
def test_decay_slopes_add(p, q, c):
    f = lambda z: (z + c * 1j) ** p
    g = lambda z: (z + 1j) ** q
    s = to.decay_rate_iy(lambda z: f(z) * g(z)).slope
    assert s == pytest.approx(to.decay_rate_iy(f).slope + to.decay_rate_iy(g).slope, abs=0.05)


# -- aggregated verdicts ----------------------------------------------------------------------

def test_verdict_rational_degrees():
    rng = np.random.default_rng(5)
    B2 = rational(rng.uniform(-3, 3, 2) + 1j * rng.uniform(0.5, 2, 2))
    B5 = rational(rng.uniform(-3, 3, 5) + 1j * rng.uniform(0.5, 2, 5))
    v = to.order_verdict(B2, B5)
    assert v.relation == "dominated" and v.exact


def test_verdict_identical():
    d = example("example3_J")
    v = to.order_verdict(d, d)
    assert v.relation == "equivalent" and v.exact


def test_verdict_shifted_lattice_pair_exact():
    v = to.order_verdict(example("example3_I"), example("example3_L"))
    assert v.relation == "dominates" and v.exact


def test_verdict_agrees_with_model_space_dimensions():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n, k = rng.integers(0, 7, 2)
        zi = rng.uniform(-4, 4, n) + 1j * rng.uniform(0.2, 3, n)
        zj = rng.uniform(-4, 4, k) + 1j * rng.uniform(0.2, 3, k)
        v = to.order_verdict(rational(zi), rational(zj))
        want = fd.order_relation(fd.RationalInner(zi), fd.RationalInner(zj))
        assert v.exact and v.relation == want


def test_verdict_inconclusive_on_boundary():
    # lattice zeros shifted by one half on the right half-line: drift sits at pi
    v = to.order_verdict(example("example3_I"), example("example3_J"))
    if any(e.boundary for e in v.evidence):
        assert v.relation == "inconclusive"
    assert not v.exact
    js = v.to_json()
    assert js["relation"] == v.relation and all("test" in e for e in js["evidence"])
