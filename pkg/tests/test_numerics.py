import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mifkit import numerics as nm
from mifkit.errors import NotMonotone, TailModelUnfit


def lorentz(x):
    return 1.0 / (1.0 + np.asarray(x) ** 2)


def test_improper_integral_lorentzian():
    res = nm.improper_integral(lorentz)
    assert res.value == pytest.approx(math.pi, abs=1e-8)
    assert res.certified and res.tail_exponent == pytest.approx(-2, abs=1e-3)


def test_improper_integral_divergent_tail():
    res = nm.improper_integral(lambda x: 1.0 / (1.0 + np.abs(np.asarray(x))))
    assert res.value == math.inf and not res.certified


def test_improper_integral_compact_support():
    res = nm.improper_integral(lambda x: np.where(np.abs(x) < 1, 1.0 - np.abs(x), 0.0),
                               breakpoints=[-1, 0, 1])
    assert res.value == pytest.approx(1.0, abs=1e-12)


def test_poisson_integral_log():
    # int log(1 + x^2) / (1 + x^2) dx = 2 pi log 2
    # the log factor defeats the power-law tail model: not certified, but the
    # reported remainder still bounds the error
    exact = 2 * math.pi * math.log(2)
    for cutoff in (1e4, 1e5, 1e6):
        res = nm.poisson_integral(lambda x: np.log1p(np.asarray(x) ** 2), cutoff=cutoff)
        assert not res.certified
        assert abs(res.value - exact) <= res.remainder


def test_poisson_integral_constant():
    res = nm.poisson_integral(lambda x: np.ones_like(np.asarray(x, float)))
    assert res.value == pytest.approx(math.pi, abs=1e-8) and res.tail_exponent == pytest.approx(0, abs=1e-6)


def test_grid_integral_matches_closed_form():
    xs = np.concatenate([-np.logspace(4, -3, 4000), [0.0], np.logspace(-3, 4, 4000)])
    res = nm.grid_improper_integral(xs, lorentz(xs))
    assert res.value == pytest.approx(math.pi, abs=1e-6)


def test_grid_integral_short_grid():
    xs = np.linspace(-5, 5, 101)
    with pytest.raises(TailModelUnfit):
        nm.grid_improper_integral(xs, lorentz(xs))


def test_power_fit_exact():
    xs = np.logspace(1, 3, 20)
    fit = nm.fit_power_tail(xs, 3.0 * xs**-1.5)
    assert fit.exponent == pytest.approx(-1.5, abs=1e-12)
    assert fit.r2 == 1.0
    with pytest.raises(TailModelUnfit):
        nm.fit_power_tail(xs, np.where(xs > 100, 0.0, 1.0))


@pytest.mark.parametrize("x", [-3.0, -0.5, 0.0, 0.7, 4.0])
def test_hilbert_of_poisson_kernel(x):
    assert nm.hilbert_transform(lorentz, x) == pytest.approx(x / (1 + x * x), abs=1e-6)


@pytest.mark.parametrize("x", [-2.0, 0.0, 1.5])
def test_hilbert_normalised_at_i(x):
    # conjugate of x/(1+x^2) is -1/(1+x^2) shifted to vanish at z = i
    got = nm.hilbert_transform(lambda t: t / (1 + t * t), x)
    assert got == pytest.approx(0.5 - 1.0 / (1 + x * x), abs=1e-6)


@given(st.floats(0.1, 5), st.floats(-5, 5), st.lists(st.floats(-40, 40), min_size=1, max_size=10))
def test_monotone_roots_solve(a, b, targets):
    phi = lambda x: a * x + b + np.arctan(x)
    xs = nm.monotone_roots(phi, targets, (-20, 20))
    inside = [t for t in targets if phi(-20) <= t <= phi(20)]
    assert xs.size == len(inside)
    assert np.allclose(phi(xs), np.sort(inside), atol=1e-9 * (1 + a))


def test_monotone_roots_rejects_decreasing():
    with pytest.raises(NotMonotone):
        nm.monotone_roots(lambda x: -x, [0.0], (-1, 1))


def test_gauss_legendre_panels_oscillatory():
    assert nm.gauss_legendre_panels(np.cos, 0.0, 100.0, 64).real == pytest.approx(math.sin(100.0), abs=1e-12)


def test_fourier_tail_lorentzian():
    # int_0^inf e^{i w x}/(1+x^2) dx has real part (pi/2) e^{-w}
    for w in (0.5, 2.0, -1.0):
        v = nm.fourier_tail(lambda x: 1.0 / (1 + x * x), w, 0.0)
        assert v.real == pytest.approx(0.5 * math.pi * math.exp(-abs(w)), abs=1e-8)
    assert nm.fourier_tail(lambda x: 1.0 / (1 + x * x), 0.0, 0.0).real == pytest.approx(math.pi / 2)


def test_fourier_tail_sign_of_frequency():
    g = lambda x: 1.0 / (1 + x * x)
    assert nm.fourier_tail(g, 1.0, 0.0) == pytest.approx(np.conj(nm.fourier_tail(g, -1.0, 0.0)))
