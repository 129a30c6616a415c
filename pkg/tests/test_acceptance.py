"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The lines are collected in ``RESULTS`` and repeated in the terminal summary
(see ``conftest.py``), so ``pytest tests/test_acceptance.py`` ends with the
full scorecard. Runtime budgets are part of each criterion.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
from scipy import integrate

from mifkit import bm, clark as cl, debranges as db, inner_core as ic, model_fd as fd
from mifkit import toeplitz_order as to
from mifkit.inner_core import GridFunction, MifDescriptor, pure_singular
from mifkit.model_fd import RationalInner

RESULTS: list[str] = []


@contextmanager
def criterion(num: int, title: str, budget: float):
    """Time the body; the body fills ``checks`` with ``(name, ok, detail)``."""
    checks: list[tuple[str, bool, str]] = []
    t0 = time.perf_counter()
    try:
        yield checks
    finally:
        dt = time.perf_counter() - t0
        checks.append(("runtime", dt < budget, f"{dt:.2f}s < {budget:g}s"))
        ok = all(c[1] for c in checks)
        detail = "; ".join(f"{n}={'ok' if good else 'FAIL'} ({d})" for n, good, d in checks)
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d} {title}: {detail}"
        RESULTS.append(line)
        print(line)
    assert ok, line


def random_upper(rng, n, re=5.0):
    return rng.uniform(-re, re, n) + 1j * rng.uniform(0.2, 3.0, n)


def test_01_blaschke_degree_table():
    rng = np.random.default_rng(101)
    with criterion(1, "kernel dimension and inclusion table for n, k <= 5", 10) as checks:
        bad = []
        for n in range(6):
            for k in range(6):
                Bn, Bk = RationalInner(random_upper(rng, n)), RationalInner(random_upper(rng, k))
                dim = fd.kernel_dim(Bn, Bk)
                rel = fd.order_relation(Bn, Bk)
                incl = rel in ("dominated", "equivalent")
                if dim != max(0, n - k) or incl != (n <= k) or (rel == "equivalent") != (n == k):
                    bad.append((n, k, dim, rel))
        checks.append(("table", not bad, f"{36 - len(bad)}/36 cells match"))


def test_02_coburn_alternative():
    rng = np.random.default_rng(202)
    with criterion(2, "never both kernels nontrivial, 200 pairs", 30) as checks:
        both = uncertified = 0
        for _ in range(200):
            I = RationalInner(random_upper(rng, int(rng.integers(0, 7))))
            J = RationalInner(random_upper(rng, int(rng.integers(0, 7))))
            a, b = fd.toeplitz_kernel(I, J), fd.toeplitz_kernel(J, I)
            both += a.dim > 0 and b.dim > 0
            uncertified += not (a.certified and b.certified)
        checks.append(("coburn", both == 0, f"{both} violations"))
        checks.append(("certified", uncertified == 0, f"{uncertified} uncertified"))


def test_03_clark_masses():
    with criterion(3, "Clark masses of exponential factors", 1) as checks:
        m1 = cl.clark_measure(pure_singular(2 * math.pi), 1.0, (-50.25, 50.25))
        ok1 = np.array_equal(np.round(m1.xs), np.arange(-50, 51)) and np.max(np.abs(m1.masses - 1)) <= 1e-10
        checks.append(("S^2pi", bool(ok1), f"{m1.xs.size} atoms, max|m-1|={np.max(np.abs(m1.masses - 1)):.1e}"))
        m2 = cl.clark_measure(pure_singular(4 * math.pi), 1.0, (-50.25, 50.25))
        ok2 = m2.xs.size == 201 and np.max(np.abs(m2.masses - 0.5)) <= 1e-10
        checks.append(("S^4pi", bool(ok2), f"{m2.xs.size} atoms, max|m-1/2|={np.max(np.abs(m2.masses - 0.5)):.1e}"))


def test_04_clark_recovery():
    with criterion(4, "recover 1/(z+i) at 2i", 1) as checks:
        d = MifDescriptor([1j])
        mu = cl.clark_measure(d, -1.0)
        k = lambda z: 1 / (z + 1j)
        err = abs(cl.clark_recover(k(mu.xs), d, 2j, alpha=-1.0, measure=mu) - k(2j))
        checks.append(("recovery", err < 1e-8, f"{mu.xs.size} sample, error {err:.1e}"))


def test_05_parseval():
    with criterion(5, "Clark isometry on a TM basis and Paley-Wiener sampling", 30) as checks:
        zeros = np.array([1j, 2 + 0.5j, -1 + 2j])
        I = RationalInner(zeros)
        mu = cl.clark_measure(I.descriptor(), -I.rho)
        worst = 0.0
        for e in fd.tm_basis(I):
            # L2 norm by independent adaptive quadrature
            norm2 = integrate.quad(lambda t: abs(complex(e(t))) ** 2, -np.inf, np.inf,
                                   epsabs=1e-14, epsrel=1e-12, limit=400)[0]
            worst = max(worst, abs(np.sum(np.abs(e(mu.xs)) ** 2 * mu.masses) - norm2))
        checks.append(("TM basis", worst <= 1e-6, f"max error {worst:.1e}"))

        rng = np.random.default_rng(505)
        worst, cert = 0.0, True
        for _ in range(50):
            m = int(rng.integers(1, 6))
            c = rng.uniform(-1, 1, m) + 1j * rng.uniform(-1, 1, m)
            t = rng.uniform(-5, 5, m)
            s, bound = db.pw_sample_norm(c, t, 200_000)
            exact = db.sinc_combination_norm(c, t)
            cert &= bound <= 1e-4 and s <= exact + 1e-12 <= s + bound + 2e-12
            worst = max(worst, abs(exact - s))
        checks.append(("PW sampling", worst <= 1e-4 and cert, f"max error {worst:.1e}, tail bounds hold: {cert}"))


def test_06_reproducing_kernel():
    with criterion(6, "Paley-Wiener kernel and reproducing identity", 10) as checks:
        E = db.HBFunction.paley_wiener(math.pi)
        z = np.random.default_rng(606).uniform(-10, 10, 20) + 0j
        err = np.max(np.abs(db.reproducing_kernel(E, 0.0, z) - np.sin(np.pi * z) / (np.pi * z)))
        checks.append(("sinc", err <= 1e-12, f"max error {err:.1e}"))
        worst = 0.0
        for Ei in (E, db.HBFunction(np.array([-1j, 2 - 1j, -1 - 0.5j]))):
            for lam, mu in ((0.3 + 0.4j, -1 + 0.2j), (1.5 + 1j, 0.5j)):
                worst = max(worst, abs(db.kernel_inner(Ei, lam, mu) - db.reproducing_kernel(Ei, mu, lam)))
        checks.append(("quadrature", worst <= 1e-6, f"max error {worst:.1e}"))


def test_07_non_transitivity():
    C = 10.0
    d = {w: MifDescriptor(generator=ic.example3_generator(w, C)) for w in "IJL"}
    with criterion(7, "shifted-lattice triple with C = 10", 60) as checks:
        for a, b in (("I", "J"), ("J", "L")):
            r = to.drift_test(d[a], d[b])
            checks.append((f"drift {a}{b}", r.verdict == "both-trivial-evidence",
                           f"{r.verdict}, drifts {r.drift_IJ:.4f} / {r.drift_JI:.4f} vs pi - 0.1"))
        # truncations share every zero except iC; the reduced symbol is one conjugate factor
        n = np.arange(-200, 201)
        only_i, only_l = ic.cancel_common(ic.example3_generator("I", C).rule(n),
                                          ic.example3_generator("L", C).rule(n[n != 0]))
        k = fd.toeplitz_kernel_rational(RationalInner(only_i), RationalInner(only_l))
        ok = (only_l.size == 0 and np.allclose(only_i, [1j * C]) and k.dim == 1 and k.certified
              and fd.certify_kernel_element(RationalInner(only_i), RationalInner([]),
                                            fd.RationalFunction([1.0], [1j * C, 1.0])))
        v = to.order_verdict(d["I"], d["L"])
        checks.append(("kernel IL", bool(ok) and v.exact and v.relation == "dominates",
                       f"dim {k.dim}, 1/(z+{C:g}i) certified, verdict {v.relation} exact={v.exact}"))


def test_08_harmonic_conjugation():
    rng = np.random.default_rng(808)
    xs = np.linspace(-10, 10, 21)
    with criterion(8, "quadrature vs closed-form conjugate, 10 rational pairs", 60) as checks:
        worst = 0.0
        for _ in range(10):
            I = MifDescriptor(random_upper(rng, int(rng.integers(1, 4))))
            J = MifDescriptor(random_upper(rng, int(rng.integers(1, 4))))
            phi = to.phi_diff(I, J, xs)
            quad = to.harmonic_conjugate(phi, "hilbert-quadrature").ys
            closed = to.harmonic_conjugate(phi, "closed-form-rational").ys
            worst = max(worst, float(np.max(np.abs(quad - closed))))
        checks.append(("agreement", worst <= 1e-3, f"max difference {worst:.1e}"))


def test_09_bm_density():
    with criterion(9, "exterior densities and scaling", 120) as checks:
        dens = {b: bm.bm_density(MifDescriptor(generator=ic.arith_generator(b, 1.0))).dstar_counting
                for b in (0.5, 1.0, 2.0)}
        checks.append(("Z", abs(dens[1.0] - 1) <= 0.02, f"{dens[1.0]:.5f}"))
        checks.append(("2Z", abs(dens[2.0] - 0.5) <= 0.02, f"{dens[2.0]:.5f}"))
        sq = bm.bm_density(MifDescriptor(generator=ic.squares_generator())).dstar_counting
        checks.append(("squares", sq <= 0.02, f"{sq:.5f}"))
        # scaling on finite data: rescaling the points rescales the density
        base = np.arange(-400, 401, dtype=float)
        d0 = bm.bm_density(base).dstar_counting
        rel = max(abs(bm.bm_density(b * base).dstar_counting * b / d0 - 1) for b in (0.5, 2.0))
        rel = max(rel, abs(dens[0.5] * 0.5 / dens[1.0] - 1), abs(dens[2.0] * 2 / dens[1.0] - 1))
        checks.append(("scaling", rel <= 0.02, f"max relative deviation {rel:.1e}"))


def _dipped(lengths):
    ends = [(2.0**n, 2.0**n + L) for n, L in enumerate(lengths, start=1)]
    xs = np.unique(np.concatenate([np.linspace(0, 2.0 ** (len(lengths) + 2), 200_001), np.ravel(ends)]))
    y = -xs.copy()
    for a, b in ends:
        m = (xs > a) & (xs < b)
        y[m] = -b - (xs[m] - a) * (b - xs[m]) / (b - a)
    return GridFunction(xs, y)


def test_10_kappa_families():
    with criterion(10, "interval families and majorant idempotence", 10) as checks:
        c1 = bm.family_weight_sum(bm.IntervalFamily([[0.0, 1.0]])).classification
        c2 = bm.family_weight_sum(bm.IntervalFamily([[2.0**n, 2.0 ** (n + 1)] for n in range(1, 21)])).classification
        c3 = bm.family_weight_sum(bm.IntervalFamily([[n * n, n * n + 1.0] for n in range(1, 200)])).classification
        checks.append(("families", (c1, c2, c3) == ("short", "long", "short"), f"{c1}/{c2}/{c3}"))
        v_long = bm.kappa_almost_decreasing(_dipped([2.0**n for n in range(1, 14)]))[1]
        v_short = bm.kappa_almost_decreasing(_dipped([1.0] * 13))[1]
        checks.append(("profiles", (v_long, v_short) == ("no", "yes"), f"{v_long}/{v_short}"))
        rng = np.random.default_rng(1010)
        idem = True
        for _ in range(20):
            y = np.append(rng.normal(size=500).cumsum(), -1e3)
            g = GridFunction(np.arange(501.0), y)
            g1 = bm.gamma_decompose(g).gstar
            g2 = bm.gamma_decompose(g1).gstar
            idem &= np.array_equal(g1.ys, g2.ys)
        checks.append(("idempotence", bool(idem), "20 random profiles, exact equality"))


def test_11_dominance_and_type():
    with criterion(11, "exponential dominance flip and type estimate", 120) as checks:
        flip = (bm.exp_dominance_test(pure_singular(1.0), 1.0).verdict == "boundary-inconclusive"
                and bm.exp_dominance_test(pure_singular(np.nextafter(1.0, 0)), 1.0).verdict == "in-D"
                and bm.exp_dominance_test(pure_singular(np.nextafter(1.0, 2)), 1.0).verdict == "not-in-D")
        checks.append(("flip", flip, "boundary at a = b, in-D / not-in-D one ulp either side"))
        ests = []
        for N in (50, 100, 200, 500):
            mu = cl.clark_measure(pure_singular(2 * math.pi), 1.0, (-N - 0.25, N + 0.25))
            ests.append(bm.type_estimate(mu).estimate)
        errs = [abs(e - 2 * math.pi) for e in ests]
        mono = all(a > b for a, b in zip(errs, errs[1:]))
        rel = errs[-1] / (2 * math.pi)
        checks.append(("type", mono and rel <= 0.05,
                       "estimates " + ", ".join(f"{e:.4f}" for e in ests) + f"; error at 500: {rel:.1%}"))


def test_12_decay_slopes():
    cases = [(lambda z: 1 / (z + 1j), -1.0), (lambda z: 1 / (z + 1j) ** 2, -2.0), (lambda z: z + 1j, 1.0)]
    with criterion(12, "decay slopes along the imaginary axis", 5) as checks:
        got = [to.decay_rate_iy(f).slope for f, _ in cases]
        ok = all(abs(g - s) <= 0.05 for g, (_, s) in zip(got, cases))
        checks.append(("slopes", ok, ", ".join(f"{g:+.4f}" for g in got)))
