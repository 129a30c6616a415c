"""Hermite-Biehler functions of the form ``E(z) = s e^{-iaz} prod (z - w_k)``.

Covers the inner function ``theta_E = E#/E``, reproducing kernels of the
de Branges space ``B(E)``, the phase function, Clark orthogonal bases,
spectral measures and membership tests. All zeros ``w_k`` lie strictly in
the lower half-plane, so ``E`` has no real zeros and ``|E(z)| > |E(conj z)|``
in the upper half-plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import integrate

from . import inner_core as ic
from .clark import AtomicMeasure, level_set
from .errors import InputError, NonUpperHalfZero, ZeroOfE
from .inner_core import MifDescriptor
from .numerics import fit_power_tail, fourier_tail


@dataclass(frozen=True, eq=False)
class HBFunction:
    """``E(z) = scalar * exp(-i exp_mass z) * prod_k (z - zeros[k])``."""

    zeros: np.ndarray = None
    exp_mass: float = 0.0
    scalar: complex = 1.0

    def __post_init__(self):
        w = np.atleast_1d(np.asarray([] if self.zeros is None else self.zeros, dtype=complex))
        if w.size and not np.all(w.imag < 0):
            raise NonUpperHalfZero("HB zeros must lie strictly in the lower half-plane")
        if not np.all(np.isfinite(w)):
            raise InputError("HB zeros must be finite")
        if not (math.isfinite(self.exp_mass) and self.exp_mass >= 0):
            raise InputError("exp_mass must be finite and non-negative")
        s = complex(self.scalar)
        if s == 0 or not np.isfinite(s):
            raise InputError("scalar must be finite and nonzero")
        object.__setattr__(self, "zeros", w)
        object.__setattr__(self, "exp_mass", float(self.exp_mass))
        object.__setattr__(self, "scalar", s)

    # -- construction -------------------------------------------------------

    @classmethod
    def paley_wiener(cls, a: float = math.pi) -> "HBFunction":
        """``E = e^{-iaz}``, whose space is ``PW_a``."""
        return cls(exp_mass=a)

    @classmethod
    def from_inner(cls, I) -> "HBFunction":
        """Polynomial ``E`` with ``E#/E = I`` for a rational inner ``I``."""
        from .model_fd import as_rational_inner, hb_scalar

        I = as_rational_inner(I)
        return cls(np.conj(I.zeros), 0.0, hb_scalar(I))

    @classmethod
    def from_json(cls, data: Mapping) -> "HBFunction":
        extra = set(data) - {"zeros", "exp_mass", "scalar"}
        if extra:
            raise InputError(f"unknown HB fields: {sorted(extra)}")
        try:
            zeros = [complex(float(p[0]), float(p[1])) for p in data.get("zeros", [])]
            sc = data.get("scalar", [1.0, 0.0])
            scalar = complex(float(sc[0]), float(sc[1]))
            a = float(data.get("exp_mass", 0.0))
        except (TypeError, ValueError, IndexError) as exc:
            raise InputError(f"malformed HB JSON: {exc}") from exc
        return cls(np.asarray(zeros, complex), a, scalar)

    def to_json(self) -> dict:
        return {"zeros": [[z.real, z.imag] for z in self.zeros], "exp_mass": self.exp_mass,
                "scalar": [self.scalar.real, self.scalar.imag]}

    # -- evaluation ---------------------------------------------------------

    def _poly(self, z: np.ndarray, roots: np.ndarray) -> np.ndarray:
        out = np.ones(z.shape, dtype=complex)
        for w in roots:
            out = out * (z - w)
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.scalar * np.exp(-1j * self.exp_mass * z) * self._poly(z, self.zeros)

    def sharp(self, z):
        """``E#(z) = conj(E(conj z))``."""
        z = np.asarray(z, dtype=complex)
        return np.conj(self.scalar) * np.exp(1j * self.exp_mass * z) * self._poly(z, np.conj(self.zeros))

    @property
    def degree(self) -> int:
        return int(self.zeros.size)


def theta_descriptor(E: HBFunction) -> MifDescriptor:
    """``theta_E = E#/E`` as a meromorphic inner function descriptor."""
    lam = np.conj(E.zeros)
    rot = (np.conj(E.scalar) / E.scalar) / np.prod(ic.normalizers(lam))
    return MifDescriptor(lam, 2.0 * E.exp_mass, complex(rot))


def theta_of_E(E: HBFunction, z):
    """``E#(z)/E(z)``.

    Raises:
        ZeroOfE: if ``E(z) = 0``.
    """
    den = E(z)
    if np.any(den == 0):
        raise ZeroOfE("E vanishes at an evaluation point")
    return E.sharp(z) / den


def _numerator(E: HBFunction, lam: complex, z):
    return E(z) * np.conj(E(lam)) - E.sharp(z) * E(np.conj(lam))


def reproducing_kernel(E: HBFunction, lam: complex, z):
    r"""Reproducing kernel of ``B(E)`` at ``lam``, evaluated at ``z``.

    .. math:: k_\lambda(z) = \frac{E(z)\overline{E(\lambda)} - E^\#(z)E(\bar\lambda)}
                                  {2\pi i(\bar\lambda - z)}

    Within ``h = 1e-5 (1 + |lam|)`` of the removable point ``z = conj(lam)``
    the numerator is expanded to second order with derivatives from symmetric
    four-point complex differences.
    """
    lam = complex(lam)
    z = np.asarray(z, dtype=complex)
    c = np.conj(lam)
    h = 1e-5 * (1.0 + abs(lam))
    near = np.abs(z - c) < h
    with np.errstate(divide="ignore", invalid="ignore"):
        out = _numerator(E, lam, z) / (2j * math.pi * (c - z))
    if np.any(near):
        pts = c + h * np.array([1, -1, 1j, -1j])
        N = _numerator(E, lam, pts)
        d1 = (N[0] - N[1] - 1j * (N[2] - N[3])) / (4 * h)
        d2 = (N[0] + N[1] - N[2] - N[3]) / (2 * h * h)
        dz = z[near] - c
        # N(z)/(c - z) = -(N' + N'' dz / 2) + O(dz^2)
        out = np.array(out, dtype=complex)
        out[near] = -(d1 + 0.5 * d2 * dz) / (2j * math.pi)
    return out if out.ndim else complex(out)


def phase_function(E: HBFunction, x):
    """Continuous ``-arg E(x)``: ``a x - arg(s) - sum atan2(v_k, x - u_k)`` for ``w_k = u_k - i v_k``."""
    x = np.asarray(x, dtype=float)
    out = E.exp_mass * x - np.angle(E.scalar)
    for w in E.zeros:
        out = out - np.arctan2(-w.imag, x - w.real)
    return out


def phase_derivative(E: HBFunction, x):
    """``psi'(x) = a + sum v_k / ((x - u_k)^2 + v_k^2)``, half of ``(arg theta_E)'``."""
    x = np.asarray(x, dtype=float)
    out = np.full(x.shape, E.exp_mass)
    for w in E.zeros:
        v = -w.imag
        out = out + v / ((x - w.real) ** 2 + v * v)
    return out


def clark_basis_gram(E: HBFunction, alpha=1.0, window: Sequence[float] | None = None):
    """Level points of ``theta_E = alpha`` and the Gram matrix of their kernels.

    ``G[j, k] = <k_{x_j}, k_{x_k}> = k_{x_j}(x_k)``. The kernels form an
    orthogonal basis of ``B(E)`` whenever ``alpha`` is not the value of
    ``theta_E`` at infinity, so ``G`` should be diagonal.
    """
    pts = level_set(theta_descriptor(E), alpha, window)
    G = np.empty((pts.size, pts.size), dtype=complex)
    for j, xj in enumerate(pts):
        G[j] = reproducing_kernel(E, xj, pts)
    return pts, G


def spectral_measure(E: HBFunction, alpha=1.0, window: Sequence[float] | None = None) -> AtomicMeasure:
    """Atoms at the ``alpha``-points of ``theta_E`` with mass ``|E|^2 2 pi / (arg theta_E)'``.

    This is ``|E|^2`` times the Clark measure. For the weights that make
    ``F -> (F(x_n))`` isometric on ``B(E)`` see :func:`sampling_measure`;
    the two agree wherever ``|E| = 1`` (e.g. Paley-Wiener).
    """
    pts = level_set(theta_descriptor(E), alpha, window)
    masses = np.abs(E(pts)) ** 2 * math.pi / phase_derivative(E, pts)
    return AtomicMeasure(pts, masses)


def sampling_measure(E: HBFunction, alpha=1.0, window: Sequence[float] | None = None) -> AtomicMeasure:
    """Clark measure divided by ``|E|^2``: ``||F||^2_{B(E)} = sum |F(x_n)|^2 mu_n``."""
    pts = level_set(theta_descriptor(E), alpha, window)
    masses = math.pi / (phase_derivative(E, pts) * np.abs(E(pts)) ** 2)
    return AtomicMeasure(pts, masses)


# ----------------------------------------------------------------------------
# Norms and membership
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Membership:
    member: bool
    norm_sq: float
    sharp_norm_sq: float
    tail_exponents: tuple
    point_bound_ok: bool
    note: str = ""

    def to_json(self) -> dict:
        return {"member": self.member, "norm_sq": self.norm_sq, "sharp_norm_sq": self.sharp_norm_sq,
                "tail_exponents": list(self.tail_exponents), "point_bound_ok": self.point_bound_ok,
                "note": self.note}


def _envelope_l2(xs: np.ndarray, vals: np.ndarray, n_blocks: int = 24) -> tuple[float, float]:
    """``int |g|^2`` on a real grid: trapezoid core plus a tail bound.

    The tail on each side comes from a power law fitted to block maxima of
    ``|g|^2`` over the outermost decade, so oscillating integrands with
    zeros are handled. Returns ``(value, worst tail exponent)``; the value is
    ``inf`` when a tail exponent is ``>= -1``.
    """
    w = np.abs(vals) ** 2
    core = float(integrate.trapezoid(w, xs))
    total, worst = core, -math.inf
    for side in (1.0, -1.0):
        X = abs(xs[-1] if side > 0 else xs[0])
        mask = (np.sign(xs) == side) & (np.abs(xs) >= X / 10)
        bx, bw = [], []
        for blk in np.array_split(np.flatnonzero(mask), n_blocks):
            if blk.size:
                k = blk[np.argmax(w[blk])]
                bx.append(xs[k])
                bw.append(w[k])
        bw = np.asarray(bw)
        if np.all(bw == 0):
            continue
        fit = fit_power_tail(np.asarray(bx), np.maximum(bw, np.finfo(float).tiny))
        worst = max(worst, fit.exponent)
        if fit.exponent >= -1.0:
            return math.inf, worst
        total += float(bw[-1] if side > 0 else bw[0]) * X / (-fit.exponent - 1.0)
    return total, worst


def db_membership(F: Callable, E: HBFunction, grid=None, test_points=None) -> Membership:
    """Numerical evidence that the entire function ``F`` lies in ``B(E)``.

    Checks that ``F/E`` and ``F#/E`` have finite ``L^2`` norm on the line
    (grid quadrature with a fitted tail bound) and that at upper half-plane
    test points ``|g(w)|^2 <= ||g||^2 / (4 pi Im w)``, the point bound every
    ``H^2`` function obeys. Growth in the upper half-plane (for instance an
    extra exponential factor) shows up as a violated point bound.

    Args:
        F: vectorised evaluator accepting complex arrays.
        grid: real grid reaching ``|x| >= 10`` on both sides
            (default ``[-2000, 2000]`` with spacing 0.01).
        test_points: upper half-plane sample points.
    """
    xs = np.linspace(-2000.0, 2000.0, 400001) if grid is None else np.asarray(grid, float)
    ws = (np.array([1j, 2j, 5j, 1 + 1j, -3 + 2j, 10j, 4 + 0.5j])
          if test_points is None else np.asarray(test_points, complex))

    def Fs(z):
        return np.conj(F(np.conj(np.asarray(z, complex))))

    n1, e1 = _envelope_l2(xs, F(xs.astype(complex)) / E(xs))
    n2, e2 = _envelope_l2(xs, Fs(xs.astype(complex)) / E(xs))
    if not (math.isfinite(n1) and math.isfinite(n2)):
        return Membership(False, n1, n2, (e1, e2), False, "not square integrable on the line")
    ok = True
    for g, nrm in ((lambda w: F(w) / E(w), n1), (lambda w: Fs(w) / E(w), n2)):
        lhs = np.abs(g(ws)) ** 2
        rhs = nrm / (4 * math.pi * ws.imag)
        ok = ok and bool(np.all(lhs <= rhs * (1 + 1e-6) + 1e-300))
    note = "" if ok else "point bound violated: not in the Hardy space"
    return Membership(ok, n1, n2, (e1, e2), ok, note)


# ----------------------------------------------------------------------------
# Kernel inner products in L^2(|E|^-2 dx)
# ----------------------------------------------------------------------------


def kernel_components(E: HBFunction, lam: complex) -> list[tuple[float, Callable]]:
    """``k_lam(x) = sum_omega e^{i omega x} c_omega(x)`` with non-oscillating ``c_omega``."""
    lam = complex(lam)
    c = np.conj(lam)
    a = E.exp_mass
    El, Elb = complex(np.conj(E(lam))), complex(E(c))

    def minus(x):
        x = np.asarray(x, dtype=complex)
        return E.scalar * E._poly(x, E.zeros) * El / (2j * math.pi * (c - x))

    def plus(x):
        x = np.asarray(x, dtype=complex)
        return -np.conj(E.scalar) * E._poly(x, np.conj(E.zeros)) * Elb / (2j * math.pi * (c - x))

    return [(-a, minus), (a, plus)]


def kernel_inner(E: HBFunction, lam: complex, mu: complex, *, tol: float = 1e-10) -> complex:
    """``<k_mu, k_lam> = int k_mu conj(k_lam) |E|^-2 dx`` by quadrature.

    The core ``[-X, X]`` uses adaptive quadrature; each tail is split into
    its exponential components and integrated with a Fourier-weight rule.
    By the reproducing property the result equals ``k_mu(lam)``.
    """
    X = 20.0 + 2.0 * (abs(lam) + abs(mu) + float(np.sum(np.abs(E.zeros))))

    def integrand(x):
        return (reproducing_kernel(E, mu, x) * np.conj(reproducing_kernel(E, lam, x))
                / np.abs(E(x)) ** 2)

    n_osc = int(E.exp_mass * X / math.pi) + 1
    cuts = np.linspace(-X, X, 4 * n_osc + 2)
    core = 0j
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        core += integrate.quad(lambda t: complex(integrand(t)), lo, hi, complex_func=True,
                               epsabs=tol, epsrel=tol, limit=200)[0]
    tail = 0j
    for om1, f1 in kernel_components(E, mu):
        for om2, f2 in kernel_components(E, lam):
            om = om1 - om2

            def right(t, f1=f1, f2=f2):
                return complex(f1(t) * np.conj(f2(t)) / np.abs(E._poly(np.asarray(t, complex), E.zeros)
                                                              * E.scalar) ** 2)

            def left(t, f1=f1, f2=f2):
                return right(-t)

            tail += fourier_tail(right, om, X) + fourier_tail(left, -om, X)
    return core + tail


# ----------------------------------------------------------------------------
# Paley-Wiener sampling
# ----------------------------------------------------------------------------


def sinc_combination(coeffs, centers):
    """``F(x) = sum_j c_j sinc(x - t_j)`` with ``sinc(x) = sin(pi x)/(pi x)``."""
    c = np.asarray(coeffs, dtype=complex)
    t = np.asarray(centers, dtype=float)

    def F(x):
        x = np.asarray(x, dtype=float)
        return np.sinc(x[..., None] - t) @ c

    return F


def sinc_combination_norm(coeffs, centers) -> float:
    """Exact ``||F||^2_{L^2}`` for a sinc combination: ``sum c_j conj(c_l) sinc(t_j - t_l)``."""
    c = np.asarray(coeffs, dtype=complex)
    t = np.asarray(centers, dtype=float)
    return float(np.real(np.conj(c) @ np.sinc(t[:, None] - t[None, :]) @ c))


def pw_sample_norm(coeffs, centers, N: int) -> tuple[float, float]:
    """``sum_{|n| <= N} |F(n)|^2`` and a bound on the omitted samples.

    With ``T = max |t_j|`` and ``N > T + 1``, ``|F(n)| <= sum|c| / (pi (|n| - T))``
    gives the tail bound ``2 (sum|c|)^2 / (pi^2 (N - T - 1))``.
    """
    F = sinc_combination(coeffs, centers)
    n = np.arange(-N, N + 1, dtype=float)
    s = float(np.sum(np.abs(F(n)) ** 2))
    T = float(np.max(np.abs(centers)))
    if N <= T + 1:
        return s, math.inf
    C = float(np.sum(np.abs(coeffs)))
    return s, 2 * C * C / (math.pi**2 * (N - T - 1))


def total_inner_argument(zeros, x):
    """Argument on the line of ``prod (x - z)/(x - conj z)`` over the non-real zeros of ``F``.

    Upper half-plane zeros contribute Blaschke factors of ``C+``, lower
    ones the corresponding inner factors of ``C-``; together they make the
    total inner component of ``F``.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    for z in np.asarray(zeros, complex):
        out = out + np.angle((x - z) / (x - np.conj(z)))
    return out


def argument_identity_residual(F: Callable, zeros, x) -> np.ndarray:
    """``arg F - arg(I)/2`` reduced modulo ``pi`` to ``[-pi/2, pi/2)``, minus its first value.

    ``I`` is the total inner component built from ``zeros``; for ``F`` in a
    de Branges space with those non-real zeros the residual vanishes.
    """
    x = np.asarray(x, dtype=float)
    r = np.angle(F(x.astype(complex))) - 0.5 * total_inner_argument(zeros, x)
    r = r - r[0]
    return (r + math.pi / 2) % math.pi - math.pi / 2
