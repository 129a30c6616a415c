"""Finite Blaschke products: model spaces, Toeplitz kernels and multipliers.

A finite Blaschke product of degree ``n`` is written ``I = rho * P / Q`` with
``P(z) = prod (z - lam_k)``, ``Q(z) = prod (z - conj lam_k)`` and ``rho`` a
unimodular constant (rotation times the product of the normalisers). Its
model space is ``K_I = {p / Q : deg p < n}`` and every Toeplitz kernel with a
symbol ``conj(I) J`` is an explicit space of rational functions, so all the
objects here are computed by polynomial linear algebra and checked by
polynomial identities, with no discretisation.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import integrate, linalg

from . import inner_core as ic
from .errors import InputError, QuadratureFail, SharedZero, ZeroDegree

#: Relative tolerance for numerical polynomial identities.
POLY_TOL = 1e-9


# Coefficients are stored lowest degree first (numpy.polynomial convention).


def _trim(c: np.ndarray, tol: float = 0.0) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    if c.size == 0:
        return np.zeros(1, complex)
    scale = max(float(np.max(np.abs(c))), 1e-300)
    k = c.size
    while k > 1 and abs(c[k - 1]) <= tol * scale:
        k -= 1
    return c[:k]


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """Quotient of two complex polynomials (coefficients lowest degree first)."""

    num: np.ndarray
    den: np.ndarray

    def __post_init__(self):
        num = _trim(self.num)
        den = _trim(self.den)
        if np.all(den == 0):
            raise InputError("denominator must be nonzero")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return P.polyval(z, self.num) / P.polyval(z, self.den)

    @property
    def degree(self) -> int:
        """``deg num - deg den`` (``-inf`` behaviour at infinity)."""
        return (len(_trim(self.num, 1e-14)) - 1) - (len(_trim(self.den, 1e-14)) - 1)

    def poles(self) -> np.ndarray:
        return P.polyroots(self.den) if self.den.size > 1 else np.zeros(0, complex)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(P.polymul(self.num, other.num), P.polymul(self.den, other.den))

    def scale(self, c: complex) -> "RationalFunction":
        return RationalFunction(self.num * c, self.den)

    def to_json(self) -> dict:
        return {"num": [[float(c.real), float(c.imag)] for c in self.num],
                "den": [[float(c.real), float(c.imag)] for c in self.den]}


@dataclass(frozen=True, eq=False)
class RationalInner:
    """Finite Blaschke product ``rotation * prod eps_k (z - lam_k)/(z - conj lam_k)``."""

    zeros: np.ndarray
    rotation: complex = 1.0 + 0.0j

    def __post_init__(self):
        z = ic._as_zeros(self.zeros)
        rot = complex(self.rotation)
        if abs(abs(rot) - 1.0) > 1e-9:
            raise InputError(f"rotation {rot} is not unimodular")
        object.__setattr__(self, "zeros", z)
        object.__setattr__(self, "rotation", rot / abs(rot))

    @property
    def degree(self) -> int:
        return int(self.zeros.size)

    @property
    def rho(self) -> complex:
        """Leading unimodular constant in ``I = rho P / Q``."""
        return complex(self.rotation * np.prod(ic.normalizers(self.zeros)))

    def P(self) -> np.ndarray:
        return P.polyfromroots(self.zeros) if self.degree else np.ones(1, complex)

    def Q(self) -> np.ndarray:
        return P.polyfromroots(np.conj(self.zeros)) if self.degree else np.ones(1, complex)

    def as_rational(self) -> RationalFunction:
        return RationalFunction(self.rho * self.P(), self.Q())

    def __call__(self, z):
        return ic.eval_mif(self.descriptor(), z)

    def descriptor(self) -> ic.MifDescriptor:
        return ic.MifDescriptor(self.zeros, 0.0, self.rotation)

    @classmethod
    def from_descriptor(cls, desc: ic.MifDescriptor) -> "RationalInner":
        if not desc.is_rational:
            raise InputError("descriptor is not a finite Blaschke product")
        return cls(desc.zeros, desc.rotation)

    @classmethod
    def from_json(cls, rec: Mapping) -> "RationalInner":
        if not isinstance(rec, Mapping):
            raise InputError("rational inner record must be a JSON object")
        if float(rec.get("exp_mass", 0.0)) != 0.0 or "generator" in rec:
            raise InputError("rational inner functions carry no exponential factor or generator")
        d = ic.MifDescriptor.from_json({k: v for k, v in rec.items() if k in ("zeros", "rotation")})
        return cls(d.zeros, d.rotation)

    def to_json(self) -> dict:
        return {"zeros": [[float(z.real), float(z.imag)] for z in self.zeros],
                "rotation": [self.rotation.real, self.rotation.imag]}


def as_rational_inner(x) -> RationalInner:
    if isinstance(x, RationalInner):
        return x
    if isinstance(x, ic.MifDescriptor):
        return RationalInner.from_descriptor(x)
    return RationalInner(np.asarray(x, complex))


def cancel_common_zeros(I, J) -> tuple[RationalInner, RationalInner]:
    """Remove zeros shared by ``I`` and ``J``; the symbol ``conj(I) J`` is unchanged
    up to a unimodular constant, and so is every Toeplitz kernel."""
    I, J = as_rational_inner(I), as_rational_inner(J)
    a, b = ic.cancel_common(I.zeros, J.zeros)
    return RationalInner(a, I.rotation), RationalInner(b, J.rotation)


def _check_disjoint(I: RationalInner, J: RationalInner) -> None:
    if I.degree and J.degree:
        d = np.abs(I.zeros[:, None] - J.zeros[None, :])
        scale = 1.0 + np.maximum(np.abs(I.zeros)[:, None], np.abs(J.zeros)[None, :])
        if np.any(d <= 1e-12 * scale):
            raise SharedZero("I and J share a zero; cancel common factors first")


# ----------------------------------------------------------------------------
# Model space basis
# ----------------------------------------------------------------------------


def tm_basis(I) -> list[RationalFunction]:
    """Orthonormal rational basis of the model space ``K_I``.

    ``e_k(z) = sqrt(Im lam_k / pi) * prod_{j<k} b_j(z) / (z - conj lam_k)``.

    Raises:
        ZeroDegree: for a constant ``I`` (the model space is trivial).
    """
    I = as_rational_inner(I)
    if I.degree == 0:
        raise ZeroDegree("the model space of a constant inner function is {0}")
    eps = ic.normalizers(I.zeros)
    out = []
    num = np.ones(1, complex)
    den = np.ones(1, complex)
    for k, lam in enumerate(I.zeros):
        c = math.sqrt(lam.imag / math.pi)
        out.append(RationalFunction(c * num, P.polymul(den, [-np.conj(lam), 1.0])))
        num = P.polymul(num, eps[k] * np.array([-lam, 1.0]))
        den = P.polymul(den, [-np.conj(lam), 1.0])
    return out


def l2_inner(f, g, *, breakpoints: Sequence[float] = (), tol: float = 1e-11) -> complex:
    """``int_R f(x) conj(g(x)) dx`` by adaptive quadrature on the whole line."""
    pts = sorted(set(float(p) for p in breakpoints))
    cuts = [-math.inf] + pts + [math.inf]
    if len(cuts) == 2:
        cuts = [-math.inf, 0.0, math.inf]
    total = 0.0 + 0.0j
    for a, b in zip(cuts[:-1], cuts[1:]):
        val, err = integrate.quad(lambda x: complex(f(x) * np.conj(g(x))), a, b,
                                  complex_func=True, limit=500, epsabs=tol, epsrel=tol)
        total += val
    return total


def gram_matrix(basis: Sequence[RationalFunction], breakpoints: Sequence[float] = ()) -> np.ndarray:
    n = len(basis)
    G = np.zeros((n, n), complex)
    for i in range(n):
        for j in range(i, n):
            G[i, j] = l2_inner(basis[i], basis[j], breakpoints=breakpoints)
            G[j, i] = np.conj(G[i, j])
    return G


# ----------------------------------------------------------------------------
# Toeplitz kernels with rational symbols
# ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KernelResult:
    """Kernel of the Toeplitz operator with symbol ``conj(I) J``."""

    dim: int
    basis: tuple
    certified: bool


def _vanishing_constraints(zeros: np.ndarray, n: int) -> np.ndarray:
    """Rows forcing a polynomial of degree < n to vanish on ``zeros`` with multiplicity."""
    rows = []
    seen: dict[complex, int] = {}
    for mu in zeros:
        key = next((k for k in seen if abs(k - mu) <= 1e-12 * (1 + abs(mu))), mu)
        order = seen.get(key, 0)
        seen[key] = order + 1
        # derivative of given order of sum c_j z^j at mu
        row = np.zeros(n, complex)
        for j in range(order, n):
            row[j] = math.perm(j, order) * mu ** (j - order)
        rows.append(row)
    return np.array(rows).reshape(len(rows), n)


def toeplitz_kernel_rational(I, J) -> KernelResult:
    """Basis of ``N[conj(I) J] = {f in H^2 : conj(I) J f in conj(H^2_0)}``.

    ``f`` is in the kernel exactly when ``J f`` lies in ``K_I``, i.e.
    ``J f = p / Q_I`` with ``deg p < deg I``; analyticity of ``f`` forces
    ``p`` to vanish at the zeros of ``J``. The admissible ``p`` are found as
    the null space of the vanishing constraints, divided by ``P_J``, and each
    resulting ``f`` is certified by checking the polynomial identities.

    Raises:
        SharedZero: if the zero sets meet.
    """
    I, J = as_rational_inner(I), as_rational_inner(J)
    _check_disjoint(I, J)
    n, m = I.degree, J.degree
    if n == 0:
        return KernelResult(0, (), True)
    if m == 0:
        ps = np.eye(n, dtype=complex)
    else:
        A = _vanishing_constraints(J.zeros, n)
        ps = linalg.null_space(A, rcond=1e-10).T if A.shape[0] < n else np.zeros((0, n), complex)
    basis = []
    PJ, QJ, QI = J.P(), J.Q(), I.Q()
    for p in ps:
        r, rem = P.polydiv(p, PJ)
        if np.max(np.abs(rem), initial=0.0) > POLY_TOL * max(1.0, np.max(np.abs(p))):
            raise ArithmeticError("null-space polynomial is not divisible by P_J")
        basis.append(RationalFunction(P.polymul(r, QJ) / J.rho, QI))
    certified = all(certify_kernel_element(I, J, f) for f in basis)
    return KernelResult(len(basis), tuple(basis), certified)


def certify_kernel_element(I, J, f: RationalFunction) -> bool:
    """Check that ``f`` is in ``H^2`` and ``conj(I) J f`` is in ``conj(H^2_0)``.

    ``f`` needs its poles in the lower half-plane and negative degree. On
    the line ``conj(I) J f = (rho_J / rho_I) P_J f Q_I / (Q_J P_I)``; its only
    possible lower half-plane poles come from ``Q_J`` and the denominator of
    ``f``, so these must divide ``P_J num(f) Q_I`` exactly (polynomial
    division, no root finding), and the quotient over ``P_I`` must decay.
    """
    I, J = as_rational_inner(I), as_rational_inner(J)
    if f.degree >= 0 or np.any(f.poles().imag >= 0):
        return False
    num = P.polymul(P.polymul(J.P(), f.num), I.Q())
    den = P.polymul(J.Q(), f.den)
    q, rem = P.polydiv(num, den)
    scale = max(1.0, float(np.max(np.abs(num))))
    if np.max(np.abs(rem), initial=0.0) > POLY_TOL * scale:
        return False
    return len(_trim(q, 1e-12)) - 1 < I.degree


def _reduce(num: np.ndarray, den: np.ndarray, tol: float = 1e-7) -> tuple[np.ndarray, np.ndarray]:
    """Cancel numerically common roots of ``num`` and ``den``."""
    num, den = _trim(num, 1e-14), _trim(den, 1e-14)
    rn = list(P.polyroots(num)) if num.size > 1 else []
    rd = list(P.polyroots(den)) if den.size > 1 else []
    keep_n, keep_d = [], list(rd)
    for r in rn:
        j = next((k for k, s in enumerate(keep_d) if abs(s - r) <= tol * (1 + abs(r))), None)
        if j is None:
            keep_n.append(r)
        else:
            keep_d.pop(j)
    lead = num[-1] / den[-1]
    return (lead * P.polyfromroots(keep_n) if keep_n else np.array([lead]),
            P.polyfromroots(keep_d) if keep_d else np.ones(1, complex))


def toeplitz_kernel(I, J, cancel: bool = True) -> KernelResult:
    """Kernel of ``T_{conj(I) J}``, cancelling common zeros first if asked."""
    if cancel:
        I, J = cancel_common_zeros(I, J)
    return toeplitz_kernel_rational(I, J)


def kernel_dim(I, J) -> int:
    return toeplitz_kernel(I, J).dim


def dominance_rational(I, theta) -> bool:
    """Whether ``I`` lies in the dominance set of ``theta`` (``N[conj(theta) I] != 0``).

    Common zeros are cancelled first (they do not change the symbol).
    """
    return toeplitz_kernel(theta, I).dim > 0


def order_relation(I, J) -> str:
    """Exact order of two finite Blaschke products.

    Returns ``"dominated"`` when the dominance set of ``I`` is strictly
    contained in that of ``J``, ``"dominates"`` for the reverse and
    ``"equivalent"`` when they coincide. For finite Blaschke products the
    dominance set of ``B`` is the set of inner functions of degree below
    ``deg B`` (by the kernel dimension formula), so this compares degrees.
    """
    I, J = as_rational_inner(I), as_rational_inner(J)
    d_ij = kernel_dim(I, J)
    d_ji = kernel_dim(J, I)
    if d_ij == 0 and d_ji == 0:
        return "equivalent"
    return "dominated" if d_ji > 0 else "dominates"


def kernel_basis_csv(result: KernelResult) -> str:
    """Coefficient table of a kernel basis (lowest degree first)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["element", "part", "power", "re", "im"])
    for k, f in enumerate(result.basis):
        for part, coeffs in (("num", f.num), ("den", f.den)):
            for j, c in enumerate(coeffs):
                w.writerow([k, part, j, repr(float(c.real)), repr(float(c.imag))])
    return buf.getvalue()


# ----------------------------------------------------------------------------
# de Branges function of a finite Blaschke product and multipliers
# ----------------------------------------------------------------------------


def hb_scalar(I) -> complex:
    """Scalar ``s`` with ``E = s Q_I`` satisfying ``E#/E = I`` exactly.

    ``E#/E = (conj s / s) P/Q`` so ``conj(s)/s = rho``; ``s = exp(-i arg(rho)/2)``.
    """
    I = as_rational_inner(I)
    return complex(np.exp(-0.5j * np.angle(I.rho)))


def hb_function(I) -> RationalFunction:
    """``E_I = s * prod (z - conj lam)`` as a (polynomial) rational function."""
    I = as_rational_inner(I)
    return RationalFunction(hb_scalar(I) * I.Q(), np.ones(1, complex))


@dataclass(frozen=True, eq=False)
class MultiplierResult:
    matrix: np.ndarray
    singulars: np.ndarray

    @property
    def rank(self) -> int:
        s = self.singulars
        return int(np.sum(s > 1e-8 * max(1.0, float(s.max(initial=0.0)))))

    @property
    def invertible(self) -> bool:
        m, n = self.matrix.shape
        return m == n and self.rank == n


def multiplier_operator(I, J) -> MultiplierResult:
    """Matrix of ``f -> P_{K_J}(h f)`` from ``K_I`` to ``K_J``, ``h = E_I/E_J``.

    Entries ``<h e_k^I, e_m^J>`` in the orthonormal bases of :func:`tm_basis`,
    computed by quadrature; rows index the basis of ``K_J``.

    Raises:
        ZeroDegree: if either degree is zero.
        QuadratureFail: if some ``h e_k^I`` is not square integrable
            (``deg I > deg J``).
    """
    I, J = as_rational_inner(I), as_rational_inner(J)
    if I.degree == 0 or J.degree == 0:
        raise ZeroDegree("multiplier matrices need degrees >= 1")
    h = RationalFunction(hb_scalar(I) * I.Q(), hb_scalar(J) * J.Q())
    eI, eJ = tm_basis(I), tm_basis(J)
    if any((h * e).degree >= 0 for e in eI):
        raise QuadratureFail("h * e_k is not square integrable: deg I exceeds deg J")
    pts = np.concatenate([I.zeros.real, J.zeros.real])
    M = np.zeros((J.degree, I.degree), complex)
    for k, e in enumerate(eI):
        he = h * e
        for m, g in enumerate(eJ):
            M[m, k] = l2_inner(he, g, breakpoints=pts)
    return MultiplierResult(M, linalg.svdvals(M))


def residue_inner(f: RationalFunction, g: RationalFunction) -> complex:
    """``int_R f conj(g)`` for rational ``f, g`` via residues in the upper half-plane.

    On the line ``conj(g(x)) = g#(x)`` with ``g#(z) = conj(g(conj z))``; the
    integrand ``f g#`` is rational and the integral is ``2 pi i`` times the
    sum of its residues in the upper half-plane (simple poles assumed).
    """
    gnum = np.conj(g.num)
    gden = np.conj(g.den)
    num = P.polymul(f.num, gnum)
    den = P.polymul(f.den, gden)
    if (len(_trim(num, 1e-14)) - 1) - (len(_trim(den, 1e-14)) - 1) > -2:
        raise QuadratureFail("integrand does not decay fast enough")
    poles = P.polyroots(den)
    dden = P.polyder(den)
    total = 0.0 + 0.0j
    for p in poles[poles.imag > 0]:
        total += P.polyval(p, num) / P.polyval(p, dden)
    return 2j * math.pi * total
