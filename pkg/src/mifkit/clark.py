"""Clark measures of meromorphic inner functions and their inverse map.

For a unimodular ``alpha`` the Clark measure ``sigma_alpha`` of an inner
function ``theta`` is the positive measure with

    Re (alpha + theta(z)) / (alpha - theta(z))
        = p y + (1/pi) sum_n mass_n y / ((x - x_n)^2 + y^2),   z = x + iy.

For meromorphic ``theta`` it is atomic: atoms sit on the level set
``{theta = alpha}`` of the boundary values, with mass ``2 pi / |theta'(x)|``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import inner_core as ic
from .errors import (ConstantMif, EmptyMeasure, InfiniteMassUnsupported, InputError,
                     OnSupport, TruncationNotConverged)
from .numerics import monotone_roots


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """Finitely many positive atoms on the line plus a mass at infinity.

    Attributes:
        xs: sorted distinct atom locations.
        masses: positive masses, aligned with ``xs``.
        infinity_mass: the linear coefficient ``p >= 0``.
        flags: free-form notes (e.g. an uncertified ``p``).
    """

    xs: np.ndarray
    masses: np.ndarray
    infinity_mass: float = 0.0
    flags: tuple = ()

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float).ravel()
        ms = np.asarray(self.masses, dtype=float).ravel()
        if xs.shape != ms.shape:
            raise InputError("atoms and masses must have equal length")
        if xs.size > 1 and not np.all(np.diff(xs) > 0):
            raise InputError("atoms must be sorted and distinct")
        if not np.all(ms > 0):
            raise InputError("atom masses must be positive")
        if not self.infinity_mass >= 0:
            raise InputError("infinity_mass must be non-negative")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "masses", ms)
        object.__setattr__(self, "infinity_mass", float(self.infinity_mass))
        object.__setattr__(self, "flags", tuple(self.flags))

    def __len__(self) -> int:
        return self.xs.size

    @property
    def is_empty(self) -> bool:
        return self.xs.size == 0 and self.infinity_mass == 0.0

    def poisson_sum(self) -> float:
        """``sum mass_n / (1 + x_n^2)``."""
        return float(np.sum(self.masses / (1.0 + self.xs**2)))

    def restrict(self, lo: float, hi: float) -> "AtomicMeasure":
        keep = (self.xs >= lo) & (self.xs <= hi)
        return AtomicMeasure(self.xs[keep], self.masses[keep], self.infinity_mass, self.flags)

    def scaled(self, factor: float) -> "AtomicMeasure":
        return AtomicMeasure(self.xs, self.masses * factor, self.infinity_mass * factor, self.flags)

    def to_json(self) -> dict:
        out = {
            "atoms": [{"x": float(x), "mass": float(m)} for x, m in zip(self.xs, self.masses)],
            "infinity_mass": self.infinity_mass,
        }
        if self.flags:
            out["flags"] = list(self.flags)
        return out

    @classmethod
    def from_json(cls, rec: Mapping) -> "AtomicMeasure":
        if not isinstance(rec, Mapping) or "atoms" not in rec:
            raise InputError("measure record needs an 'atoms' list")
        try:
            pairs = sorted((float(a["x"]), float(a["mass"])) for a in rec["atoms"])
            p = float(rec.get("infinity_mass", 0.0))
        except (KeyError, TypeError, ValueError):
            raise InputError("atoms must be objects with numeric 'x' and 'mass'") from None
        xs = [q[0] for q in pairs]
        ms = [q[1] for q in pairs]
        return cls(np.asarray(xs), np.asarray(ms), p)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "mass"])
        for x, m in zip(self.xs, self.masses):
            w.writerow([repr(float(x)), repr(float(m))])
        return buf.getvalue()


# ----------------------------------------------------------------------------
# Forward map: inner function -> Clark measure
# ----------------------------------------------------------------------------


def _unimodular(alpha) -> complex:
    a = complex(alpha)
    if abs(abs(a) - 1.0) > 1e-9:
        raise InputError(f"alpha={a} is not unimodular")
    return a / abs(a)


def _argument_function(desc: ic.MifDescriptor, reach: float) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorised argument usable for root finding on ``[-reach, reach]``."""
    if desc.generator is None:
        return lambda x: ic.arg_mif(desc, x)
    try:
        fin = ic.truncate_for_range(desc, reach, tol=1e-11)
        return lambda x: ic.arg_mif(fin, x)
    except TruncationNotConverged:
        return lambda x: ic.arg_mif(desc, x, tol=1e-9)


def _full_line_window(desc: ic.MifDescriptor, targets: np.ndarray) -> tuple[float, float]:
    """Window containing every solution for a finite Blaschke product."""
    scale = 10.0 * (1.0 + float(np.max(np.abs(desc.zeros))))
    lo, hi = -scale, scale
    for _ in range(60):
        vals = ic.arg_mif(desc, np.array([lo, hi]))
        if vals[0] < targets[0] and vals[1] > targets[-1]:
            return lo, hi
        lo, hi = lo * 4, hi * 4
    return lo, hi


def level_set(desc: ic.MifDescriptor, alpha=1.0, window: Sequence[float] | None = None) -> np.ndarray:
    """Points ``x`` of the window with ``I(x) = alpha``.

    Solves ``arg I(x) = arg alpha + 2 pi k`` for every admissible ``k`` by
    bisection on the increasing argument, so consecutive solutions differ in
    argument by exactly ``2 pi``.

    Args:
        desc: nonconstant descriptor.
        alpha: unimodular level.
        window: ``(xmin, xmax)``. May be omitted for finite Blaschke
            products, in which case the whole line is searched.

    Raises:
        ConstantMif: for constant descriptors.

    Examples:
        >>> level_set(ic.MifDescriptor([1j]), -1.0).tolist()
        [0.0]
    """
    if desc.is_constant:
        raise ConstantMif("constant inner function has no level sets")
    alpha = _unimodular(alpha)
    base = float(np.angle(alpha))
    if window is None:
        if not desc.is_rational:
            raise InputError("a finite window is required unless the input is a finite Blaschke product")
        left, right = ic.arg_limits(desc)
        k0 = math.ceil((left - base) / (2 * math.pi))
        k1 = math.floor((right - base) / (2 * math.pi))
        targets = base + 2 * math.pi * np.arange(k0, k1 + 1)
        # the limits themselves are never attained
        targets = targets[(targets - left > 1e-12) & (right - targets > 1e-12)]
        if targets.size == 0:
            return targets
        lo, hi = _full_line_window(desc, targets)
        return monotone_roots(lambda x: ic.arg_mif(desc, x), targets, (lo, hi))
    lo, hi = map(float, window)
    if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
        raise InputError("window must be finite with xmin < xmax")
    phi = _argument_function(desc, max(abs(lo), abs(hi)))
    end_vals = np.asarray(phi(np.array([lo, hi])))
    k0 = math.ceil((end_vals[0] - base) / (2 * math.pi))
    k1 = math.floor((end_vals[1] - base) / (2 * math.pi))
    targets = base + 2 * math.pi * np.arange(k0, k1 + 1)
    n_check = int(min(4097, max(65, 4 * targets.size + 1)))
    return monotone_roots(phi, targets, (lo, hi), n_check=n_check)


def infinity_mass(desc: ic.MifDescriptor, alpha=1.0) -> tuple[float, bool]:
    """Mass at infinity of the Clark measure and whether it is certified.

    * pure ``S^a``: ``p = 0`` (``Re`` of the Herglotz function stays bounded);
    * finite Blaschke product with ``I(inf) = alpha``: ``p = 1/sum Im lam``,
      from ``I(z) = alpha (1 - 2i V/z + O(z^-2))`` with ``V = sum Im lam``;
    * finite Blaschke product with ``I(inf) != alpha``: ``p = 0``;
    * generated products: ``0``, not certified.
    """
    alpha = _unimodular(alpha)
    if desc.generator is not None:
        return 0.0, False
    if desc.exp_mass > 0 or desc.zeros.size == 0:
        return 0.0, True
    at_inf = desc.rotation * np.prod(ic.normalizers(desc.zeros))
    if abs(at_inf - alpha) < 1e-12:
        return 1.0 / float(np.sum(desc.zeros.imag)), True
    return 0.0, True


def clark_measure(desc: ic.MifDescriptor, alpha=1.0,
                  window: Sequence[float] | None = None) -> AtomicMeasure:
    """Atoms ``x`` of ``{I = alpha}`` with masses ``2 pi / |I'(x)|``.

    Examples:
        >>> m = clark_measure(ic.pure_singular(2 * math.pi), 1.0, (-2.5, 2.5))
        >>> m.xs.round(12).tolist(), m.masses.round(12).tolist()
        ([-2.0, -1.0, 0.0, 1.0, 2.0], [1.0, 1.0, 1.0, 1.0, 1.0])
    """
    xs = level_set(desc, alpha, window)
    masses = 2 * math.pi / np.asarray(ic.darg_mif(desc, xs, tol=1e-9), dtype=float)
    p, ok = infinity_mass(desc, alpha)
    flags = () if ok else ("infinity_mass_uncertified",)
    if window is not None:
        flags = flags + (f"window={float(window[0])!r},{float(window[1])!r}",)
    return AtomicMeasure(xs, masses, p, flags)


# ----------------------------------------------------------------------------
# Inverse map: measure -> inner function
# ----------------------------------------------------------------------------


def herglotz(mu: AtomicMeasure, z) -> np.ndarray:
    """Herglotz function ``m`` with ``Re m`` the Poisson integral of ``mu``.

    ``m(z) = -i p z + (i/pi) sum mass_n [1/(z - x_n) + x_n/(1 + x_n^2)]``; the
    convergence terms make ``m(i)`` real, which fixes the free imaginary
    constant.
    """
    zz = np.asarray(z, dtype=complex)
    out = -1j * mu.infinity_mass * zz
    if mu.xs.size:
        d = zz[..., None] - mu.xs
        if np.any(d == 0):
            raise OnSupport("Herglotz function evaluated at an atom")
        conv = mu.xs / (1.0 + mu.xs**2)
        out = out + (1j / math.pi) * np.sum(mu.masses * (1.0 / d + conv), axis=-1)
    return out


def mif_from_measure(mu: AtomicMeasure, z, alpha=1.0):
    """Inner function whose Clark measure at level ``alpha`` is ``mu``.

    Returns ``alpha (m(z) - 1)/(m(z) + 1)`` with ``m`` from :func:`herglotz`.

    Raises:
        EmptyMeasure: for the zero measure.
    """
    if mu.is_empty:
        raise EmptyMeasure("the zero measure has no associated inner function")
    alpha = _unimodular(alpha)
    m = herglotz(mu, z)
    out = alpha * (m - 1.0) / (m + 1.0)
    return out[()] if np.ndim(out) == 0 else out


def cauchy_integral(values, mu: AtomicMeasure, z) -> np.ndarray:
    """``(1/(2 pi i)) sum f(x_n) mass_n / (x_n - z)``.

    Raises:
        OnSupport: if ``z`` is an atom.
    """
    f = np.asarray(values, dtype=complex).ravel()
    if f.size != mu.xs.size:
        raise InputError("need one sample per atom")
    zz = np.asarray(z, dtype=complex)
    if mu.xs.size == 0:
        return np.zeros(zz.shape, complex)[()] if zz.ndim == 0 else np.zeros(zz.shape, complex)
    d = mu.xs - zz[..., None]
    if np.any(d == 0):
        raise OnSupport("Cauchy integral evaluated on the support")
    out = np.sum(f * mu.masses / d, axis=-1) / (2j * math.pi)
    return out[()] if np.ndim(out) == 0 else out


def clark_recover(samples, desc: ic.MifDescriptor, z, *, alpha=1.0,
                  measure: AtomicMeasure | None = None,
                  window: Sequence[float] | None = None):
    """Reconstruct ``f`` in the model space from its values on the atoms.

    ``f(z) = (1 - conj(alpha) I(z)) * K(f sigma_alpha)(z)`` with ``K`` the
    Cauchy integral. ``samples`` are aligned with the atoms of ``measure``
    (computed from ``desc`` on ``window`` when not given).

    Raises:
        InfiniteMassUnsupported: if the Clark measure has mass at infinity.
    """
    alpha = _unimodular(alpha)
    if measure is None:
        measure = clark_measure(desc, alpha, window)
    if measure.infinity_mass > 0:
        raise InfiniteMassUnsupported(
            "recovery with a point mass at infinity is not supported; choose another alpha"
        )
    theta = ic.eval_mif(desc, z, tol=1e-12)
    return (1.0 - np.conj(alpha) * theta) * cauchy_integral(samples, measure, z)


def suggest_window(z: complex, tol: float, *, density: float = 1.0, sample_bound: float = 1.0) -> tuple[float, float]:
    """Symmetric window for a Cauchy sum at ``z`` with a rough tail target.

    Atoms of mass ``1/density`` per unit length with samples bounded by
    ``sample_bound`` and decaying like ``1/|x|`` contribute a tail of about
    ``sample_bound / (2 pi density R)`` beyond ``|x| = R``; the window is
    chosen to push that estimate below ``tol``.
    """
    z = complex(z)
    R = abs(z.real) + abs(z.imag) + sample_bound / (2 * math.pi * density * tol)
    return -R, R
