"""Diagnostics for the Toeplitz order of meromorphic inner functions.

Two inner functions are compared through half the difference of their
arguments, ``phi(I, J) = (arg I - arg J)/2``, its harmonic conjugate
``phi~`` (so that ``phi + i phi~`` extends analytically to the upper
half-plane) and the outer function ``h = exp(phi~ - i phi)`` which maps
``K_I`` to ``K_J`` by multiplication. The tests here turn the known
sufficient and necessary conditions into finite-window numerical checks;
apart from the exact branches of :func:`order_verdict` every outcome is
evidence, not proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import inner_core as ic
from . import model_fd
from .errors import (InputError, MifError, NotApplicable, NumericalUnderflow,
                     PVNotSettled, TailDivergent, TailModelUnfit, TailNotSettled,
                     TruncationNotConverged)
from .inner_core import GridFunction, MifDescriptor
from .numerics import (grid_improper_integral, hilbert_transform, improper_integral,
                       poisson_integral)

#: Default drift margin in radians.
DRIFT_MARGIN = 0.1
#: Default comparability bound for the derivative-ratio tests.
RATIO_BOUND = 1e3
#: Window doublings used by the bounded-conjugate test.
DOUBLINGS = 3
# The integrability test only needs finiteness: tails count as certified when the
# remainder estimate is below this fraction of the value.
FINITENESS_REL_TOL = 1e-3
# Truncation tolerance of the heuristic diagnostics per unit of (1 + |x|):
# the truncation error of generated products grows linearly in x.
DIAGNOSTIC_TOL = 1e-8


def _scaled_tol(x, tol: float = DIAGNOSTIC_TOL) -> np.ndarray:
    return tol * (1.0 + np.abs(np.asarray(x, dtype=float)))

RELATIONS = (
    "dominates", "dominated", "equivalent",
    "dominates-evidence", "dominated-evidence", "equivalent-evidence",
    "not-equivalent-evidence", "incomparable-evidence", "inconclusive",
)


@dataclass(frozen=True)
class Evidence:
    """One diagnostic outcome cited by a verdict."""

    test: str
    value: float
    threshold: float
    outcome: str
    boundary: bool = False
    note: str = ""

    def to_json(self) -> dict:
        out = {"test": self.test, "value": _num(self.value), "threshold": _num(self.threshold),
               "outcome": self.outcome}
        if self.boundary:
            out["boundary"] = True
        if self.note:
            out["note"] = self.note
        return out


def _num(v):
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


@dataclass(frozen=True)
class OrderVerdict:
    relation: str
    evidence: tuple = ()
    exact: bool = False

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")

    def to_json(self) -> dict:
        return {"relation": self.relation, "exact": self.exact,
                "evidence": [e.to_json() for e in self.evidence]}


# ----------------------------------------------------------------------------
# Difference of arguments and its conjugate
# ----------------------------------------------------------------------------


def phi_diff(I: MifDescriptor, J: MifDescriptor, grid, tol: float = 1e-8, *,
             scaled: bool = False) -> GridFunction:
    """``(arg I - arg J)/2`` on the grid, with an exact evaluator attached.

    With ``scaled=True`` the truncation tolerance at ``x`` is
    ``tol * (1 + |x|)``.

    Generated products are truncated on a common window with shared zeros
    cancelled, which keeps the difference well defined even when each
    argument alone grows without bound.
    """
    xs = np.asarray(grid, dtype=float)
    if xs.size == 0:
        raise InputError("grid must be nonempty")

    if I.generator is None and J.generator is None:
        a, b = ic.cancel_common(I.zeros, J.zeros)
        fI = ic.arg_function(ic.replace(I, zeros=a), 0.5)
        fJ = ic.arg_function(ic.replace(J, zeros=b), 0.5)

        def ev(x):
            return fI(x) - fJ(x)
    else:
        def ev(x):
            return 0.5 * ic.arg_diff(I, J, x, tol=_scaled_tol(x, tol) if scaled else tol)

    return GridFunction(xs, ev(xs), {"kind": "phi_diff", "I": I, "J": J, "evaluator": ev})


def _closed_form_available(I: MifDescriptor, J: MifDescriptor) -> bool:
    return I.exp_mass == J.exp_mass


def _log_modulus_terms(zeros: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``sum_k log|x - conj lam_k| - log|lam_k|`` (vanishes at ``x = 0``)."""
    out = np.zeros(x.shape)
    if zeros.size == 0:
        return out
    u, v = zeros.real, zeros.imag
    for c in ic._chunks(zeros.size, x.size):
        xx = x[..., None]
        # log((x-u)^2+v^2) - log(u^2+v^2) = log1p((x^2 - 2ux)/(u^2+v^2))
        out = out + 0.5 * np.sum(np.log1p((xx * xx - 2 * u[c] * xx) / (u[c] ** 2 + v[c] ** 2)), axis=-1)
    return out


def conjugate_closed_form(I: MifDescriptor, J: MifDescriptor, x, tol: float = 1e-8, *,
                          scaled: bool = False):
    """Exact ``phi~(I, J)(x) - phi~(I, J)(0)`` from the zeros.

    For equal exponential masses ``phi~ = log|E_I / E_J|`` up to a constant,
    where ``E`` carries the conjugate zeros. Generated products use a shared
    truncation window with common zeros cancelled.

    Raises:
        TailDivergent: if the exponential masses differ (then ``phi`` has a
            linear part and no Poisson-summable conjugate).
    """
    if not _closed_form_available(I, J):
        raise TailDivergent("exponential masses differ: the difference of arguments is not Poisson summable")
    xx = np.asarray(x, dtype=float)
    flat = xx.ravel()

    def at(k):
        a, b = ic.joint_materialize([I, J], k, cancel=True)
        return _log_modulus_terms(a.zeros, flat) - _log_modulus_terms(b.zeros, flat)

    if I.generator is None and J.generator is None:
        a, b = ic.cancel_common(I.zeros, J.zeros)
        out = _log_modulus_terms(a, flat) - _log_modulus_terms(b, flat)
    else:
        start = ic.covering_width([I, J], float(np.max(np.abs(flat), initial=0.0)))
        tols = _scaled_tol(flat, tol) if scaled else tol
        out = ic.settle(at, tols, start=start).values
    out = out.reshape(xx.shape)
    return out[()] if out.ndim == 0 else out


def harmonic_conjugate(phi: GridFunction, method: str = "auto", *, tol: float = 1e-7,
                       scaled: bool = False) -> GridFunction:
    """Harmonic conjugate of ``phi`` on its grid, normalised to vanish at 0.

    Args:
        phi: usually the output of :func:`phi_diff`; any grid function with
            an ``"evaluator"`` in its metadata works for the quadrature path.
        method: ``"hilbert-quadrature"``, ``"closed-form-rational"`` or
            ``"auto"`` (closed form when the descriptors are available).
        tol: settling tolerance of the principal value, or the truncation
            tolerance of the closed form.
        scaled: closed form only; use ``tol * (1 + |x|)`` at ``x``.

    Raises:
        TailDivergent: when ``phi`` is not Poisson summable.
    """
    I, J = phi.metadata.get("I"), phi.metadata.get("J")
    if method == "auto":
        method = "closed-form-rational" if I is not None else "hilbert-quadrature"
    if method == "closed-form-rational":
        if I is None or J is None:
            raise InputError("closed form needs the descriptors of phi")
        ys = conjugate_closed_form(I, J, phi.xs, tol=tol, scaled=scaled)
        ev = lambda x: conjugate_closed_form(I, J, x, tol=tol, scaled=scaled)
        return GridFunction(phi.xs, ys, {"kind": "conjugate", "method": method, "evaluator": ev})
    if method != "hilbert-quadrature":
        raise InputError(f"unknown conjugation method {method!r}")
    if I is not None and J is not None and I.exp_mass != J.exp_mass:
        raise TailDivergent("exponential masses differ: the difference of arguments is not Poisson summable")
    f = phi.metadata.get("evaluator") or (lambda t: np.interp(t, phi.xs, phi.ys))
    pint = poisson_integral(lambda t: np.abs(f(t)), cutoff=1e4, tol=1e-6)
    if not math.isfinite(float(np.real(pint.value))) or pint.tail_exponent >= 1.0:
        raise TailDivergent(f"phi is not Poisson summable (tail exponent {pint.tail_exponent:.3g})")
    pts: list[float] = []
    for d in (I, J):
        if d is not None and d.generator is None:
            pts.extend(float(u) for u in d.zeros.real)
    scalar = lambda t: float(f(np.asarray(t, dtype=float)))
    h0 = hilbert_transform(scalar, 0.0, tol=tol, points=pts)
    ys = np.array([hilbert_transform(scalar, float(x), tol=tol, points=pts) for x in phi.xs]) - h0
    return GridFunction(phi.xs, ys, {"kind": "conjugate", "method": method})


# ----------------------------------------------------------------------------
# Drift of the argument difference
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class DriftResult:
    """Tail extrema of ``psi = arg J - arg I`` on both sides.

    ``drift_IJ = sup_left psi - inf_right psi`` governs the kernel
    ``N[conj(I) J]``; ``drift_JI = sup_right psi - inf_left psi`` governs
    ``N[conj(J) I]``. A drift below ``pi`` is evidence that the kernel is
    trivial, above ``pi`` that it is not.
    """

    verdict: str
    drift_IJ: float
    drift_JI: float
    kernel_IJ: str
    kernel_JI: str
    left_tail: tuple
    right_tail: tuple
    margin: float
    xmax: float

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "drift_IJ": self.drift_IJ, "drift_JI": self.drift_JI,
                "kernel_IJ": self.kernel_IJ, "kernel_JI": self.kernel_JI,
                "left_tail": list(self.left_tail), "right_tail": list(self.right_tail),
                "margin": self.margin, "xmax": self.xmax}


def _classify_drift(d: float, margin: float) -> str:
    if d < math.pi - margin:
        return "trivial"
    if d > math.pi + margin:
        return "nontrivial"
    return "boundary"


def _tail_settled(vals: np.ndarray, margin: float) -> bool:
    if float(np.ptp(vals)) <= margin:
        return True
    steps = np.diff(vals)
    return bool(np.all(steps >= -1e-12) or np.all(steps <= 1e-12))


def drift_test(I: MifDescriptor, J: MifDescriptor, xmax: float = 1e4,
               margin: float = DRIFT_MARGIN, n: int = 41, tol: float = 1e-6) -> DriftResult:
    """Kernel-triviality evidence from the tails of ``arg J - arg I``.

    The difference is sampled on the last decade ``[xmax/10, xmax]`` of a
    logarithmic grid on each side. A tail that moves by more than
    ``margin`` without being monotone is rejected; monotone tails
    (arguments with different exponential masses) are accepted and push the
    drift towards infinity.

    Raises:
        TailNotSettled: if a tail oscillates by more than ``margin``.
    """
    right = np.logspace(math.log10(xmax / 10), math.log10(xmax), n)
    left = -right[::-1]
    psi = ic.arg_diff(J, I, np.concatenate([left, right]), tol=tol)
    pl, pr = psi[:n], psi[n:]
    for side, vals in (("left", pl), ("right", pr)):
        if not _tail_settled(vals, margin):
            raise TailNotSettled(f"{side} tail of arg J - arg I varies by {np.ptp(vals):.3g}")
    d_ij = float(pl.max() - pr.min())
    d_ji = float(pr.max() - pl.min())
    k_ij, k_ji = _classify_drift(d_ij, margin), _classify_drift(d_ji, margin)
    if "boundary" in (k_ij, k_ji):
        verdict = "inconclusive"
    elif k_ij == "trivial" and k_ji == "trivial":
        verdict = "both-trivial-evidence"
    else:
        verdict = "kernel-nontrivial-evidence"
    return DriftResult(verdict, d_ij, d_ji, k_ij, k_ji,
                       (float(pl.min()), float(pl.max())), (float(pr.min()), float(pr.max())),
                       margin, float(xmax))


def argument_jump(I: MifDescriptor, J: MifDescriptor, xmax: float = 1e4, tol: float = 1e-6) -> dict:
    """Tail values of ``arg J - arg I`` at ``-xmax`` and ``+xmax`` and their jump.

    A jump of modulus below ``pi`` for a symbol that is continuous apart from
    the jump at infinity is the classical sufficient condition for an
    invertible Toeplitz operator.
    """
    psi = ic.arg_diff(J, I, np.array([-xmax, xmax]), tol=tol)
    jump = float(psi[1] - psi[0])
    return {"left": float(psi[0]), "right": float(psi[1]), "jump": jump,
            "abs_jump_below_pi": abs(jump) < math.pi}


# ----------------------------------------------------------------------------
# Necessary and sufficient conditions
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class RatioCheck:
    ratio: GridFunction
    spread: float
    bound: float
    passed: bool


def lemma3_check(I: MifDescriptor, J: MifDescriptor, grid, bound: float = RATIO_BOUND) -> RatioCheck:
    """Two-sided comparability of ``(|J'|/|I'|) exp(2 phi~(J, I))``.

    Equivalent inner functions make this ratio bounded above and below; a
    spread ``max/min`` above ``bound`` on the grid is evidence against
    equivalence.

    Raises:
        TailDivergent: if ``phi(J, I)`` has no Poisson-summable conjugate.
    """
    xs = np.asarray(grid, dtype=float)
    conj = GridFunction(xs, np.zeros_like(xs)) if _same(I, J) else harmonic_conjugate(
        phi_diff(J, I, xs, DIAGNOSTIC_TOL, scaled=True), tol=DIAGNOSTIC_TOL, scaled=True)
    with np.errstate(over="ignore"):
        r = (ic.darg_mif(J, xs, tol=_scaled_tol(xs)) / ic.darg_mif(I, xs, tol=_scaled_tol(xs))
             * np.exp(2 * conj.ys))
    spread = float(r.max() / r.min()) if np.all(r > 0) and np.all(np.isfinite(r)) else math.inf
    return RatioCheck(GridFunction(xs, r, {"kind": "lemma3_ratio"}), spread, bound, spread <= bound)


def _same(I: MifDescriptor, J: MifDescriptor) -> bool:
    if I is J:
        return True
    if I.exp_mass != J.exp_mass or abs(I.rotation - J.rotation) > 1e-15:
        return False
    if (I.generator is None) != (J.generator is None):
        return False
    if I.generator is not None and (I.generator.name != J.generator.name
                                    or dict(I.generator.params) != dict(J.generator.params)
                                    or I.generator.name == "custom"):
        return False
    a, b = ic.cancel_common(I.zeros, J.zeros)
    return a.size == 0 and b.size == 0


@dataclass(frozen=True)
class Theorem2Result:
    sufficient: bool
    integral_J: float
    integral_I: float
    certified: bool
    flags: tuple = ()


def theorem2_sufficient(I: MifDescriptor, J: MifDescriptor, *, cutoff: float = 1e4,
                        threshold: float = 1e12) -> Theorem2Result:
    """Square integrability of ``|J'|^(1/2) e^(-phi~)`` and ``|I'|^(1/2) e^(phi~)``.

    With ``phi = phi(I, J)`` both integrals ``int |J'| e^(-2 phi~)`` and
    ``int |I'| e^(2 phi~)`` must be finite, below ``threshold`` and carry
    certified tails for a positive answer; a positive answer is evidence of
    equivalence. Identical inputs are reported equivalent directly (flag
    ``identical``). Different exponential masses give a linear ``phi``
    without a conjugate, reported as ``False`` with flag ``tail-divergent``.
    """
    if _same(I, J):
        return Theorem2Result(True, math.nan, math.nan, True, ("identical",))
    if not _closed_form_available(I, J):
        return Theorem2Result(False, math.inf, math.inf, False, ("tail-divergent",))
    pts = [float(u) for d in (I, J) if d.generator is None for u in d.zeros.real]

    def gJ(x):
        x = np.asarray(x, float)
        return ic.darg_mif(J, x, tol=_scaled_tol(x)) * np.exp(-2 * conjugate_closed_form(I, J, x, DIAGNOSTIC_TOL, scaled=True))

    def gI(x):
        x = np.asarray(x, float)
        return ic.darg_mif(I, x, tol=_scaled_tol(x)) * np.exp(2 * conjugate_closed_form(I, J, x, DIAGNOSTIC_TOL, scaled=True))

    flags = []
    vals, certs = [], []
    for g in (gJ, gI):
        try:
            res = improper_integral(g, cutoff=cutoff, breakpoints=pts, tol=1e-6)
            v = float(np.real(res.value))
            vals.append(v)
            certs.append(bool(math.isfinite(v) and res.tail_exponent < -1.0
                              and res.remainder <= FINITENESS_REL_TOL * max(1.0, abs(v))))
        except (TailModelUnfit, TruncationNotConverged) as exc:
            vals.append(math.nan)
            certs.append(False)
            flags.append(f"tail-not-settled: {exc}")
    finite = all(math.isfinite(v) and v < threshold for v in vals)
    certified = all(certs)
    return Theorem2Result(bool(finite and certified), vals[0], vals[1], certified, tuple(flags))


@dataclass(frozen=True)
class Lemma4Result:
    verdict: str
    sups: tuple
    windows: tuple
    ratio_range: tuple


def lemma4_equiv_comparable(I: MifDescriptor, J: MifDescriptor, *, window: float = 100.0,
                            doublings: int = DOUBLINGS, bound: float = RATIO_BOUND,
                            n: int = 801, growth_tol: float = 0.05) -> Lemma4Result:
    """Bounded-conjugate test for inner functions with comparable derivatives.

    First checks ``1/bound < |I'|/|J'| < bound`` on the whole grid of the
    largest window (else :class:`NotApplicable`). Then the sup of
    ``|phi~(I, J)|`` is tracked over ``doublings`` successive doublings of
    the window: stable sups (relative growth below ``growth_tol`` in the last
    doubling) give ``equivalent-evidence``; growth at every doubling gives
    ``not-equivalent-evidence``; anything else is ``inconclusive``.
    """
    wins = [window * 2**k for k in range(doublings + 1)]
    big = wins[-1]
    xs = np.concatenate([-np.logspace(math.log10(big), -2, n // 2), [0.0],
                         np.logspace(-2, math.log10(big), n // 2)])
    ratio = ic.darg_mif(I, xs, tol=_scaled_tol(xs)) / ic.darg_mif(J, xs, tol=_scaled_tol(xs))
    rr = (float(ratio.min()), float(ratio.max()))
    if not (rr[0] > 1.0 / bound and rr[1] < bound):
        raise NotApplicable(f"derivatives not comparable: |I'|/|J'| ranges over [{rr[0]:.3g}, {rr[1]:.3g}]")
    if _same(I, J):
        return Lemma4Result("equivalent-evidence", tuple(0.0 for _ in wins), tuple(wins), rr)
    conj = harmonic_conjugate(phi_diff(I, J, xs, DIAGNOSTIC_TOL, scaled=True),
                              tol=DIAGNOSTIC_TOL, scaled=True)
    sups = tuple(float(np.max(np.abs(conj.ys[np.abs(xs) <= w]))) for w in wins)
    incs = np.diff(sups)
    if incs[-1] <= growth_tol * max(sups[-1], 1e-12):
        verdict = "equivalent-evidence"
    elif np.all(incs > growth_tol * np.maximum(np.asarray(sups[1:]), 1e-12)):
        verdict = "not-equivalent-evidence"
    else:
        verdict = "inconclusive"
    return Lemma4Result(verdict, sups, tuple(wins), rr)


# ----------------------------------------------------------------------------
# Log|H^2| membership and decay rates
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class LogH2Result:
    passed: bool
    poisson_value: float
    poisson_exponent: float
    exp_value: float
    exp_exponent: float


def logH2_membership(f) -> LogH2Result:
    """Test whether ``f`` is ``log|g|`` for some ``g`` in ``H^2``.

    That holds iff ``int |f| dx/(1+x^2) < inf`` and ``int e^(2f) dx < inf``.
    ``f`` is a vectorised callable or a :class:`GridFunction` whose grid
    reaches at least two decades beyond 10 on both sides. Both integrals use
    fitted power-law tails; the exponents are reported.

    Raises:
        TailModelUnfit: if a tail is not described by a power law.
    """
    if isinstance(f, GridFunction) and "evaluator" not in f.metadata:
        pres = poisson_integral(GridFunction(f.xs, np.abs(f.ys)))
        eres = grid_improper_integral(f.xs, np.exp(2 * f.ys))
    else:
        ev = f.metadata["evaluator"] if isinstance(f, GridFunction) else f
        pres = poisson_integral(lambda x: np.abs(ev(x)))
        eres = improper_integral(lambda x: np.exp(2 * np.asarray(ev(x), float)))
    pv, ev_ = float(np.real(pres.value)), float(np.real(eres.value))
    ok = math.isfinite(pv) and math.isfinite(ev_) and pres.tail_exponent < 1 and eres.tail_exponent < -1
    return LogH2Result(bool(ok), pv, pres.tail_exponent, ev_, eres.tail_exponent)


def theorem2_necessary(I: MifDescriptor, J: MifDescriptor, grid=None) -> tuple[LogH2Result, complex]:
    """Necessary condition for equivalence through a divided zero.

    With ``a`` the zero of ``I`` of smallest modulus, equivalence forces the
    conjugate of ``phi(J, I/b_a)`` into ``Log|H^2|``. Returns the membership
    result and the zero used.
    """
    if I.generator is not None or J.generator is not None:
        raise NotApplicable("the divided-zero test is implemented for finite zero lists")
    if I.zeros.size == 0:
        raise NotApplicable("I has no zeros to divide out")
    k = int(np.argmin(np.abs(I.zeros)))
    a = I.zeros[k]
    Ia = MifDescriptor(np.delete(I.zeros, k), I.exp_mass, I.rotation)
    f = lambda x: conjugate_closed_form(J, Ia, x)
    return logH2_membership(f), complex(a)


@dataclass(frozen=True)
class DecayEstimate:
    slope: float
    base_element_evidence: bool
    ys: tuple


def decay_rate_iy(f: Callable[[complex], complex], ymax: float = 1e6, *, margin: float = 0.05,
                  n: int = 41) -> DecayEstimate:
    """Slope of ``log|f(iy)|`` against ``log y`` over ``[ymax/100, ymax]``.

    ``base_element_evidence`` is set when the slope exceeds ``-3/2 + margin``
    (decay slower than ``y^(-3/2)``).

    Raises:
        NumericalUnderflow: if ``f(iy)`` vanishes or overflows on the range.
    """
    ys = np.logspace(math.log10(ymax / 100), math.log10(ymax), n)
    vals = np.abs(np.asarray([f(1j * y) for y in ys], dtype=complex))
    if not np.all(np.isfinite(vals)) or np.any(vals == 0):
        raise NumericalUnderflow("f(iy) underflows or overflows; reduce ymax")
    slope = float(np.polyfit(np.log(ys), np.log(vals), 1)[0])
    return DecayEstimate(slope, slope > -1.5 + margin, (float(ys[0]), float(ys[-1])))


# ----------------------------------------------------------------------------
# Aggregated verdict
# ----------------------------------------------------------------------------


def _residual_division(I: MifDescriptor, J: MifDescriptor, widths=(256, 512, 1024)):
    """Stable leftover zeros after cancelling common zeros on growing windows.

    Returns ``(only_in_I, only_in_J)`` if the leftovers are identical for all
    widths (so the two products differ by finitely many zeros), else None.
    """
    prev = None
    for w in widths:
        a, b = ic.joint_materialize([I, J], w, cancel=True)
        cur = (np.sort_complex(a.zeros), np.sort_complex(b.zeros))
        if prev is not None and not (cur[0].shape == prev[0].shape and cur[1].shape == prev[1].shape
                                     and np.allclose(cur[0], prev[0]) and np.allclose(cur[1], prev[1])):
            return None
        prev = cur
    return prev


def _exact_relation(I: MifDescriptor, J: MifDescriptor):
    """Exact relation when one function divides the other (or both are rational)."""
    if _same(I, J):
        return "equivalent", "identical inputs (symbol is constant)"
    if I.is_rational and J.is_rational:
        rel = model_fd.order_relation(model_fd.RationalInner(I.zeros, I.rotation),
                                      model_fd.RationalInner(J.zeros, J.rotation))
        return rel, "finite Blaschke products: kernel dimensions"
    if I.zeros.size == 0 and J.zeros.size == 0 and I.generator is None and J.generator is None:
        if I.exp_mass == J.exp_mass:
            return "equivalent", "equal exponential factors"
        return ("dominated" if I.exp_mass < J.exp_mass else "dominates"), "exponential factors divide each other"
    if (I.generator is None) != (J.generator is None):
        return None
    res = _residual_division(I, J) if I.generator is not None else (
        ic.cancel_common(I.zeros, J.zeros))
    if res is None:
        return None
    only_i, only_j = res
    da = I.exp_mass - J.exp_mass
    if only_j.size == 0 and da >= 0 and (only_i.size or da > 0):
        if only_i.size:
            k = model_fd.toeplitz_kernel_rational(model_fd.RationalInner(only_i), model_fd.RationalInner([]))
            if not (k.dim == only_i.size and k.certified):
                return None
        return "dominates", f"J divides I; quotient has {only_i.size} zeros and exponent {da:g}"
    if only_i.size == 0 and da <= 0 and (only_j.size or da < 0):
        if only_j.size:
            k = model_fd.toeplitz_kernel_rational(model_fd.RationalInner(only_j), model_fd.RationalInner([]))
            if not (k.dim == only_j.size and k.certified):
                return None
        return "dominated", f"I divides J; quotient has {only_j.size} zeros and exponent {-da:g}"
    return None


def order_verdict(I: MifDescriptor, J: MifDescriptor, *, xmax: float = 1e4,
                  margin: float = DRIFT_MARGIN, bound: float = RATIO_BOUND) -> OrderVerdict:
    """Relation between the dominance sets of ``I`` and ``J``.

    Exact answers (no suffix) are returned for finite Blaschke products,
    identical inputs, pairs of exponential factors and pairs where one
    function divides the other with a finite or exponential quotient (the
    divisor's dominance set is then strictly smaller). Otherwise the drift,
    derivative-ratio, square-integrability and bounded-conjugate tests are
    combined and the relation carries an ``-evidence`` suffix, or is
    ``inconclusive`` when any cited test sits within its margin.
    """
    exact = _exact_relation(I, J)
    if exact is not None:
        rel, note = exact
        return OrderVerdict(rel, (Evidence("exact", 1.0, 1.0, rel, note=note),), True)

    evidence: list[Evidence] = []
    boundary = False
    drift = None
    try:
        drift = drift_test(I, J, xmax=xmax, margin=margin)
        evidence.append(Evidence("drift_IJ", drift.drift_IJ, math.pi, drift.kernel_IJ,
                                 drift.kernel_IJ == "boundary", "kernel of conj(I)J"))
        evidence.append(Evidence("drift_JI", drift.drift_JI, math.pi, drift.kernel_JI,
                                 drift.kernel_JI == "boundary", "kernel of conj(J)I"))
        boundary |= drift.verdict == "inconclusive"
    except MifError as exc:
        evidence.append(Evidence("drift", math.nan, math.pi, "error", note=type(exc).__name__))

    equivalent = None
    try:
        t2 = theorem2_sufficient(I, J)
        evidence.append(Evidence("theorem2", max(t2.integral_I, t2.integral_J), 1e12,
                                 "sufficient" if t2.sufficient else "not-shown", note=",".join(t2.flags)))
        if t2.sufficient:
            equivalent = True
    except MifError as exc:
        evidence.append(Evidence("theorem2", math.nan, 1e12, "error", note=type(exc).__name__))

    grid = np.concatenate([-np.logspace(math.log10(xmax), -1, 60), [0.0], np.logspace(-1, math.log10(xmax), 60)])
    try:
        l3 = lemma3_check(I, J, grid, bound)
        evidence.append(Evidence("lemma3_spread", l3.spread, bound, "pass" if l3.passed else "fail",
                                 abs(math.log(max(l3.spread, 1e-300)) - math.log(bound)) < 0.1))
        if not l3.passed:
            equivalent = False if equivalent is None else equivalent
        boundary |= evidence[-1].boundary
    except MifError as exc:
        evidence.append(Evidence("lemma3_spread", math.nan, bound, "error", note=type(exc).__name__))

    try:
        l4 = lemma4_equiv_comparable(I, J, bound=bound)
        evidence.append(Evidence("lemma4_sup", l4.sups[-1], l4.sups[-2], l4.verdict,
                                 l4.verdict == "inconclusive"))
        if l4.verdict == "equivalent-evidence" and equivalent is None:
            equivalent = True
        elif l4.verdict == "not-equivalent-evidence":
            equivalent = False
    except NotApplicable as exc:
        evidence.append(Evidence("lemma4_sup", math.nan, bound, "not-applicable", note=str(exc)))
    except MifError as exc:
        evidence.append(Evidence("lemma4_sup", math.nan, bound, "error", note=type(exc).__name__))

    ev = tuple(evidence)
    if boundary:
        return OrderVerdict("inconclusive", ev)
    if equivalent:
        return OrderVerdict("equivalent-evidence", ev)
    if drift is not None:
        if drift.kernel_IJ == "nontrivial" and drift.kernel_JI == "trivial":
            # a nontrivial kernel of conj(I)J puts J in the dominance set of I
            return OrderVerdict("dominates-evidence", ev)
        if drift.kernel_JI == "nontrivial" and drift.kernel_IJ == "trivial":
            return OrderVerdict("dominated-evidence", ev)
    if equivalent is False:
        return OrderVerdict("not-equivalent-evidence", ev)
    return OrderVerdict("inconclusive", ev)
