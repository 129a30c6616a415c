"""Beurling-Malliavin type diagnostics on finite windows.

Long and short interval families, the exterior (effective) density
``D*``, non-increasing majorants of argument profiles and the
``kappa``-almost-decreasing test, together with the exponential-dominance,
comparison and type diagnostics built on them.

Everything here looks at a finite window of an intended infinite object,
so "long" is always a finite-window classification: a family is called
long when the weight carried by each of the outermost dyadic shells stays
above a fixed threshold. The same rule is used by the density search and
by :func:`family_weight_sum`, so the two agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import inner_core as ic
from .clark import AtomicMeasure
from .errors import BoundaryUncertain, InputError, NotApplicable, WindowExhausted
from .inner_core import GridFunction, MifDescriptor, ZeroGenerator

#: Minimum weight per dyadic shell for a family to count as long.
SHELL_THRESHOLD = 0.25
#: Number of outermost shells that must all carry the threshold weight.
SHELLS_TESTED = 3
#: Anchor points per shell and side in the density search.
ANCHORS_PER_SHELL = 64
#: Extent used when materialising generated sequences.
GENERATOR_EXTENT = 2.0**16
# Irrational offset of the candidate grid, so interval endpoints do not sit
# on lattice points (closed-interval counts would then flip under rounding).
_PHASE = (math.sqrt(5.0) - 1.0) / 2.0
#: Bisection steps for the density.
BISECTION_STEPS = 20


@dataclass(frozen=True, eq=False)
class IntervalFamily:
    """Disjoint closed intervals ``[l_n, r_n]`` with a weight exponent ``kappa``."""

    intervals: np.ndarray
    kappa: float = 0.0

    def __post_init__(self):
        iv = np.asarray(self.intervals, dtype=float).reshape(-1, 2)
        if iv.size:
            order = np.argsort(iv[:, 0], kind="stable")
            iv = iv[order]
            if np.any(iv[:, 1] <= iv[:, 0]):
                raise InputError("intervals need r > l")
            if np.any(iv[1:, 0] < iv[:-1, 1]):
                raise InputError("intervals must be disjoint")
        if self.kappa < 0:
            raise InputError("kappa must be non-negative")
        object.__setattr__(self, "intervals", iv)

    def __len__(self) -> int:
        return self.intervals.shape[0]

    def distances(self) -> np.ndarray:
        """Distance of each interval to the origin."""
        l, r = self.intervals[:, 0], self.intervals[:, 1]
        return np.where((l <= 0) & (r >= 0), 0.0, np.minimum(np.abs(l), np.abs(r)))

    def terms(self, kappa: float | None = None) -> np.ndarray:
        k = self.kappa if kappa is None else kappa
        lengths = self.intervals[:, 1] - self.intervals[:, 0]
        return (self.distances() + 1.0) ** (k - 2.0) * lengths**2

    def to_json(self) -> dict:
        return {"intervals": self.intervals.tolist(), "kappa": self.kappa}


def _shell_index(dist: np.ndarray) -> np.ndarray:
    """Dyadic shell of each distance: 0 for ``dist < 1``, ``j`` for ``[2^(j-1), 2^j)``."""
    d = np.asarray(dist, dtype=float)
    out = np.zeros(d.shape, dtype=int)
    pos = d >= 1
    out[pos] = np.floor(np.log2(d[pos])).astype(int) + 1
    return out


@dataclass(frozen=True)
class WeightSum:
    total: float
    classification: str
    shell_sums: tuple

    def __iter__(self):
        yield self.total
        yield self.classification


def family_weight_sum(fam: IntervalFamily, kappa: float | None = None,
                      threshold: float = SHELL_THRESHOLD) -> WeightSum:
    """Weighted sum ``sum (dist(I_n, 0) + 1)^(kappa - 2) |I_n|^2`` and its classification.

    The terms are grouped into dyadic shells by distance to the origin.

    * ``short``: fewer than three occupied shells, or the last three shell
      sums decay at least geometrically (each at most half the previous);
    * ``long``: the last three shell sums are all at least ``threshold`` and
      the last is at least half of the first of them;
    * ``window-limited``: anything else.

    Examples:
        >>> family_weight_sum(IntervalFamily([[0.0, 1.0]])).classification
        'short'
    """
    terms = fam.terms(kappa)
    total = float(terms.sum())
    if len(fam) == 0:
        return WeightSum(0.0, "short", ())
    shells = _shell_index(fam.distances())
    occupied = np.unique(shells)
    sums = np.bincount(shells - shells.min(), weights=terms)
    sums = tuple(float(s) for s in sums)
    if occupied.size < 3:
        return WeightSum(total, "short", sums)
    last = sums[-3:]
    if min(last) >= threshold and last[-1] >= 0.5 * last[0]:
        cls = "long"
    elif last[2] <= 0.5 * last[1] and last[1] <= 0.5 * last[0]:
        cls = "short"
    else:
        cls = "window-limited"
    return WeightSum(total, cls, sums)


# ----------------------------------------------------------------------------
# Exterior density
# ----------------------------------------------------------------------------


def project_to_line(points) -> np.ndarray:
    """Real projection ``lam' = 1/Re(1/lam) = |lam|^2 / Re(lam)``.

    Real input is returned sorted. Points on the imaginary axis project to
    infinity and are dropped.
    """
    p = np.asarray(points)
    if np.iscomplexobj(p) and np.any(p.imag != 0):
        re = p.real
        keep = re != 0
        p = (np.abs(p[keep]) ** 2) / re[keep]
    return np.sort(np.asarray(p, dtype=float).real)


def sequence_points(seq, extent: float = GENERATOR_EXTENT) -> tuple[np.ndarray, float]:
    """Real points of a sequence and the extent of the window they cover.

    Generators are materialised by doubling the index window until the
    number of projected points within ``[-extent, extent]`` stops changing.

    Raises:
        WindowExhausted: if that does not happen within the index budget.
    """
    if isinstance(seq, MifDescriptor):
        if seq.generator is None:
            return sequence_points(seq.zeros, extent)
        base = seq.zeros
        seq = seq.generator
    else:
        base = np.zeros(0, complex)
    if isinstance(seq, ZeroGenerator):
        width = ic.START_WINDOW
        prev = -1
        while width <= ic.MAX_WINDOW:
            pts = project_to_line(np.concatenate([base, seq.materialize(width)]))
            inside = int(np.sum(np.abs(pts) <= extent))
            if inside == prev and pts.size and np.max(np.abs(pts)) > extent:
                return pts[np.abs(pts) <= extent], extent
            if seq.is_finite() and inside == prev:
                return pts, float(np.max(np.abs(pts), initial=0.0))
            prev = inside
            width *= 2
        raise WindowExhausted("generator does not cover the density window within the index budget")
    pts = project_to_line(seq)
    if not np.all(np.isfinite(pts)):
        raise InputError("sequence contains non-finite points")
    return pts, float(np.max(np.abs(pts), initial=0.0))


def _count(points: np.ndarray, l: np.ndarray, r: np.ndarray) -> np.ndarray:
    return np.searchsorted(points, r, side="right") - np.searchsorted(points, l, side="left")


def _candidates(A: float) -> tuple[np.ndarray, np.ndarray]:
    """Candidate intervals in the shell ``A/2 <= |x| < A`` (both sides)."""
    half = A / 2
    anchors = half + half * (np.arange(ANCHORS_PER_SHELL) + _PHASE) / ANCHORS_PER_SHELL
    L_max = half
    L_min = SHELL_THRESHOLD * A / 2
    n_len = int(math.floor(4 * math.log2(L_max / L_min)))
    lengths = L_max * 2.0 ** (-(np.arange(n_len) + _PHASE) / 4)
    g, L = np.meshgrid(anchors, lengths, indexing="ij")
    g, L = g.ravel(), L.ravel()
    ls = np.concatenate([g, g - L])
    rs = np.concatenate([g + L, g])
    inside = (ls >= half) & (rs < A)
    ls, rs = ls[inside], rs[inside]
    ls, rs = np.concatenate([ls, -rs]), np.concatenate([rs, -ls])
    return ls, rs


def _best_disjoint(l: np.ndarray, r: np.ndarray, w: np.ndarray) -> tuple[float, np.ndarray]:
    """Weighted interval scheduling (strictly disjoint closed intervals)."""
    if l.size == 0:
        return 0.0, np.zeros(0, dtype=int)
    order = np.argsort(r, kind="stable")
    l, r, w = l[order], r[order], w[order]
    # p[i]: number of intervals ending strictly before l[i]
    p = np.searchsorted(r, l, side="left")
    best = np.zeros(l.size + 1)
    take = np.zeros(l.size, dtype=bool)
    for i in range(l.size):
        with_i = w[i] + best[p[i]]
        if with_i > best[i]:
            best[i + 1] = with_i
            take[i] = True
        else:
            best[i + 1] = best[i]
    chosen = []
    i = l.size
    while i > 0:
        if take[i - 1]:
            chosen.append(i - 1)
            i = p[i - 1]
        else:
            i -= 1
    return float(best[-1]), order[np.array(chosen[::-1], dtype=int)]


def _shell_family(points: np.ndarray, A: float, d: float, kappa: float = 0.0):
    l, r = _candidates(A)
    L = r - l
    keep = _count(points, l, r) >= d * L
    l, r, L = l[keep], r[keep], L[keep]
    dist = np.minimum(np.abs(l), np.abs(r))
    w = (dist + 1.0) ** (kappa - 2.0) * L**2
    total, idx = _best_disjoint(l, r, w)
    return total, np.column_stack([l[idx], r[idx]])


def _is_long(points: np.ndarray, extent: float, d: float):
    # shells [A/2, A) with A = extent / 2^j, outermost last
    shells = [extent / 2.0**j for j in range(SHELLS_TESTED - 1, -1, -1)]
    if shells[0] < 2.0:
        return False, [], np.zeros((0, 2))
    weights, fams = [], []
    for A in shells:
        wsum, fam = _shell_family(points, A, d)
        weights.append(wsum)
        fams.append(fam)
    fam = np.concatenate(fams) if fams else np.zeros((0, 2))
    return all(w >= SHELL_THRESHOLD for w in weights), weights, fam


@dataclass(frozen=True)
class DensityResult:
    dstar_counting: float
    dstar_type: float
    witness: IntervalFamily
    extent: float
    shell_weights: tuple

    def to_json(self) -> dict:
        return {"dstar_counting": self.dstar_counting, "dstar_type": self.dstar_type,
                "extent": self.extent, "shell_weights": list(self.shell_weights),
                "witness": self.witness.to_json()}


def bm_density(seq, *, extent: float | None = None, steps: int = BISECTION_STEPS) -> DensityResult:
    """Exterior density of a real (or projected complex) sequence on a window.

    For a trial density ``d`` the three outermost dyadic shells of the window
    are searched for disjoint intervals with ``#(points in I) >= d |I|``;
    candidates are anchored on a fixed grid (independent of the points) with
    lengths on a geometric ladder, and the heaviest disjoint selection per
    shell is found by weighted interval scheduling. ``d`` is admissible when
    every tested shell carries weight at least :data:`SHELL_THRESHOLD`; the
    largest admissible ``d`` is bracketed by doubling and then bisected.

    Args:
        seq: real or complex points, a :class:`ZeroGenerator` or a generated
            :class:`MifDescriptor`. Complex points are projected with
            :func:`project_to_line`.
        extent: window half-width (defaults to the data extent for lists and
            to :data:`GENERATOR_EXTENT` for generators).

    Returns:
        The counting density, the type-unit value ``2 pi d`` and the witness
        family found at the lower end of the final bracket.
    """
    if extent is None:
        pts, ext = sequence_points(seq)
    else:
        pts, ext = sequence_points(seq, extent)
        ext = float(extent)
        pts = pts[np.abs(pts) <= ext]
    if pts.size < 2 or ext < 4:
        return DensityResult(0.0, 0.0, IntervalFamily(np.zeros((0, 2))), ext, ())
    ok, w_lo, fam_lo = _is_long(pts, ext, 0.0)
    if not ok:
        return DensityResult(0.0, 0.0, IntervalFamily(np.zeros((0, 2))), ext, tuple(w_lo))
    lo, hi = 0.0, 1.0
    while True:
        ok, w, fam = _is_long(pts, ext, hi)
        if not ok:
            break
        lo, w_lo, fam_lo = hi, w, fam
        hi *= 2
        if hi > 1e12:
            raise WindowExhausted("density bracket does not close")
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        ok, w, fam = _is_long(pts, ext, mid)
        if ok:
            lo, w_lo, fam_lo = mid, w, fam
        else:
            hi = mid
    return DensityResult(lo, 2 * math.pi * lo, IntervalFamily(fam_lo), ext, tuple(w_lo))


# ----------------------------------------------------------------------------
# Majorants and almost-decreasing profiles
# ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GammaProfile:
    gamma: GridFunction
    gstar: GridFunction
    components: IntervalFamily


def gamma_decompose(gamma: GridFunction, kappa: float = 0.0) -> GammaProfile:
    """Smallest non-increasing majorant on the grid and its contact-free set.

    ``gstar[i] = max(gamma[i:])``; the components are maximal runs of grid
    points with ``gamma < gstar``, each reported as the interval between the
    bracketing grid points.

    Raises:
        BoundaryUncertain: if ``gamma`` still rises at the right edge, where
            the majorant depends on values beyond the window.
    """
    y = gamma.ys
    if y.size >= 2 and y[-1] > y[-2]:
        raise BoundaryUncertain("profile is still rising at the right edge of the window")
    gstar = np.maximum.accumulate(y[::-1])[::-1]
    below = y < gstar
    xs = gamma.xs
    iv = []
    i = 0
    n = y.size
    while i < n:
        if below[i]:
            j = i
            while j + 1 < n and below[j + 1]:
                j += 1
            iv.append((xs[max(i - 1, 0)], xs[min(j + 1, n - 1)]))
            i = j + 1
        else:
            i += 1
    return GammaProfile(gamma, gamma.with_values(gstar, kind="majorant"),
                        IntervalFamily(np.asarray(iv).reshape(-1, 2), kappa))


def kappa_almost_decreasing(gamma: GridFunction, kappa: float = 0.0) -> tuple[float, str]:
    """Weight sum of the majorant components and the verdict ``yes``/``no``/``window-limited``."""
    prof = gamma_decompose(gamma, kappa)
    ws = family_weight_sum(prof.components, kappa)
    verdict = {"short": "yes", "long": "no"}.get(ws.classification, "window-limited")
    return ws.total, verdict


# ----------------------------------------------------------------------------
# Dominance diagnostics
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class DominanceTest:
    verdict: str
    r: float
    b: float
    tol: float
    dstar_type: float

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "r": self.r, "b": self.b, "tol": self.tol,
                "dstar_type": self.dstar_type}


def exp_dominance_test(I: MifDescriptor, b: float, tol: float = 0.0) -> DominanceTest:
    """Compare ``r(I) = D*(projected zeros) + a`` (type units) with ``b``.

    ``in-D`` (``I`` in the dominance set of ``S^b``) when ``r < b - tol``,
    ``not-in-D`` when ``r > b + tol``, ``boundary-inconclusive`` otherwise.
    Without zeros ``r = a`` exactly.
    """
    if I.zeros.size == 0 and I.generator is None:
        dt = 0.0
    else:
        dt = bm_density(I).dstar_type
    r = dt + I.exp_mass
    if r < b - tol:
        v = "in-D"
    elif r > b + tol:
        v = "not-in-D"
    else:
        v = "boundary-inconclusive"
    return DominanceTest(v, r, float(b), float(tol), dt)


@dataclass(frozen=True)
class Theorem10Result:
    verdict: str
    lower_test: str
    upper_test: str
    lower_sum: float
    upper_sum: float

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "lower_test": self.lower_test, "upper_test": self.upper_test,
                "lower_sum": self.lower_sum, "upper_sum": self.upper_sum}


def theorem10_diagnostic(U: MifDescriptor, J: MifDescriptor, eps: float = 0.05, kappa: float = 0.0,
                         *, xmax: float = 1e3, n: int = 4001, bound: float = 1e3) -> Theorem10Result:
    """Dominance of ``J`` by ``U`` from almost-decreasing tests.

    With ``sigma = arg J`` and ``gamma = arg U`` on ``[-xmax, xmax]``:
    ``in-D`` if ``sigma - (1 - eps) gamma`` is ``kappa``-almost decreasing,
    ``not-in-D`` if ``sigma - (1 + eps) gamma`` is not, ``gap`` otherwise.
    A lower test whose majorant is undetermined at the right edge counts as
    undecided.

    Raises:
        NotApplicable: unless ``|U'| / (1 + |x|)^kappa`` stays within
            ``[1/bound, bound]`` on the grid.
    """
    xs = np.linspace(-xmax, xmax, n)
    du = ic.darg_mif(U, xs, tol=1e-9) / (1.0 + np.abs(xs)) ** kappa
    if not (du.min() > 1.0 / bound and du.max() < bound):
        raise NotApplicable("|U'| is not comparable to (1+|x|)^kappa on the grid")
    sigma = ic.arg_mif(J, xs, tol=1e-9)
    gamma = ic.arg_mif(U, xs, tol=1e-9)
    try:
        s_lo, lower = kappa_almost_decreasing(GridFunction(xs, sigma - (1 - eps) * gamma), kappa)
    except BoundaryUncertain:
        s_lo, lower = math.nan, "undetermined"
    try:
        s_hi, upper = kappa_almost_decreasing(GridFunction(xs, sigma - (1 + eps) * gamma), kappa)
    except BoundaryUncertain:
        s_hi, upper = math.nan, "undetermined"
    if lower == "yes":
        verdict = "in-D"
    elif upper == "no":
        verdict = "not-in-D"
    else:
        verdict = "gap"
    return Theorem10Result(verdict, lower, upper, s_lo, s_hi)


@dataclass(frozen=True)
class TypeEstimate:
    estimate: float
    bracket: tuple
    dstar_type: float
    atoms: int

    def to_json(self) -> dict:
        return {"estimate": self.estimate, "bracket": list(self.bracket),
                "dstar_type": self.dstar_type, "atoms": self.atoms}


def type_estimate(mu: AtomicMeasure, window: Sequence[float] | None = None, tol: float = 1e-3) -> TypeEstimate:
    """Largest ``a`` with evidence that ``S^a`` is dominated by ``theta_mu``.

    Bisection over ``a``: each trial compares ``a`` with ``R``, the type-unit
    exterior density of the atoms in the window (the supporting set of the
    Clark measure), and keeps ``a`` when ``S^a`` lies below it. The bracket
    is shrunk to ``tol``. A measure with fewer than two atoms gives 0.
    """
    xs = mu.xs
    if window is not None:
        xs = xs[(xs >= window[0]) & (xs <= window[1])]
    if xs.size < 2:
        return TypeEstimate(0.0, (0.0, tol), 0.0, int(xs.size))
    R = bm_density(xs).dstar_type
    lo, hi = 0.0, max(1.0, 2 * R)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if exp_dominance_test(ic.pure_singular(mid), R).verdict == "in-D":
            lo = mid
        else:
            hi = mid
    return TypeEstimate(0.5 * (lo + hi), (lo, hi), R, int(xs.size))
