"""Shared numerical services.

Improper integrals with power-law tail extrapolation, Poisson-weighted
integrals, the conjugate-function (Hilbert) transform on the real line and
vectorised bisection for strictly increasing functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import integrate

from .errors import NotMonotone, PVNotSettled, TailModelUnfit

#: Minimum coefficient of determination for a power-law tail fit.
FIT_QUALITY = 0.99


@dataclass(frozen=True)
class QuadratureResult:
    """Value of an improper integral together with its tail diagnostics.

    Attributes:
        value: the integral (core part plus extrapolated tails); ``inf`` or
            ``nan`` when a tail diverges.
        tail_exponent: the larger of the two fitted power-law exponents of
            the integrand (or of the weighted function, see
            :func:`poisson_integral`).
        certified: ``True`` only when both tail fits have R^2 >= 0.99, both
            tails converge and the remainder estimate is below the tolerance.
        remainder: estimated uncertainty of the extrapolated tails.
    """

    value: complex | float
    tail_exponent: float
    certified: bool
    remainder: float = math.nan


@dataclass(frozen=True)
class PowerFit:
    exponent: float
    log_coef: float
    r2: float


def fit_power_tail(xs: np.ndarray, ys: np.ndarray) -> PowerFit:
    """Least-squares fit of ``|y| ~ C |x|^p`` in log-log coordinates.

    Raises:
        TailModelUnfit: if some samples vanish or are not finite (while
            others do not), so no power law can describe them.
    """
    ax = np.abs(np.asarray(xs, dtype=float))
    ay = np.abs(np.asarray(ys))
    if np.all(ay == 0.0):
        return PowerFit(-math.inf, -math.inf, 1.0)
    if not np.all(np.isfinite(ay)) or np.any(ay == 0.0):
        raise TailModelUnfit("tail samples contain zeros or non-finite values")
    lx, ly = np.log(ax), np.log(ay)
    p, c = np.polyfit(lx, ly, 1)
    resid = ly - (p * lx + c)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    if math.sqrt(ss_res / ly.size) < 1e-6:
        # The log-log data lie on a line to within rounding of the fit
        # itself; treat as a perfect fit even if the spread is tiny.
        r2 = 1.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return PowerFit(float(p), float(c), float(r2))


def _quad(g: Callable, a: float, b: float, points: Sequence[float], tol: float,
          limit: int) -> complex:
    """``quad`` over ``[a, b]`` split at ``points``, complex-valued."""
    cuts = [a] + sorted(p for p in points if a < p < b) + [b]
    total = 0.0 + 0.0j
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi <= lo:
            continue
        val, _ = integrate.quad(lambda t: complex(g(t)), lo, hi, complex_func=True,
                                epsabs=tol, epsrel=tol, limit=limit)
        total += val
    return total


def improper_integral(
    g: Callable,
    *,
    cutoff: float = 1e4,
    breakpoints: Iterable[float] = (),
    tol: float = 1e-8,
    limit: int = 400,
    n_fit: int = 25,
) -> QuadratureResult:
    """Integrate ``g`` over the real line.

    The core ``[-cutoff, cutoff]`` is handled by adaptive Gauss-Kronrod
    quadrature; each tail is replaced by the integral of a power law fitted
    to ``|g|`` over the last decade ``[cutoff/10, cutoff]``. The remainder is
    the disagreement between that extrapolation and one based on the
    preceding decade.

    ``g`` must accept both scalars and numpy arrays.
    """
    X = float(cutoff)
    # tails first: a divergent tail makes the (costly) core irrelevant
    exps, tails, remainder, r2s = [], [], 0.0, []
    for side in (1.0, -1.0):
        xs = side * np.logspace(math.log10(X / 10), math.log10(X), n_fit)
        xs0 = side * np.logspace(math.log10(X / 100), math.log10(X / 10), n_fit)
        fit = fit_power_tail(xs, g(xs))
        exps.append(fit.exponent)
        r2s.append(fit.r2)
        if fit.exponent == -math.inf:
            tails.append(0.0)
            continue
        if fit.r2 < FIT_QUALITY:
            raise TailModelUnfit(
                f"power-law tail fit R^2={fit.r2:.4f} below {FIT_QUALITY} on side {side:+.0f}"
            )
        end = complex(g(side * X))
        if fit.exponent >= -1.0:
            tails.append(complex(math.inf, 0.0) if end.real >= 0 else complex(-math.inf, 0.0))
            continue
        tail = end * X / (-fit.exponent - 1.0)
        tails.append(tail)
        try:
            fit0 = fit_power_tail(xs0, g(xs0))
            if fit0.exponent < -1.0:
                remainder += abs(tail - end * X / (-fit0.exponent - 1.0))
            else:
                remainder = math.inf
        except TailModelUnfit:
            remainder = math.inf
    texp = max(exps)
    if texp >= -1.0:
        value = complex(math.inf, 0.0) if all(np.real(t) >= 0 for t in tails) else complex(math.nan)
        return QuadratureResult(_simplify(value), texp, False, math.inf)
    core = _quad(g, -X, X, list(breakpoints), tol, limit)
    value = core + tails[0] + tails[1]
    certified = min(r2s) >= FIT_QUALITY and remainder <= tol
    return QuadratureResult(_simplify(value), texp, bool(certified), float(remainder))


def _simplify(v: complex) -> complex | float:
    v = complex(v)
    if v.imag == 0.0:
        return v.real
    return v


def poisson_integral(f, *, cutoff: float = 1e4, tol: float = 1e-8,
                     breakpoints: Iterable[float] = ()) -> QuadratureResult:
    """Integral of ``f`` against the Poisson measure ``dx / (1 + x^2)``.

    ``f`` is either a vectorised callable or a sampled function exposing
    ``xs`` and ``ys`` arrays (a :class:`~mifkit.inner_core.GridFunction`).
    For sampled input the core is integrated by Simpson's rule on the grid
    and the tails are fitted on the outermost decade of samples on each
    side. The reported ``tail_exponent`` refers to ``f`` itself, so ``f = 1``
    gives 0 and ``f = x^2`` gives 2.

    Examples:
        >>> round(poisson_integral(lambda x: np.ones_like(np.asarray(x, float))).value, 6)
        3.141593
    """
    if hasattr(f, "xs") and hasattr(f, "ys"):
        return _poisson_grid(np.asarray(f.xs, float), np.asarray(f.ys), tol)

    def weighted(x):
        x = np.asarray(x, dtype=float)
        return f(x) / (1.0 + x * x)

    res = improper_integral(weighted, cutoff=cutoff, tol=tol, breakpoints=breakpoints)
    return QuadratureResult(res.value, res.tail_exponent + 2.0, res.certified, res.remainder)


def _poisson_grid(xs: np.ndarray, ys: np.ndarray, tol: float) -> QuadratureResult:
    res = grid_improper_integral(xs, ys / (1.0 + xs * xs), tol=tol)
    return QuadratureResult(res.value, res.tail_exponent + 2.0, res.certified, res.remainder)


def grid_improper_integral(xs: np.ndarray, ys: np.ndarray, *, tol: float = 1e-8) -> QuadratureResult:
    """Integral over the line of a function sampled on a grid.

    Simpson's rule on the grid plus power-law tails fitted on the outermost
    decade of samples on each side; the remainder compares with a fit on the
    preceding decade. The grid must reach ``|x| >= 10`` on both sides with
    at least five samples per decade.
    """
    xs = np.asarray(xs, dtype=float)
    w = np.asarray(ys)
    core = integrate.simpson(w, x=xs)
    exps, total, remainder = [], complex(core), 0.0
    for side, end in ((1.0, xs[-1]), (-1.0, xs[0])):
        X = abs(end)
        mask = (np.sign(xs) == side) & (np.abs(xs) >= X / 10)
        if np.sign(end) != side or X < 10 or mask.sum() < 5:
            raise TailModelUnfit("grid does not reach a full decade on both sides")
        fit = fit_power_tail(xs[mask], w[mask])
        if fit.exponent == -math.inf:
            exps.append(-math.inf)
            continue
        if fit.r2 < FIT_QUALITY:
            raise TailModelUnfit(f"grid tail fit R^2={fit.r2:.4f}")
        exps.append(fit.exponent)
        if fit.exponent >= -1.0:
            return QuadratureResult(math.inf, max(exps), False, math.inf)
        w_end = w[xs == end][0]
        tail = w_end * X / (-fit.exponent - 1.0)
        total += tail
        inner = (np.sign(xs) == side) & (np.abs(xs) >= X / 100) & (np.abs(xs) <= X / 10)
        try:
            fit0 = fit_power_tail(xs[inner], w[inner]) if inner.sum() >= 5 else None
        except TailModelUnfit:
            fit0 = None
        if fit0 is None or fit0.exponent >= -1.0:
            remainder = math.inf
        else:
            remainder += abs(tail - w_end * X / (-fit0.exponent - 1.0))
    return QuadratureResult(_simplify(total), max(exps), bool(remainder <= tol), float(remainder))


def hilbert_transform(
    f: Callable[[float], float],
    x: float,
    *,
    tol: float = 1e-7,
    points: Iterable[float] = (),
    radius: float | None = None,
) -> float:
    """Conjugate function of ``f`` at a real point ``x``.

    Computes ``(1/pi) PV int f(t) [1/(x - t) + t/(1 + t^2)] dt``, the boundary
    value of the harmonic conjugate normalised to vanish at ``z = i``. The
    kernel integrates to zero over the line, so ``f(x)`` is subtracted first;
    the integrand is then bounded near ``t = x`` and the excision of a
    symmetric interval of radius ``delta`` only costs ``O(delta)``, which is
    removed by Richardson extrapolation over the radii ``delta`` and
    ``delta/2``. A second extrapolation at half the radius serves as the
    settling check.

    Args:
        f: real function of one real variable (scalar calls).
        x: evaluation point.
        tol: absolute agreement required between the two extrapolants.
        points: abscissae where ``f`` has fine structure (e.g. real parts of
            nearby zeros); used as quadrature breakpoints.
        radius: excision radius; by default scaled with the local slope.

    Raises:
        PVNotSettled: if the two Richardson extrapolants disagree by more
            than ``tol``.
    """
    x = float(x)
    fx = float(f(x))
    h = 1e-5 * (1.0 + abs(x))
    slope = abs(float(f(x + h)) - float(f(x - h))) / (2 * h)
    if radius is None:
        radius = 2e-3 * (1.0 + abs(x)) / (1.0 + slope * (1.0 + abs(x)))

    def integrand(t):
        return (float(f(t)) - fx) * (1.0 / (x - t) + t / (1.0 + t * t))

    span = 10.0 * (1.0 + abs(x)) + max((abs(p) for p in points), default=0.0)
    inner_pts = [p for p in points if abs(p - x) > 1e-12]

    def excised(d: float) -> float:
        lo, hi = x - d, x + d
        total = 0.0
        cuts_left = [-span] + sorted(p for p in inner_pts if -span < p < lo) + [lo]
        cuts_right = [hi] + sorted(p for p in inner_pts if hi < p < span) + [span]
        for a, b in list(zip(cuts_left[:-1], cuts_left[1:])) + list(zip(cuts_right[:-1], cuts_right[1:])):
            if b > a:
                total += integrate.quad(integrand, a, b, limit=400, epsabs=tol * 1e-2,
                                        epsrel=1e-10)[0]
        total += integrate.quad(integrand, -math.inf, -span, limit=400, epsabs=tol * 1e-2)[0]
        total += integrate.quad(integrand, span, math.inf, limit=400, epsabs=tol * 1e-2)[0]
        return total

    i1, i2, i4 = excised(radius), excised(radius / 2), excised(radius / 4)
    r1 = 2 * i2 - i1
    r2 = 2 * i4 - i2
    if abs(r1 - r2) > tol * math.pi:
        raise PVNotSettled(f"Richardson extrapolants differ by {abs(r1 - r2):.3e} at x={x}")
    return r2 / math.pi


def monotone_roots(
    phi: Callable[[np.ndarray], np.ndarray],
    targets: Sequence[float],
    window: tuple[float, float],
    *,
    rtol: float = 1e-12,
    n_check: int = 65,
) -> np.ndarray:
    """Solve ``phi(x) = target`` for each target inside ``phi(window)``.

    ``phi`` must be vectorised and strictly increasing on the window; this is
    spot-checked on ``n_check`` equispaced points. Targets outside the range
    of ``phi`` over the window are dropped. Bisection runs until every
    bracket is narrower than ``rtol * max(1, |x|)``.

    Raises:
        NotMonotone: if the spot check finds a non-increasing step.
    """
    a, b = map(float, window)
    if not b > a:
        raise ValueError("window must satisfy xmin < xmax")
    probe = np.linspace(a, b, n_check)
    vals = np.asarray(phi(probe), dtype=float)
    if np.any(np.diff(vals) <= 0):
        raise NotMonotone("function is not strictly increasing on the window")
    t = np.asarray(sorted(targets), dtype=float)
    t = t[(t >= vals[0]) & (t <= vals[-1])]
    if t.size == 0:
        return t
    # Start from the bracketing probe cell to save iterations.
    idx = np.clip(np.searchsorted(vals, t, side="left"), 1, n_check - 1)
    lo = probe[idx - 1].copy()
    hi = probe[idx].copy()
    exact_lo = vals[idx - 1] == t
    hi[exact_lo] = lo[exact_lo]
    for _ in range(200):
        width = hi - lo
        if np.all(width <= rtol * np.maximum(1.0, np.abs(lo))):
            break
        mid = 0.5 * (lo + hi)
        below = np.asarray(phi(mid), dtype=float) < t
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def gauss_legendre_panels(g: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                          n_panels: int, order: int = 16) -> complex:
    """Composite Gauss-Legendre rule with ``n_panels`` equal panels.

    Used for smooth oscillatory integrands on long finite intervals, where
    adaptive quadrature wastes effort on every oscillation.
    """
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    xs = (mids[:, None] + half[:, None] * nodes[None, :]).ravel()
    ws = (half[:, None] * weights[None, :]).ravel()
    return complex(np.sum(ws * g(xs)))


def fourier_tail(g: Callable[[float], complex], omega: float, start: float) -> complex:
    """``int_start^inf g(x) e^{i omega x} dx`` for slowly varying ``g``.

    ``g`` should decay (at least like ``1/x``) and be free of oscillation;
    the oscillatory factor is handled by QUADPACK's Fourier-weight routine.
    For ``omega = 0`` an ordinary infinite-interval quadrature is used.
    """
    def re(x):
        return complex(g(x)).real

    def im(x):
        return complex(g(x)).imag

    if omega == 0.0:
        vr = integrate.quad(re, start, math.inf, limit=400)[0]
        vi = integrate.quad(im, start, math.inf, limit=400)[0]
        return complex(vr, vi)
    w = abs(omega)
    sgn = 1.0 if omega > 0 else -1.0
    cr = integrate.quad(re, start, math.inf, weight="cos", wvar=w, limlst=200)[0]
    sr = integrate.quad(re, start, math.inf, weight="sin", wvar=w, limlst=200)[0]
    ci = integrate.quad(im, start, math.inf, weight="cos", wvar=w, limlst=200)[0]
    si = integrate.quad(im, start, math.inf, weight="sin", wvar=w, limlst=200)[0]
    # e^{i omega x} = cos(w x) + i sgn sin(w x)
    real = cr - sgn * si
    imag = ci + sgn * sr
    return complex(real, imag)
