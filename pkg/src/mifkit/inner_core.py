"""Meromorphic inner functions: construction, evaluation and arguments.

A meromorphic inner function is stored as a :class:`MifDescriptor`

    I(z) = rotation * exp(i a z) * prod_n eps_n (z - lam_n) / (z - conj(lam_n)),

with zeros ``lam_n`` in the upper half-plane and unimodular normalisers
``eps_n`` chosen so that ``eps_n (i - lam_n)/(i - conj(lam_n)) > 0``
(``eps_n = 1`` for ``lam_n = i``). Infinite zero sets are attached through a
:class:`ZeroGenerator` and truncated on demand, with the truncation accepted
only once doubling the index window changes the requested values by less
than the tolerance.

Continuous arguments come in two branch conventions:

``"left"``
    every factor contributes ``2 arctan((x - u)/v) + pi + arg eps`` which
    tends to ``arg eps`` at ``-inf`` (used for finite zero lists);
``"origin"``
    the same branch shifted by a multiple of ``2 pi`` so that each factor's
    argument at ``x = 0`` lies in ``(-pi, pi]`` (used for truncations of
    infinite products, where the left convention diverges).

Both satisfy ``exp(i arg) == I`` on the real line.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError, NonUpperHalfZero, PoleHit, TruncationNotConverged

ArrayLike = "float | complex | np.ndarray"

#: Largest index half-width explored when truncating a generated product.
MAX_WINDOW = 2**20
#: Starting index half-width.
START_WINDOW = 32


def _as_zeros(zeros: Iterable) -> np.ndarray:
    arr = np.asarray(list(zeros) if not isinstance(zeros, np.ndarray) else zeros,
                     dtype=complex).ravel()
    if arr.size and not np.all(arr.imag > 0):
        bad = arr[~(arr.imag > 0)][0]
        raise NonUpperHalfZero(f"zero {bad} is not in the open upper half-plane")
    return arr


def normalizers(zeros: np.ndarray) -> np.ndarray:
    """Unimodular constants ``eps`` with ``eps (i - lam)/(i - conj lam) > 0``."""
    zeros = np.asarray(zeros, dtype=complex)
    w = (1j - zeros) / (1j - np.conj(zeros))
    out = np.ones_like(zeros)
    nz = np.abs(w) > 0
    out[nz] = np.conj(w[nz]) / np.abs(w[nz])
    return out


def blaschke_sum(zeros: Iterable) -> float:
    """Blaschke sum ``sum Im(lam) / (1 + |lam|^2)``.

    >>> blaschke_sum([1j])
    0.5
    """
    z = _as_zeros(zeros)
    return float(np.sum(z.imag / (1.0 + np.abs(z) ** 2)))


# ----------------------------------------------------------------------------
# Grid functions
# ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real function sampled on a strictly increasing grid.

    ``metadata`` may carry an ``"evaluator"`` (a vectorised callable giving
    the exact function off the grid) and descriptive tags such as the pair of
    descriptors a difference of arguments came from.
    """

    xs: np.ndarray
    ys: np.ndarray
    metadata: Mapping = field(default_factory=dict)

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float).ravel()
        ys = np.asarray(self.ys, dtype=float).ravel()
        if xs.shape != ys.shape:
            raise InputError("xs and ys must have equal length")
        if xs.size > 1 and not np.all(np.diff(xs) > 0):
            raise InputError("grid abscissae must be strictly increasing")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "metadata", dict(self.metadata))

    def __len__(self) -> int:
        return self.xs.size

    def __call__(self, x):
        ev = self.metadata.get("evaluator")
        if ev is not None:
            return ev(x)
        return np.interp(x, self.xs, self.ys)

    def with_values(self, ys, **meta) -> "GridFunction":
        md = {k: v for k, v in self.metadata.items() if k != "evaluator"}
        md.update(meta)
        return GridFunction(self.xs, ys, md)


# ----------------------------------------------------------------------------
# Zero generators
# ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ZeroGenerator:
    """Deterministic rule ``index -> zero`` for an infinite zero sequence.

    Attributes:
        rule: vectorised map from an integer array to a complex array;
            ``nan`` entries mark indices that carry no zero.
        first: smallest admissible index (``None`` for unbounded below).
        last: largest admissible index (``None`` for unbounded above).
        name: registry name, used for JSON round trips.
        params: parameters the rule was built from.
    """

    rule: Callable[[np.ndarray], np.ndarray]
    first: int | None = None
    last: int | None = None
    name: str = "custom"
    params: Mapping = field(default_factory=dict)

    def indices(self, half_width: int) -> np.ndarray:
        """Index window of the given half-width, clipped to the domain."""
        if self.first is None and self.last is None:
            lo, hi = -half_width, half_width
        elif self.first is None:
            lo, hi = self.last - 2 * half_width, self.last
        elif self.last is None:
            lo, hi = self.first, self.first + 2 * half_width
        else:
            lo, hi = self.first, self.last
        if self.first is not None:
            lo = max(lo, self.first)
        if self.last is not None:
            hi = min(hi, self.last)
        return np.arange(lo, hi + 1)

    def is_finite(self) -> bool:
        return self.first is not None and self.last is not None

    def materialize(self, half_width: int) -> np.ndarray:
        """Zeros for the index window of the given half-width.

        Entries that overflow to non-finite values are dropped: they lie so
        far out that their factors equal 1 to machine precision on any
        window of interest.
        """
        with np.errstate(over="ignore", invalid="ignore"):
            z = np.asarray(self.rule(self.indices(half_width)), dtype=complex)
        z = z[np.isfinite(z)]
        if z.size and not np.all(z.imag > 0):
            raise NonUpperHalfZero(f"generator {self.name} produced a zero off the upper half-plane")
        return z

    def partial_sums(self, half_width: int) -> np.ndarray:
        """Cumulative Blaschke sums in index order (non-decreasing)."""
        z = self.materialize(half_width)
        return np.cumsum(z.imag / (1.0 + np.abs(z) ** 2))


def _decay_rule(decay: str) -> Callable[[np.ndarray], np.ndarray]:
    decay = decay.replace(" ", "")
    if decay == "1/k":
        return lambda k: 1.0 / k
    m = re.fullmatch(r"1/k\^([0-9.]+)", decay)
    if m:
        p = float(m.group(1))
        return lambda k: k ** (-p)
    m = re.fullmatch(r"([0-9.]+)\^-k", decay)
    if m:
        q = float(m.group(1))
        return lambda k: q ** (-k.astype(float))
    raise InputError(f"unknown decay rule {decay!r}; use '1/k', '1/k^p' or 'q^-k'")


def arith_generator(beta: float = 1.0, height: float = 1.0, shift: float = 0.0) -> ZeroGenerator:
    """Zeros ``beta*n + shift + i*height`` for all integers ``n``."""
    if height <= 0 or beta <= 0:
        raise InputError("arith generator needs beta > 0 and height > 0")
    return ZeroGenerator(lambda n: beta * n + shift + 1j * height, None, None, "arith",
                         {"beta": beta, "height": height, "shift": shift})


def geometric_generator(q: float = 2.0, slope: float = 1.0, start: int = 1) -> ZeroGenerator:
    """Zeros ``q^n (1 + i*slope)`` for ``n >= start``."""
    if q <= 1 or slope <= 0:
        raise InputError("geometric generator needs q > 1 and slope > 0")
    return ZeroGenerator(lambda n: np.power(float(q), n.astype(float)) * (1 + 1j * slope),
                         start, None, "geometric", {"q": q, "slope": slope, "start": start})


def squares_generator(height: float = 1.0) -> ZeroGenerator:
    """Zeros ``n^2 + i*height`` for ``n >= 0``."""
    return ZeroGenerator(lambda n: n.astype(float) ** 2 + 1j * height, 0, None, "squares",
                         {"height": height})


def example2_generator(role: str = "I", decay: str = "1/k") -> ZeroGenerator:
    """Zeros ``2^n (1 + i)``, ``n >= 1``; role ``"J"`` lowers a sparse subsequence.

    For ``n = 2^k`` (``k >= 1``) the zero ``2^n (1+i)`` is replaced by
    ``2^n + i c_k`` with ``c_k`` given by ``decay``.
    """
    if role not in ("I", "J"):
        raise InputError("example2 role must be 'I' or 'J'")
    c_of_k = _decay_rule(decay)

    def rule(n):
        n = n.astype(float)
        base = np.power(2.0, n)
        z = base * (1 + 1j)
        if role == "J":
            k = np.log2(n)
            sel = (n >= 2) & (np.abs(k - np.round(k)) < 1e-12)
            kk = np.round(k[sel])
            z = z.copy()
            z[sel] = base[sel] + 1j * c_of_k(kk)
        return z

    return ZeroGenerator(rule, 1, None, "example2", {"role": role, "decay": decay})


def example3_generator(which: str, C: float = 10.0) -> ZeroGenerator:
    """Lattice zeros at height ``C`` with the three variants ``I``, ``J``, ``L``.

    ``I``: ``n + iC``; ``J``: ``n + iC`` for ``n < 0`` and ``n + 1/2 + iC`` for
    ``n >= 0``; ``L``: ``n + iC`` for ``n != 0``.
    """
    if which not in ("I", "J", "L"):
        raise InputError("example3 variant must be I, J or L")

    def rule(n):
        x = n.astype(float)
        if which == "J":
            x = np.where(n >= 0, x + 0.5, x)
        z = x + 1j * C
        if which == "L":
            z = np.where(n == 0, np.nan + 0j, z)
        return z

    return ZeroGenerator(rule, None, None, f"example3_{which}", {"C": C})


def example4_generator(which: int, C: float = 10.0, shift: float = 1.0 / 6.0) -> ZeroGenerator:
    """Lattice zeros pushed towards the origin by ``(which - 1) * shift``.

    Zero ``n`` sits at ``n + (which-1)*shift*sgn(-n) + iC``; consecutive
    members differ in argument by about ``-2 pi shift`` at ``-inf`` and
    ``+2 pi shift`` at ``+inf``.
    """
    if which not in (1, 2, 3):
        raise InputError("example4 member must be 1, 2 or 3")
    s = (which - 1) * shift
    return ZeroGenerator(lambda n: n - s * np.sign(n) + 1j * C, None, None,
                         f"example4_{which}", {"C": C, "shift": shift})


GENERATORS: dict[str, Callable[..., ZeroGenerator]] = {
    "arith": arith_generator,
    "geometric": geometric_generator,
    "squares": squares_generator,
    "example2": example2_generator,
    "example3_I": lambda **kw: example3_generator("I", **kw),
    "example3_J": lambda **kw: example3_generator("J", **kw),
    "example3_L": lambda **kw: example3_generator("L", **kw),
    "example4_1": lambda **kw: example4_generator(1, **kw),
    "example4_2": lambda **kw: example4_generator(2, **kw),
    "example4_3": lambda **kw: example4_generator(3, **kw),
}


def generator_from_spec(name: str, params: Mapping | None = None) -> ZeroGenerator:
    """Build a registered generator by name."""
    if name not in GENERATORS:
        raise InputError(f"unknown generator {name!r}; known: {sorted(GENERATORS)}")
    try:
        return GENERATORS[name](**dict(params or {}))
    except TypeError as exc:
        raise InputError(f"bad parameters for generator {name!r}: {exc}") from None


# ----------------------------------------------------------------------------
# Descriptors
# ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MifDescriptor:
    """Zeros, exponential mass and rotation of a meromorphic inner function.

    Attributes:
        zeros: finite list of zeros in the upper half-plane.
        exp_mass: the exponent ``a >= 0`` of the singular factor ``exp(iaz)``.
        rotation: unimodular constant in front of the product.
        generator: optional infinite zero sequence appended to ``zeros``.
        branch: ``"left"`` or ``"origin"`` argument normalisation.
    """

    zeros: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    exp_mass: float = 0.0
    rotation: complex = 1.0 + 0.0j
    generator: ZeroGenerator | None = None
    branch: str = "left"

    def __post_init__(self):
        object.__setattr__(self, "zeros", _as_zeros(self.zeros))
        a = float(self.exp_mass)
        if not a >= 0:
            raise InputError("exp_mass must be non-negative")
        object.__setattr__(self, "exp_mass", a)
        rot = complex(self.rotation)
        if abs(abs(rot) - 1.0) > 1e-9:
            raise InputError(f"rotation {rot} is not unimodular")
        object.__setattr__(self, "rotation", rot / abs(rot))
        if self.branch not in ("left", "origin"):
            raise InputError("branch must be 'left' or 'origin'")

    # -- basic properties --------------------------------------------------
    @property
    def is_finite(self) -> bool:
        """True when no infinite generator is attached."""
        return self.generator is None or self.generator.is_finite()

    @property
    def is_constant(self) -> bool:
        return self.zeros.size == 0 and self.exp_mass == 0.0 and self.generator is None

    @property
    def is_rational(self) -> bool:
        """Finite Blaschke product (no singular factor, no generator)."""
        return self.generator is None and self.exp_mass == 0.0

    @property
    def degree(self) -> int:
        if not self.is_finite:
            raise InputError("degree of an infinite product is undefined")
        n = self.zeros.size
        if self.generator is not None:
            n += self.generator.materialize(0).size
        return n

    def materialized(self, half_width: int) -> "MifDescriptor":
        """Finite truncation (origin branch) keeping the generator window."""
        if self.generator is None:
            return self
        z = np.concatenate([self.zeros, self.generator.materialize(half_width)])
        return MifDescriptor(z, self.exp_mass, self.rotation, None, "origin")

    def to_json(self) -> dict:
        out = {
            "zeros": [[float(z.real), float(z.imag)] for z in self.zeros],
            "exp_mass": self.exp_mass,
            "rotation": [self.rotation.real, self.rotation.imag],
        }
        if self.generator is not None:
            out["generator"] = {"name": self.generator.name, "params": dict(self.generator.params)}
        return out

    @classmethod
    def from_json(cls, rec: Mapping) -> "MifDescriptor":
        """Parse ``{"zeros": [[re, im], ...], "exp_mass": a, "rotation": [re, im]}``.

        A ``"generator": {"name": ..., "params": {...}}`` entry attaches a
        registered infinite zero sequence.
        """
        if not isinstance(rec, Mapping):
            raise InputError("MIF record must be a JSON object")
        unknown = set(rec) - {"zeros", "exp_mass", "rotation", "generator"}
        if unknown:
            raise InputError(f"unknown MIF fields: {sorted(unknown)}")
        zeros = [_pair(p, "zero") for p in rec.get("zeros", [])]
        rot = _pair(rec.get("rotation", [1.0, 0.0]), "rotation")
        gen = None
        if "generator" in rec:
            g = rec["generator"]
            if isinstance(g, str):
                gen = generator_from_spec(g)
            elif isinstance(g, Mapping) and "name" in g:
                gen = generator_from_spec(g["name"], g.get("params", {}))
            else:
                raise InputError("generator must be a name or {name, params}")
        try:
            a = float(rec.get("exp_mass", 0.0))
        except (TypeError, ValueError):
            raise InputError("exp_mass must be a number") from None
        return cls(np.asarray(zeros, complex), a, rot, gen)


def _pair(p, what: str) -> complex:
    try:
        re_, im_ = p
        return complex(float(re_), float(im_))
    except (TypeError, ValueError):
        raise InputError(f"{what} must be a [re, im] pair, got {p!r}") from None


def pure_singular(a: float, rotation: complex = 1.0) -> MifDescriptor:
    """Descriptor of ``rotation * exp(i a z)``."""
    return MifDescriptor(np.zeros(0, complex), a, rotation)


# ----------------------------------------------------------------------------
# Finite evaluation kernels
# ----------------------------------------------------------------------------


def _chunks(n: int, npts: int):
    size = max(16, 2**21 // max(1, npts))
    for s in range(0, n, size):
        yield slice(s, min(n, s + size))


def _check_poles(lam: np.ndarray, z: np.ndarray) -> None:
    if lam.size and z.size:
        real_z = z[z.imag == 0]
        if real_z.size and np.any(np.isin(real_z, np.conj(lam))):
            raise PoleHit("evaluation point coincides with a conjugate zero")


def _eval_finite(desc: MifDescriptor, z: np.ndarray) -> np.ndarray:
    lam = desc.zeros
    out = desc.rotation * np.exp(1j * desc.exp_mass * z)
    if lam.size == 0:
        return out
    eps = normalizers(lam)
    for c in _chunks(lam.size, z.size):
        l = lam[c]
        den = z[..., None] - np.conj(l)
        if np.any(den == 0):
            raise PoleHit("evaluation point coincides with a conjugate zero")
        out = out * np.prod(eps[c] * (z[..., None] - l) / den, axis=-1)
    return out


def _log_finite(desc: MifDescriptor, z: np.ndarray) -> np.ndarray:
    """Sum of principal logarithms of the normalised factors (plus ``iaz``)."""
    lam = desc.zeros
    out = 1j * desc.exp_mass * z + 1j * np.angle(desc.rotation)
    if lam.size == 0:
        return out + 0j
    eps = normalizers(lam)
    for c in _chunks(lam.size, z.size):
        l = lam[c]
        den = z[..., None] - np.conj(l)
        if np.any(den == 0):
            raise PoleHit("evaluation point coincides with a conjugate zero")
        with np.errstate(divide="ignore"):
            out = out + np.sum(np.log(eps[c] * (z[..., None] - l) / den), axis=-1)
    return out


def factor_args(zeros: np.ndarray, x: np.ndarray, branch: str) -> np.ndarray:
    """Per-factor continuous arguments, shape ``x.shape + (n,)``."""
    u, v = zeros.real, zeros.imag
    eps = normalizers(zeros)
    if branch == "origin":
        # principal value at 0 plus the increment 2[atan((x-u)/v) - atan(-u/v)],
        # written so that far factors contribute small, accurately rounded terms
        at0 = np.angle(eps * zeros / np.conj(zeros))
        xx = x[..., None]
        return at0 + 2 * np.arctan2(xx * v, u * u + v * v - u * xx)
    return 2 * np.arctan((x[..., None] - u) / v) + math.pi + np.angle(eps)


def _arg_finite(desc: MifDescriptor, x: np.ndarray) -> np.ndarray:
    out = desc.exp_mass * x + np.angle(desc.rotation)
    lam = desc.zeros
    for c in _chunks(lam.size, x.size):
        out = out + factor_args(lam[c], x, desc.branch).sum(axis=-1)
    return out


def arg_function(desc: MifDescriptor, sign: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    """Fast evaluator of ``sign * arg`` for a finite descriptor.

    Per-factor constants are computed once, which matters when the argument
    is called point by point from adaptive quadrature.
    """
    if desc.generator is not None:
        raise InputError("arg_function needs a finite zero list")
    lam = desc.zeros
    u, v = lam.real.copy(), lam.imag.copy()
    zero = np.zeros(1)
    c0 = factor_args(lam, zero, desc.branch)[0] - 2 * np.arctan((0.0 - u) / v) if lam.size else zero[:0]
    base = float(np.angle(desc.rotation))
    a = desc.exp_mass

    def ev(x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            return sign * (a * float(x) + base + float(np.sum(2 * np.arctan((float(x) - u) / v) + c0)))
        out = a * x + base
        if lam.size:
            out = out + np.sum(2 * np.arctan((x[..., None] - u) / v) + c0, axis=-1)
        return sign * out

    return ev


def _darg_finite(desc: MifDescriptor, x: np.ndarray) -> np.ndarray:
    out = np.full(x.shape, desc.exp_mass, dtype=float)
    lam = desc.zeros
    for c in _chunks(lam.size, x.size):
        u, v = lam[c].real, lam[c].imag
        out = out + np.sum(2 * v / ((x[..., None] - u) ** 2 + v**2), axis=-1)
    return out


# ----------------------------------------------------------------------------
# Truncation of generated products
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Settled:
    """Values computed from a truncated product with the accepted window.

    ``method`` is ``"plain"`` when two consecutive truncations agreed, or
    ``"richardson"`` when agreement was reached only after eliminating the
    ``1/K`` and ``1/K^2`` terms of the truncation error.
    """

    values: np.ndarray
    half_width: int
    change: float
    method: str


def settle(values_at: Callable[[int], np.ndarray], tol, *,
           start: int = START_WINDOW, max_width: int = MAX_WINDOW,
           depth: int = 3) -> Settled:
    """Double the index half-width until the truncated values settle.

    Slowly converging products (zeros on a lattice, truncation error with an
    expansion in powers of ``1/K``) are accelerated by a Richardson table in
    ``K`` of the given depth; the reported change is the difference of two
    consecutive entries of the deepest column and serves as the error
    estimate. ``tol`` may be an array broadcast against the values, for
    errors that grow with the evaluation point; the reported change is then
    the worst ratio of change to tolerance times the smallest tolerance.

    Raises:
        TruncationNotConverged: if no column settles by ``max_width``.
    """
    tols = np.asarray(tol, dtype=float)
    floor = float(np.min(tols))
    width = start
    prev_row = [np.asarray(values_at(width))]
    change = np.inf
    while width < max_width:
        width *= 2
        row = [np.asarray(values_at(width))]
        for j in range(1, min(depth, len(prev_row)) + 1):
            row.append((2**j * row[j - 1] - prev_row[j - 1]) / (2**j - 1))
        best = np.inf
        for j in range(min(len(row), len(prev_row))):
            c = floor * float(np.max(np.abs(row[j] - prev_row[j]) / tols, initial=0.0))
            if c <= floor:
                return Settled(row[j], width, c, "plain" if j == 0 else "richardson")
            best = min(best, c)
        change = best
        prev_row = row
    raise TruncationNotConverged(
        f"truncated product still changes by {change:.3e} > {floor:.1e} at half-width {width}"
    )


def cancel_common(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Remove zeros shared by ``a`` and ``b`` (multiplicity aware, exact match)."""
    a = np.asarray(a, complex)
    b = np.asarray(b, complex)
    if a.size == 0 or b.size == 0:
        return a, b
    ua, ca = np.unique(a, return_counts=True)
    ub, cb = np.unique(b, return_counts=True)
    common, ia, ib = np.intersect1d(ua, ub, assume_unique=True, return_indices=True)
    if common.size == 0:
        return a, b
    k = np.minimum(ca[ia], cb[ib])
    ca = ca.copy()
    cb = cb.copy()
    ca[ia] -= k
    cb[ib] -= k
    return np.repeat(ua, ca), np.repeat(ub, cb)


def joint_materialize(descs: Sequence[MifDescriptor], half_width: int,
                      cancel: bool = False) -> list[MifDescriptor]:
    """Truncate several descriptors on a common index window.

    With ``cancel=True`` and two descriptors, zeros present in both
    truncations are removed from both; differences of arguments or of
    logarithms are unchanged by this, and lattice-type generators that
    agree on most indices then leave only their genuine discrepancy.
    """
    out = [d.materialized(half_width) for d in descs]
    if cancel and len(out) == 2:
        a, b = cancel_common(out[0].zeros, out[1].zeros)
        out = [replace(out[0], zeros=a), replace(out[1], zeros=b)]
    return out


def covering_width(descs: Sequence[MifDescriptor], reach: float) -> int:
    """Smallest doubling of :data:`START_WINDOW` whose zeros reach ``2 * reach``.

    Truncations whose zeros all sit well inside the evaluation range change
    very little from one doubling to the next even though they are far from
    converged there, so the doubling must start beyond the range.
    """
    width = START_WINDOW
    gens = [d.generator for d in descs if d.generator is not None]
    if not gens or not math.isfinite(reach):
        return width
    while width < MAX_WINDOW:
        spans = []
        for g in gens:
            z = g.materialize(width)
            spans.append(g.is_finite() or (z.size and float(np.max(np.abs(z))) >= 2 * reach))
        if all(spans):
            break
        width *= 2
    return width


def truncate_for_range(desc: MifDescriptor, xmax: float, tol: float = 1e-10) -> MifDescriptor:
    """Finite truncation whose argument is within ``tol`` on ``[-xmax, xmax]``.

    Only plain convergence is accepted here because the returned object is a
    genuine finite product (no extrapolation can be attached to it).
    """
    if desc.generator is None:
        return desc
    probe_x = np.linspace(-xmax, xmax, 65)
    width = covering_width([desc], xmax)
    prev = _arg_finite(desc.materialized(width), probe_x)
    while width < MAX_WINDOW:
        width *= 2
        cur_desc = desc.materialized(width)
        cur = _arg_finite(cur_desc, probe_x)
        change = float(np.max(np.abs(cur - prev)))
        if change <= tol:
            return cur_desc
        prev = cur
    raise TruncationNotConverged(
        f"finite truncation still moves the argument by {change:.3e} on [-{xmax}, {xmax}]"
    )


# ----------------------------------------------------------------------------
# Public evaluation API
# ----------------------------------------------------------------------------


def _apply(desc: MifDescriptor, x, kernel, tol: float, dtype):
    xx = np.asarray(x, dtype=dtype)
    flat = xx.ravel()
    if desc.generator is None:
        out = kernel(desc, flat)
    else:
        start = covering_width([desc], float(np.max(np.abs(flat), initial=0.0)))
        tols = np.broadcast_to(np.asarray(tol, dtype=float), xx.shape).ravel()
        out = settle(lambda k: kernel(desc.materialized(k), flat), tols, start=start).values
    out = np.asarray(out).reshape(xx.shape)
    return out[()] if out.ndim == 0 else out


def eval_mif(desc: MifDescriptor, z, tol: float = 1e-10):
    """Evaluate the inner function at points of the closed upper half-plane.

    Args:
        desc: the descriptor.
        z: scalar or array of complex points with ``Im z >= 0``.
        tol: truncation tolerance for generated zero sequences (applied to
            the logarithm of the value).

    Returns:
        Values of the same shape as ``z``.

    Raises:
        PoleHit: if ``z`` is a conjugate zero.
        TruncationNotConverged: if a generator cannot be truncated to ``tol``.

    >>> complex(eval_mif(MifDescriptor([1j]), 0.0))
    (-1+0j)
    """
    zz = np.asarray(z, dtype=complex)
    if np.any(zz.imag < 0):
        raise InputError("eval_mif expects Im z >= 0")
    if desc.generator is None:
        return _apply(desc, zz, _eval_finite, tol, complex)
    logs = _apply(desc, zz, _log_finite, tol, complex)
    return np.exp(logs)


def arg_mif(desc: MifDescriptor, x, tol: float = 1e-10):
    """Continuous increasing argument on the real line.

    ``phi(x) = a x + arg(rotation) + sum_n [2 arctan((x - u_n)/v_n) + c_n]``
    with ``c_n = pi + arg eps_n`` (left branch) or that constant shifted by a
    multiple of ``2 pi`` (origin branch). Generated products are truncated
    with the origin branch until the values settle to ``tol``.

    >>> float(arg_mif(MifDescriptor([1j]), 0.0)) == math.pi
    True
    """
    return _apply(desc, x, _arg_finite, tol, float)


def darg_mif(desc: MifDescriptor, x, tol: float = 1e-10):
    """Derivative of the argument, ``a + sum 2 v_n / ((x - u_n)^2 + v_n^2)``.

    This equals ``|I'(x)|`` on the real line.
    """
    return _apply(desc, x, _darg_finite, tol, float)


def arg_diff(I: MifDescriptor, J: MifDescriptor, x, tol: float = 1e-8):
    """``arg I - arg J`` on real points, truncating both on a shared window.

    Zeros common to the two truncations cancel exactly, so pairs of
    generated products that differ on a sparse set of indices converge much
    faster than either argument alone.
    """
    xx = np.asarray(x, dtype=float)
    flat = xx.ravel()

    def at(k):
        a, b = joint_materialize([I, J], k, cancel=True)
        return _arg_finite(a, flat) - _arg_finite(b, flat)

    if I.generator is None and J.generator is None:
        out = at(0)
    else:
        start = covering_width([I, J], float(np.max(np.abs(flat), initial=0.0)))
        tols = np.broadcast_to(np.asarray(tol, dtype=float), xx.shape).ravel()
        out = settle(at, tols, start=start).values
    out = out.reshape(xx.shape)
    return out[()] if out.ndim == 0 else out


def arg_limits(desc: MifDescriptor) -> tuple[float, float]:
    """Limits of the argument at ``-inf`` and ``+inf`` for finite ``a = 0`` data."""
    if desc.generator is not None or desc.exp_mass > 0:
        raise InputError("argument limits are finite only for finite Blaschke products")
    lam = desc.zeros
    base = float(np.angle(desc.rotation))
    if lam.size == 0:
        return base, base
    c = factor_args(lam, np.array([-np.inf]), desc.branch)[0]
    left = base + float(np.sum(c))
    return left, left + 2 * math.pi * lam.size


def with_branch(desc: MifDescriptor, branch: str) -> MifDescriptor:
    """Same function, different argument normalisation."""
    return replace(desc, branch=branch)
