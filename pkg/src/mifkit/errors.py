"""Exception hierarchy shared by every mifkit module.

All library errors derive from :class:`MifError`. Errors that signal a
malformed input (rather than a numerical failure) additionally derive from
:class:`InputError`, which the command line maps to its schema exit code.
"""


class MifError(Exception):
    """Base class for all mifkit errors."""


class InputError(MifError, ValueError):
    """An argument violates a documented precondition."""


class NonUpperHalfZero(InputError):
    """A zero that should lie in the open upper half-plane does not."""


class PoleHit(MifError):
    """Evaluation point coincides with a pole (a conjugate zero)."""


class TruncationNotConverged(MifError):
    """A generated infinite product could not be truncated within tolerance."""


class ConstantMif(InputError):
    """The operation needs a nonconstant inner function."""


class EmptyMeasure(InputError):
    """The measure has no atoms and no mass at infinity."""


class OnSupport(MifError):
    """Cauchy integral requested at an atom of the measure."""


class InfiniteMassUnsupported(MifError):
    """Recovery would need the point mass at infinity, which is not handled."""


class ZeroDegree(InputError):
    """A model space of a constant inner function is trivial."""


class SharedZero(InputError):
    """Two rational inner functions share a zero; cancel it first."""


class QuadratureFail(MifError):
    """An integral did not converge."""


class TailDivergent(MifError):
    """The tail of an improper integral does not decay fast enough."""


class TailNotSettled(MifError):
    """Asymptotic tail values have not stabilised on the requested window."""


class NotApplicable(MifError):
    """A diagnostic's hypotheses fail on the given input."""


class TailModelUnfit(MifError):
    """A power-law tail model does not fit the sampled data."""


class NumericalUnderflow(MifError):
    """Values became too small (or non-finite) to take logarithms."""


class WindowExhausted(MifError):
    """The data window is too small to settle the requested quantity."""


class BoundaryUncertain(MifError):
    """The profile is still rising at the right edge of the window."""


class Inconclusive(MifError):
    """Evidence bands overlap; no decision is possible."""


class ZeroOfE(MifError):
    """Division by a zero of a Hermite-Biehler function."""


class PVNotSettled(MifError):
    """Principal-value extrapolation did not stabilise."""


class NotMonotone(InputError):
    """A function expected to be strictly increasing is not."""
