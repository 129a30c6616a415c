"""Computational toolkit for meromorphic inner functions.

Modules:
    inner_core: descriptors, evaluation and arguments of inner functions.
    clark: Clark measures and their inverse.
    model_fd: exact finite-dimensional model spaces and Toeplitz kernels.
    toeplitz_order: argument-based order diagnostics.
    bm: Beurling-Malliavin density and almost-decreasing profiles.
    debranges: Hermite-Biehler functions and de Branges spaces.
    numerics: quadrature, harmonic conjugation and root finding.
    cli: the ``mifkit`` command.
"""

from .errors import MifError, InputError
from .inner_core import MifDescriptor, GridFunction, ZeroGenerator, eval_mif, arg_mif, darg_mif, pure_singular
from .clark import AtomicMeasure, clark_measure, mif_from_measure, clark_recover
from .model_fd import RationalInner, toeplitz_kernel, kernel_dim, order_relation
from .toeplitz_order import order_verdict, drift_test, harmonic_conjugate
from .bm import IntervalFamily, bm_density, family_weight_sum
from .debranges import HBFunction, reproducing_kernel

__version__ = "0.1.0"

__all__ = [
    "MifError", "InputError", "MifDescriptor", "GridFunction", "ZeroGenerator", "eval_mif", "arg_mif",
    "darg_mif", "pure_singular", "AtomicMeasure", "clark_measure", "mif_from_measure", "clark_recover",
    "RationalInner", "toeplitz_kernel", "kernel_dim", "order_relation", "order_verdict", "drift_test",
    "harmonic_conjugate", "IntervalFamily", "bm_density", "family_weight_sum", "HBFunction",
    "reproducing_kernel", "__version__",
]
