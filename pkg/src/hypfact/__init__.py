"""Linear-factor construction of hypercyclic entire functions.

Given a differential operator T = phi(D) acting on entire functions, this
package builds a sequence of linear factors (1 - z/a_j) whose partial
products approximate prescribed polynomial targets under iterates of T,
and emits machine-checkable certificates of the measured stage
inequalities.
"""

__version__ = "0.1.0"

from .poly import (  # noqa: F401
    DiskNormEstimate,
    NonFiniteError,
    Poly,
    PrecisionError,
    current_precision,
    disk_norm,
    divide,
    precision,
    roots,
    set_precision,
)
from .diffop import DiffOperator, GrowthConstants, TruncatedSymbol  # noqa: F401
