"""khinfam: exact coefficients and saddle-point asymptotics of power series
with non-negative coefficients, organized around their Khinchin families."""

from . import asym, catalog, errors, family, lagrange, large_powers, numerics, series
from .asym import Estimate, SaddlePoint
from .catalog import FamilySpec, make_family, parse_family
from .family import Family
from .numerics import LogNumber
from .series import CoeffSeries

__version__ = "0.1.0"

__all__ = [
    "asym",
    "catalog",
    "errors",
    "family",
    "lagrange",
    "large_powers",
    "numerics",
    "series",
    "Estimate",
    "SaddlePoint",
    "FamilySpec",
    "make_family",
    "parse_family",
    "Family",
    "LogNumber",
    "CoeffSeries",
    "__version__",
]
