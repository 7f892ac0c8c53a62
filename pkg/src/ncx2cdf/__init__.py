"""Non-central chi-square CDF through its analytic representations.

>>> from ncx2cdf import cdf_value
>>> round(cdf_value(2, 1, 1), 12)
0.267120196203
"""

from ._jit import backend
from .base import (
    DEFAULT_POLICY,
    DivergenceError,
    DomainError,
    EvalPolicy,
    Ncx2Error,
    NonConvergenceError,
    QuadratureError,
    SeriesEval,
)
from .ncx2 import (
    ALL_METHODS,
    CdfMethod,
    MethodReport,
    Ncx2Params,
    applicable_methods,
    auto_method,
    cdf,
    cdf_2g1,
    cdf_bessel_series,
    cdf_central_limit,
    cdf_diag,
    cdf_foxwright,
    cdf_foxwright_even,
    cdf_half_s0,
    cdf_marcum,
    cdf_temme,
    cdf_value,
    pdf,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_METHODS", "CdfMethod", "DEFAULT_POLICY", "DivergenceError", "DomainError", "EvalPolicy",
    "MethodReport", "Ncx2Error", "Ncx2Params", "NonConvergenceError", "QuadratureError", "SeriesEval",
    "applicable_methods", "auto_method", "backend", "cdf", "cdf_2g1", "cdf_bessel_series",
    "cdf_central_limit", "cdf_diag", "cdf_foxwright", "cdf_foxwright_even", "cdf_half_s0",
    "cdf_marcum", "cdf_temme", "cdf_value", "pdf",
]
