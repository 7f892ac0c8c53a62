"""Shared value types, evaluation policy and exceptions."""

import math
import os
from dataclasses import dataclass

RTOL_ENV = "NCX2_EVAL_RTOL"


class Ncx2Error(Exception):
    """Base class for all errors raised by this package."""


class DomainError(Ncx2Error, ValueError):
    """Arguments outside the domain of a function or method."""


class DivergenceError(DomainError):
    """A series is evaluated outside its region of convergence."""


class NonConvergenceError(Ncx2Error, ArithmeticError):
    """A series or quadrature did not reach the requested tolerance.

    ``result`` holds the partial :class:`SeriesEval` (or ``None``).
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class QuadratureError(NonConvergenceError):
    """Adaptive quadrature exhausted its panel budget."""


@dataclass(frozen=True)
class EvalPolicy:
    """Truncation tolerances shared by every series and quadrature."""

    rel_tol: float = 1e-14
    abs_tol: float = 1e-300
    max_terms: int = 10000

    def __post_init__(self):
        if not (self.rel_tol > 0 and math.isfinite(self.rel_tol)):
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol!r}")
        if not self.abs_tol >= 0:
            raise ValueError(f"abs_tol must be nonnegative, got {self.abs_tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValueError(f"max_terms must be a positive integer, got {self.max_terms!r}")

    @classmethod
    def from_env(cls, **overrides):
        """Default policy with ``rel_tol`` taken from ``NCX2_EVAL_RTOL`` if set."""
        raw = os.environ.get(RTOL_ENV)
        if raw is not None and "rel_tol" not in overrides:
            try:
                overrides["rel_tol"] = float(raw)
            except ValueError:
                raise ValueError(f"{RTOL_ENV}={raw!r} is not a number") from None
        return cls(**overrides)


DEFAULT_POLICY = EvalPolicy()


def resolve(policy):
    return DEFAULT_POLICY if policy is None else policy


@dataclass(frozen=True)
class SeriesEval:
    """Result of a truncated series."""

    value: float
    terms_used: int
    converged: bool
    abs_tail_estimate: float

    def __float__(self):
        return float(self.value)


def series_result(value, terms, converged, tail, what):
    """Wrap raw kernel output; raise if the series did not converge."""
    res = SeriesEval(float(value), int(terms), bool(converged), float(tail))
    if not res.converged:
        raise NonConvergenceError(
            f"{what}: not converged after {res.terms_used} terms "
            f"(tail estimate {res.abs_tail_estimate:.3g})",
            res,
        )
    return res
