"""Norming constants for the maxima normalization F^n(a_n x + b_n).

The location is computed twice on purpose: ``b_exact`` solves the defining
level F(b) = exp(-1/n) (equivalently -log(-log F(b)) = log n), while
``b_asymptotic`` is H^{-1}(log n).  The two differ at order e^-log n / log n,
which is measurable at desk scales, and all error-curve work downstream
uses the exact one.  The scale is a_n = 1/k(b_exact), never 1/H'(b).

Convention note: the defining level is F(b_n) = exp(-1/n), not
1 - F(b_n) = 1/n (they differ at order 1/n); output metadata records this.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .errors import InvalidBlockSizeError
from .model import (
    WeibullTypeModel,
    cumulative_hazard_inverse,
    gumbel_coordinate_inverse,
    k_function,
)

NORMING_CONVENTION = "F(b_n) = exp(-1/n)"


@dataclass(frozen=True)
class NormingConstants:
    log_n: float
    b_exact: float
    b_asymptotic: float
    a_scale: float


def location(model: WeibullTypeModel, log_n: float) -> Tuple[float, float]:
    """(b_exact, b_asymptotic) for block size n = e^log_n."""
    if not log_n > 0.0:
        raise InvalidBlockSizeError(f"log n must be positive, got {log_n!r}")
    b_asymptotic = cumulative_hazard_inverse(model, log_n)
    b_exact = gumbel_coordinate_inverse(model, log_n)
    return b_exact, b_asymptotic


def scale(model: WeibullTypeModel, b: float) -> float:
    """a_n = 1 / k(b)."""
    return 1.0 / k_function(model, b)


def norming(model: WeibullTypeModel, log_n: float) -> NormingConstants:
    b_exact, b_asymptotic = location(model, log_n)
    return NormingConstants(
        log_n=log_n,
        b_exact=b_exact,
        b_asymptotic=b_asymptotic,
        a_scale=scale(model, b_exact),
    )
