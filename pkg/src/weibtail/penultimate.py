"""Penultimate tail index and ultimate-vs-penultimate error curves.

The n-dependent shape gamma_n = -k'(b_n)/k^2(b_n) approaches (theta-1)/log n,
positive for theta > 1 (Frechet-type penultimate behavior) and negative for
theta < 1 (Weibull-type); at theta = 1 the asymptotic fields are refused
because the 1/log n scaling does not hold uniformly there.  Error curves
compare F^n(a_n x + b_n) against the Gumbel limit G_0 and against the
penultimate GEV G_{gamma_n} on a fixed grid, all in log space so no block
scale underflows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import (
    BelowSupportError,
    DegenerateProfileError,
    DomainError,
    GridSupportEmptyError,
    InsufficientGridError,
    InvalidBlockSizeError,
    OutsideTailRegionError,
    TailUnderflowError,
    ThetaOneExcludedError,
)
from .model import (
    WeibullTypeModel,
    gev_cdf_array,
    gumbel_cdf_array,
    gumbel_coordinate,
    gumbel_coordinate_inverse,
    gumbel_density_array,
    k_derivative,
    k_function,
)
from .norming import location as _norming_location
from .norming import norming as _norming

# Default evaluation window: covers all but ~1e-3 of the Gumbel mass.
DEFAULT_GRID: Tuple[float, float, int] = (-3.0, 6.0, 1000)
REMAINDER_DENOMINATOR_CUTOFF = 1e-12


class Classification(enum.Enum):
    FRECHET = "frechet"
    WEIBULL = "weibull"
    EXCLUDED_THETA_ONE = "excluded_theta_one"


@dataclass(frozen=True)
class PenultimateIndex:
    """Exact and asymptotic penultimate shape at one block size.

    ``rate_ultimate`` is the (1-theta)/log n convergence-rate functional of
    the ultimate (Gumbel) approximation; ``rate_penultimate`` the recorded
    second-order formula 2 theta (1-theta)/log^2 n.  ``gamma_prime_exact``
    evaluates the closed form
    (2(c-1)^2 - (c-1)(c-2)) / (b k(b))^2,  c = 1/theta,
    with the exact b k(b).  All theta-dependent fields are None with
    ``error`` = "theta_one_excluded" when theta = 1; the exact gamma_n is
    always filled.
    """

    log_n: float
    gamma_exact: float
    classification: Classification
    gamma_asymptotic: Optional[float] = None
    rate_ultimate: Optional[float] = None
    rate_penultimate: Optional[float] = None
    gamma_prime_exact: Optional[float] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class ErrorComparison:
    """Sup-norm errors of the ultimate and penultimate approximations."""

    log_n: float
    grid: Tuple[float, ...]
    sup_error_ultimate: float
    sup_error_penultimate: float
    argmax_ultimate: float
    argmax_penultimate: float
    remainder_max_deviation: Optional[float]
    gamma_used: float
    n_clipped: int


def gamma_of_t(model: WeibullTypeModel, t: float) -> float:
    """phi evaluated at the exact level: -k'(x)/k^2(x) at -log(-log F(x)) = t."""
    x = gumbel_coordinate_inverse(model, t)
    k = k_function(model, x)
    k1 = k_derivative(model, x, 1)
    return -k1 / (k * k)


def penultimate_index(model: WeibullTypeModel, log_n: float) -> PenultimateIndex:
    if not log_n > 0.0:
        raise InvalidBlockSizeError(f"log n must be positive, got {log_n!r}")
    b_exact, _ = _norming_location(model, log_n)
    k = k_function(model, b_exact)
    k1 = k_derivative(model, b_exact, 1)
    gamma_exact = -k1 / (k * k)
    theta = model.theta
    if model.theta_is_one:
        return PenultimateIndex(
            log_n=log_n,
            gamma_exact=gamma_exact,
            classification=Classification.EXCLUDED_THETA_ONE,
            error=ThetaOneExcludedError.code,
        )
    c = 1.0 / theta
    bk = b_exact * k
    return PenultimateIndex(
        log_n=log_n,
        gamma_exact=gamma_exact,
        classification=Classification.FRECHET if theta > 1.0 else Classification.WEIBULL,
        gamma_asymptotic=(theta - 1.0) / log_n,
        rate_ultimate=(1.0 - theta) / log_n,
        rate_penultimate=2.0 * theta * (1.0 - theta) / (log_n * log_n),
        gamma_prime_exact=(2.0 * (c - 1.0) ** 2 - (c - 1.0) * (c - 2.0)) / (bk * bk),
    )


def _validate_grid(grid_spec: Tuple[float, float, int]) -> np.ndarray:
    lo, hi, count = grid_spec
    if count < 100:
        raise InsufficientGridError(f"grid needs at least 100 points, got {count}")
    if not lo < hi:
        raise InsufficientGridError("grid needs lo < hi")
    return np.linspace(lo, hi, int(count))


def _maxima_curve(model: WeibullTypeModel, log_n: float, xs: np.ndarray,
                  b: float, a: float) -> np.ndarray:
    """F^n(a x + b) on the grid, via exp(-e^(log n - T(z)))."""
    exponents = np.empty_like(xs)
    for i, x in enumerate(xs):
        z = b + a * x
        try:
            exponents[i] = log_n - gumbel_coordinate(model, z)
        except (BelowSupportError, DomainError, OutsideTailRegionError):
            # F = 0 region: F^n vanishes beyond double resolution
            exponents[i] = math.inf
        except TailUnderflowError:
            # F = 1 at double precision: F^n is 1 to the same resolution
            exponents[i] = -math.inf
    with np.errstate(over="ignore"):
        return np.exp(-np.exp(exponents))


def error_comparison(
    model: WeibullTypeModel,
    log_n: float,
    grid_spec: Tuple[float, float, int] = DEFAULT_GRID,
    gamma_mode: str = "exact",
) -> ErrorComparison:
    """Sup |F^n(a x + b) - G_0| and sup |F^n(a x + b) - G_{gamma_n}|.

    ``gamma_mode`` selects the shape of the penultimate comparison curve:
    "exact" (default) uses -k'(b)/k^2(b); "asymptotic" uses (theta-1)/log n,
    reproducing the leading-order statements (refused at theta = 1).
    Grid points outside the support of G_{gamma_n} are clipped from the
    penultimate sup and counted in ``n_clipped``.
    """
    xs = _validate_grid(grid_spec)
    nc = _norming(model, log_n)
    b, a = nc.b_exact, nc.a_scale
    if gamma_mode == "exact":
        gamma_n = gamma_of_t(model, log_n)
    elif gamma_mode == "asymptotic":
        if model.theta_is_one:
            raise ThetaOneExcludedError(
                f"{model.label}: asymptotic gamma undefined at theta = 1"
            )
        gamma_n = (model.theta - 1.0) / log_n
    else:
        raise ValueError(f"unknown gamma_mode {gamma_mode!r}")

    fn = _maxima_curve(model, log_n, xs, b, a)
    g0 = gumbel_cdf_array(xs)
    diff_ult = np.abs(fn - g0)
    i_ult = int(np.argmax(diff_ult))

    valid = (1.0 + gamma_n * xs > 0.0) if gamma_n != 0.0 else np.ones_like(xs, dtype=bool)
    n_clipped = int((~valid).sum())
    if not valid.any():
        raise GridSupportEmptyError(
            f"no grid point satisfies 1 + gamma*x > 0 for gamma = {gamma_n!r}"
        )
    gpen = gev_cdf_array(gamma_n, xs[valid])
    diff_pen = np.abs(fn[valid] - gpen)
    i_pen = int(np.argmax(diff_pen))

    try:
        remainder = _remainder_deviation(model, xs, fn, g0, b)
    except DegenerateProfileError:
        remainder = None

    return ErrorComparison(
        log_n=log_n,
        grid=tuple(float(v) for v in xs),
        sup_error_ultimate=float(diff_ult[i_ult]),
        sup_error_penultimate=float(diff_pen[i_pen]),
        argmax_ultimate=float(xs[i_ult]),
        argmax_penultimate=float(xs[valid][i_pen]),
        remainder_max_deviation=remainder,
        gamma_used=gamma_n,
        n_clipped=n_clipped,
    )


def _remainder_deviation(model: WeibullTypeModel, xs: np.ndarray, fn: np.ndarray,
                         g0: np.ndarray, b: float) -> float:
    """max |R - 1| with R = (F^n - G_0) / ((x^2/2) k'(b)/k^2(b) g_0(x))."""
    k = k_function(model, b)
    k1 = k_derivative(model, b, 1)
    rate = k1 / (k * k)
    den = 0.5 * xs * xs * rate * gumbel_density_array(xs)
    mask = np.abs(den) > REMAINDER_DENOMINATOR_CUTOFF
    if not mask.any():
        raise DegenerateProfileError(
            f"{model.label}: remainder denominator below cutoff everywhere"
        )
    ratio = (fn[mask] - g0[mask]) / den[mask]
    return float(np.max(np.abs(ratio - 1.0)))


def remainder_profile(
    model: WeibullTypeModel,
    log_n: float,
    grid_spec: Tuple[float, float, int] = DEFAULT_GRID,
) -> float:
    """Max deviation of the first-order remainder ratio from 1 (Gumbel branch).

    Shrinks as log n grows when the remainder expansion applies; raises
    ``DegenerateProfileError`` when the denominator vanishes on the whole
    grid (the exact-Gumbel fixture).
    """
    xs = _validate_grid(grid_spec)
    nc = _norming(model, log_n)
    fn = _maxima_curve(model, log_n, xs, nc.b_exact, nc.a_scale)
    g0 = gumbel_cdf_array(xs)
    return _remainder_deviation(model, xs, fn, g0, nc.b_exact)
