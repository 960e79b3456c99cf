"""Built-in model catalog, addressable by name + parameters from the CLI.

Reference Weibull-tail coefficients: pure Weibull(alpha, lambda) has
theta = 1/alpha, the extended Weibull(beta, delta) theta = 1/beta, the
Normal 1/2, and Exponential/Gamma/Logistic sit at theta = 1 where the
(theta - 1)-asymptotics are excluded; those models are constructible and
their exact quantities compute, but penultimate asymptotics refuse them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

from scipy import special as sps
from scipy import stats as sstats

from . import slowly_varying as sv
from .model import Family, WeibullTypeModel

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def weibull_type(
    theta: float,
    l: sv.SlowlyVaryingSpec,
    family: Family = Family.TAIL_EXP,
    support_lower: float = 0.0,
    label: Optional[str] = None,
) -> WeibullTypeModel:
    """Generic constructor for the two exponential-tail families."""
    return WeibullTypeModel(
        family=family,
        theta=theta,
        l=l,
        support_lower=support_lower,
        label=label or f"{family.value}(theta={theta:g}, l={l.label})",
    )


def pure_weibull(theta: Optional[float] = None, alpha: Optional[float] = None,
                 scale: float = 1.0) -> WeibullTypeModel:
    """Weibull(alpha, lambda): 1 - F = exp(-(x/lambda)^alpha), theta = 1/alpha."""
    if (theta is None) == (alpha is None):
        raise ValueError("give exactly one of theta or alpha")
    if theta is None:
        theta = 1.0 / alpha
    if not theta > 0.0 or not scale > 0.0:
        raise ValueError("theta and scale must be positive")
    c = scale ** (-1.0 / theta)
    return weibull_type(
        theta=theta,
        l=sv.constant(c),
        support_lower=0.0,
        label=f"pure-weibull(theta={theta:g}, scale={scale:g})",
    )


def extended_weibull(beta: float, delta: float = 1.0) -> WeibullTypeModel:
    """1 - F = exp(-x^beta (log x)^delta); theta = 1/beta."""
    if not beta > 0.0:
        raise ValueError("beta must be positive")
    # keep H strictly increasing: H' > 0 needs log x > -delta/beta
    lmin = max(1.0, 0.5 - delta / beta)
    return weibull_type(
        theta=1.0 / beta,
        l=sv.log_power(delta),
        support_lower=math.exp(lmin),
        label=f"extended-weibull(beta={beta:g}, delta={delta:g})",
    )


def gumbel_fixture() -> WeibullTypeModel:
    """-log F = e^-x: the exact-Gumbel null fixture (k == 1, zero errors)."""
    return weibull_type(
        theta=1.0,
        l=sv.constant(1.0),
        family=Family.LOG_CDF_EXP,
        support_lower=0.0,
        label="gumbel-fixture",
    )


def normal() -> WeibullTypeModel:
    """Standard Normal (reference theta = 1/2).

    Tail evaluation goes through erfc/erfcx and log_ndtr, accurate to a
    few ulp arbitrarily deep in the tail; the hazard derivatives use the
    Mills-ratio recurrence h' = h(h - x).
    """

    def hazard_block(x: float) -> Tuple[float, float, float, float]:
        if x < 50.0:
            h = math.sqrt(2.0 / math.pi) / float(sps.erfcx(x / _SQRT2))
            h1 = h * (h - x)
            h2 = h1 * (h - x) + h * (h1 - 1.0)
            h3 = h2 * (h - x) + 2.0 * h1 * (h1 - 1.0) + h * h2
            return h, h1, h2, h3
        # The recurrence cancels in h - x and h' - 1 for large x; all four
        # orders come from the inverse-Mills asymptotic series instead
        # (relative truncation ~3e-9 at x = 50, O(x^-8) beyond).
        v = 1.0 / (x * x)
        delta = (1.0 / x) * (1.0 - v * (2.0 - v * (10.0 - v * (74.0 - 706.0 * v))))
        h = x + delta
        h1 = 1.0 - v * (1.0 - v * (6.0 - v * (50.0 - 518.0 * v)))
        h2 = (2.0 - v * (24.0 - v * (300.0 - 4144.0 * v))) * v / x
        h3 = -(6.0 - v * (120.0 - v * (2100.0 - 37296.0 * v))) * v * v
        return h, h1, h2, h3

    return WeibullTypeModel(
        family=Family.CLASSICAL,
        theta=0.5,
        label="normal",
        support_lower=-math.inf,
        classical_cdf=lambda x: float(sps.ndtr(x)),
        classical_density=lambda x: _INV_SQRT_2PI * math.exp(-0.5 * x * x),
        classical_log_cdf=lambda x: float(sps.log_ndtr(x)),
        classical_log_sf=lambda x: float(sps.log_ndtr(-x)),
        classical_log_pdf=lambda x: -0.5 * x * x - _LOG_SQRT_2PI,
        hazard_derivs=hazard_block,
    )


def exponential() -> WeibullTypeModel:
    """Standard Exponential (theta = 1; excluded from asymptotics)."""

    def hazard_block(x: float) -> Tuple[float, float, float, float]:
        return 1.0, 0.0, 0.0, 0.0

    return WeibullTypeModel(
        family=Family.CLASSICAL,
        theta=1.0,
        label="exponential",
        support_lower=0.0,
        classical_cdf=lambda x: -math.expm1(-x) if x > 0.0 else 0.0,
        classical_density=lambda x: math.exp(-x) if x > 0.0 else 0.0,
        classical_log_cdf=lambda x: math.log(-math.expm1(-x)) if x > 0.0 else -math.inf,
        classical_log_sf=lambda x: -x if x > 0.0 else 0.0,
        classical_log_pdf=lambda x: -x if x > 0.0 else -math.inf,
        hazard_derivs=hazard_block,
    )


def logistic() -> WeibullTypeModel:
    """Standard Logistic (theta = 1; excluded from asymptotics)."""

    def F(x: float) -> float:
        return 1.0 / (1.0 + math.exp(-x)) if x > -500.0 else math.exp(x)

    def log_sf(x: float) -> float:
        if x >= 0.0:
            return -x - math.log1p(math.exp(-x))
        return -math.log1p(math.exp(x))

    def hazard_block(x: float) -> Tuple[float, float, float, float]:
        h = F(x)
        h1 = h * math.exp(log_sf(x))  # F * (1 - F), stable for large x
        h2 = h1 * (1.0 - 2.0 * h)
        h3 = h2 * (1.0 - 2.0 * h) - 2.0 * h1 * h1
        return h, h1, h2, h3

    return WeibullTypeModel(
        family=Family.CLASSICAL,
        theta=1.0,
        label="logistic",
        support_lower=-math.inf,
        classical_cdf=F,
        classical_density=lambda x: F(x) * math.exp(log_sf(x)),
        classical_log_cdf=lambda x: log_sf(-x),
        classical_log_sf=log_sf,
        classical_log_pdf=lambda x: log_sf(x) + log_sf(-x),
        hazard_derivs=hazard_block,
    )


def gamma_model(shape: float = 2.0) -> WeibullTypeModel:
    """Gamma(shape) with unit scale (theta = 1; excluded from asymptotics).

    shape = 1 collapses to the Exponential; the interesting members here
    have shape != 1 (their penultimate index decays like 1/log^2 n rather
    than 1/n, one reason the theta = 1 row is not treated uniformly).
    """
    if not shape > 0.0:
        raise ValueError("shape must be positive")
    dist = sstats.gamma(shape)

    def hazard_block(x: float, a: float = shape) -> Tuple[float, float, float, float]:
        h = math.exp(dist.logpdf(x) - dist.logsf(x))
        psi = (a - 1.0) / x - 1.0  # f'/f
        psi1 = -(a - 1.0) / (x * x)
        psi2 = 2.0 * (a - 1.0) / (x**3)
        h1 = h * (psi + h)
        h2 = h1 * (psi + h) + h * (psi1 + h1)
        h3 = h2 * (psi + h) + 2.0 * h1 * (psi1 + h1) + h * (psi2 + h2)
        return h, h1, h2, h3

    return WeibullTypeModel(
        family=Family.CLASSICAL,
        theta=1.0,
        label=f"gamma(shape={shape:g})",
        support_lower=0.0,
        classical_cdf=lambda x: float(dist.cdf(x)),
        classical_density=lambda x: float(dist.pdf(x)),
        classical_log_cdf=lambda x: float(dist.logcdf(x)),
        classical_log_sf=lambda x: float(dist.logsf(x)),
        classical_log_pdf=lambda x: float(dist.logpdf(x)),
        hazard_derivs=hazard_block,
    )


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    build: Callable[..., WeibullTypeModel]
    params: Tuple[str, ...]
    family: str
    theta_reference: str
    theta_is_one: bool


CATALOG: Dict[str, CatalogEntry] = {
    "pure-weibull": CatalogEntry(
        name="pure-weibull",
        build=pure_weibull,
        params=("theta", "alpha", "scale"),
        family=Family.TAIL_EXP.value,
        theta_reference="theta = 1/alpha",
        theta_is_one=False,
    ),
    "extended-weibull": CatalogEntry(
        name="extended-weibull",
        build=extended_weibull,
        params=("beta", "delta"),
        family=Family.TAIL_EXP.value,
        theta_reference="theta = 1/beta",
        theta_is_one=False,
    ),
    "normal": CatalogEntry(
        name="normal",
        build=normal,
        params=(),
        family=Family.CLASSICAL.value,
        theta_reference="theta = 1/2",
        theta_is_one=False,
    ),
    "exponential": CatalogEntry(
        name="exponential",
        build=exponential,
        params=(),
        family=Family.CLASSICAL.value,
        theta_reference="theta = 1",
        theta_is_one=True,
    ),
    "logistic": CatalogEntry(
        name="logistic",
        build=logistic,
        params=(),
        family=Family.CLASSICAL.value,
        theta_reference="theta = 1",
        theta_is_one=True,
    ),
    "gamma": CatalogEntry(
        name="gamma",
        build=gamma_model,
        params=("shape",),
        family=Family.CLASSICAL.value,
        theta_reference="theta = 1",
        theta_is_one=True,
    ),
    "gumbel-fixture": CatalogEntry(
        name="gumbel-fixture",
        build=gumbel_fixture,
        params=(),
        family=Family.LOG_CDF_EXP.value,
        theta_reference="theta = 1 (exact Gumbel)",
        theta_is_one=True,
    ),
}


def build_model(name: str, **params: float) -> WeibullTypeModel:
    """Resolve a catalog name and construct the model, validating params."""
    entry = CATALOG.get(name)
    if entry is None:
        raise KeyError(f"unknown model {name!r}; available: {', '.join(sorted(CATALOG))}")
    unknown = set(params) - set(entry.params)
    if unknown:
        raise ValueError(
            f"model {name!r} does not take parameter(s) {sorted(unknown)}; allowed: {list(entry.params)}"
        )
    return entry.build(**params)
