"""
Bipartite Connectivity Toolkit - Asymptotic Regimes
Leading-order formulas for the four scalings of c = p(n + m) and a finite-n regime classifier.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional

from model_core import DomainError, GraphParams, prefactor, walk_params
from settings import get_settings

logger = logging.getLogger(__name__)


class Regime(str, Enum):
    R1_DENSE = "R1-dense"
    R2_CONSTANT_C = "R2-constant-c"
    R3_SMALL_C = "R3-small-c"
    R4_TINY_C = "R4-tiny-c"
    UNCOVERED = "uncovered"

    @classmethod
    def coerce(cls, value: "Regime | str") -> "Regime":
        """Accept enum values and the short forms r1..r4 / asym-r1..asym-r4."""
        if isinstance(value, cls):
            return value
        normalized = str(value).strip().lower()
        if normalized.startswith("asym-"):
            normalized = normalized[len("asym-"):]
        for member in cls:
            if normalized in {member.value.lower(), member.short}:
                return member
        raise DomainError(f"unknown regime {value!r}")

    @property
    def short(self) -> str:
        return self.value.split("-", 1)[0].lower()


@dataclass
class RegimeResult:
    """A regime formula evaluated at a finite triple."""
    regime: Regime
    value: float
    prefactor_core: float
    correction: float
    alpha_n: Optional[float] = None
    beta_m: Optional[float] = None
    alpha_n_exact: Optional[float] = None
    beta_m_exact: Optional[float] = None
    intermediate: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "regime": self.regime.value,
            "value": self.value,
            "prefactor_core": self.prefactor_core,
            "correction": self.correction,
            "alpha_n": self.alpha_n,
            "beta_m": self.beta_m,
            "alpha_n_exact": self.alpha_n_exact,
            "beta_m_exact": self.beta_m_exact,
            "intermediate": self.intermediate,
        }


@dataclass
class RegimeIntensities:
    """alpha_n, beta_m as displayed for constant c, and the finite-n walk intensities."""
    alpha_n: float
    beta_m: float
    alpha_n_exact: float
    beta_m_exact: float


@dataclass
class TrendPoint:
    n: int
    m: int
    exact: float
    asymptotic: float

    @property
    def ratio(self) -> float:
        return self.exact / self.asymptotic

    @property
    def distance(self) -> float:
        return abs(self.ratio - 1.0)


def regime2_intensities(gp: GraphParams, c: Optional[float] = None) -> RegimeIntensities:
    gp.require_open_p()
    c = gp.c if c is None else float(c)
    if c <= 0:
        raise DomainError("regime 2 needs c > 0")
    total = gp.n + gp.m
    # e^{-x} / (1 - e^{-x}) = 1 / expm1(x)
    alpha_n = (gp.m * c / total) / math.expm1(c * gp.n / total)
    beta_m = (gp.n * c / total) / math.expm1(c * gp.m / total)
    wp = walk_params(gp)
    return RegimeIntensities(
        alpha_n=alpha_n,
        beta_m=beta_m,
        alpha_n_exact=float(wp.alpha[-1]),
        beta_m_exact=float(wp.beta[-1]),
    )


def spanning_tree_form(gp: GraphParams) -> float:
    """n^{m-1} m^{n-1} p^{n+m-1}."""
    n, m = gp.n, gp.m
    log_value = (m - 1) * math.log(n) + (n - 1) * math.log(m) + (n + m - 1) * math.log(float(gp.p))
    # overflows doubles well outside the tiny-c band
    return math.exp(log_value) if log_value < 709.0 else math.inf


def asym_estimate(gp: GraphParams, regime: "Regime | str", c: Optional[float] = None) -> RegimeResult:
    """Evaluate one regime formula; the caller picks the regime."""
    gp.require_open_p()
    regime = Regime.coerce(regime)

    if regime is Regime.R1_DENSE:
        core = prefactor(gp, gp.n)
        return RegimeResult(regime=regime, value=core, prefactor_core=core, correction=1.0)

    if regime is Regime.R2_CONSTANT_C:
        core = prefactor(gp, gp.n)
        intensities = regime2_intensities(gp, c)
        correction = 1.0 - intensities.alpha_n * intensities.beta_m
        return RegimeResult(
            regime=regime,
            value=correction * core,
            prefactor_core=core,
            correction=correction,
            alpha_n=intensities.alpha_n,
            beta_m=intensities.beta_m,
            alpha_n_exact=intensities.alpha_n_exact,
            beta_m_exact=intensities.beta_m_exact,
        )

    if regime is Regime.R3_SMALL_C:
        core = prefactor(gp, gp.n)
        correction = (gp.c if c is None else float(c)) / 2.0
        return RegimeResult(regime=regime, value=correction * core, prefactor_core=core, correction=correction)

    if regime is Regime.R4_TINY_C:
        core = prefactor(gp, gp.n - 1)
        correction = 1.0 / gp.n
        return RegimeResult(
            regime=regime,
            value=spanning_tree_form(gp),
            prefactor_core=core,
            correction=correction,
            intermediate=core * correction,
        )

    raise DomainError("no formula is stated for uncovered parameters")


def classify_regime(gp: GraphParams, aspect_ratio: Optional[float] = None) -> Regime:
    """
    Finite-n reading of the regime scalings. Checks run in the order
    dense, constant c, tiny c, small c; anything else is uncovered.
    """
    settings = get_settings()
    n, m, c = gp.n, gp.m, gp.c
    aspect = m / n if aspect_ratio is None else float(aspect_ratio)
    if aspect <= 0 or abs(m / (aspect * n) - 1.0) > settings.REGIME_ASPECT_TOLERANCE:
        logger.debug("m=%d is not close to a*n with a=%s", m, aspect)
        return Regime.UNCOVERED

    if c >= settings.REGIME_DENSE_FACTOR * math.log(n + m):
        return Regime.R1_DENSE
    if c >= settings.REGIME_R2_LOWER:
        return Regime.R2_CONSTANT_C
    if c <= settings.REGIME_TINY / n:
        return Regime.R4_TINY_C
    if n > 1 and c * math.sqrt(n) / math.log(n) >= settings.REGIME_R3_SCORE:
        return Regime.R3_SMALL_C
    return Regime.UNCOVERED


def trend_points(
    ns: Iterable[int],
    c_of_n: Callable[[int], float],
    regime: "Regime | str",
    exact: Callable[[GraphParams], float],
    aspect_ratio: float = 1.0,
    reference: Optional[Callable[[GraphParams], float]] = None,
) -> List[TrendPoint]:
    """
    exact route against a regime formula (or against `reference`) along an n-sequence
    with m = round(a n) and c given as a function of n.
    """
    points = []
    for n in ns:
        m = max(1, round(aspect_ratio * n))
        gp = GraphParams.from_c(n, m, c_of_n(n))
        denominator = reference(gp) if reference is not None else asym_estimate(gp, regime).value
        points.append(TrendPoint(n=n, m=m, exact=exact(gp), asymptotic=denominator))
        logger.debug("Trend n=%d m=%d ratio=%.6f", n, m, points[-1].ratio)
    return points
