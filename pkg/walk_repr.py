"""
Bipartite Connectivity Toolkit - Poisson Walk Representation
Connectivity as prefactor x P(S_k >= 0, 0 < k < n | A_n = m, B_m = n - 1),
with S_k = B_{A_k} - k built from two independent inhomogeneous Poisson walks.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional

import numpy as np

from exploration import LatticeDP
from model_core import (
    ConnectivityError,
    GraphParams,
    check_state_budget,
    endpoint_probabilities,
    log_poisson_pmf,
    prefactor,
    walk_params,
)
from settings import get_settings

logger = logging.getLogger(__name__)

_ROUNDING_SLACK = 1e-9


@dataclass
class WalkDpResult:
    """Connectivity probability as prefactor times the conditional nonnegativity factor."""
    conditional: float
    prefactor: float
    endpoint_a: float
    endpoint_b: float
    total: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "conditional": self.conditional,
            "prefactor": self.prefactor,
            "endpoint_a": self.endpoint_a,
            "endpoint_b": self.endpoint_b,
            "total": self.total,
        }


@dataclass
class MonotonicityProfile:
    """Conditional factor over an increasing p-grid."""
    n: int
    m: int
    ps: list[float]
    values: list[float]
    slack: float

    @property
    def first_violation(self) -> Optional[int]:
        for t in range(1, len(self.values)):
            if self.values[t] < self.values[t - 1] - self.slack:
                return t
        return None

    @property
    def monotone(self) -> bool:
        return self.first_violation is None


def _poisson_kernel(size: int, lam: float) -> np.ndarray:
    """kernel[u, v] = P(Poisson(lam) = v - u), truncated to the size x size cap."""
    steps = np.arange(size)[None, :] - np.arange(size)[:, None]
    with np.errstate(under="ignore"):
        weights = np.exp(log_poisson_pmf(np.maximum(steps, 0), lam))
    return np.where(steps >= 0, weights, 0.0)


def poisson_lattice(gp: GraphParams) -> LatticeDP:
    """Lattice with Poisson(alpha_k) left steps and Poisson(beta_j) right absorptions, capped at a <= m, b <= n - 1."""
    wp = walk_params(gp)
    right = [_poisson_kernel(gp.n, float(beta)) for beta in wp.beta]
    return LatticeDP(
        gp.n,
        gp.m,
        left_kernel=lambda k: _poisson_kernel(gp.m + 1, float(wp.alpha[k - 1])),
        right_kernels=right,
    )


def conditional_nonneg_prob(gp: GraphParams, budget: Optional[int] = None) -> float:
    """P(S_k >= 0 for 0 < k < n | A_n = m, B_m = n - 1)."""
    gp.require_open_p()
    check_state_budget(gp, budget if budget is not None else get_settings().DP_STATE_BUDGET)
    joint = poisson_lattice(gp).terminal_probability()
    endpoint_a, endpoint_b = endpoint_probabilities(gp)
    value = joint / (endpoint_a * endpoint_b)
    logger.debug("Walk DP n=%d m=%d p=%s joint=%.6e conditional=%.12f", gp.n, gp.m, gp.p, joint, value)
    if value > 1.0 + _ROUNDING_SLACK:
        raise ConnectivityError(f"conditional factor {value!r} exceeds 1 beyond rounding at n={gp.n} m={gp.m} p={gp.p}")
    # near p = 1 the ratio of two products of pmfs lands a few ulps above 1
    return min(1.0, max(0.0, value))


def connectivity_via_walk(gp: GraphParams, budget: Optional[int] = None) -> WalkDpResult:
    conditional = conditional_nonneg_prob(gp, budget)
    endpoint_a, endpoint_b = endpoint_probabilities(gp)
    factor = prefactor(gp, gp.n - 1)
    return WalkDpResult(
        conditional=conditional,
        prefactor=factor,
        endpoint_a=endpoint_a,
        endpoint_b=endpoint_b,
        total=factor * conditional,
    )


def endpoint_marginals(gp: GraphParams) -> tuple[float, float]:
    """
    P(A_n = m) and P(B_m = n - 1) from the lattice steps alone.
    Increments are nonnegative, so the caps never touch the mass at the endpoint.
    """
    wp = walk_params(gp)
    a_mass = np.zeros(gp.m + 1)
    a_mass[0] = 1.0
    for alpha in wp.alpha:
        a_mass = a_mass @ _poisson_kernel(gp.m + 1, float(alpha))
    b_mass = np.zeros(gp.n)
    b_mass[0] = 1.0
    for beta in wp.beta:
        b_mass = b_mass @ _poisson_kernel(gp.n, float(beta))
    return float(a_mass[gp.m]), float(b_mass[gp.n - 1])


def monotonicity_profile(n: int, m: int, ps: Iterable[float], slack: float = 1e-10) -> MonotonicityProfile:
    grid = sorted(float(p) for p in ps)
    values = [conditional_nonneg_prob(GraphParams(n=n, m=m, p=p)) for p in grid]
    profile = MonotonicityProfile(n=n, m=m, ps=grid, values=values, slack=slack)
    if not profile.monotone:
        t = profile.first_violation
        logger.warning(
            "Conditional factor decreased for n=%d m=%d between p=%s and p=%s", n, m, grid[t - 1], grid[t]
        )
    return profile
