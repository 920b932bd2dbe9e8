"""
Bipartite Connectivity Toolkit - Exploration Process
Runs the right-first exploration on concrete graphs and sums the trajectory set exactly.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, Any, Optional

import numpy as np

from model_core import (
    DomainError,
    GraphParams,
    check_state_budget,
    closed_form_connectivity,
    log_binom,
)
from oracle_brute import BipartiteGraph
from settings import get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExplorationTrace:
    """
    Observed counts of one exploration.
    r[i - 1] = R_i, l[j - 1] = L_j; the prefix arrays carry index 0,
    so s_r[k] = S^R_k, s_l[j] = S^L_j and s_star[k] = S^L_{S^R_k} - k.
    """
    r: np.ndarray
    l: np.ndarray
    s_r: np.ndarray
    s_l: np.ndarray
    s_star: np.ndarray

    @classmethod
    def from_counts(cls, r: Any, l: Any) -> "ExplorationTrace":
        r_arr = np.asarray(r, dtype=np.int64)
        l_arr = np.asarray(l, dtype=np.int64)
        if r_arr.size < 1 or l_arr.size < 1:
            raise DomainError("a trace needs at least one left and one right count")
        if np.any(r_arr < 0) or np.any(l_arr < 0):
            raise DomainError("activation counts must be nonnegative")
        if r_arr.sum() > l_arr.size or l_arr.sum() > r_arr.size - 1:
            raise DomainError(
                f"counts activate {int(r_arr.sum())} of {l_arr.size} right and {int(l_arr.sum())} of {r_arr.size - 1} left vertices"
            )
        s_r = np.concatenate(([0], np.cumsum(r_arr)))
        s_l = np.concatenate(([0], np.cumsum(l_arr)))
        s_star = s_l[s_r] - np.arange(r_arr.size + 1)
        return cls(r=r_arr, l=l_arr, s_r=s_r, s_l=s_l, s_star=s_star)

    @property
    def n(self) -> int:
        return int(self.r.size)

    @property
    def m(self) -> int:
        return int(self.l.size)

    @property
    def connected(self) -> bool:
        return in_trajectory_set(self)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.r.tolist(),
            "l": self.l.tolist(),
            "s_r": self.s_r.tolist(),
            "s_l": self.s_l.tolist(),
            "s_star": self.s_star.tolist(),
        }


def in_trajectory_set(trace: ExplorationTrace) -> bool:
    """Membership in T_{n,m}: all right vertices reached, n - 1 left activations, barrier for 0 < k < n."""
    n, m = trace.n, trace.m
    if trace.s_r[n] != m or trace.s_l[m] != n - 1:
        return False
    return bool(np.all(trace.s_star[1:n] >= 0))


def explore(g: BipartiteGraph) -> ExplorationTrace:
    """
    Exploration from left vertex 0. Active right vertices are always processed
    before active left ones; each side is FIFO by activation time, and vertices
    activated together are queued in index order.
    """
    left_active = [False] * g.n
    right_active = [False] * g.m
    left_active[0] = True
    left_queue: deque[int] = deque([0])
    right_queue: deque[int] = deque()
    r: list[int] = []
    l: list[int] = []

    while left_queue or right_queue:
        if right_queue:
            j = right_queue.popleft()
            fresh = [i for i in range(g.n) if not left_active[i] and g.has_edge(i, j)]
            for i in fresh:
                left_active[i] = True
                left_queue.append(i)
            l.append(len(fresh))
        else:
            i = left_queue.popleft()
            fresh = [j for j in range(g.m) if not right_active[j] and g.has_edge(i, j)]
            for j in fresh:
                right_active[j] = True
                right_queue.append(j)
            r.append(len(fresh))

    r.extend([0] * (g.n - len(r)))
    l.extend([0] * (g.m - len(l)))
    return ExplorationTrace.from_counts(r, l)


def _kernel_from_logs(log_weights: np.ndarray) -> np.ndarray:
    with np.errstate(under="ignore"):
        return np.exp(log_weights)


class LatticeDP:
    """
    Dynamic program over (k, a, b): k left vertices processed, a = right vertices
    activated so far, b = left activations produced by right vertices 1..a.

    A left step k moves a -> a' with weight left_kernel(k)[a, a']; each right
    vertex j in (a, a'] is then absorbed with right_kernel(j)[b, b'].
    After step k < n the barrier b >= k is applied when constrained.
    """

    def __init__(
        self,
        n: int,
        m: int,
        left_kernel: Callable[[int], np.ndarray],
        right_kernels: list[np.ndarray],
    ) -> None:
        self.n = n
        self.m = m
        self.left_kernel = left_kernel
        self.right_kernels = right_kernels

    def run(self, constrained: bool = True) -> tuple[np.ndarray, float]:
        """Final layer (m + 1, n) and the accumulated log scale."""
        n, m = self.n, self.m
        layer = np.zeros((m + 1, n))
        layer[0, 0] = 1.0
        log_scale = 0.0

        for k in range(1, n + 1):
            kernel = self.left_kernel(k)
            occupied = np.flatnonzero(layer.any(axis=1))
            if occupied.size == 0:
                return layer, -math.inf
            lo = int(occupied[0])
            carried = np.zeros_like(layer)
            next_layer = np.zeros_like(layer)
            for a_next in range(lo, m + 1):
                carried[a_next] = layer[a_next]
                next_layer[a_next] = kernel[lo:a_next + 1, a_next] @ carried[lo:a_next + 1]
                if a_next < m:
                    carried[lo:a_next + 1] = carried[lo:a_next + 1] @ self.right_kernels[a_next]
            if constrained and k < n:
                next_layer[:, :k] = 0.0
            peak = float(next_layer.max())
            if peak <= 0.0:
                return next_layer, -math.inf
            layer = next_layer / peak
            log_scale += math.log(peak)
        return layer, log_scale

    def terminal_probability(self) -> float:
        """Mass at a = m, b = n - 1 under the barrier."""
        layer, log_scale = self.run(constrained=True)
        value = float(layer[self.m, self.n - 1])
        if value <= 0.0 or log_scale == -math.inf:
            return 0.0
        return math.exp(math.log(value) + log_scale)

    def total_mass(self) -> float:
        layer, log_scale = self.run(constrained=False)
        total = float(layer.sum())
        if total <= 0.0 or log_scale == -math.inf:
            return 0.0
        return math.exp(math.log(total) + log_scale)


def binomial_lattice(gp: GraphParams) -> LatticeDP:
    """Lattice with the binomial exploration weights; both kernels are stochastic matrices."""
    gp.require_open_p()
    n, m = gp.n, gp.m
    log_p, log_q = math.log(float(gp.p)), math.log1p(-float(gp.p))

    a = np.arange(m + 1, dtype=float)[:, None]
    a_next = np.arange(m + 1, dtype=float)[None, :]
    left = _kernel_from_logs(log_binom(m - a, a_next - a) + (a_next - a) * log_p + (m - a_next) * log_q)

    b = np.arange(n, dtype=float)[:, None]
    b_next = np.arange(n, dtype=float)[None, :]
    right = _kernel_from_logs(log_binom(n - 1 - b, b_next - b) + (b_next - b) * log_p + (n - 1 - b_next) * log_q)

    return LatticeDP(n, m, left_kernel=lambda k: left, right_kernels=[right] * m)


def exact_connectivity_dp(gp: GraphParams, budget: Optional[int] = None) -> float:
    """P_{n,m}(p) as the barrier-constrained trajectory sum over T_{n,m}."""
    if gp.is_degenerate:
        return closed_form_connectivity(gp)
    check_state_budget(gp, budget if budget is not None else get_settings().DP_STATE_BUDGET)
    logger.debug("Exploration DP n=%d m=%d p=%s", gp.n, gp.m, gp.p)
    return binomial_lattice(gp).terminal_probability()


def unconstrained_mass(gp: GraphParams) -> float:
    """Total DP mass without barrier or terminal constraints; equals 1 up to rounding."""
    check_state_budget(gp, get_settings().DP_STATE_BUDGET)
    return binomial_lattice(gp).total_mass()
