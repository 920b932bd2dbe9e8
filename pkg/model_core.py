"""
Bipartite Connectivity Toolkit - Model Core
Parameter validation, log-space probability kernels, walk intensities and expectation curves.

Vectors follow the 1-based indexing of the formulas in documentation only:
alpha[i - 1] holds alpha_i, mu[k - 1] holds mu_k, and so on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
from scipy.special import gammaln


class ConnectivityError(Exception):
    """Base class for toolkit failures."""


class DomainError(ConnectivityError, ValueError):
    """Input outside the mathematical domain of an operation."""


class DegenerateParameterError(DomainError):
    """p in {0, 1} handed to a formula that is singular there."""


class CapacityError(ConnectivityError, RuntimeError):
    """Enumeration or DP budget exceeded."""


@dataclass(frozen=True)
class GraphParams:
    """The triple (n, m, p) of G(n, m, p)."""
    n: int
    m: int
    p: float

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or isinstance(self.m, bool):
            raise DomainError("n and m must be integers")
        if int(self.n) != self.n or int(self.m) != self.m:
            raise DomainError(f"n and m must be integers, got n={self.n!r} m={self.m!r}")
        if self.n < 1 or self.m < 1:
            raise DomainError(f"n and m must be at least 1, got n={self.n} m={self.m}")
        if not math.isfinite(float(self.p)) or not 0.0 <= float(self.p) <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {self.p!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "m", int(self.m))

    @classmethod
    def from_c(cls, n: int, m: int, c: float) -> "GraphParams":
        """Build from the regime parameter c = p(n + m)."""
        return cls(n=n, m=m, p=c / (n + m))

    @property
    def c(self) -> float:
        return float(self.p) * (self.n + self.m)

    @property
    def q(self) -> float:
        return 1.0 - float(self.p)

    @property
    def is_degenerate(self) -> bool:
        return self.p == 0 or self.p == 1

    def require_open_p(self) -> None:
        if self.is_degenerate:
            raise DegenerateParameterError(f"formula requires 0 < p < 1, got p={self.p}")

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "m": self.m, "p": float(self.p), "c": self.c}


@dataclass(frozen=True)
class WalkParams:
    """Poisson intensities alpha_1..alpha_n and beta_1..beta_m."""
    alpha: np.ndarray
    beta: np.ndarray


@dataclass(frozen=True)
class ExpectationCurves:
    """mu_k = E A_k, eta_k = E B_k and the E S_k display."""
    mu: np.ndarray
    eta: np.ndarray
    es: np.ndarray

    @property
    def drift(self) -> np.ndarray:
        """es minus the -k term the display leaves out."""
        return self.es - np.arange(1, self.es.size + 1, dtype=float)


def log_poisson_pmf(k: Any, lam: float) -> Any:
    """log P(Poisson(lam) = k), elementwise over k; -inf where the mass is zero."""
    k_arr = np.asarray(k, dtype=float)
    if lam == 0.0:
        return np.where(k_arr == 0, 0.0, -np.inf)
    return k_arr * math.log(lam) - lam - gammaln(k_arr + 1.0)


def poisson_pmf(k: int, lam: float) -> float:
    """e^{-lam} lam^k / k!, evaluated in log space and exponentiated once."""
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    lam = float(lam)
    if not math.isfinite(lam) or lam < 0:
        raise DomainError(f"lambda must be finite and nonnegative, got {lam!r}")
    if lam == 0.0:
        return 1.0 if k == 0 else 0.0
    return math.exp(float(log_poisson_pmf(int(k), lam)))


def log_binom(n: Any, k: Any) -> Any:
    """log C(n, k) via log-gamma; -inf outside 0 <= k <= n."""
    n_arr = np.asarray(n, dtype=float)
    k_arr = np.asarray(k, dtype=float)
    valid = (k_arr >= 0) & (k_arr <= n_arr)
    with np.errstate(invalid="ignore"):
        out = gammaln(n_arr + 1.0) - gammaln(k_arr + 1.0) - gammaln(n_arr - k_arr + 1.0)
    return np.where(valid, out, -np.inf)


def _geometric_weights(length: int, q: float) -> np.ndarray:
    return q ** np.arange(length, dtype=float)


def walk_params(gp: GraphParams) -> WalkParams:
    """
    alpha_i = m p q^{i-1} / (1 - q^n), beta_j = n p q^{j-1} / (1 - q^m) with q = 1 - p.
    Both vectors telescope: sum(alpha) = m, sum(beta) = n.
    """
    gp.require_open_p()
    p, q = float(gp.p), gp.q
    alpha = gp.m * p * _geometric_weights(gp.n, q) / -math.expm1(gp.n * math.log1p(-p))
    beta = gp.n * p * _geometric_weights(gp.m, q) / -math.expm1(gp.m * math.log1p(-p))
    return WalkParams(alpha=alpha, beta=beta)


def extended_beta(gp: GraphParams, horizon: int) -> np.ndarray:
    """beta_j for j = 1..horizon, continuing the geometric law past j = m."""
    gp.require_open_p()
    p = float(gp.p)
    return gp.n * p * _geometric_weights(horizon, gp.q) / -math.expm1(gp.m * math.log1p(-p))


def expectation_curves(gp: GraphParams) -> ExpectationCurves:
    gp.require_open_p()
    p = float(gp.p)
    log_q = math.log1p(-p)
    denom_n = -math.expm1(gp.n * log_q)
    denom_m = -math.expm1(gp.m * log_q)
    ks_left = np.arange(1, gp.n + 1, dtype=float)
    ks_right = np.arange(1, gp.m + 1, dtype=float)
    mu = gp.m * -np.expm1(ks_left * log_q) / denom_n
    eta = gp.n * -np.expm1(ks_right * log_q) / denom_m
    es = gp.n * -np.expm1(-mu * p) / denom_m
    return ExpectationCurves(mu=mu, eta=eta, es=es)


def prefactor(gp: GraphParams, left_power: int) -> float:
    """(1 - q^n)^m (1 - q^m)^left_power."""
    p = float(gp.p)
    if p == 1.0:
        return 1.0
    if p == 0.0:
        return 0.0
    log_q = math.log1p(-p)
    log_value = gp.m * math.log(-math.expm1(gp.n * log_q)) + left_power * math.log(-math.expm1(gp.m * log_q))
    return math.exp(log_value)


def endpoint_probabilities(gp: GraphParams) -> tuple[float, float]:
    """P(A_n = m) and P(B_m = n - 1); A_n ~ Poisson(m), B_m ~ Poisson(n)."""
    return poisson_pmf(gp.m, gp.m), poisson_pmf(gp.n - 1, gp.n)


def closed_form_connectivity(gp: GraphParams) -> float:
    """Connectivity probability at p in {0, 1}; n + m >= 2 always."""
    if gp.p == 1:
        return 1.0
    if gp.p == 0:
        return 0.0
    raise DomainError("closed form only covers p in {0, 1}")


def check_state_budget(gp: GraphParams, budget: int) -> None:
    if gp.n * gp.m > budget:
        raise CapacityError(f"n*m = {gp.n * gp.m} exceeds the DP state budget {budget}")
