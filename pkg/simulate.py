"""
Bipartite Connectivity Toolkit - Monte Carlo
Seeded graph sampling, Poisson walk sampling and the curve data behind the S_k and B_k / V^A_k plots.

Randomness comes from Philox4x64 (numpy), a counter-based generator: stream i of
seed s is Philox keyed by SeedSequence(s, spawn_key=(i,)). Work is cut into
fixed-size blocks, block i always uses stream i, and counts are summed, so
results depend only on (inputs, seed) and never on the worker count.
"""

from __future__ import annotations

import asyncio
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

import numpy as np
from scipy.stats import poisson

from model_core import (
    ConnectivityError,
    GraphParams,
    expectation_curves,
    extended_beta,
    walk_params,
)
from oracle_brute import BipartiteGraph
from reporting import render_csv
from settings import get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")

# Upper bound on booleans held by one graph block.
_GRAPH_BLOCK_CELLS = 1 << 24


class Method(str, Enum):
    MONTE_CARLO = "monte-carlo"
    BRUTE = "brute"
    EXPLORATION_DP = "exploration-dp"
    WALK_DP = "walk-dp"
    ASYMPTOTIC = "asymptotic"

    @classmethod
    def coerce(cls, value: "Method | str") -> "Method":
        """Normalize enum input, accepting the CLI alias 'mc'."""
        if isinstance(value, cls):
            return value
        normalized = str(value).strip().lower()
        if normalized == "mc":
            return cls.MONTE_CARLO
        if normalized.startswith("asym"):
            return cls.ASYMPTOTIC
        return cls(normalized)

    @property
    def is_exact(self) -> bool:
        return self in {Method.BRUTE, Method.EXPLORATION_DP, Method.WALK_DP}


@dataclass
class ConnectivityEstimate:
    """A probability value with provenance."""
    estimate: float
    method: Method
    stderr: float = 0.0
    samples: Optional[int] = None
    seed: Optional[int] = None
    label: Optional[str] = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.estimate <= 1.0:
            raise ValueError(f"estimate {self.estimate} outside [0, 1]")
        if self.stderr < 0:
            raise ValueError("stderr must be nonnegative")
        if self.method is not Method.MONTE_CARLO and self.stderr != 0:
            raise ValueError("only Monte Carlo estimates carry a standard error")
        if self.label is None:
            self.label = self.method.value

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.label,
            "value": self.estimate,
            "stderr": self.stderr if self.method is Method.MONTE_CARLO else None,
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass
class WalkSample:
    """
    One unconditioned draw of the walks.
    a[k - 1] = A_k; b[j - 1] = B_j for j up to the horizon H >= m (b[:m] is the
    walk of the representation, the rest continues its geometric intensities);
    s[k - 1] = B_{min(A_k, H)} - k; v[t] = #{i : min(A_i, H) <= t} for t = 0..H.
    """
    a: np.ndarray
    b: np.ndarray
    s: np.ndarray
    v: np.ndarray

    @property
    def horizon(self) -> int:
        return int(self.b.size)

    @property
    def s_nonneg(self) -> bool:
        return bool(np.all(self.s >= 0))

    @property
    def barrier_ok(self) -> bool:
        """S_k >= 0 for 0 < k < n, the event the representation conditions on."""
        return bool(np.all(self.s[:-1] >= 0))

    @property
    def recovery_nonneg(self) -> bool:
        b_from_zero = np.concatenate(([0], self.b))
        return bool(np.all(b_from_zero >= self.v))


@dataclass
class WalkBatch:
    """Row r of every array is one WalkSample."""
    a: np.ndarray
    b: np.ndarray
    s: np.ndarray
    v: np.ndarray

    def __len__(self) -> int:
        return int(self.a.shape[0])

    def sample(self, index: int) -> WalkSample:
        return WalkSample(a=self.a[index], b=self.b[index], s=self.s[index], v=self.v[index])


@dataclass
class MomentCheck:
    """Empirical means against closed forms, pointwise over k."""
    empirical: np.ndarray
    expected: np.ndarray
    stderr: np.ndarray

    @property
    def max_z(self) -> float:
        gap = np.abs(self.empirical - self.expected)
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(self.stderr > 0, gap / self.stderr, np.where(gap > 0, np.inf, 0.0))
        return float(z.max())


@dataclass
class CurveTables:
    """Rows of the S_k table and of the B_k / V^A_k table."""
    s_header: List[str]
    s_rows: List[List[str]] = field(default_factory=list)
    bv_header: List[str] = field(default_factory=lambda: ["k", "B", "V", "ref_line"])
    bv_rows: List[List[str]] = field(default_factory=list)

    def s_csv(self) -> str:
        return render_csv(self.s_header, self.s_rows)

    def bv_csv(self) -> str:
        return render_csv(self.bv_header, self.bv_rows)


def format_number(value: Any) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def stream(seed: int, index: int) -> np.random.Generator:
    """Generator for stream `index` of `seed`."""
    if seed < 0 or seed >= 1 << 64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


async def _gather_limited(calls: Sequence[Callable[[], T]], workers: int) -> List[T]:
    semaphore = asyncio.Semaphore(workers)

    async def _one(call: Callable[[], T]) -> T:
        async with semaphore:
            return await asyncio.to_thread(call)

    return list(await asyncio.gather(*(_one(call) for call in calls)))


def run_blocking(calls: Sequence[Callable[[], T]], workers: Optional[int] = None) -> List[T]:
    """Run independent blocking calls on up to `workers` threads; results keep call order."""
    workers = workers if workers is not None else get_settings().WORKERS
    if workers <= 1 or len(calls) <= 1:
        return [call() for call in calls]
    return asyncio.run(_gather_limited(calls, workers))


def _block_sizes(total: int, block: int) -> List[int]:
    return [min(block, total - start) for start in range(0, total, block)]


def sample_adjacency(gp: GraphParams, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, n, m) boolean adjacency, each edge independently with probability p."""
    return rng.random((count, gp.n, gp.m)) < float(gp.p)


def sample_graph(gp: GraphParams, seed: int, index: int = 0) -> BipartiteGraph:
    return BipartiteGraph.from_matrix(sample_adjacency(gp, 1, stream(seed, index))[0])


def batch_connected(adjacency: np.ndarray) -> np.ndarray:
    """Connectivity of every graph in a (count, n, m) batch, by closure from left vertex 0."""
    count, n, m = adjacency.shape
    reach_left = np.zeros((count, n), dtype=bool)
    reach_left[:, 0] = True
    reach_right = np.zeros((count, m), dtype=bool)
    for _ in range(n + m):
        new_right = np.any(reach_left[:, :, None] & adjacency, axis=1)
        new_left = reach_left | np.any(new_right[:, None, :] & adjacency, axis=2)
        if np.array_equal(new_left, reach_left) and np.array_equal(new_right, reach_right):
            break
        reach_left, reach_right = new_left, new_right
    return reach_left.all(axis=1) & reach_right.all(axis=1)


def graph_block_size(gp: GraphParams) -> int:
    return max(1, min(get_settings().MC_BLOCK_SIZE, _GRAPH_BLOCK_CELLS // (gp.n * gp.m)))


def mc_connectivity(gp: GraphParams, samples: int, seed: int, workers: Optional[int] = None) -> ConnectivityEstimate:
    """Fraction of sampled graphs that are connected, with binomial standard error."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    sizes = _block_sizes(samples, graph_block_size(gp))

    def _block(index: int, size: int) -> Callable[[], int]:
        def _count() -> int:
            return int(batch_connected(sample_adjacency(gp, size, stream(seed, index))).sum())
        return _count

    hits = sum(run_blocking([_block(i, size) for i, size in enumerate(sizes)], workers))
    estimate = hits / samples
    stderr = math.sqrt(estimate * (1.0 - estimate) / samples)
    logger.debug("MC n=%d m=%d p=%s: %d/%d connected over %d blocks", gp.n, gp.m, gp.p, hits, samples, len(sizes))
    return ConnectivityEstimate(
        estimate=estimate, method=Method.MONTE_CARLO, stderr=stderr, samples=samples, seed=seed
    )


def walk_horizon(gp: GraphParams) -> int:
    """Smallest H >= m with P(Poisson(m) > H) below the configured tail mass."""
    tail = get_settings().WALK_TAIL_MASS
    return max(gp.m, int(poisson.isf(tail, gp.m)))


def _walk_block(gp: GraphParams, alpha: np.ndarray, beta: np.ndarray, size: int, rng: np.random.Generator) -> WalkBatch:
    horizon = beta.size
    a = np.cumsum(rng.poisson(alpha, size=(size, alpha.size)), axis=1)
    b = np.cumsum(rng.poisson(beta, size=(size, horizon)), axis=1)
    b_from_zero = np.concatenate((np.zeros((size, 1), dtype=b.dtype), b), axis=1)
    a_capped = np.minimum(a, horizon)
    s = np.take_along_axis(b_from_zero, a_capped, axis=1) - np.arange(1, alpha.size + 1)

    offsets = a_capped + (horizon + 1) * np.arange(size)[:, None]
    hist = np.bincount(offsets.ravel(), minlength=size * (horizon + 1)).reshape(size, horizon + 1)
    v = np.cumsum(hist, axis=1)

    s_ok = np.all(s >= 0, axis=1)
    v_ok = np.all(b_from_zero >= v, axis=1)
    if not np.array_equal(s_ok, v_ok):
        bad = int(np.flatnonzero(s_ok != v_ok)[0])
        raise ConnectivityError(f"recovery equivalence violated on walk sample {bad}")
    return WalkBatch(a=a.astype(np.int32), b=b.astype(np.int32), s=s.astype(np.int32), v=v.astype(np.int32))


def sample_walks(gp: GraphParams, count: int, seed: int, workers: Optional[int] = None) -> WalkBatch:
    """`count` independent walk samples; block i uses stream i."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    alpha = walk_params(gp).alpha
    beta = extended_beta(gp, walk_horizon(gp))
    sizes = _block_sizes(count, get_settings().MC_BLOCK_SIZE)
    if not sizes:
        return WalkBatch(
            a=np.zeros((0, gp.n), dtype=np.int64),
            b=np.zeros((0, beta.size), dtype=np.int64),
            s=np.zeros((0, gp.n), dtype=np.int64),
            v=np.zeros((0, beta.size + 1), dtype=np.int64),
        )
    calls = [
        (lambda i=i, size=size: _walk_block(gp, alpha, beta, size, stream(seed, i)))
        for i, size in enumerate(sizes)
    ]
    blocks = run_blocking(calls, workers)
    return WalkBatch(
        a=np.concatenate([blk.a for blk in blocks]),
        b=np.concatenate([blk.b for blk in blocks]),
        s=np.concatenate([blk.s for blk in blocks]),
        v=np.concatenate([blk.v for blk in blocks]),
    )


def sample_walk(gp: GraphParams, seed: int) -> WalkSample:
    return sample_walks(gp, 1, seed).sample(0)


def _moment_check(values: np.ndarray, expected: np.ndarray) -> MomentCheck:
    count = values.shape[0]
    empirical = values.mean(axis=0)
    stderr = values.std(axis=0, ddof=1) / math.sqrt(count) if count > 1 else np.zeros_like(empirical)
    return MomentCheck(empirical=empirical, expected=expected, stderr=stderr)


def expectation_check(gp: GraphParams, count: int, seed: int, workers: Optional[int] = None) -> MomentCheck:
    """Sample mean of S_k + k = B_{A_k} against the closed-form curve es."""
    batch = sample_walks(gp, count, seed, workers)
    values = (batch.s + np.arange(1, gp.n + 1)).astype(float)
    return _moment_check(values, expectation_curves(gp).es)


def generating_identity_check(gp: GraphParams, count: int, seed: int, workers: Optional[int] = None) -> MomentCheck:
    """Sample mean of (1 - p)^{A_k} against exp(-mu_k p)."""
    batch = sample_walks(gp, count, seed, workers)
    values = np.power(gp.q, batch.a.astype(float))
    expected = np.exp(-expectation_curves(gp).mu * float(gp.p))
    return _moment_check(values, expected)


def curve_tables(gp: GraphParams, realizations: int, seed: int, workers: Optional[int] = None) -> CurveTables:
    if realizations < 0:
        raise ValueError("realizations must be nonnegative")
    curves = expectation_curves(gp)
    batch = sample_walks(gp, realizations, seed, workers)
    tables = CurveTables(s_header=["k", "ES", "ES_drift"] + [f"S_r{r}" for r in range(1, realizations + 1)])
    for k in range(1, gp.n + 1):
        # ES is E B_{A_k}; ES_drift = ES - k is on the same scale as the S_r columns
        row = [format_number(k), format_number(curves.es[k - 1]), format_number(curves.drift[k - 1])]
        row.extend(format_number(batch.s[r, k - 1]) for r in range(realizations))
        tables.s_rows.append(row)
    if realizations:
        first = batch.sample(0)
        for k in range(1, gp.m + 1):
            tables.bv_rows.append(
                [
                    format_number(k),
                    format_number(first.b[k - 1]),
                    format_number(first.v[k]),
                    format_number(k * gp.n / gp.m),
                ]
            )
    return tables


def curve_csv(gp: GraphParams, realizations: int, seed: int, workers: Optional[int] = None) -> tuple[str, str]:
    """The two curve tables as CSV text."""
    tables = curve_tables(gp, realizations, seed, workers)
    return tables.s_csv(), tables.bv_csv()
