"""
Bipartite Connectivity Toolkit - Exhaustive Oracle
Ground-truth connectivity probability by enumerating every edge subset of K_{n,m}.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Any, Tuple, Union

import numpy as np

from model_core import CapacityError, GraphParams
from settings import get_settings

logger = logging.getLogger(__name__)

_POPCOUNT_TABLE = np.array([bin(b).count("1") for b in range(256)], dtype=np.int64)


@dataclass(frozen=True)
class BipartiteGraph:
    """Left-indexed adjacency: bit j of rows[i] marks the edge {left i, right j}."""
    n: int
    m: int
    rows: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        limit = 1 << self.m
        for row in self.rows:
            if row < 0 or row >= limit:
                raise ValueError(f"row {row:#x} has bits outside width {self.m}")

    @classmethod
    def from_matrix(cls, matrix: Any) -> "BipartiteGraph":
        adj = np.asarray(matrix, dtype=bool)
        n, m = adj.shape
        weights = 1 << np.arange(m, dtype=np.uint64)
        rows = tuple(int(v) for v in (adj.astype(np.uint64) * weights).sum(axis=1))
        return cls(n=n, m=m, rows=rows)

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def left_neighbors(self, j: int) -> int:
        mask = 0
        for i, row in enumerate(self.rows):
            if (row >> j) & 1:
                mask |= 1 << i
        return mask


@dataclass(frozen=True)
class EdgeCountProfile:
    """counts[e] = number of connected spanning subgraphs of K_{n,m} with e edges."""
    n: int
    m: int
    counts: Tuple[int, ...]

    @property
    def spanning_tree_count(self) -> int:
        return self.counts[self.n + self.m - 1]

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "m": self.m, "counts": list(self.counts)}


def is_connected(g: BipartiteGraph) -> bool:
    """Breadth-first search from left vertex 0 over bit-mask rows."""
    full_left = (1 << g.n) - 1
    full_right = (1 << g.m) - 1
    seen_left, seen_right = 1, 0
    frontier_left = 1
    while frontier_left:
        reached_right = 0
        pending = frontier_left
        while pending:
            low = pending & -pending
            reached_right |= g.rows[low.bit_length() - 1]
            pending ^= low
        frontier_right = reached_right & ~seen_right
        seen_right |= frontier_right
        reached_left = 0
        pending = frontier_right
        while pending:
            low = pending & -pending
            reached_left |= g.left_neighbors(low.bit_length() - 1)
            pending ^= low
        frontier_left = reached_left & ~seen_left
        seen_left |= frontier_left
    return seen_left == full_left and seen_right == full_right


def _check_capacity(n: int, m: int) -> None:
    bound = get_settings().BRUTE_MAX_EDGES
    if n * m > bound:
        raise CapacityError(f"n*m = {n * m} exceeds the enumeration bound {bound}")


def _popcount(values: np.ndarray) -> np.ndarray:
    as_bytes = values.astype("<u8").view(np.uint8).reshape(-1, 8)
    return _POPCOUNT_TABLE[as_bytes].sum(axis=1)


def _connected_chunk(subsets: np.ndarray, n: int, m: int) -> np.ndarray:
    """Connectivity of every subset in a chunk, by fixed-point closure from left vertex 0."""
    full_right = np.uint64((1 << m) - 1)
    full_left = np.uint64((1 << n) - 1)
    one = np.uint64(1)
    rows = [(subsets >> np.uint64(i * m)) & full_right for i in range(n)]
    cols = []
    for j in range(m):
        col = np.zeros_like(subsets)
        for i in range(n):
            col |= ((rows[i] >> np.uint64(j)) & one) << np.uint64(i)
        cols.append(col)

    reach_left = np.ones_like(subsets)
    reach_right = np.zeros_like(subsets)
    zero = np.zeros_like(subsets)
    for _ in range(n + m):
        new_right = reach_right.copy()
        for i in range(n):
            new_right |= np.where((reach_left >> np.uint64(i)) & one, rows[i], zero)
        new_left = reach_left.copy()
        for j in range(m):
            new_left |= np.where((new_right >> np.uint64(j)) & one, cols[j], zero)
        if np.array_equal(new_left, reach_left) and np.array_equal(new_right, reach_right):
            break
        reach_left, reach_right = new_left, new_right
    return (reach_left == full_left) & (reach_right == full_right)


@lru_cache(maxsize=64)
def _profile_counts(n: int, m: int) -> Tuple[int, ...]:
    edges = n * m
    total = 1 << edges
    chunk = 1 << min(get_settings().BRUTE_CHUNK_BITS, edges)
    counts = np.zeros(edges + 1, dtype=np.int64)
    logger.debug("Enumerating %d subsets of K_{%d,%d} in chunks of %d", total, n, m, chunk)
    for start in range(0, total, chunk):
        subsets = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        connected = _connected_chunk(subsets, n, m)
        counts += np.bincount(_popcount(subsets[connected]), minlength=edges + 1)
    return tuple(int(v) for v in counts)


def edge_count_profile(n: int, m: int) -> EdgeCountProfile:
    _check_capacity(n, m)
    return EdgeCountProfile(n=n, m=m, counts=_profile_counts(n, m))


def brute_connectivity(gp: GraphParams) -> Union[float, Fraction]:
    """
    Sum over e of counts[e] p^e (1-p)^{nm-e}.
    A Fraction p gives the exact rational value.
    """
    profile = edge_count_profile(gp.n, gp.m)
    edges = gp.n * gp.m
    if isinstance(gp.p, Fraction):
        p = gp.p
        return sum(
            (Fraction(count) * p**e * (1 - p) ** (edges - e) for e, count in enumerate(profile.counts) if count),
            Fraction(0),
        )
    p = float(gp.p)
    return math.fsum(
        count * p**e * (1.0 - p) ** (edges - e) for e, count in enumerate(profile.counts) if count
    )
