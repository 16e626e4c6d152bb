"""Random graph generation and the column-normalized redistribution matrix.

Nodes are generators that have agreed to share each other's load on failure.
The redistribution matrix holds, in entry (i, j), the fraction of node j's
load that node i absorbs when j fails: a_ij / deg(j) for neighbors, 0
otherwise. Columns of isolated nodes are all-zero, meaning the load of a
failing node with no alive neighbor is dropped (its region blacks out).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class GraphTopology:
    """Symmetric unweighted graph on ``n`` nodes.

    ``edge_prob`` records the probability used at generation time and is
    metadata only.
    """

    n: int
    adjacency: np.ndarray  # bool, shape (n, n), symmetric, zero diagonal
    edge_prob: float

    def degree(self) -> np.ndarray:
        return self.adjacency.sum(axis=0)

    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2


@dataclass(frozen=True)
class RedistributionWeights:
    """Column-normalized adjacency: weights[i, j] = a_ij / deg(j).

    Every column sums to exactly 1 (degree > 0) or 0 (isolated node), so
    the transpose is row-stochastic wherever it is nonzero.
    """

    weights: np.ndarray  # float64, shape (n, n)


def generate_er_graph(n: int, p: float, rng: np.random.Generator) -> GraphTopology:
    """Draw an Erdős–Rényi graph: each unordered pair is an edge w.p. ``p``.

    Deterministic given the generator state.
    """
    if n < 1:
        raise ValueError(f"node count must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must be in [0, 1], got {p}")
    adj = rng.random((n, n)) < p
    adj &= _strict_upper_mask(n)
    adj |= adj.T
    return GraphTopology(n=n, adjacency=adj, edge_prob=p)


@lru_cache(maxsize=4)
def _strict_upper_mask(n: int) -> np.ndarray:
    mask = ~np.tri(n, dtype=bool)
    mask.setflags(write=False)
    return mask


def normalize_adjacency(g: GraphTopology) -> RedistributionWeights:
    """Build the redistribution matrix by normalizing each column by its degree."""
    return RedistributionWeights(weights=_column_normalize(g.adjacency))


def _column_normalize(adjacency: np.ndarray) -> np.ndarray:
    deg = adjacency.sum(axis=0, dtype=np.float64)
    safe = np.where(deg > 0, deg, 1.0)
    return adjacency.astype(np.float64) / safe
