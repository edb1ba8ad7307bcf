"""Topology observables: tree path length, weighted clustering, degrees."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, UndefinedNormalizationError
from .netcore import SpanningTree, WeightMatrix


class PathLengthMode(str, Enum):
    HOP = "hop"
    WEIGHTED = "weighted"


def tree_distances(tree: SpanningTree, mode=PathLengthMode.WEIGHTED) -> np.ndarray:
    """All-pairs path lengths on the tree via one BFS per node.

    Row/column order follows ``tree.nodes``.
    """
    mode = PathLengthMode(mode)
    index = {name: i for i, name in enumerate(tree.nodes)}
    n = len(tree.nodes)
    adj = [[] for _ in range(n)]
    for e in tree.edges:
        step = 1.0 if mode is PathLengthMode.HOP else e.distance
        a, b = index[e.u], index[e.v]
        adj[a].append((b, step))
        adj[b].append((a, step))

    out = np.zeros((n, n))
    for src in range(n):
        row = out[src]
        seen = [False] * n
        seen[src] = True
        queue = deque([src])
        reached = 1
        while queue:
            a = queue.popleft()
            for b, step in adj[a]:
                if not seen[b]:
                    seen[b] = True
                    row[b] = row[a] + step
                    reached += 1
                    queue.append(b)
        if reached != n:
            raise DegenerateInputError("tree is not connected")
    return out


def characteristic_path_length(tree: SpanningTree, mode=PathLengthMode.WEIGHTED) -> float:
    """Mean path length over ordered node pairs, normalized by n(n-1)."""
    n = len(tree.nodes)
    if n < 2:
        raise DegenerateInputError("path length needs at least 2 nodes")
    return float(tree_distances(tree, mode).sum() / (n * (n - 1)))


def weighted_clustering(weights: WeightMatrix, per_node: bool = False):
    """Average geometric-mean triangle intensity on the complete weighted graph.

    Weights are divided by the largest off-diagonal weight, and every node
    has degree k = n - 1.
    """
    w = np.array(weights.values, dtype=float)
    n = w.shape[0]
    if n < 3:
        raise DegenerateInputError("clustering needs at least 3 nodes")
    np.fill_diagonal(w, 0.0)
    top = w.max()
    if not top > 0:
        raise UndefinedNormalizationError("all weights are zero")
    q = np.cbrt(w / top)
    # (Q^3)_xx sums (w_xy w_yz w_zx)^(1/3) over ordered pairs y != z, both != x
    c = np.einsum("ij,jk,ki->i", q, q, q) / ((n - 1) * (n - 2))
    c = np.clip(c, 0.0, 1.0)
    return c if per_node else float(c.mean())


@dataclass(frozen=True)
class DegreeReport:
    degrees: dict
    hub: str

    @property
    def hub_degree(self) -> int:
        return self.degrees[self.hub]


def node_degrees(tree: SpanningTree) -> DegreeReport:
    """Tree degree of every node; the hub is the max-degree node (first code on ties)."""
    deg = {n: 0 for n in tree.nodes}
    for e in tree.edges:
        deg[e.u] += 1
        deg[e.v] += 1
    hub = min(deg, key=lambda k: (-deg[k], k))
    return DegreeReport(degrees=deg, hub=hub)


@dataclass(frozen=True)
class TopologyReport:
    base: Optional[str]
    kind: Optional[str]
    L: float
    C: float
    degrees: dict
    hub: str
    path_mode: str = PathLengthMode.WEIGHTED.value
    window: Optional[tuple] = None


def topology_report(tree: SpanningTree, weights: WeightMatrix, mode=PathLengthMode.WEIGHTED,
                    window=None) -> TopologyReport:
    mode = PathLengthMode(mode)
    deg = node_degrees(tree)
    return TopologyReport(
        base=tree.base,
        kind=tree.kind,
        L=characteristic_path_length(tree, mode),
        C=weighted_clustering(weights),
        degrees=deg.degrees,
        hub=deg.hub,
        path_mode=mode.value,
        window=window,
    )
