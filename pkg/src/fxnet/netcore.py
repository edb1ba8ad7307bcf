"""Correlation, distance and weight matrices and the minimal spanning tree."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateInputError, InsufficientDataError, SchemaError


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def _default_labels(n):
    return tuple(f"N{i:03d}" for i in range(n))


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    labels: tuple
    values: np.ndarray
    base: Optional[str] = None
    kind: Optional[str] = None
    degenerate: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", _frozen(self.values))
        n = len(self.labels)
        if self.values.shape != (n, n):
            raise SchemaError("correlation matrix shape does not match labels")


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    labels: tuple
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", _frozen(self.values))


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    labels: tuple
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", _frozen(self.values))


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    distance: float
    weight: float


@dataclass(frozen=True)
class SpanningTree:
    """Tree on ``nodes``; ``edges`` are in Kruskal insertion order with u < v."""

    nodes: tuple
    edges: tuple
    base: Optional[str] = None
    kind: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        if len(self.edges) != len(self.nodes) - 1:
            raise SchemaError(f"a tree on {len(self.nodes)} nodes needs {len(self.nodes) - 1} edges")

    @property
    def adjacency(self) -> dict:
        adj = {n: [] for n in self.nodes}
        for e in self.edges:
            adj[e.u].append((e.v, e.distance))
            adj[e.v].append((e.u, e.distance))
        return adj

    def edge_set(self) -> frozenset:
        return frozenset(frozenset((e.u, e.v)) for e in self.edges)

    @property
    def total_distance(self) -> float:
        return float(sum(e.distance for e in self.edges))


def correlation_matrix(data, labels: Optional[Sequence[str]] = None, base=None, kind=None) -> CorrelationMatrix:
    """Pearson matrix of the rows of ``data`` (currencies x time).

    Rows are standardized (population σ) and R = Z Zᵀ / T, so the diagonal is
    one.  Constant rows are degenerate: correlation 0 with every other row.
    """
    x = np.ascontiguousarray(data, dtype=float)
    if x.ndim != 2:
        raise SchemaError("data must be a 2-D (currencies x time) matrix")
    n, t = x.shape
    if t < 2:
        raise InsufficientDataError("correlation needs at least 2 time points")
    if not np.all(np.isfinite(x)):
        raise SchemaError("data rows must be finite")
    labels = _default_labels(n) if labels is None else tuple(labels)
    if len(labels) != n:
        raise SchemaError("labels do not match data rows")

    z = x - x.mean(axis=1, keepdims=True)
    sd = np.sqrt((z * z).mean(axis=1))
    # sd can underflow to 0 for rows whose spread is subnormal
    degenerate = (np.ptp(x, axis=1) == 0) | (sd == 0)
    sd[degenerate] = 1.0
    z /= sd[:, None]
    z[degenerate] = 0.0
    r = (z @ z.T) / t
    r = 0.5 * (r + r.T)
    np.clip(r, -1.0, 1.0, out=r)
    np.fill_diagonal(r, 1.0)
    return CorrelationMatrix(
        labels=labels,
        values=r,
        base=base,
        kind=None if kind is None else str(getattr(kind, "value", kind)),
        degenerate=tuple(l for l, d in zip(labels, degenerate) if d),
    )


def distance_matrix(corr: CorrelationMatrix) -> DistanceMatrix:
    """d = sqrt(2 (1 - R)), clamped to [0, 2]."""
    d = np.sqrt(np.clip(2.0 * (1.0 - corr.values), 0.0, 4.0))
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix(labels=corr.labels, values=d)


def weight_matrix(corr: CorrelationMatrix) -> WeightMatrix:
    w = np.abs(corr.values)
    np.fill_diagonal(w, 0.0)
    return WeightMatrix(labels=corr.labels, values=w)


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def build_mst(dist: DistanceMatrix, weights: Optional[WeightMatrix] = None, base=None, kind=None) -> SpanningTree:
    """Kruskal over ascending distance.

    Ties are broken by the lexicographic (min code, max code) pair, so the
    result depends only on the ranking of distances and the labels.
    """
    labels = dist.labels
    n = len(labels)
    if n < 2:
        raise DegenerateInputError("a spanning tree needs at least 2 nodes")
    d = dist.values
    w = weights.values if weights is not None else np.full_like(d, np.nan)

    rank = np.empty(n, dtype=np.int64)
    rank[np.argsort(np.array(labels, dtype=object), kind="stable")] = np.arange(n)
    iu, ju = np.triu_indices(n, 1)
    lo = np.minimum(rank[iu], rank[ju])
    hi = np.maximum(rank[iu], rank[ju])
    order = np.lexsort((hi, lo, d[iu, ju]))

    uf = UnionFind(n)
    edges = []
    for k in order:
        i, j = int(iu[k]), int(ju[k])
        if uf.union(i, j):
            a, b = sorted((labels[i], labels[j]))
            edges.append(Edge(a, b, float(d[i, j]), float(w[i, j])))
            if len(edges) == n - 1:
                break
    return SpanningTree(nodes=labels, edges=edges, base=base,
                        kind=None if kind is None else str(getattr(kind, "value", kind)))


def network(data, labels=None, base=None, kind=None):
    """(correlation, distance, weights, tree) for one data matrix."""
    corr = correlation_matrix(data, labels, base=base, kind=kind)
    dist = distance_matrix(corr)
    weights = weight_matrix(corr)
    return corr, dist, weights, build_mst(dist, weights, base=base, kind=kind)
