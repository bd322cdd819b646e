"""Structural identity via degree rings, DTW distances and a layered context graph.

The pipeline mirrors struct2vec: per-node degree rings give a cumulative
structural distance ``f(u, v, k)``; each level ``k`` becomes a complete
weighted layer with weights ``exp(-f)``; walks wander inside and across
the layers and only record node identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numba
import numpy as np

from .errors import DomainError
from .graph import Graph, UnionGraph
from .walks import WalkCorpus, WalkParams, run_walks, walk_rng

DEFAULT_K_MAX_CAP = 4
DEFAULT_STAY_PROB = 0.7


def _as_graph(g: Graph | UnionGraph) -> Graph:
    return g.graph if isinstance(g, UnionGraph) else g


def degree_ring(g: Graph | UnionGraph, v: int, k_max: int) -> list[list[int]]:
    """Sorted degrees of the nodes at hop distance exactly k, for k = 0..k_max."""
    g = _as_graph(g)
    if k_max < 0:
        raise DomainError("k_max must be >= 0")
    dist = g.bfs_distances(v)
    deg = g.degrees()
    return [sorted(deg[dist == k].tolist()) for k in range(k_max + 1)]


@numba.njit(cache=True)
def _cost(a, b):
    hi = max(a, b)
    lo = min(a, b)
    if lo == 0:
        # isolated nodes only; degrees are otherwise >= 1
        return float(hi)
    return hi / lo - 1.0


@numba.njit(cache=True)
def _dtw(x, y):
    m = y.shape[0]
    prev = np.empty(m)
    cur = np.empty(m)
    acc = 0.0
    for j in range(m):
        acc = _cost(x[0], y[j]) + acc
        prev[j] = acc
    for i in range(1, x.shape[0]):
        cur[0] = _cost(x[i], y[0]) + prev[0]
        for j in range(1, m):
            best = min(prev[j], cur[j - 1], prev[j - 1])
            cur[j] = _cost(x[i], y[j]) + best
        prev, cur = cur, prev
    return prev[m - 1]


def element_cost(a: int, b: int) -> float:
    """Ratio cost ``max/min - 1`` between two degrees."""
    return float(_cost(a, b))


def dtw_cost(s1: Sequence[int], s2: Sequence[int]) -> float:
    """Minimal DTW alignment cost between two degree sequences."""
    if len(s1) == 0 or len(s2) == 0:
        raise DomainError("dtw_cost needs two nonempty sequences")
    return float(_dtw(np.asarray(s1, dtype=np.int64), np.asarray(s2, dtype=np.int64)))


def structural_distance(g: Graph | UnionGraph, u: int, v: int, k_max: int) -> list[float]:
    """Cumulative distances ``f(u, v, 0..k)``, stopping at the first empty ring."""
    ru = degree_ring(g, u, k_max)
    rv = degree_ring(g, v, k_max)
    out: list[float] = []
    total = 0.0
    for a, b in zip(ru, rv):
        if not a or not b:
            break
        total = total + dtw_cost(a, b)
        out.append(total)
    return out


@numba.njit(cache=True)
def _level_distances(flat, offsets, prev, allowed):
    n = offsets.shape[0] - 1
    out = np.full((n, n), np.nan)
    for u in range(n):
        if offsets[u + 1] == offsets[u]:
            continue
        out[u, u] = 0.0
        for v in range(u + 1, n):
            if offsets[v + 1] == offsets[v] or not allowed[u, v]:
                continue
            base = prev[u, v]
            if np.isnan(base):
                continue
            d = base + _dtw(flat[offsets[u] : offsets[u + 1]], flat[offsets[v] : offsets[v + 1]])
            out[u, v] = d
            out[v, u] = d
    return out


def graph_diameter(g: Graph | UnionGraph) -> int:
    """Largest finite hop distance (maximum over connected components)."""
    g = _as_graph(g)
    return max((int(g.bfs_distances(v).max()) for v in range(g.n)), default=0)


def default_k_max(g: Graph | UnionGraph) -> int:
    return min(DEFAULT_K_MAX_CAP, graph_diameter(g))


@dataclass
class StructuralHierarchy:
    """``dist[k, u, v] = f(u, v, k)``; NaN where undefined."""

    k_max: int
    dist: np.ndarray

    def f(self, u: int, v: int, k: int) -> float | None:
        value = self.dist[k, u, v]
        return None if np.isnan(value) else float(value)

    def to_text(self, names: Sequence[str] | None = None) -> str:
        n = self.dist.shape[1]
        names = names or [str(i) for i in range(n)]
        lines = ["u\tv\tk\tf"]
        for k in range(self.k_max + 1):
            us, vs = np.nonzero(~np.isnan(self.dist[k]))
            for u, v in zip(us.tolist(), vs.tolist()):
                if u < v:
                    lines.append(f"{names[u]}\t{names[v]}\t{k}\t{float(self.dist[k, u, v])!r}")
        return "\n".join(lines) + "\n"


def degree_band_mask(g: Graph) -> np.ndarray:
    """Pairs whose degrees lie within a factor of two of each other."""
    deg = g.degrees().astype(float)
    hi = np.maximum.outer(deg, deg)
    lo = np.minimum.outer(deg, deg)
    return hi <= 2.0 * lo


def structural_hierarchy(
    g: Graph | UnionGraph, k_max: int | None = None, band: bool = False
) -> StructuralHierarchy:
    """All-pairs cumulative structural distances up to ``k_max``.

    With ``band`` set only pairs inside the degree band are compared.
    """
    g = _as_graph(g)
    if k_max is None:
        k_max = default_k_max(g)
    if k_max < 0:
        raise DomainError("k_max must be >= 0")
    n = g.n
    deg = g.degrees()
    allowed = degree_band_mask(g) if band else np.ones((n, n), dtype=bool)
    dists = np.stack([g.bfs_distances(v) for v in range(n)]) if n else np.zeros((0, 0), int)
    prev = np.zeros((n, n))
    levels = []
    for k in range(k_max + 1):
        rings = [np.sort(deg[dists[v] == k]) for v in range(n)]
        offsets = np.zeros(n + 1, dtype=np.int64)
        offsets[1:] = np.cumsum([len(r) for r in rings])
        flat = np.concatenate(rings).astype(np.int64) if n else np.zeros(0, np.int64)
        prev = _level_distances(flat, offsets, prev, allowed)
        levels.append(prev)
    return StructuralHierarchy(k_max, np.stack(levels))


@dataclass
class Layer:
    """One similarity level: eligible nodes and their complete weighted graph."""

    nodes: np.ndarray  # union/graph node ids eligible at this level
    pos: np.ndarray  # node id -> row in this layer, -1 when absent
    weights: np.ndarray  # (m, m) intra-layer weights, 0 on the diagonal / missing pairs
    up: np.ndarray  # (m,) weight towards layer k+1, 0 when impossible
    down: float  # weight towards layer k-1, 0 at the bottom layer

    @property
    def mean_weight(self) -> float:
        iu = np.triu_indices(len(self.nodes), 1)
        w = self.weights[iu]
        w = w[w > 0]
        return float(w.mean()) if w.size else 0.0


@dataclass
class LayeredContextGraph:
    layers: list[Layer]
    node_count: int
    node_names: Sequence[str] = ()

    @property
    def k_max(self) -> int:
        return len(self.layers) - 1

    def weight(self, k: int, u: int, v: int) -> float:
        layer = self.layers[k]
        i, j = layer.pos[u], layer.pos[v]
        if i < 0 or j < 0:
            return 0.0
        return float(layer.weights[i, j])

    def to_text(self) -> str:
        names = self.node_names or [str(i) for i in range(self.node_count)]
        lines = ["# intra-layer: layer u v weight"]
        for k, layer in enumerate(self.layers):
            nodes = layer.nodes.tolist()
            for i, j in zip(*np.nonzero(np.triu(layer.weights, 1))):
                lines.append(f"{k} {names[nodes[i]]} {names[nodes[j]]} {float(layer.weights[i, j])!r}")
        lines.append("# inter-layer: layer node up down")
        for k, layer in enumerate(self.layers):
            for i, v in enumerate(layer.nodes.tolist()):
                lines.append(f"{k} {names[v]} {float(layer.up[i])!r} {float(layer.down)!r}")
        return "\n".join(lines) + "\n"


def context_weights(f: np.ndarray) -> np.ndarray:
    """Map distances to weights in (0, 1]; NaN (undefined) maps to 0."""
    w = np.exp(-np.nan_to_num(f, nan=np.inf))
    defined = ~np.isnan(f)
    # keep underflowed weights strictly positive
    w[defined] = np.maximum(w[defined], np.finfo(float).tiny)
    return w


def build_context_graph(
    g: Graph | UnionGraph,
    k_max: int | None = None,
    hierarchy: StructuralHierarchy | None = None,
    band: bool = False,
) -> LayeredContextGraph:
    """Assemble the weighted multilayer graph from the structural hierarchy."""
    graph = _as_graph(g)
    if k_max is not None and k_max < 0:
        raise DomainError("k_max must be >= 0")
    if hierarchy is None:
        hierarchy = structural_hierarchy(graph, k_max, band=band)
    dist = hierarchy.dist
    n = graph.n
    layers: list[Layer] = []
    for k in range(hierarchy.k_max + 1):
        nodes = np.flatnonzero(~np.isnan(dist[k].diagonal()))
        if k > 0 and len(nodes) == 0:
            break
        pos = np.full(n, -1, dtype=np.int64)
        pos[nodes] = np.arange(len(nodes))
        w = context_weights(dist[k][np.ix_(nodes, nodes)])
        np.fill_diagonal(w, 0.0)
        iu = np.triu_indices(len(nodes), 1)
        present = w[iu][w[iu] > 0]
        mean = present.mean() if present.size else 0.0
        gamma = (w > mean).sum(axis=1)
        up = np.log(gamma + math.e)
        layers.append(Layer(nodes, pos, w, up, 1.0 if k > 0 else 0.0))
    # up-moves only where the node exists one level higher
    for k, layer in enumerate(layers):
        if k + 1 < len(layers):
            layer.up = np.where(layers[k + 1].pos[layer.nodes] >= 0, layer.up, 0.0)
        else:
            layer.up = np.zeros(len(layer.nodes))
    return LayeredContextGraph(layers, n, graph.names)


class _LayerWalker:
    def __init__(self, ctx: LayeredContextGraph, length: int, stay_prob: float, seed: int) -> None:
        self.length = length
        self.stay_prob = stay_prob
        self.seed = seed
        self.nodes = [layer.nodes for layer in ctx.layers]
        self.pos = [layer.pos.tolist() for layer in ctx.layers]
        self.cdf = [np.cumsum(layer.weights, axis=1) for layer in ctx.layers]
        self.total = [c[:, -1].tolist() if c.size else [] for c in self.cdf]
        self.up = [layer.up.tolist() for layer in ctx.layers]
        self.down = [layer.down for layer in ctx.layers]
        # nodes that can never make an intra-layer move produce singleton walks
        movable = np.zeros(ctx.node_count, dtype=bool)
        for layer, total in zip(ctx.layers, self.total):
            movable[layer.nodes[np.asarray(total) > 0]] = True
        self.movable = movable.tolist()

    def __call__(self, start: int, index: int) -> np.ndarray:
        if self.length == 1 or not self.movable[start]:
            return np.array([start], dtype=np.int64)
        rng = walk_rng(self.seed, start, index)
        walk = [start]
        v, k = start, 0
        while len(walk) < self.length:
            i = self.pos[k][v]
            total = self.total[k][i]
            up = self.up[k][i]
            down = self.down[k]
            can_move_layer = up > 0 or down > 0
            if total > 0 and (not can_move_layer or rng.random() < self.stay_prob):
                j = int(np.searchsorted(self.cdf[k][i], rng.random() * total, side="right"))
                v = int(self.nodes[k][min(j, len(self.nodes[k]) - 1)])
                walk.append(v)
            elif up > 0 and down > 0:
                k += 1 if rng.random() < up / (up + down) else -1
            else:
                k += 1 if up > 0 else -1
        return np.array(walk, dtype=np.int64)


def struct2vec_walks(
    ctx: LayeredContextGraph,
    params: WalkParams,
    stay_prob: float = DEFAULT_STAY_PROB,
    workers: int = 1,
) -> WalkCorpus:
    """Biased walks on the layered graph, all starting in layer 0.

    Each step stays in the current layer with probability ``stay_prob``
    and hops to a node drawn proportionally to intra-layer weight;
    otherwise it changes layer (up with weight ``up``, down with weight
    ``down``) without emitting a node.
    """
    if not 0.0 < stay_prob <= 1.0:
        raise DomainError("stay_prob must lie in (0, 1]")
    walker = _LayerWalker(ctx, params.walk_length, stay_prob, params.rng_seed)
    walks = run_walks(walker, ctx.node_count, params.walks_per_node, workers)
    return WalkCorpus(walks, ctx.node_count, "struct2vec", ctx.node_names)

