"""Random-walk corpora: uniform (DeepWalk) and second-order biased (node2vec)."""

from __future__ import annotations

import os
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .graph import Graph

STRATEGIES = ("uniform", "node2vec", "struct2vec")

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class WalkParams:
    walks_per_node: int = 10
    walk_length: int = 80
    p: float = 1.0
    q: float = 1.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.walks_per_node < 1:
            raise DomainError("walks_per_node must be >= 1")
        if self.walk_length < 1:
            raise DomainError("walk_length must be >= 1")
        if not (self.p > 0 and self.q > 0):
            raise DomainError("p and q must be positive")


@dataclass
class WalkCorpus:
    walks: list[np.ndarray]
    source_graph_size: int
    strategy: str
    node_names: Sequence[str] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise DomainError(f"unknown strategy {self.strategy!r}")

    def __len__(self) -> int:
        return len(self.walks)

    def token_count(self) -> int:
        return sum(len(w) for w in self.walks)

    def to_text(self) -> str:
        names = self.node_names or [str(i) for i in range(self.source_graph_size)]
        return "".join(" ".join(names[i] for i in w.tolist()) + "\n" for w in self.walks)

    def write(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_text())


def walk_rng(seed: int, start: int, index: int) -> np.random.Generator:
    """Independent stream for one walk, so generation order never matters."""
    return np.random.default_rng([seed & _U64, start, index])


def run_walks(
    walk_fn: Callable[[int, int], np.ndarray],
    n: int,
    walks_per_node: int,
    workers: int = 1,
) -> list[np.ndarray]:
    """Run ``walk_fn(start, index)`` for every node and walk index.

    Output is ordered pass-major (all nodes for pass 0, then pass 1, ...)
    regardless of ``workers``.  With ``workers > 1`` ``walk_fn`` must be
    picklable.
    """
    if workers <= 1 or n < 2:
        return [walk_fn(v, i) for i in range(walks_per_node) for v in range(n)]
    chunks = np.array_split(np.arange(n), min(workers * 4, n))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(
            pool.map(_walk_chunk, [(walk_fn, c.tolist(), walks_per_node) for c in chunks])
        )
    by_start: dict[int, list[np.ndarray]] = {}
    for chunk, walks in zip(chunks, parts):
        for v, per_node in zip(chunk.tolist(), walks):
            by_start[v] = per_node
    return [by_start[v][i] for i in range(walks_per_node) for v in range(n)]


def _walk_chunk(args) -> list[list[np.ndarray]]:
    walk_fn, starts, r = args
    return [[walk_fn(v, i) for i in range(r)] for v in starts]


class _UniformWalker:
    def __init__(self, g: Graph, length: int, seed: int) -> None:
        self.indptr = g.indptr.tolist()
        self.indices = g.indices.tolist()
        self.length = length
        self.seed = seed

    def __call__(self, start: int, index: int) -> np.ndarray:
        indptr, indices = self.indptr, self.indices
        if indptr[start + 1] == indptr[start] or self.length == 1:
            return np.array([start], dtype=np.int64)
        draws = walk_rng(self.seed, start, index).random(self.length - 1).tolist()
        walk = [start]
        cur = start
        for u in draws:
            lo = indptr[cur]
            cur = indices[lo + int(u * (indptr[cur + 1] - lo))]
            walk.append(cur)
        return np.array(walk, dtype=np.int64)


def uniform_walks(g: Graph, params: WalkParams, workers: int = 1) -> WalkCorpus:
    """Fixed-length unbiased walks, ``walks_per_node`` from every node."""
    walker = _UniformWalker(g, params.walk_length, params.rng_seed)
    walks = run_walks(walker, g.n, params.walks_per_node, workers)
    return WalkCorpus(walks, g.n, "uniform", g.names)


def node2vec_transition(g: Graph, prev: int, cur: int, p: float, q: float) -> np.ndarray:
    """Second-order transition law out of ``cur`` having arrived from ``prev``.

    Returns probabilities aligned with ``g.neighbors(cur)``.
    """
    if not g.has_edge(prev, cur):
        raise DomainError(f"node {prev} is not adjacent to node {cur}")
    nbrs = g.neighbors(cur).tolist()
    weights = np.array(
        [1.0 / p if x == prev else 1.0 if g.has_edge(x, prev) else 1.0 / q for x in nbrs]
    )
    return weights / weights.sum()


class _Node2VecWalker:
    def __init__(self, g: Graph, params: WalkParams) -> None:
        self.g = g
        self.indptr = g.indptr.tolist()
        self.indices = g.indices.tolist()
        self.length = params.walk_length
        self.p = params.p
        self.q = params.q
        self.seed = params.rng_seed
        self._cdf: dict[tuple[int, int], list[float]] = {}

    def _edge_cdf(self, prev: int, cur: int) -> list[float]:
        key = (prev, cur)
        cdf = self._cdf.get(key)
        if cdf is None:
            probs = node2vec_transition(self.g, prev, cur, self.p, self.q)
            cdf = list(accumulate(probs.tolist()))
            self._cdf[key] = cdf
        return cdf

    def __call__(self, start: int, index: int) -> np.ndarray:
        indptr, indices = self.indptr, self.indices
        if indptr[start + 1] == indptr[start] or self.length == 1:
            return np.array([start], dtype=np.int64)
        draws = walk_rng(self.seed, start, index).random(self.length - 1).tolist()
        lo = indptr[start]
        walk = [start, indices[lo + int(draws[0] * (indptr[start + 1] - lo))]]
        for u in draws[1:]:
            prev, cur = walk[-2], walk[-1]
            cdf = self._edge_cdf(prev, cur)
            # u * total guards against cdf[-1] rounding just below 1
            k = min(bisect_right(cdf, u * cdf[-1]), len(cdf) - 1)
            walk.append(indices[indptr[cur] + k])
        return np.array(walk, dtype=np.int64)


def node2vec_walks(g: Graph, params: WalkParams, workers: int = 1) -> WalkCorpus:
    """Biased walks: first step uniform, later steps follow the (p, q) rule."""
    walker = _Node2VecWalker(g, params)
    walks = run_walks(walker, g.n, params.walks_per_node, workers)
    return WalkCorpus(walks, g.n, "node2vec", g.names)
