"""Undirected, unweighted simple graphs and their disjoint union."""

from __future__ import annotations

import io
import logging
import os
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ParseError, ValidationError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoadReport:
    nodes: int
    edges: int
    self_loops: int
    duplicates: int

    def __str__(self) -> str:
        return (
            f"nodes={self.nodes} edges={self.edges} "
            f"dropped_self_loops={self.self_loops} collapsed_duplicates={self.duplicates}"
        )


class Graph:
    """Immutable simple graph over internal ids ``0..n-1``.

    Adjacency is held in CSR form (``indptr``/``indices``) with every
    neighbor list sorted ascending; ``names[i]`` is the external name of
    node ``i``.
    """

    __slots__ = ("names", "indptr", "indices", "edge_count", "_index", "_adjsets")

    def __init__(self, names: Sequence[str], edges: Iterable[tuple[int, int]]) -> None:
        names = tuple(names)
        n = len(names)
        index = {name: i for i, name in enumerate(names)}
        if len(index) != n:
            raise ValidationError("node names must be unique")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) references an unknown node")
            if u == v:
                raise ValidationError(f"self-loop on node {names[u]!r}")
            adj[u].add(v)
            adj[v].add(u)
        indptr = np.zeros(n + 1, dtype=np.int64)
        for i, nbrs in enumerate(adj):
            indptr[i + 1] = indptr[i] + len(nbrs)
        indices = np.fromiter(
            (v for nbrs in adj for v in sorted(nbrs)), dtype=np.int64, count=int(indptr[-1])
        )
        indptr.flags.writeable = False
        indices.flags.writeable = False
        self.names = names
        self.indptr = indptr
        self.indices = indices
        self.edge_count = int(indptr[-1]) // 2
        self._index = index
        self._adjsets: list[frozenset[int]] | None = None

    @classmethod
    def from_named_edges(cls, edges: Iterable[tuple[str, str]]) -> Graph:
        """Build from name pairs, assigning ids in first-appearance order."""
        index: dict[str, int] = {}
        pairs = []
        for a, b in edges:
            ia = index.setdefault(a, len(index))
            ib = index.setdefault(b, len(index))
            pairs.append((ia, ib))
        return cls(list(index), pairs)

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"Graph(nodes={len(self)}, edges={self.edge_count})"

    @property
    def n(self) -> int:
        return len(self.names)

    def id_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise DomainError(f"unknown node {name!r}") from None

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def _check(self, v: int) -> None:
        if not 0 <= v < len(self.names):
            raise DomainError(f"node id {v} out of range 0..{len(self.names) - 1}")

    def neighbors(self, v: int) -> np.ndarray:
        self._check(v)
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        self._check(v)
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        if self._adjsets is None:
            self._adjsets = [frozenset(self.neighbors(i).tolist()) for i in range(self.n)]
        return v in self._adjsets[u]

    def edges(self) -> list[tuple[int, int]]:
        """Each undirected edge once, as ``(u, v)`` with ``u < v``."""
        out = []
        for u in range(self.n):
            for v in self.neighbors(u).tolist():
                if u < v:
                    out.append((u, v))
        return out

    def bfs_distances(self, source: int) -> np.ndarray:
        """Hop distance from ``source``; -1 for unreachable nodes."""
        self._check(source)
        dist = np.full(self.n, -1, dtype=np.int64)
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self.indices[self.indptr[u] : self.indptr[u + 1]]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(int(w))
        return dist

    def components(self) -> list[list[int]]:
        seen = np.zeros(self.n, dtype=bool)
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            members = np.flatnonzero(self.bfs_distances(s) >= 0)
            seen[members] = True
            comps.append(members.tolist())
        return comps

    def to_edge_list(self) -> str:
        return "".join(f"{self.names[u]} {self.names[v]}\n" for u, v in self.edges())


def parse_edge_list(data: str | bytes | io.IOBase) -> tuple[Graph, LoadReport]:
    """Parse whitespace-separated edge-list text into a graph plus a load report."""
    if isinstance(data, io.IOBase):
        data = data.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    index: dict[str, int] = {}
    seen: set[tuple[int, int]] = set()
    pairs: list[tuple[int, int]] = []
    self_loops = duplicates = 0
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 2 node names, found {len(tokens)}", line=lineno)
        a, b = tokens
        ia = index.setdefault(a, len(index))
        ib = index.setdefault(b, len(index))
        if ia == ib:
            self_loops += 1
            continue
        key = (min(ia, ib), max(ia, ib))
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        pairs.append(key)
    if not pairs:
        raise ValidationError("edge list contains no edges")
    graph = Graph(list(index), pairs)
    return graph, LoadReport(graph.n, graph.edge_count, self_loops, duplicates)


def load_edge_list(data: str | bytes | io.IOBase) -> Graph:
    graph, report = parse_edge_list(data)
    log.info("loaded graph: %s", report)
    return graph


def read_edge_list(path: str | os.PathLike) -> Graph:
    with open(path, "rb") as fh:
        graph, report = parse_edge_list(fh.read())
    log.info("loaded %s: %s", path, report)
    return graph


def degree(g: Graph, v: int) -> int:
    return g.degree(v)


class UnionGraph:
    """Disjoint union of two graphs with per-node origin bookkeeping.

    Nodes of the first graph keep their ids; nodes of the second are
    offset by ``len(g1)``.  ``origin[i]`` is 0 or 1 and ``original_id[i]``
    the id within that origin graph.  Union node names are prefixed with
    ``g1:`` / ``g2:`` so identical names in both inputs stay distinct.
    """

    PREFIXES = ("g1:", "g2:")

    def __init__(self, g1: Graph, g2: Graph) -> None:
        n1 = g1.n
        names = [self.PREFIXES[0] + s for s in g1.names] + [self.PREFIXES[1] + s for s in g2.names]
        edges = g1.edges() + [(u + n1, v + n1) for u, v in g2.edges()]
        self.graph = Graph(names, edges)
        self.parts = (g1, g2)
        self.origin = np.concatenate([np.zeros(n1, np.int8), np.ones(g2.n, np.int8)])
        self.original_id = np.concatenate([np.arange(n1), np.arange(g2.n)])
        self.offset = n1

    def __len__(self) -> int:
        return self.graph.n

    def union_id(self, which: int, v: int) -> int:
        return v if which == 0 else v + self.offset

    @classmethod
    def split_name(cls, name: str) -> tuple[int, str]:
        for which, prefix in enumerate(cls.PREFIXES):
            if name.startswith(prefix):
                return which, name[len(prefix) :]
        raise DomainError(f"{name!r} carries no origin prefix")


def disjoint_union(g1: Graph, g2: Graph) -> UnionGraph:
    return UnionGraph(g1, g2)
