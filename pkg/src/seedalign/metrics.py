"""Alignment and seed-list scoring, plus synthetic ground-truth generation."""

from __future__ import annotations

import json
import os
from typing import Mapping

import numpy as np

from .aligner import Alignment
from .errors import DomainError, ParseError, ValidationError
from .graph import Graph
from .seeds import SeedList


class GroundTruth(dict):
    """Injective partial mapping from network-1 names to network-2 names."""

    def __init__(self, mapping: Mapping[str, str] = ()) -> None:
        super().__init__(mapping)
        if len(set(self.values())) != len(self):
            raise ValidationError("ground-truth mapping is not injective")

    def to_text(self) -> str:
        return "".join(f"{u}\t{v}\n" for u, v in self.items())

    def write(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> GroundTruth:
        pairs = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("expected 'name1<TAB>name2'", line=lineno)
            pairs[parts[0]] = parts[1]
        return cls(pairs)

    @classmethod
    def read(cls, path: str | os.PathLike) -> GroundTruth:
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


def node_correctness(a: Alignment, t: Mapping[str, str]) -> float:
    if not a.pairs:
        return 0.0
    hits = sum(1 for u, v, _, _ in a.pairs if t.get(u) == v)
    return hits / len(a.pairs)


def edge_correctness(a: Alignment, g1: Graph) -> float:
    """Conserved edges over the ``g1`` edges whose endpoints are both aligned."""
    aligned = a.mapping
    induced = sum(1 for u, v in g1.edges() if g1.names[u] in aligned and g1.names[v] in aligned)
    return len(a.conserved_edges) / induced if induced else 0.0


def seed_hit_rate(m: SeedList, t: Mapping[str, str], k: int) -> float:
    """Share of truth-domain nodes whose counterpart is in their top-``k`` seed entries."""
    if k < 1:
        raise DomainError("k must be >= 1")
    if not t:
        return 0.0
    ranked = m.by_first()
    hits = sum(1 for u, v in t.items() if v in [c for c, _ in ranked.get(u, [])[:k]])
    return hits / len(t)


def metrics_report(values: Mapping[str, float]) -> str:
    """Tab-separated ``metric value`` lines followed by a one-line JSON summary."""
    lines = ["metric\tvalue"] + [f"{k}\t{v:.6f}" for k, v in values.items()]
    lines.append(json.dumps({k: round(v, 6) for k, v in values.items()}, sort_keys=True))
    return "\n".join(lines) + "\n"


def random_graph(n: int, mean_degree: float, seed: int = 0, connected: bool = True) -> Graph:
    """Uniform random graph with ``n * mean_degree / 2`` edges.

    When ``connected`` is set, components are chained together with one
    extra edge each, which nudges the mean degree up slightly.
    """
    rng = np.random.default_rng(seed)
    target = int(round(n * mean_degree / 2))
    if target > n * (n - 1) // 2:
        raise DomainError("mean degree too large for n")
    edges: set[tuple[int, int]] = set()
    while len(edges) < target:
        u, v = rng.integers(0, n, size=2).tolist()
        if u != v:
            edges.add((min(u, v), max(u, v)))
    g = Graph([f"n{i}" for i in range(n)], sorted(edges))
    if connected:
        comps = g.components()
        for a, b in zip(comps, comps[1:]):
            u, v = int(rng.choice(a)), int(rng.choice(b))
            edges.add((min(u, v), max(u, v)))
        g = Graph(g.names, sorted(edges))
    return g


def noisy_copy(
    g: Graph, rho: float = 0.0, seed: int = 0, prefix: str = "c_"
) -> tuple[Graph, GroundTruth]:
    """Renamed, reshuffled copy of ``g`` with a fraction ``rho`` of edges rewired.

    Rewiring deletes ``round(rho * |E|)`` random edges and inserts as many
    random non-edges, ignoring degrees.  For a fixed ``seed`` the edits are
    nested: the edges rewired at a smaller ``rho`` are a prefix of those
    rewired at a larger one, and the renaming does not depend on ``rho``.
    Returns the copy and the truth mapping from original to new names.
    """
    if not 0.0 <= rho <= 1.0:
        raise DomainError("rho must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(g.n)
    edges = g.edges()
    n_rewire = int(round(rho * len(edges)))
    removal_order = rng.permutation(len(edges))
    dropped = {edges[i] for i in removal_order[:n_rewire].tolist()}
    kept = [e for e in edges if e not in dropped]
    present = set(edges)
    added: list[tuple[int, int]] = []
    while len(added) < n_rewire:
        u, v = rng.integers(0, g.n, size=2).tolist()
        e = (min(u, v), max(u, v))
        if u != v and e not in present:
            present.add(e)
            added.append(e)
    new_name = [f"{prefix}{perm[i]}" for i in range(g.n)]
    order = sorted(kept + added, key=lambda e: (perm[e[0]], perm[e[1]]))
    copy = Graph.from_named_edges((new_name[u], new_name[v]) for u, v in order)
    if copy.n != g.n:
        # nodes isolated by rewiring never appear in the edge stream
        missing = [x for x in new_name if x not in copy]
        copy = Graph(list(copy.names) + missing, copy.edges())
    return copy, GroundTruth({g.names[i]: new_name[i] for i in range(g.n)})
