"""Seed-and-extend local alignment between two graphs.

Seeds are admitted from the top of the mixed seed list; a best-first
frontier then grows each region along pairs of corresponding neighbors,
using only candidate pairs that already appear in the seed list.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field
from typing import Mapping

from .errors import DomainError, ParseError
from .graph import Graph
from .seeds import WEIGHT_DIGITS, SeedList

SEED = "seed"
EXTENDED = "extended"


@dataclass(frozen=True)
class AlignParams:
    seed_threshold: float = 0.8
    extend_threshold: float = 0.5
    max_seeds: int = 100
    min_component_size: int = 3

    def __post_init__(self) -> None:
        for name in ("seed_threshold", "extend_threshold"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1]")
        if self.extend_threshold > self.seed_threshold:
            raise DomainError("extend_threshold must not exceed seed_threshold")
        if self.max_seeds < 1 or self.min_component_size < 1:
            raise DomainError("max_seeds and min_component_size must be >= 1")


EdgePair = tuple[tuple[str, str], tuple[str, str]]


@dataclass
class Alignment:
    """One-to-one partial mapping with provenance, conserved edges and regions."""

    pairs: list[tuple[str, str, str, float]] = field(default_factory=list)
    conserved_edges: list[EdgePair] = field(default_factory=list)
    components: list[list[tuple[str, str]]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def mapping(self) -> dict[str, str]:
        return {u: v for u, v, _, _ in self.pairs}

    def to_text(self) -> str:
        lines = ["# pairs: name1 name2 provenance score"]
        lines += [f"{u}\t{v}\t{prov}\t{s:.{WEIGHT_DIGITS}f}" for u, v, prov, s in self.pairs]
        lines.append("# conserved-edges")
        lines += [f"{a}\t{b}\t{x}\t{y}" for (a, b), (x, y) in self.conserved_edges]
        lines.append("# components: id size conserved_edges")
        edge_count = self._component_edge_counts()
        for cid, comp in enumerate(self.components):
            lines.append(f"{cid}\t{len(comp)}\t{edge_count[cid]}")
        return "\n".join(lines) + "\n"

    def _component_edge_counts(self) -> list[int]:
        where = {u: cid for cid, comp in enumerate(self.components) for u, _ in comp}
        counts = [0] * len(self.components)
        for (a, _), _ in self.conserved_edges:
            counts[where[a]] += 1
        return counts

    def write(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> Alignment:
        section = "pairs"
        out = cls()
        sizes: list[int] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "conserved-edges" in line:
                    section = "edges"
                elif "components" in line:
                    section = "components"
                continue
            parts = line.split("\t")
            try:
                if section == "pairs":
                    u, v, prov, score = parts
                    out.pairs.append((u, v, prov, float(score)))
                elif section == "edges":
                    a, b, x, y = parts
                    out.conserved_edges.append(((a, b), (x, y)))
                else:
                    sizes.append(int(parts[1]))
            except ValueError:
                raise ParseError(f"malformed {section} line", line=lineno) from None
        out.components = _regions(out.mapping, out.conserved_edges)
        if sorted(sizes) != sorted(len(c) for c in out.components):
            raise ParseError("component summary disagrees with pairs and conserved edges")
        return out

    @classmethod
    def read(cls, path: str | os.PathLike) -> Alignment:
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


def conserved_edges(g1: Graph, g2: Graph, mapping: Mapping[str, str]) -> list[EdgePair]:
    """Edges of ``g1`` whose images under ``mapping`` are edges of ``g2``."""
    out = []
    for a, b in g1.edges():
        na, nb = g1.names[a], g1.names[b]
        if na in mapping and nb in mapping:
            x, y = mapping[na], mapping[nb]
            if x in g2 and y in g2 and g2.has_edge(g2.id_of(x), g2.id_of(y)):
                out.append(((na, nb), (x, y)))
    return out


def _regions(mapping: Mapping[str, str], edges: list[EdgePair]) -> list[list[tuple[str, str]]]:
    parent = {u: u for u in mapping}

    def find(u: str) -> str:
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for (a, b), _ in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[str, list[tuple[str, str]]] = {}
    for u in sorted(mapping):
        groups.setdefault(find(u), []).append((u, mapping[u]))
    return sorted(groups.values(), key=lambda c: (-len(c), c[0][0]))


def build_alignment(
    g1: Graph, g2: Graph, m_final: SeedList, params: AlignParams = AlignParams()
) -> Alignment:
    pairs: list[tuple[str, str, str, float]] = []
    image: dict[str, str] = {}
    taken: set[str] = set()

    def admit(u: str, v: str, prov: str, score: float) -> None:
        pairs.append((u, v, prov, score))
        image[u] = v
        taken.add(v)

    for u, v, w in m_final:
        if len(pairs) >= params.max_seeds or round(w, WEIGHT_DIGITS) < params.seed_threshold:
            break
        if u in image or v in taken or u not in g1 or v not in g2:
            continue
        admit(u, v, SEED, w)

    candidates = m_final.by_first()
    frontier: list[tuple[float, str, str]] = []

    def push_around(u0: str, v0: str) -> None:
        nbrs2 = {g2.names[x] for x in g2.neighbors(g2.id_of(v0)).tolist()}
        for a in g1.neighbors(g1.id_of(u0)).tolist():
            u = g1.names[a]
            if u in image:
                continue
            for v, w in candidates.get(u, ()):
                if round(w, WEIGHT_DIGITS) < params.extend_threshold:
                    break
                if v in nbrs2 and v not in taken:
                    heapq.heappush(frontier, (-w, u, v))

    for u0, v0, _, _ in list(pairs):
        push_around(u0, v0)
    while frontier:
        neg_w, u, v = heapq.heappop(frontier)
        if u in image or v in taken:
            continue
        admit(u, v, EXTENDED, -neg_w)
        push_around(u, v)

    edges = conserved_edges(g1, g2, image)
    regions = _regions(image, edges)
    keep = {u for comp in regions if len(comp) >= params.min_component_size for u, _ in comp}
    pairs = [p for p in pairs if p[0] in keep]
    edges = [e for e in edges if e[0][0] in keep]
    regions = [c for c in regions if len(c) >= params.min_component_size]
    return Alignment(pairs, edges, regions)
