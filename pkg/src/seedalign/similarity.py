"""Cross-network node similarity from embeddings, and a degree baseline."""

from __future__ import annotations

import logging
from typing import Mapping

import numpy as np

from .embed import EmbeddingMatrix
from .errors import DomainError
from .graph import Graph
from .seeds import WEIGHT_DIGITS, SeedList

log = logging.getLogger(__name__)

DEFAULT_TOP_K = 5
_BLOCK = 256


def normalized_cosine(e_u, e_v) -> float:
    """Cosine similarity rescaled from [-1, 1] to [0, 1]."""
    a = np.asarray(e_u, dtype=float)
    b = np.asarray(e_v, dtype=float)
    if a.shape != b.shape:
        raise DomainError("vectors differ in dimension")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise DomainError("normalized cosine undefined for a zero vector")
    cos = float(a @ b) / (na * nb)
    return min(1.0, max(0.0, (1.0 + cos) / 2.0))


def _unit_rows(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(x, axis=1)
    zero = norms == 0
    safe = np.where(zero, 1.0, norms)
    return x / safe[:, None], zero


def similarity_matrix(emb1: EmbeddingMatrix, emb2: EmbeddingMatrix) -> np.ndarray:
    """Full ``|V1| x |V2|`` normalized cosine matrix; zero vectors score 0."""
    if emb1.dim != emb2.dim:
        raise DomainError(f"dimension mismatch: {emb1.dim} vs {emb2.dim}")
    a, za = _unit_rows(emb1.vectors)
    b, zb = _unit_rows(emb2.vectors)
    sims = np.clip((1.0 + a @ b.T) / 2.0, 0.0, 1.0)
    sims[za, :] = 0.0
    sims[:, zb] = 0.0
    return sims


def build_seed_list(
    emb1: EmbeddingMatrix,
    emb2: EmbeddingMatrix,
    top_k: int = DEFAULT_TOP_K,
    full: bool = False,
) -> SeedList:
    """Each network-1 node paired with its ``top_k`` most similar network-2 nodes.

    Rows are processed in blocks so the full similarity matrix is never
    held in memory unless ``full`` is set.
    """
    if emb1.dim != emb2.dim:
        raise DomainError(f"dimension mismatch: {emb1.dim} vs {emb2.dim}")
    if top_k < 1:
        raise DomainError("top_k must be >= 1")
    k = min(top_k, len(emb2))
    zero1 = [emb1.names[i] for i in np.flatnonzero(~emb1.vectors.any(axis=1))]
    zero2 = [emb2.names[i] for i in np.flatnonzero(~emb2.vectors.any(axis=1))]
    if zero1 or zero2:
        log.warning("zero embedding vectors score 0: %s", sorted(zero1 + zero2))
    b, zb = _unit_rows(emb2.vectors)
    name_rank = np.argsort(np.argsort(np.array(emb2.names, dtype=object)))
    entries = []
    block = len(emb1) if full else _BLOCK
    for lo in range(0, len(emb1), block):
        rows = emb1.vectors[lo : lo + block]
        a, za = _unit_rows(rows)
        sims = np.clip((1.0 + a @ b.T) / 2.0, 0.0, 1.0)
        sims[za, :] = 0.0
        sims[:, zb] = 0.0
        keyed = np.round(sims, WEIGHT_DIGITS)
        for r in range(len(rows)):
            best = np.lexsort((name_rank, -keyed[r]))[:k]
            u = emb1.names[lo + r]
            entries += [(u, emb2.names[j], float(sims[r, j])) for j in best.tolist()]
    return SeedList(entries, "embedding")


def degree_similarity(du: int, dv: int) -> float:
    hi = max(du, dv)
    return 1.0 if hi == 0 else 1.0 - abs(du - dv) / hi


def adjacency_baseline(
    g1: Graph,
    g2: Graph,
    name_map: Mapping[str, str] | None = None,
    top_k: int = DEFAULT_TOP_K,
) -> SeedList:
    """First-order baseline: pair nodes by degree agreement.

    Nodes present in ``name_map`` are scored only against their mapped
    counterpart; every other node takes its ``top_k`` degree-closest
    network-2 candidates.
    """
    if top_k < 1:
        raise DomainError("top_k must be >= 1")
    name_map = name_map or {}
    deg1, deg2 = g1.degrees(), g2.degrees()
    names2 = np.array(g2.names, dtype=object)
    rank2 = np.argsort(np.argsort(names2))
    entries = []
    for u, name in enumerate(g1.names):
        if name in name_map:
            target = name_map[name]
            if target in g2:
                entries.append((name, target, degree_similarity(deg1[u], deg2[g2.id_of(target)])))
            continue
        hi = np.maximum(deg2, deg1[u])
        w = np.where(hi == 0, 1.0, 1.0 - np.abs(deg2 - deg1[u]) / np.where(hi == 0, 1, hi))
        best = np.lexsort((rank2, -np.round(w, WEIGHT_DIGITS)))[:top_k]
        entries += [(name, g2.names[j], float(w[j])) for j in best.tolist()]
    return SeedList(entries, "embedding")
