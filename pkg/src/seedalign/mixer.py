"""Linear mixing of embedding-derived and contextual seed lists."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

from .errors import DomainError, ValidationError
from .graph import Graph
from .seeds import SeedList

log = logging.getLogger(__name__)

POLICIES = ("zero", "drop")


@dataclass(frozen=True)
class MixConfig:
    lam: float = 0.5  # weight of the embedding score
    policy: str = "zero"

    def __post_init__(self) -> None:
        if not 0.0 <= self.lam <= 1.0:
            raise DomainError(f"lambda {self.lam} outside [0, 1]")
        if self.policy not in POLICIES:
            raise DomainError(f"absent-score policy must be one of {POLICIES}")


def mix(m_emb: SeedList, m_w: SeedList, cfg: MixConfig = MixConfig()) -> SeedList:
    """``lam * s_emb + (1 - lam) * s_w`` over the union (policy zero) or intersection (drop)."""
    emb = m_emb.as_dict()
    ctx = m_w.as_dict()
    if cfg.policy == "drop":
        keys = emb.keys() & ctx.keys()
    else:
        keys = emb.keys() | ctx.keys()
    lam = cfg.lam
    entries = []
    for key in keys:
        score = lam * emb.get(key, 0.0) + (1.0 - lam) * ctx.get(key, 0.0)
        entries.append((key[0], key[1], min(1.0, max(0.0, score))))
    return SeedList(entries, "mixed")


@dataclass
class ContextualReport:
    unknown: list[tuple[str, str]] = field(default_factory=list)
    clamped: list[tuple[str, str, float]] = field(default_factory=list)
    duplicates: int = 0

    def __str__(self) -> str:
        return (
            f"dropped_unknown={len(self.unknown)} clamped={len(self.clamped)} "
            f"merged_duplicates={self.duplicates}"
        )


def validate_contextual(
    entries: Iterable[tuple[str, str, float]], g1: Graph, g2: Graph
) -> tuple[SeedList, ContextualReport]:
    """Clean a raw contextual seed list against the two graphs.

    Unknown names are dropped, weights clamped into [0, 1] and duplicate
    pairs merged keeping the largest weight.
    """
    report = ContextualReport()
    best: dict[tuple[str, str], float] = {}
    for u, v, w in entries:
        if u not in g1 or v not in g2:
            report.unknown.append((u, v))
            continue
        clamped = min(1.0, max(0.0, float(w)))
        if clamped != w:
            report.clamped.append((u, v, float(w)))
        if (u, v) in best:
            report.duplicates += 1
            clamped = max(clamped, best[(u, v)])
        best[(u, v)] = clamped
    for u, v in report.unknown:
        log.warning("contextual seed (%s, %s) names an unknown node; dropped", u, v)
    for u, v, w in report.clamped:
        log.warning("contextual seed (%s, %s) weight %s clamped into [0, 1]", u, v, w)
    if not best:
        raise ValidationError("contextual seed list is empty after validation")
    return SeedList(((u, v, w) for (u, v), w in best.items()), "contextual"), report
