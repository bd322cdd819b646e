"""Weighted cross-network node-pair lists and their text format."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import ParseError, ValidationError

SOURCES = ("embedding", "contextual", "mixed")
WEIGHT_DIGITS = 6


def _key(entry: tuple[str, str, float]) -> tuple[float, str, str]:
    # weights compare at printed precision so files stay sorted
    return (-round(entry[2], WEIGHT_DIGITS), entry[0], entry[1])


@dataclass(frozen=True)
class SeedList:
    """Entries ``(name1, name2, weight)`` sorted by weight descending, ties by names."""

    entries: tuple[tuple[str, str, float], ...]
    source: str

    def __init__(self, entries: Iterable[tuple[str, str, float]], source: str) -> None:
        if source not in SOURCES:
            raise ValidationError(f"unknown seed-list source {source!r}")
        items = [(str(u), str(v), float(w)) for u, v, w in entries]
        seen: set[tuple[str, str]] = set()
        for u, v, w in items:
            if not 0.0 <= w <= 1.0:
                raise ValidationError(f"weight {w} of ({u}, {v}) outside [0, 1]")
            if (u, v) in seen:
                raise ValidationError(f"duplicate pair ({u}, {v})")
            seen.add((u, v))
        items.sort(key=_key)
        object.__setattr__(self, "entries", tuple(items))
        object.__setattr__(self, "source", source)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[str, str, float]]:
        return iter(self.entries)

    def as_dict(self) -> dict[tuple[str, str], float]:
        return {(u, v): w for u, v, w in self.entries}

    def retag(self, source: str) -> SeedList:
        return SeedList(self.entries, source)

    def by_first(self) -> dict[str, list[tuple[str, float]]]:
        """Candidates per network-1 node, in list order."""
        out: dict[str, list[tuple[str, float]]] = {}
        for u, v, w in self.entries:
            out.setdefault(u, []).append((v, w))
        return out

    def to_text(self) -> str:
        lines = [f"# source={self.source}"]
        lines += [f"{u}\t{v}\t{w:.{WEIGHT_DIGITS}f}" for u, v, w in self.entries]
        return "\n".join(lines) + "\n"

    def write(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_text(cls, text: str, default_source: str = "contextual") -> SeedList:
        source, entries = parse_seed_text(text, default_source)
        return cls(entries, source)

    @classmethod
    def read(cls, path: str | os.PathLike, default_source: str = "contextual") -> SeedList:
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read(), default_source)


def parse_seed_text(
    text: str, default_source: str = "contextual"
) -> tuple[str, list[tuple[str, str, float]]]:
    """Raw entries of a seed-list file, without dedup or range checks."""
    source = default_source
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("source="):
                source = body[len("source=") :].strip()
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        if len(parts) != 3:
            raise ParseError("expected 'name1<TAB>name2<TAB>weight'", line=lineno)
        try:
            weight = float(parts[2])
        except ValueError:
            raise ParseError(f"bad weight {parts[2]!r}", line=lineno) from None
        entries.append((parts[0].strip(), parts[1].strip(), weight))
    return source, entries


def read_seed_entries(path: str | os.PathLike) -> tuple[str, list[tuple[str, str, float]]]:
    with open(path, encoding="utf-8") as fh:
        return parse_seed_text(fh.read())
