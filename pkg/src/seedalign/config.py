"""Flat ``section.key=value`` pipeline configuration and run manifests."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Any, Callable, Mapping

from .aligner import AlignParams
from .embed import TrainConfig
from .errors import ValidationError
from .mixer import MixConfig
from .walks import WalkParams

STRATEGIES = ("deepwalk", "node2vec", "struct2vec")


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _k_max(text: str) -> int | None:
    return None if text.strip().lower() == "auto" else int(text)


def _optional_path(text: str) -> str | None:
    return text.strip() or None


@dataclass(frozen=True)
class Key:
    name: str
    parse: Callable[[str], Any]
    default: Any
    help: str
    strategies: tuple[str, ...] = STRATEGIES


# order here is the order keys appear in manifests
KEYS = (
    Key("graph1", str, None, "edge-list file of the first network"),
    Key("graph2", str, None, "edge-list file of the second network"),
    Key("contextual", _optional_path, None, "contextual seed list (optional)"),
    Key("truth", _optional_path, None, "ground-truth mapping for metrics (optional)"),
    Key("out", str, "out", "output directory"),
    Key("strategy", str, "struct2vec", "deepwalk | node2vec | struct2vec"),
    Key("seed", int, 0, "global RNG seed"),
    Key("workers", int, 1, "worker processes for walk generation"),
    Key("walks.per_node", int, 10, "walks started from every node"),
    Key("walks.length", int, 80, "nodes per walk"),
    Key("walks.p", float, 1.0, "node2vec return parameter", ("node2vec",)),
    Key("walks.q", float, 1.0, "node2vec in-out parameter", ("node2vec",)),
    Key("walks.stay_prob", float, 0.7, "probability of an intra-layer step", ("struct2vec",)),
    Key("walks.k_max", _k_max, None, "deepest structural level, or 'auto'", ("struct2vec",)),
    Key("walks.band", _bool, False, "compare only degree-banded pairs", ("struct2vec",)),
    Key("train.dim", int, 64, "embedding dimension"),
    Key("train.window", int, 5, "skip-gram window"),
    Key("train.negatives", int, 5, "negative samples per pair"),
    Key("train.epochs", int, 5, "training epochs"),
    Key("train.lr", float, 0.025, "initial learning rate"),
    Key("train.export", str, "target", "exported vectors: target | sum"),
    Key("similarity.top_k", int, 5, "candidates kept per network-1 node"),
    Key("mix.lambda", float, 0.5, "weight of the embedding score"),
    Key("mix.policy", str, "zero", "absent-score policy: zero | drop"),
    Key("align.seed_threshold", float, 0.8, "minimum score of a seed pair"),
    Key("align.extend_threshold", float, 0.5, "minimum score of an extension pair"),
    Key("align.max_seeds", int, 100, "maximum number of seeds"),
    Key("align.min_component_size", int, 3, "smallest region kept"),
)
KEY_BY_NAME = {k.name: k for k in KEYS}


def _format(value: Any) -> str:
    if value is None:
        return "auto"
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


class PipelineConfig:
    """Resolved settings of one run.

    ``values`` maps every key of :data:`KEYS` to its parsed value.  Keys
    that belong to another strategy may not be set explicitly.
    """

    def __init__(self, values: Mapping[str, Any] | None = None) -> None:
        self.values = {k.name: k.default for k in KEYS}
        explicit = dict(values or {})
        unknown = set(explicit) - set(KEY_BY_NAME)
        if unknown:
            raise ValidationError(f"unknown configuration key(s): {', '.join(sorted(unknown))}")
        self.values.update(explicit)
        strategy = self.values["strategy"]
        if strategy not in STRATEGIES:
            raise ValidationError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
        for name in explicit:
            key = KEY_BY_NAME[name]
            if strategy not in key.strategies:
                raise ValidationError(f"{name} only applies to strategy {'/'.join(key.strategies)}")
        # construct every parameter object once so invariants fail early
        self.walk_params()
        self.train_config()
        self.mix_config()
        self.align_params()
        if self["similarity.top_k"] < 1:
            raise ValidationError("similarity.top_k must be >= 1")
        if not 0.0 < self["walks.stay_prob"] <= 1.0:
            raise ValidationError("walks.stay_prob must lie in (0, 1]")

    def __getitem__(self, name: str) -> Any:
        return self.values[name]

    @classmethod
    def from_text(cls, text: str, overrides: Mapping[str, Any] | None = None) -> PipelineConfig:
        values: dict[str, Any] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValidationError(f"config line {lineno}: expected key=value")
            name, _, value = (part.strip() for part in line.partition("="))
            values[name] = parse_value(name, value)
        values.update(overrides or {})
        return cls(values)

    @classmethod
    def read(cls, path: str | os.PathLike, overrides: Mapping[str, Any] | None = None) -> PipelineConfig:
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read(), overrides)

    def to_text(self) -> str:
        """Manifest text: every key relevant to the strategy, in schema order."""
        strategy = self["strategy"]
        lines = []
        for key in KEYS:
            value = self.values[key.name]
            if strategy not in key.strategies:
                continue
            if value is None and key.parse is _optional_path:
                continue
            lines.append(f"{key.name}={_format(value)}")
        return "\n".join(lines) + "\n"

    def walk_params(self) -> WalkParams:
        return WalkParams(
            walks_per_node=self["walks.per_node"],
            walk_length=self["walks.length"],
            p=self["walks.p"],
            q=self["walks.q"],
            rng_seed=self["seed"],
        )

    def train_config(self, offset: int = 1) -> TrainConfig:
        return TrainConfig(
            dim=self["train.dim"],
            window=self["train.window"],
            negatives=self["train.negatives"],
            epochs=self["train.epochs"],
            lr=self["train.lr"],
            rng_seed=self["seed"] + offset,
            export=self["train.export"],
        )

    def mix_config(self) -> MixConfig:
        return MixConfig(self["mix.lambda"], self["mix.policy"])

    def align_params(self) -> AlignParams:
        return AlignParams(
            self["align.seed_threshold"],
            self["align.extend_threshold"],
            self["align.max_seeds"],
            self["align.min_component_size"],
        )


def parse_value(name: str, text: str) -> Any:
    key = KEY_BY_NAME.get(name)
    if key is None:
        raise ValidationError(f"unknown configuration key {name!r}")
    try:
        return key.parse(text)
    except ValueError as exc:
        raise ValidationError(f"{name}: {exc}") from None
