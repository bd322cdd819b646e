"""Command-line entry point: ``seedalign <subcommand> [--config FILE] [--key value ...]``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import pipeline
from .config import KEYS, PipelineConfig, parse_value
from .errors import SeedAlignError, StageError
from .metrics import noisy_copy, random_graph
from .seeds import SeedList

STAGES = {
    "embed": (pipeline.run_embed, "train node embeddings for both networks"),
    "similarity": (pipeline.run_similarity, "derive the embedding seed list M_emb"),
    "mix": (pipeline.run_mix, "combine M_emb with contextual seeds into M_final"),
    "align": (pipeline.run_align, "grow local alignments from M_final"),
    "pipeline": (pipeline.run_pipeline, "run embed, similarity, mix and align"),
    "eval": (pipeline.run_eval, "score an alignment against ground truth"),
}


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="key=value configuration file")
    group = parser.add_argument_group("configuration (overrides the file)")
    for key in KEYS:
        group.add_argument(f"--{key.name}", dest=key.name, metavar="VALUE", help=key.help)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seedalign", description="Embedding-derived seeds and seed-and-extend local network alignment."
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in STAGES.items():
        _add_config_flags(sub.add_parser(name, help=help_text))
    synth = sub.add_parser("synth", help="write a random graph, a noisy renamed copy and the truth")
    synth.add_argument("--out", type=Path, required=True)
    synth.add_argument("--nodes", type=int, default=100)
    synth.add_argument("--mean-degree", type=float, default=6.0)
    synth.add_argument("--rho", type=float, default=0.0, help="fraction of edges rewired")
    synth.add_argument("--seed", type=int, default=0)
    return parser


def load_config(args: argparse.Namespace) -> PipelineConfig:
    overrides = {
        key.name: parse_value(key.name, getattr(args, key.name))
        for key in KEYS
        if getattr(args, key.name) is not None
    }
    if args.config is not None:
        return PipelineConfig.read(args.config, overrides)
    return PipelineConfig(overrides)


def _synth(args: argparse.Namespace) -> None:
    args.out.mkdir(parents=True, exist_ok=True)
    g1 = random_graph(args.nodes, args.mean_degree, seed=args.seed)
    g2, truth = noisy_copy(g1, args.rho, seed=args.seed + 1)
    (args.out / "g1.txt").write_text(g1.to_edge_list(), encoding="utf-8")
    (args.out / "g2.txt").write_text(g2.to_edge_list(), encoding="utf-8")
    truth.write(args.out / "truth.tsv")
    SeedList(((u, v, 1.0) for u, v in truth.items()), "contextual").write(args.out / "identity_seeds.tsv")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == "synth":
            _synth(args)
            return 0
        cfg = load_config(args)
        func, _ = STAGES[args.command]
        result = func(cfg)
    except StageError as exc:
        print(f"seedalign: {exc}", file=sys.stderr)
        return 1
    except SeedAlignError as exc:
        print(f"seedalign: [config] {exc}", file=sys.stderr)
        return 2
    if isinstance(result, str):
        sys.stdout.write(result)
    else:
        for path in result if isinstance(result, list) else [result]:
            print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
