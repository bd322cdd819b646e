"""File-backed pipeline stages: embed -> similarity -> mix -> align (-> eval).

Every stage reads its inputs from, and writes its outputs to, the
configured output directory, and refreshes the run manifest there.
"""

from __future__ import annotations

import logging
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

from .aligner import Alignment, build_alignment
from .config import PipelineConfig
from .embed import EmbeddingMatrix, train
from .errors import SeedAlignError, StageError
from .graph import Graph, UnionGraph, read_edge_list
from .metrics import (
    GroundTruth,
    edge_correctness,
    metrics_report,
    node_correctness,
    seed_hit_rate,
)
from .mixer import mix, validate_contextual
from .seeds import SeedList, read_seed_entries
from .similarity import build_seed_list
from .structsim import build_context_graph, struct2vec_walks
from .walks import node2vec_walks, uniform_walks

log = logging.getLogger(__name__)

MANIFEST = "manifest.conf"
UNION_EMBEDDING = "embeddings.txt"
EMBEDDINGS = ("embeddings_1.txt", "embeddings_2.txt")
M_EMB = "m_emb.tsv"
M_FINAL = "m_final.tsv"
ALIGNMENT = "alignment.txt"
METRICS = "metrics.txt"

COMPARABILITY_WARNING = (
    "embeddings of the two networks were trained independently; their latent "
    "spaces are not aligned, so cross-network cosine scores carry little meaning "
    "(use strategy=struct2vec for comparable embeddings)"
)


@contextmanager
def stage(name: str) -> Iterator[None]:
    """Re-raise module failures as :class:`StageError` attributed to ``name``."""
    try:
        yield
    except StageError:
        raise
    except (SeedAlignError, OSError) as exc:
        raise StageError(name, str(exc)) from exc


def _out(cfg: PipelineConfig) -> Path:
    return Path(cfg["out"])


def write_manifest(cfg: PipelineConfig, notes: list[str] | None = None) -> Path:
    path = _out(cfg) / MANIFEST
    text = "".join(f"# note: {n}\n" for n in notes or ()) + cfg.to_text()
    path.write_text(text, encoding="utf-8")
    return path


def _graphs(cfg: PipelineConfig) -> tuple[Graph, Graph]:
    if not cfg["graph1"] or not cfg["graph2"]:
        raise SeedAlignError("graph1 and graph2 must both be configured")
    return read_edge_list(cfg["graph1"]), read_edge_list(cfg["graph2"])


def _require(path: Path, predecessor: str, what: str) -> Path:
    if not path.exists():
        raise SeedAlignError(f"missing {what} at {path}; run the '{predecessor}' stage first")
    return path


def run_embed(cfg: PipelineConfig) -> list[Path]:
    """Train embeddings: one union file for struct2vec, one file per network otherwise."""
    with stage("embed"):
        out = _out(cfg)
        out.mkdir(parents=True, exist_ok=True)
        g1, g2 = _graphs(cfg)
        params = cfg.walk_params()
        workers = cfg["workers"]
        strategy = cfg["strategy"]
        if strategy == "struct2vec":
            union = UnionGraph(g1, g2)
            ctx = build_context_graph(union, cfg["walks.k_max"], band=cfg["walks.band"])
            corpus = struct2vec_walks(ctx, params, cfg["walks.stay_prob"], workers)
            emb = train(corpus, cfg.train_config())
            paths = [out / UNION_EMBEDDING]
            emb.write(paths[0])
        else:
            walker = uniform_walks if strategy == "deepwalk" else node2vec_walks
            paths = []
            for i, g in enumerate((g1, g2)):
                emb = train(walker(g, params, workers), cfg.train_config(offset=i + 1))
                paths.append(out / EMBEDDINGS[i])
                emb.write(paths[-1])
        write_manifest(cfg)
    return paths


def load_embeddings(cfg: PipelineConfig) -> tuple[EmbeddingMatrix, EmbeddingMatrix]:
    out = _out(cfg)
    if cfg["strategy"] == "struct2vec":
        emb = EmbeddingMatrix.read(_require(out / UNION_EMBEDDING, "embed", "union embeddings"))
        rows: tuple[list[int], list[int]] = ([], [])
        names: tuple[list[str], list[str]] = ([], [])
        for i, name in enumerate(emb.names):
            which, plain = UnionGraph.split_name(name)
            rows[which].append(i)
            names[which].append(plain)
        return emb.subset(rows[0], names[0]), emb.subset(rows[1], names[1])
    return tuple(  # type: ignore[return-value]
        EmbeddingMatrix.read(_require(out / name, "embed", "embeddings")) for name in EMBEDDINGS
    )


def run_similarity(cfg: PipelineConfig) -> Path:
    with stage("similarity"):
        emb1, emb2 = load_embeddings(cfg)
        if cfg["strategy"] != "struct2vec":
            log.warning(COMPARABILITY_WARNING)
        seeds = build_seed_list(emb1, emb2, cfg["similarity.top_k"])
        path = _out(cfg) / M_EMB
        seeds.write(path)
        write_manifest(cfg)
    return path


def run_mix(cfg: PipelineConfig) -> Path:
    with stage("mix"):
        out = _out(cfg)
        m_emb = SeedList.read(_require(out / M_EMB, "similarity", "embedding seed list"), "embedding")
        notes = []
        if cfg["contextual"]:
            g1, g2 = _graphs(cfg)
            _, raw = read_seed_entries(cfg["contextual"])
            m_w, report = validate_contextual(raw, g1, g2)
            log.info("contextual seeds: %s", report)
            final = mix(m_emb, m_w, cfg.mix_config())
        else:
            notes.append("no contextual seed list; m_final is m_emb retagged as mixed")
            final = m_emb.retag("mixed")
        path = out / M_FINAL
        final.write(path)
        write_manifest(cfg, notes)
    return path


def evaluate(cfg: PipelineConfig, alignment: Alignment, g1: Graph) -> dict[str, float]:
    truth = GroundTruth.read(cfg["truth"])
    values = {
        "aligned_pairs": float(len(alignment)),
        "conserved_edges": float(len(alignment.conserved_edges)),
        "node_correctness": node_correctness(alignment, truth),
        "edge_correctness": edge_correctness(alignment, g1),
    }
    k = cfg["similarity.top_k"]
    for label, name in (("m_emb", M_EMB), ("m_final", M_FINAL)):
        path = _out(cfg) / name
        if path.exists():
            values[f"seed_hit_rate@{k}:{label}"] = seed_hit_rate(SeedList.read(path), truth, k)
    return values


def run_align(cfg: PipelineConfig) -> list[Path]:
    with stage("align"):
        out = _out(cfg)
        m_final = SeedList.read(_require(out / M_FINAL, "mix", "M_final seed list"), "mixed")
        g1, g2 = _graphs(cfg)
        alignment = build_alignment(g1, g2, m_final, cfg.align_params())
        paths = [out / ALIGNMENT]
        alignment.write(paths[0])
        if cfg["truth"]:
            paths.append(out / METRICS)
            paths[-1].write_text(metrics_report(evaluate(cfg, alignment, g1)), encoding="utf-8")
        write_manifest(cfg)
    return paths


def run_eval(cfg: PipelineConfig) -> str:
    """Score an existing alignment against the configured ground truth."""
    with stage("eval"):
        if not cfg["truth"]:
            raise SeedAlignError("eval needs a ground-truth file (truth=...)")
        out = _out(cfg)
        alignment = Alignment.read(_require(out / ALIGNMENT, "align", "alignment"))
        g1 = read_edge_list(cfg["graph1"])
        report = metrics_report(evaluate(cfg, alignment, g1))
        (out / METRICS).write_text(report, encoding="utf-8")
    return report


def run_pipeline(cfg: PipelineConfig) -> list[Path]:
    """All stages in order; identical to invoking them one by one."""
    paths = run_embed(cfg)
    paths.append(run_similarity(cfg))
    paths.append(run_mix(cfg))
    paths += run_align(cfg)
    return paths


def output_files(directory: str | os.PathLike) -> list[Path]:
    return sorted(p for p in Path(directory).iterdir() if p.is_file())
