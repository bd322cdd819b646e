"""Skip-gram with negative sampling over walk corpora.

Every node owns a target vector (the exported embedding, one row of the
shallow encoder matrix) and a context vector.  Co-occurring pairs are
pushed towards a high dot product, sampled negatives towards a low one.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numba
import numpy as np

from .errors import DomainError, ParseError, TrainingError
from .walks import WalkCorpus

log = logging.getLogger(__name__)

_CHUNK = 1 << 18
_EVAL_PAIRS = 50_000


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 64
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    lr: float = 0.025
    rng_seed: int = 0
    export: str = "target"  # or "sum" (target + context)

    def __post_init__(self) -> None:
        for name in ("dim", "window", "epochs"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be >= 1")
        if self.negatives < 0:
            raise DomainError("negatives must be >= 0")
        if not self.lr > 0:
            raise DomainError("lr must be positive")
        if self.export not in ("target", "sum"):
            raise DomainError("export must be 'target' or 'sum'")


@dataclass
class EmbeddingMatrix:
    """Row ``i`` of ``vectors`` is the embedding of ``names[i]``."""

    names: list[str]
    vectors: np.ndarray
    context: np.ndarray | None = None
    loss_history: list[float] = field(default_factory=list)
    epoch_losses: list[float] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.names)

    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def subset(self, rows: Sequence[int], names: Sequence[str]) -> EmbeddingMatrix:
        rows = np.asarray(rows, dtype=np.int64)
        ctx = None if self.context is None else self.context[rows]
        return EmbeddingMatrix(list(names), self.vectors[rows], ctx)

    def to_text(self) -> str:
        lines = [f"{len(self.names)} {self.dim}"]
        for name, row in zip(self.names, self.vectors.tolist()):
            lines.append(name + " " + " ".join(repr(x) for x in row))
        return "\n".join(lines) + "\n"

    def write(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> EmbeddingMatrix:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty embedding file")
        try:
            n, d = (int(x) for x in lines[0].split())
        except ValueError:
            raise ParseError("header must be '<nodes> <dim>'", line=1) from None
        if len(lines) - 1 != n:
            raise ParseError(f"header announces {n} rows, found {len(lines) - 1}")
        names, rows = [], []
        for lineno, line in enumerate(lines[1:], start=2):
            parts = line.split()
            if len(parts) != d + 1:
                raise ParseError(f"expected name and {d} values", line=lineno)
            names.append(parts[0])
            rows.append([float(x) for x in parts[1:]])
        return cls(names, np.array(rows, dtype=np.float64).reshape(n, d))

    @classmethod
    def read(cls, path: str | os.PathLike) -> EmbeddingMatrix:
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


def extract_pairs(corpus: WalkCorpus, window: int) -> Iterator[tuple[int, int]]:
    """Yield ``(walk[i], walk[j])`` for every ``j != i`` with ``|i - j| <= window``."""
    if window < 1:
        raise DomainError("window must be >= 1")
    for walk in corpus.walks:
        seq = walk.tolist()
        for i, t in enumerate(seq):
            for j in range(max(0, i - window), min(len(seq), i + window + 1)):
                if j != i:
                    yield t, seq[j]


def _window_pattern(length: int, window: int) -> tuple[np.ndarray, np.ndarray]:
    ii, jj = [], []
    for i in range(length):
        for j in range(max(0, i - window), min(length, i + window + 1)):
            if j != i:
                ii.append(i)
                jj.append(j)
    return np.array(ii, dtype=np.int64), np.array(jj, dtype=np.int64)


def pair_arrays(corpus: WalkCorpus, window: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`extract_pairs`, same order, as two id arrays."""
    if window < 1:
        raise DomainError("window must be >= 1")
    patterns: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    targets, contexts = [], []
    for walk in corpus.walks:
        if len(walk) < 2:
            continue
        pat = patterns.get(len(walk))
        if pat is None:
            pat = patterns[len(walk)] = _window_pattern(len(walk), window)
        targets.append(walk[pat[0]])
        contexts.append(walk[pat[1]])
    if not targets:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    return np.concatenate(targets), np.concatenate(contexts)


def sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(x, dtype=float)))


def _softplus(x: float) -> float:
    return max(x, 0.0) + math.log1p(math.exp(-abs(x)))


def _check_dims(t, c, negs) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    t = np.asarray(t, dtype=float)
    c = np.asarray(c, dtype=float)
    negs = np.asarray(negs, dtype=float)
    if negs.size == 0:
        negs = np.zeros((0, t.shape[-1]))
    if t.ndim != 1 or c.shape != t.shape or negs.ndim != 2 or negs.shape[1] != t.shape[0]:
        raise DomainError("target, context and negative vectors must share one dimension")
    return t, c, negs


def sgns_pair_loss(t, c, negs=()) -> float:
    """``-log sigma(t.c) - sum log sigma(-t.n)`` over the negatives ``n``."""
    t, c, negs = _check_dims(t, c, negs)
    loss = _softplus(-float(t @ c))
    for n in negs:
        loss += _softplus(float(t @ n))
    return loss


def gradient(t, c, negs=()) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic gradients of :func:`sgns_pair_loss` w.r.t. ``t``, ``c`` and each negative."""
    t, c, negs = _check_dims(t, c, negs)
    g_pos = float(sigmoid(t @ c)) - 1.0
    g_neg = sigmoid(negs @ t)
    grad_t = g_pos * c + g_neg @ negs
    grad_c = g_pos * t
    grad_negs = np.outer(g_neg, t)
    return grad_t, grad_c, grad_negs


@numba.njit(cache=True)
def _nb_softplus(x):
    return max(x, 0.0) + math.log1p(math.exp(-abs(x)))


@numba.njit(cache=True)
def _nb_sigmoid(x):
    return 0.5 * (1.0 + math.tanh(0.5 * x))


@numba.njit(cache=True)
def _sgd_chunk(W, C, targets, contexts, negs, lr0, step0, total):
    """Plain SGD over a block of pairs; returns the summed pre-update loss.

    Each pair takes one exact gradient step on its own loss: all dot
    products use the parameters as they were before the pair's update.
    """
    d = W.shape[1]
    k = negs.shape[1]
    grad_t = np.empty(d)
    coef = np.empty(k)
    loss = 0.0
    for p in range(targets.shape[0]):
        lr = lr0 * (1.0 - (step0 + p) / total)
        t = targets[p]
        c = contexts[p]
        dot = 0.0
        for x in range(d):
            dot += W[t, x] * C[c, x]
        loss += _nb_softplus(-dot)
        g_pos = _nb_sigmoid(dot) - 1.0
        for x in range(d):
            grad_t[x] = g_pos * C[c, x]
        for s in range(k):
            n = negs[p, s]
            dn = 0.0
            for x in range(d):
                dn += W[t, x] * C[n, x]
            loss += _nb_softplus(dn)
            coef[s] = _nb_sigmoid(dn)
            for x in range(d):
                grad_t[x] += coef[s] * C[n, x]
        for x in range(d):
            C[c, x] -= lr * g_pos * W[t, x]
        for s in range(k):
            n = negs[p, s]
            for x in range(d):
                C[n, x] -= lr * coef[s] * W[t, x]
        for x in range(d):
            W[t, x] -= lr * grad_t[x]
    return loss


@numba.njit(cache=True)
def _loss_sum(W, C, targets, contexts, negs):
    d = W.shape[1]
    total = 0.0
    for p in range(targets.shape[0]):
        t = targets[p]
        dot = 0.0
        for x in range(d):
            dot += W[t, x] * C[contexts[p], x]
        total += _nb_softplus(-dot)
        for s in range(negs.shape[1]):
            dn = 0.0
            for x in range(d):
                dn += W[t, x] * C[negs[p, s], x]
            total += _nb_softplus(dn)
    return total


def sgd_step(W: np.ndarray, C: np.ndarray, t: int, c: int, negs: Sequence[int], lr: float) -> float:
    """One SGD update for a single pair, in place; returns the pre-update loss."""
    negs_arr = np.asarray(negs, dtype=np.int64).reshape(1, -1)
    return _sgd_chunk(
        W, C, np.array([t], np.int64), np.array([c], np.int64), negs_arr, lr, 0, 1 << 62
    )


def noise_distribution(corpus: WalkCorpus) -> np.ndarray:
    """Unigram node frequencies raised to 3/4, normalized."""
    counts = np.bincount(np.concatenate(corpus.walks), minlength=corpus.source_graph_size)
    weights = counts.astype(float) ** 0.75
    return weights / weights.sum()


def _draw_negatives(rng: np.random.Generator, cdf: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    idx = np.searchsorted(cdf, rng.random(shape) * cdf[-1], side="right")
    return np.minimum(idx, len(cdf) - 1).astype(np.int64)


def train(
    corpus: WalkCorpus, cfg: TrainConfig, names: Sequence[str] | None = None
) -> EmbeddingMatrix:
    """Learn node embeddings from ``corpus`` with single-worker SGD.

    The learning rate decays linearly from ``cfg.lr`` to zero over all
    epochs.  ``loss_history`` holds the mean pair loss on a fixed
    evaluation sample at initialization and after every epoch;
    ``epoch_losses`` the running mean loss seen while training.
    """
    n = corpus.source_graph_size
    names = list(names if names is not None else corpus.node_names or map(str, range(n)))
    if len(names) != n:
        raise DomainError("names must cover every node of the corpus source graph")
    if not cfg.dim < n:
        raise DomainError(f"embedding dimension {cfg.dim} must be below node count {n}")
    if not corpus.walks:
        raise DomainError("empty walk corpus")
    counts = np.bincount(np.concatenate(corpus.walks), minlength=n)
    missing = np.flatnonzero(counts == 0)
    if missing.size:
        raise DomainError(f"{missing.size} node(s) missing from corpus, e.g. {names[missing[0]]!r}")

    rng = np.random.default_rng(cfg.rng_seed & ((1 << 64) - 1))
    d = cfg.dim
    W = rng.uniform(-0.5 / d, 0.5 / d, size=(n, d))
    C = np.zeros((n, d))

    targets, contexts = pair_arrays(corpus, cfg.window)
    n_pairs = len(targets)
    if n_pairs == 0:
        log.warning("corpus yields no co-occurrence pairs; embeddings stay at initialization")
        return EmbeddingMatrix(names, W, C)
    cdf = np.cumsum(noise_distribution(corpus))

    eval_rows = np.sort(rng.permutation(n_pairs)[: min(n_pairs, _EVAL_PAIRS)])
    eval_t, eval_c = targets[eval_rows], contexts[eval_rows]
    eval_negs = _draw_negatives(rng, cdf, (len(eval_rows), cfg.negatives))

    def eval_loss() -> float:
        return _loss_sum(W, C, eval_t, eval_c, eval_negs) / len(eval_rows)

    history = [eval_loss()]
    epoch_losses = []
    total_steps = float(cfg.epochs * n_pairs)
    step = 0
    for epoch in range(cfg.epochs):
        order = rng.permutation(n_pairs)
        running = 0.0
        for lo in range(0, n_pairs, _CHUNK):
            rows = order[lo : lo + _CHUNK]
            negs = _draw_negatives(rng, cdf, (len(rows), cfg.negatives))
            running += _sgd_chunk(W, C, targets[rows], contexts[rows], negs, cfg.lr, step, total_steps)
            step += len(rows)
        epoch_losses.append(running / n_pairs)
        history.append(eval_loss())
        if not (math.isfinite(history[-1]) and np.isfinite(W).all() and np.isfinite(C).all()):
            raise TrainingError(
                f"non-finite loss in epoch {epoch + 1}: eval={history[-1]}, "
                f"running={epoch_losses[-1]}, lr={cfg.lr}, dim={d}"
            )
        log.debug("epoch %d: mean loss %.6f", epoch + 1, epoch_losses[-1])

    vectors = W + C if cfg.export == "sum" else W
    return EmbeddingMatrix(names, vectors, C, history, epoch_losses)
