import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from seedalign.embed import EmbeddingMatrix
from seedalign.errors import DomainError
from seedalign.similarity import (
    adjacency_baseline,
    build_seed_list,
    degree_similarity,
    normalized_cosine,
    similarity_matrix,
)

from conftest import graph_of, star


def emb(names, rows):
    return EmbeddingMatrix(list(names), np.array(rows, dtype=float))


@pytest.mark.parametrize(
    "a, b, expected",
    [((1, 2, 3), (1, 2, 3), 1.0), ((1, 0), (-1, 0), 0.0), ((1, 0), (0, 1), 0.5)],
)
def test_normalized_cosine(a, b, expected):
    assert normalized_cosine(a, b) == pytest.approx(expected, abs=1e-12)


def test_normalized_cosine_errors():
    with pytest.raises(DomainError):
        normalized_cosine((0, 0), (1, 0))
    with pytest.raises(DomainError):
        normalized_cosine((1, 0), (1, 0, 0))


vectors = arrays(np.float64, 5, elements=st.floats(-10, 10, allow_nan=False)).filter(
    lambda v: np.linalg.norm(v) > 1e-3
)


@settings(max_examples=200, deadline=None)
@given(vectors, vectors, st.floats(1e-3, 1e3))
def test_cosine_symmetric_scale_invariant_and_bounded(a, b, scale):
    s = normalized_cosine(a, b)
    assert 0.0 <= s <= 1.0
    assert s == pytest.approx(normalized_cosine(b, a), abs=1e-12)
    assert s == pytest.approx(normalized_cosine(scale * a, b), abs=1e-9)


def test_permuted_copy_matches_itself():
    rng = np.random.default_rng(0)
    rows = rng.normal(size=(6, 4))
    perm = rng.permutation(6)
    e1 = emb([f"a{i}" for i in range(6)], rows)
    e2 = emb([f"b{i}" for i in perm], rows[perm])
    seeds = build_seed_list(e1, e2, top_k=1)
    assert {(u[1:], v[1:]) for u, v, _ in seeds} == {(str(i), str(i)) for i in range(6)}
    assert all(w == pytest.approx(1.0) for _, _, w in seeds)


def test_entry_count():
    rng = np.random.default_rng(1)
    seeds = build_seed_list(emb("abc", rng.normal(size=(3, 3))), emb("wxyz", rng.normal(size=(4, 3))), 2)
    assert len(seeds) == 6


def test_toy_matrices_with_ties():
    e1 = emb(["a", "b"], [(1, 0), (0, 1)])
    e2 = emb(["x", "y"], [(1, 1), (1, -1)])
    seeds = build_seed_list(e1, e2, top_k=1)
    expected = (1 + 1 / math.sqrt(2)) / 2
    assert [(u, v) for u, v, _ in seeds] == [("a", "x"), ("b", "x")]
    assert [w for _, _, w in seeds] == pytest.approx([expected, expected], abs=1e-12)
    assert expected == pytest.approx(0.8536, abs=1e-4)


def test_seed_list_sorted_and_deduplicated():
    rng = np.random.default_rng(2)
    seeds = build_seed_list(emb("abcde", rng.normal(size=(5, 3))), emb("vwxyz", rng.normal(size=(5, 3))), 3)
    keys = [(-round(w, 6), u, v) for u, v, w in seeds]
    assert keys == sorted(keys)
    assert len({(u, v) for u, v, _ in seeds}) == len(seeds)


def test_blocked_equals_full():
    rng = np.random.default_rng(5)
    e1 = emb([f"u{i}" for i in range(600)], rng.normal(size=(600, 4)))
    e2 = emb([f"v{i}" for i in range(50)], rng.normal(size=(50, 4)))
    assert build_seed_list(e1, e2, 3) == build_seed_list(e1, e2, 3, full=True)
    full = similarity_matrix(e1, e2)
    for u, v, w in build_seed_list(e1, e2, 1):
        assert w == pytest.approx(full[int(u[1:])].max())


def test_zero_vector_scores_zero():
    seeds = build_seed_list(emb("ab", [(0, 0), (1, 0)]), emb("x", [(1, 0)]), 1)
    assert seeds.as_dict()[("a", "x")] == 0.0


def test_build_errors():
    with pytest.raises(DomainError):
        build_seed_list(emb("a", [(1, 0)]), emb("x", [(1, 0, 0)]), 1)
    with pytest.raises(DomainError):
        build_seed_list(emb("a", [(1, 0)]), emb("x", [(1, 0)]), 0)


@pytest.mark.parametrize("du, dv, expected", [(5, 5, 1.0), (1, 2, 0.5), (3, 4, 0.75), (0, 0, 1.0)])
def test_degree_similarity(du, dv, expected):
    assert degree_similarity(du, dv) == expected


def test_adjacency_baseline():
    g1 = star(3)
    g2 = graph_of("x y", "y z")
    seeds = adjacency_baseline(g1, g2, top_k=1)
    d = seeds.as_dict()
    assert d[("c", "y")] == pytest.approx(2 / 3)
    assert d[("l0", "x")] == 1.0
    pinned = adjacency_baseline(g1, g2, {"c": "x"}, top_k=1)
    assert pinned.as_dict()[("c", "x")] == pytest.approx(1 / 3)
