import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seedalign.aligner import SEED, Alignment, conserved_edges
from seedalign.errors import DomainError, ValidationError
from seedalign.metrics import (
    GroundTruth,
    edge_correctness,
    metrics_report,
    node_correctness,
    noisy_copy,
    random_graph,
    seed_hit_rate,
)
from seedalign.seeds import SeedList

from conftest import complete, cycle, path


def alignment(g1, g2, mapping):
    pairs = [(u, v, SEED, 1.0) for u, v in mapping.items()]
    return Alignment(pairs, conserved_edges(g1, g2, mapping))


TRUTH = GroundTruth({"a": "x", "b": "y", "c": "z"})


def test_node_correctness():
    g = complete(3)
    assert node_correctness(alignment(g, g, dict(TRUTH)), TRUTH) == 1.0
    assert node_correctness(alignment(g, g, {"a": "y", "b": "z"}), TRUTH) == 0.0
    assert node_correctness(alignment(g, g, {"a": "x", "b": "y", "c": "q"}), TRUTH) == pytest.approx(2 / 3)
    assert node_correctness(Alignment(), TRUTH) == 0.0


def test_edge_correctness():
    g = complete(4)
    assert edge_correctness(alignment(g, g, {u: u for u in g.names}), g) == 1.0
    c4, p4 = cycle(4), path(4)
    natural = {f"v{i}": f"p{i}" for i in range(4)}
    assert edge_correctness(alignment(c4, p4, natural), c4) == 0.75
    empty = path(4)
    assert edge_correctness(alignment(c4, empty, {"v0": "p0", "v1": "p2"}), c4) == 0.0


SEEDS = SeedList(
    [("a", "x", 0.9), ("a", "y", 0.8), ("b", "y", 0.5), ("b", "x", 0.7), ("c", "q", 0.9), ("d", "w", 0.2)],
    "embedding",
)


def test_seed_hit_rate():
    truth = GroundTruth({"a": "x", "b": "y", "c": "z", "d": "w"})
    assert seed_hit_rate(SEEDS, truth, 5) == 0.75
    assert seed_hit_rate(SEEDS, truth, 1) == 0.5
    assert seed_hit_rate(SeedList([], "embedding"), truth, 5) == 0.0
    with pytest.raises(DomainError):
        seed_hit_rate(SEEDS, truth, 0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.floats(0, 1)), max_size=30), st.integers(1, 6))
def test_hit_rate_nondecreasing_in_k_and_rename_invariant(raw, k):
    entries = {(f"u{a}", f"v{b}"): w for a, b, w in raw}
    m = SeedList([(u, v, w) for (u, v), w in entries.items()], "embedding")
    truth = GroundTruth({f"u{i}": f"v{i}" for i in range(6)})
    assert seed_hit_rate(m, truth, k) <= seed_hit_rate(m, truth, k + 1)
    # renaming that keeps alphabetical order leaves ranks (and so hits) unchanged
    renamed = SeedList([(f"U{u}", f"V{v}", w) for (u, v), w in entries.items()], "embedding")
    truth2 = GroundTruth({f"U{u}": f"V{v}" for u, v in truth.items()})
    assert seed_hit_rate(renamed, truth2, k) == seed_hit_rate(m, truth, k)


def test_ground_truth_io(tmp_path):
    TRUTH.write(tmp_path / "t.tsv")
    assert GroundTruth.read(tmp_path / "t.tsv") == TRUTH
    with pytest.raises(ValidationError):
        GroundTruth({"a": "x", "b": "x"})


def test_metrics_report():
    text = metrics_report({"node_correctness": 1.0, "seed_hit_rate@5": 0.5})
    lines = text.splitlines()
    assert lines[1] == "node_correctness\t1.000000"
    assert lines[-1] == '{"node_correctness": 1.0, "seed_hit_rate@5": 0.5}'


def test_random_graph_connected():
    g = random_graph(100, 6.0, seed=3)
    assert g.n == 100 and len(g.components()) == 1
    assert 5.5 < 2 * len(g.edges()) / g.n < 6.5


def test_noisy_copy_is_isomorphic_at_zero():
    g = random_graph(30, 4.0, seed=1)
    copy, truth = noisy_copy(g, 0.0, seed=2)
    assert copy.n == g.n
    mapped = {tuple(sorted((truth[g.names[u]], truth[g.names[v]]))) for u, v in g.edges()}
    assert mapped == {tuple(sorted((copy.names[u], copy.names[v]))) for u, v in copy.edges()}


def test_noisy_copy_edits_nested():
    g = random_graph(60, 6.0, seed=4)

    def edge_set(rho):
        copy, _ = noisy_copy(g, rho, seed=9)
        return {frozenset((copy.names[u], copy.names[v])) for u, v in copy.edges()}

    e0, e5, e10 = edge_set(0.0), edge_set(0.05), edge_set(0.10)
    assert len(e0) == len(e5) == len(e10)
    assert (e0 - e10) >= (e0 - e5) and (e10 - e0) >= (e5 - e0)
    assert len(e0 - e5) == round(0.05 * len(e0))


def test_noisy_copy_rho_domain():
    with pytest.raises(DomainError):
        noisy_copy(complete(3), 1.5)
