from __future__ import annotations

import pytest

from seedalign.graph import Graph

ACCEPTANCE_LINES: list[str] = []


def graph_of(*edges: str) -> Graph:
    """``graph_of("a b", "b c")`` -> path a-b-c."""
    return Graph.from_named_edges(tuple(e.split()) for e in edges)


def complete(n: int, prefix: str = "k") -> Graph:
    names = [f"{prefix}{i}" for i in range(n)]
    return Graph(names, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star(leaves: int) -> Graph:
    return Graph(["c"] + [f"l{i}" for i in range(leaves)], [(0, i + 1) for i in range(leaves)])


def cycle(n: int, prefix: str = "v") -> Graph:
    return Graph([f"{prefix}{i}" for i in range(n)], [(i, (i + 1) % n) for i in range(n)])


def path(n: int, prefix: str = "p") -> Graph:
    return Graph([f"{prefix}{i}" for i in range(n)], [(i, i + 1) for i in range(n - 1)])


@pytest.fixture
def triangle() -> Graph:
    return graph_of("a b", "b c", "c a")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_alignment_instance(seed: int):
    """Two small random graphs and a random seed list between them."""
    import numpy as np

    from seedalign.metrics import random_graph
    from seedalign.seeds import SeedList

    rng = np.random.default_rng(seed)
    g1 = random_graph(int(rng.integers(4, 16)), 3.0, seed=seed)
    g2 = random_graph(int(rng.integers(4, 16)), 3.0, seed=seed + 10_000)
    n_entries = int(rng.integers(0, g1.n * g2.n // 2 + 1))
    cells = rng.choice(g1.n * g2.n, size=n_entries, replace=False)
    weights = rng.choice([0.3, 0.5, 0.6, 0.8, 0.9, 1.0], size=n_entries)
    entries = [(g1.names[c // g2.n], g2.names[c % g2.n], float(w)) for c, w in zip(cells.tolist(), weights)]
    return g1, g2, SeedList(entries, "mixed")
