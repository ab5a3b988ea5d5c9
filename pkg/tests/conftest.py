import os

import numpy as np
import pytest
from hypothesis import settings

from structrank import Graph, SyntheticSpec, extended_battery, generate

ACCEPTANCE_LINES = []

# reproducible by default; HYPOTHESIS_PROFILE=explore searches fresh examples
settings.register_profile("default", derandomize=True)
settings.register_profile("explore", max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def from_edges(edges, n=None, directed=False):
    ids = [str(i) for i in range(n)] if n is not None else None
    return Graph.from_edges([(str(u), str(v)) for u, v in edges], node_ids=ids, directed=directed)


def path_graph(n):
    return from_edges([(i, i + 1) for i in range(n - 1)], n)


def cycle_graph(n):
    return from_edges([(i, (i + 1) % n) for i in range(n)], n)


def star_graph(leaves):
    return from_edges([(0, i) for i in range(1, leaves + 1)], leaves + 1)


def complete_graph(n):
    return from_edges([(i, j) for i in range(n) for j in range(i + 1, n)], n)


# 1,000 nodes: 24 * 16 + 25 * 16 + 36 * 6
SPEC_1000 = SyntheticSpec(24, 25, 36, 5, 10, 5, 10, 5, seed=0)
BENCHMARK_SPEC = SyntheticSpec(200, 200, 200, 5, 10, 5, 10, 5, seed=0)


@pytest.fixture(scope="session")
def small_synthetic():
    return generate(SyntheticSpec(10, 10, 10, seed=3))


@pytest.fixture(scope="session")
def small_battery(small_synthetic):
    return extended_battery(small_synthetic.graph)


@pytest.fixture(scope="session")
def graph_1000():
    return generate(SPEC_1000).graph


@pytest.fixture(scope="session")
def battery_1000(graph_1000):
    return extended_battery(graph_1000)


@pytest.fixture(scope="session")
def benchmark_graph():
    return generate(BENCHMARK_SPEC).graph


@pytest.fixture(scope="session")
def benchmark_battery(benchmark_graph):
    return extended_battery(benchmark_graph)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
