import numpy as np
import pytest

from pmeandsg.families import ErdosRenyi, generate
from pmeandsg.graph import Graph, parse_edge_list

K3_TEXT = "0 1\n1 2\n2 0\n"
STAR_TEXT = "0 1\n0 2\n0 3\n"
BOWTIE_TEXT = "0 1\n0 2\n1 2\n0 3\n0 4\n3 4\n"


@pytest.fixture
def k3() -> Graph:
    return parse_edge_list(K3_TEXT.splitlines())


@pytest.fixture
def star() -> Graph:
    return parse_edge_list(STAR_TEXT.splitlines())


@pytest.fixture
def bowtie() -> Graph:
    """Two triangles sharing node 0."""
    return parse_edge_list(BOWTIE_TEXT.splitlines())


@pytest.fixture
def path3() -> Graph:
    return parse_edge_list(["0 1", "1 2"])


@pytest.fixture
def k3_k4() -> Graph:
    """Disjoint K3 on 0..2 and K4 on 3..6."""
    edges = [(0, 1), (0, 2), (1, 2)] + [(a, b) for a in range(3, 7) for b in range(a + 1, 7)]
    return Graph.from_edges(7, edges)


def random_graphs(count, n_range, probs, seed=0):
    """Seeded Erdos-Renyi graphs with n drawn from ``n_range`` (inclusive)."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        prob = float(rng.choice(probs))
        out.append(generate(ErdosRenyi(n, prob, seed=seed * 1000 + i)))
    return out


_acceptance_lines: list[str] = []


@pytest.fixture
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
