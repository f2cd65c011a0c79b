import json
import logging
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import networkx as nx
import numpy as np
import pytest

from app.models.graph import PortedGraph, build_graph
from app.models.unitaries import LocalUnitaryFamily, UnitaryRole

# ======================================================================================
# Logging Configuration
# ======================================================================================
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# ======================================================================================
# Graph Fixtures
# ======================================================================================
Edges = List[Tuple[int, int]]

SINGLE_EDGE: Edges = [(0, 1)]
PATH3: Edges = [(0, 1), (1, 2)]
TRIANGLE: Edges = [(0, 1), (0, 2), (1, 2)]
K4: Edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
IRREGULAR10: Edges = [
    (0, 1), (0, 2), (0, 3), (0, 5), (1, 2), (1, 8), (2, 6), (3, 4),
    (4, 5), (4, 9), (5, 6), (6, 7), (7, 8), (8, 9),
]

# walkers arriving at node 0 from nodes 1 and 2 land on swapped ports
TRIANGLE_SWAP_MU: Dict[int, Dict[int, int]] = {1: {1: 2}, 2: {1: 1}}


def cycle_edges(n: int) -> Edges:
    return [(j, (j + 1) % n) for j in range(n)]


def star_edges(leaves: int) -> Edges:
    return [(0, leaf) for leaf in range(1, leaves + 1)]


def erdos_renyi_edges(n: int, p: float, seed: int) -> Edges:
    return [tuple(sorted(edge)) for edge in nx.gnp_random_graph(n, p, seed=seed).edges()]


def erdos_renyi_graphs(count: int, max_nodes: int = 30, ps=(0.2, 0.5), seed: int = 2024) -> List[PortedGraph]:
    """Seeded random graphs with at least one edge, sizes 4..max_nodes."""
    rng = np.random.default_rng(seed)
    graphs: List[PortedGraph] = []
    attempt = 0
    while len(graphs) < count:
        n = int(rng.integers(4, max_nodes + 1))
        edges = erdos_renyi_edges(n, ps[attempt % len(ps)], seed + attempt)
        attempt += 1
        if edges:
            graphs.append(build_graph(edges))
    return graphs


def random_mu_table(graph: PortedGraph, rng: np.random.Generator) -> Dict[int, Dict[int, int]]:
    """
    An admissible landing table: at every node j the walkers arriving from its
    neighbors land on a random permutation of the ports of j.
    """
    table: Dict[int, Dict[int, int]] = {}
    for node in graph.nodes:
        labels = rng.permutation(graph.degree(node)) + 1
        for port in graph.ports(node):
            source = graph.neighbor(node, port)
            table.setdefault(source, {})[graph.reciprocal(node, port)] = int(labels[port - 1])
    return table


def random_family(graph: PortedGraph, rng: np.random.Generator,
                  role: UnitaryRole = UnitaryRole.COIN) -> LocalUnitaryFamily:
    return LocalUnitaryFamily.random(graph, role, rng)


def hadamard_line() -> Tuple[PortedGraph, Dict[int, Dict[int, int]]]:
    """C64 with port 1 toward j+1 and port 2 toward j-1; walkers keep their direction."""
    n = 64
    graph = build_graph(cycle_edges(n), ports={j: [(j + 1) % n, (j - 1) % n] for j in range(n)})
    return graph, {j: {1: 1, 2: 2} for j in range(n)}


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def single_edge() -> PortedGraph:
    return build_graph(SINGLE_EDGE)


@pytest.fixture
def path3() -> PortedGraph:
    return build_graph(PATH3)


@pytest.fixture
def triangle() -> PortedGraph:
    return build_graph(TRIANGLE)


@pytest.fixture
def k4() -> PortedGraph:
    return build_graph(K4)


@pytest.fixture
def irregular10() -> PortedGraph:
    return build_graph(IRREGULAR10)


@pytest.fixture
def cycle() -> Callable[[int], PortedGraph]:
    return lambda n: build_graph(cycle_edges(n))


@pytest.fixture
def star() -> Callable[[int], PortedGraph]:
    return lambda leaves: build_graph(star_edges(leaves))


# ======================================================================================
# File Fixtures
# ======================================================================================
@pytest.fixture
def write_json(tmp_path: Path) -> Callable[[str, object], Path]:
    """Write a JSON document under tmp_path and return its path."""
    def _write(name: str, payload: object) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path
    return _write


# ======================================================================================
# Pytest Command-Line Options
# ======================================================================================
def pytest_addoption(parser):
    """
    Add custom command line options:
      --run-slow    : Run tests marked as 'slow'
    """
    parser.addoption("--run-slow", action="store_true", help="Run tests marked as slow")


def pytest_collection_modifyitems(config, items):
    """
    Skip tests marked as 'slow' unless --run-slow is specified.
    """
    if not config.getoption("--run-slow"):
        skip_slow = pytest.mark.skip(reason="use --run-slow to run")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)
