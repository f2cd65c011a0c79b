# tests/unit/test_graph.py

import numpy as np
import pytest

from app.core.errors import (
    DuplicateEdge,
    EmptyGraph,
    PortOutOfRange,
    PortTableMismatch,
    RangeViolated,
    RestrictionViolated,
    SelfLoop,
    UnknownNode,
)
from app.models.graph import (
    PortedGraph,
    build_graph,
    custom_shift_permutation,
    default_shift_permutation,
    validate_graph,
)
from tests.conftest import (
    IRREGULAR10,
    K4,
    PATH3,
    SINGLE_EDGE,
    TRIANGLE,
    TRIANGLE_SWAP_MU,
    cycle_edges,
    erdos_renyi_graphs,
    random_mu_table,
    star_edges,
)

FIXTURES = {
    "single_edge": SINGLE_EDGE,
    "path3": PATH3,
    "triangle": TRIANGLE,
    "c8": cycle_edges(8),
    "star4": star_edges(4),
    "k4": K4,
    "irregular10": IRREGULAR10,
}


# ---------------------------------------------
# build_graph
# ---------------------------------------------

@pytest.mark.parametrize(
    "edges, node, port, neighbor, reciprocal",
    [
        (SINGLE_EDGE, 0, 1, 1, 1),
        (TRIANGLE, 0, 1, 1, 1),
        (TRIANGLE, 0, 2, 2, 1),
        (TRIANGLE, 1, 2, 2, 2),
        (PATH3, 1, 1, 0, 1),
        (PATH3, 1, 2, 2, 1),
    ],
    ids=[
        "single_edge_only_port",
        "triangle_node0_port1",
        "triangle_node0_port2",
        "triangle_node1_port2",
        "path_middle_port1",
        "path_middle_port2",
    ]
)
def test_sorted_port_convention(edges, node, port, neighbor, reciprocal) -> None:
    """Ports follow ascending neighbor ids; e and gamma read back accordingly."""
    graph = build_graph(edges)
    assert graph.neighbor(node, port) == neighbor
    assert graph.reciprocal(node, port) == reciprocal


@pytest.mark.parametrize(
    "edges, error",
    [
        ([(0, 0)], SelfLoop),
        ([(0, 1), (1, 0)], DuplicateEdge),
        ([(0, 1), (0, 1)], DuplicateEdge),
        ([], EmptyGraph),
    ],
    ids=["self_loop", "duplicate_reversed", "duplicate_same", "empty"]
)
def test_build_graph_rejects(edges, error) -> None:
    with pytest.raises(error):
        build_graph(edges)


def test_self_loop_names_node() -> None:
    with pytest.raises(SelfLoop) as info:
        build_graph([(0, 1), (3, 3)])
    assert info.value.node == 3


def test_build_graph_is_order_independent() -> None:
    forward = build_graph(IRREGULAR10)
    shuffled = build_graph([(v, u) for u, v in reversed(IRREGULAR10)])
    assert forward == shuffled


def test_explicit_port_order() -> None:
    graph = build_graph(TRIANGLE, ports={0: [2, 1]})
    assert graph.neighbor(0, 1) == 2
    assert graph.neighbor(0, 2) == 1
    # node 2 reaches node 0 through its port 1, which is now port 1 of node 0
    assert graph.reciprocal(2, 1) == 1
    assert graph.reciprocal(1, 1) == 2
    assert validate_graph(graph).valid


@pytest.mark.parametrize(
    "ports, error",
    [
        ({0: [1]}, PortTableMismatch),
        ({0: [1, 1]}, PortTableMismatch),
        ({0: [1, 3]}, PortTableMismatch),
        ({7: [1, 2]}, UnknownNode),
    ],
    ids=["too_short", "repeated_neighbor", "not_a_neighbor", "unknown_node"]
)
def test_bad_port_override(ports, error) -> None:
    with pytest.raises(error):
        build_graph(TRIANGLE, ports=ports)


def test_arbitrary_node_ids_keep_external_ids() -> None:
    graph = build_graph([(-5, 10), (10, 42)])
    assert graph.nodes == (-5, 10, 42)
    assert graph.neighbor(10, 1) == -5
    assert graph.basis_index(42, 1) == 3


# ---------------------------------------------
# Accessors
# ---------------------------------------------

@pytest.mark.parametrize("port", [0, 3, -1], ids=["zero", "past_degree", "negative"])
def test_port_out_of_range(triangle: PortedGraph, port: int) -> None:
    with pytest.raises(PortOutOfRange):
        triangle.neighbor(0, port)
    with pytest.raises(PortOutOfRange):
        triangle.reciprocal(0, port)


def test_unknown_node(triangle: PortedGraph) -> None:
    with pytest.raises(UnknownNode):
        triangle.neighbor(9, 1)


@pytest.mark.parametrize("name", list(FIXTURES), ids=list(FIXTURES))
def test_involution_and_handshake(name: str) -> None:
    """gamma(gamma(sigma; j); e(sigma; j)) = sigma and sum of degrees = 2|E|."""
    graph = build_graph(FIXTURES[name])
    for node, port in graph.basis_labels():
        other = graph.neighbor(node, port)
        back = graph.reciprocal(node, port)
        assert graph.reciprocal(other, back) == port
        assert graph.neighbor(other, back) == node
    assert sum(graph.degrees) == 2 * len(FIXTURES[name])
    assert graph.dimension == sum(graph.degrees)


def test_reversal_index_is_an_involution(irregular10: PortedGraph) -> None:
    reversal = irregular10.reversal_index
    assert np.array_equal(reversal[reversal], np.arange(irregular10.dimension))
    assert not np.any(reversal == np.arange(irregular10.dimension))


def test_relabeled_keeps_edges(triangle: PortedGraph) -> None:
    relabeled = triangle.relabeled({0: (2, 1), 1: (1, 2), 2: (2, 1)})
    assert relabeled.edges() == triangle.edges()
    assert relabeled.neighbor(0, 2) == triangle.neighbor(0, 1)
    assert validate_graph(relabeled).valid


# ---------------------------------------------
# validate_graph
# ---------------------------------------------

@pytest.mark.parametrize("name", list(FIXTURES), ids=list(FIXTURES))
def test_built_graphs_validate(name: str) -> None:
    assert validate_graph(build_graph(FIXTURES[name])).violations == []


def test_tampered_reciprocal_is_reported(triangle: PortedGraph) -> None:
    reciprocals = [list(row) for row in triangle.reciprocals]
    reciprocals[0][0] = 2  # claims node 1 uses its port 2 for the edge to node 0
    tampered = PortedGraph(triangle.nodes, triangle.neighbors, tuple(tuple(r) for r in reciprocals))
    report = validate_graph(tampered)
    assert not report.valid
    assert report.names(0, 1)
    assert {v.rule for v in report.violations} == {"involution"}


def test_self_loop_and_unknown_neighbor_are_reported() -> None:
    broken = PortedGraph((0, 1), ((0, 1), (0,)), ((1, 1), (2,)))
    rules = {(v.node, v.port, v.rule) for v in validate_graph(broken).violations}
    assert (0, 1, "self-loop") in rules
    broken = PortedGraph((0, 1), ((5,), (0,)), ((1,), (1,)))
    rules = {(v.node, v.port, v.rule) for v in validate_graph(broken).violations}
    assert (0, 1, "unknown-neighbor") in rules


# ---------------------------------------------
# Shift permutations
# ---------------------------------------------

def test_default_shift_single_edge(single_edge: PortedGraph) -> None:
    perm = default_shift_permutation(single_edge)
    assert perm.mu(0, 1) == 1
    assert perm.nu(0, 1) == 1
    assert perm.source(0, 1) == 1
    assert perm.is_flip_flop


@pytest.mark.parametrize("name", list(FIXTURES), ids=list(FIXTURES))
def test_flip_flop_inverses(name: str) -> None:
    """With mu = gamma: nu = gamma and a = e."""
    graph = build_graph(FIXTURES[name])
    perm = default_shift_permutation(graph)
    for node, port in graph.basis_labels():
        assert perm.nu(node, port) == graph.reciprocal(node, port)
        assert perm.source(node, port) == graph.neighbor(node, port)
    assert perm.identity_violations() == []


def test_triangle_restriction_set(triangle: PortedGraph) -> None:
    perm = default_shift_permutation(triangle)
    incoming = {perm.mu(triangle.reciprocal(0, s), triangle.neighbor(0, s)) for s in triangle.ports(0)}
    assert incoming == {1, 2}


def test_custom_flip_flop_table_matches_default(k4: PortedGraph) -> None:
    table = {node: {port: k4.reciprocal(node, port) for port in k4.ports(node)} for node in k4.nodes}
    assert custom_shift_permutation(k4, table) == default_shift_permutation(k4)


def test_custom_shift_swaps_landing(triangle: PortedGraph) -> None:
    perm = custom_shift_permutation(triangle, TRIANGLE_SWAP_MU)
    assert not perm.is_flip_flop
    assert perm.mu(1, 1) == 2 and perm.mu(2, 1) == 1
    # the state landing on (0, 1) came from node 2
    assert perm.source(0, 1) == 2 and perm.nu(0, 1) == 1
    assert perm.identity_violations() == []


def test_restriction_violated_names_node(path3: PortedGraph) -> None:
    """Both walkers arriving at node 1 would land on its port 1."""
    with pytest.raises(RestrictionViolated) as info:
        custom_shift_permutation(path3, {2: {1: 1}})
    assert info.value.node == 1


@pytest.mark.parametrize("label", [0, 3], ids=["zero", "past_target_degree"])
def test_range_violated(triangle: PortedGraph, label: int) -> None:
    with pytest.raises(RangeViolated):
        custom_shift_permutation(triangle, {0: {1: label}})


def test_random_admissible_shifts_satisfy_identities() -> None:
    """The four composition identities hold exactly for random admissible mu."""
    rng = np.random.default_rng(7)
    for graph in erdos_renyi_graphs(10):
        perm = custom_shift_permutation(graph, random_mu_table(graph, rng))
        assert perm.identity_violations() == []
        assert np.array_equal(np.sort(perm.index), np.arange(graph.dimension))


# Hub 0 with leaves 1..4: the leaf landings must cover the hub's ports.
HUB_ROTATED_MU = {1: {1: 4}, 2: {1: 1}, 3: {1: 2}, 4: {1: 3}}


def test_hub_landings_form_a_permutation() -> None:
    hub = build_graph(star_edges(4))
    perm = custom_shift_permutation(hub, HUB_ROTATED_MU)
    assert sorted(perm.mu(leaf, 1) for leaf in range(1, 5)) == [1, 2, 3, 4]
    # leaf 1 lands on hub port 4, and the hub's port 4 is fed by leaf 1
    assert perm.source(0, 4) == 1 and perm.nu(0, 4) == 1
    assert perm.source(0, 1) == 2
    assert not perm.is_flip_flop
    assert perm.identity_violations() == []


def test_hub_landings_colliding_on_one_port() -> None:
    hub = build_graph(star_edges(4))
    with pytest.raises(RestrictionViolated) as info:
        custom_shift_permutation(hub, {1: {1: 2}})
    assert info.value.node == 0
    assert sorted(info.value.labels) == [2, 2, 3, 4]
