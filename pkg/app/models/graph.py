# app/models/graph.py
"""
Graph Topology Module

This module defines the ported graph used by both walk pictures:

1. ``PortedGraph`` - an undirected simple graph where every node j numbers its
   incident edges with ports 1..N_j. The port table gives the neighbor reached
   through a port (the mapping e) and the reciprocal table gives the port used by
   that neighbor for the same edge (the mapping gamma).
2. ``ShiftPermutation`` - the landing-port mapping mu together with the two
   mappings it induces: the source port nu and the source node a.

Both types are immutable after construction and can be shared freely between
readers. Nodes keep their external integer ids; a dense position (ascending id)
is used internally for array storage. Basis states (j, port) are ordered with
nodes ascending and ports ascending within a node.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np

from app.core.errors import (
    DuplicateEdge,
    EmptyGraph,
    ParseError,
    PortOutOfRange,
    PortTableMismatch,
    RangeViolated,
    RestrictionViolated,
    SelfLoop,
    UnknownNode,
)
from app.schemas.report import ValidationReport, Violation

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class PortedGraph:
    """
    Undirected simple graph with per-node port labels.

    Attributes:
        nodes: external node ids in ascending order
        neighbors: for each node (dense position), the neighbor reached through
            port 1, 2, ... N_j; this is the mapping e
        reciprocals: for each node, the port label used by the neighbor for the
            same edge; this is the mapping gamma
    """
    nodes: Tuple[int, ...]
    neighbors: Tuple[Tuple[int, ...], ...]
    reciprocals: Tuple[Tuple[int, ...], ...]

    # --------------------------------------------------------------------------
    # Derived tables
    # --------------------------------------------------------------------------
    @cached_property
    def positions(self) -> Dict[int, int]:
        return {node: position for position, node in enumerate(self.nodes)}

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(ports) for ports in self.neighbors)

    @cached_property
    def offsets(self) -> np.ndarray:
        """Basis index of (j, 1) for every node, followed by the dimension."""
        return np.concatenate(([0], np.cumsum(self.degrees, dtype=np.int64)))

    @property
    def dimension(self) -> int:
        return int(self.offsets[-1])

    @cached_property
    def reversal_index(self) -> np.ndarray:
        """
        Basis index of (e(sigma; j), gamma(sigma; j)) for every basis index
        (j, sigma): the other directed state of the same edge.
        """
        target = np.empty(self.dimension, dtype=np.int64)
        for position, node in enumerate(self.nodes):
            base = int(self.offsets[position])
            for port in range(1, self.degrees[position] + 1):
                target[base + port - 1] = self.basis_index(
                    self.neighbor(node, port), self.reciprocal(node, port)
                )
        return target

    # --------------------------------------------------------------------------
    # Accessors
    # --------------------------------------------------------------------------
    def position_of(self, node: int) -> int:
        try:
            return self.positions[node]
        except (KeyError, TypeError):
            raise UnknownNode(node)

    def degree(self, node: int) -> int:
        return self.degrees[self.position_of(node)]

    def ports(self, node: int) -> range:
        return range(1, self.degree(node) + 1)

    def _check_port(self, node: int, port: int) -> int:
        position = self.position_of(node)
        degree = self.degrees[position]
        if not isinstance(port, (int, np.integer)) or not 1 <= port <= degree:
            raise PortOutOfRange(node, port, degree)
        return position

    def neighbor(self, node: int, port: int) -> int:
        """e(port; node): the node reached from ``node`` through ``port``."""
        position = self._check_port(node, port)
        return self.neighbors[position][port - 1]

    def reciprocal(self, node: int, port: int) -> int:
        """gamma(port; node): the neighbor's port label for the same edge."""
        position = self._check_port(node, port)
        return self.reciprocals[position][port - 1]

    def basis_index(self, node: int, port: int) -> int:
        position = self._check_port(node, port)
        return int(self.offsets[position]) + port - 1

    def basis_labels(self) -> List[Tuple[int, int]]:
        return [
            (node, port)
            for position, node in enumerate(self.nodes)
            for port in range(1, self.degrees[position] + 1)
        ]

    def port_toward(self, node: int, other: int) -> int:
        """Port of ``node`` whose edge ends at ``other``."""
        position = self.position_of(node)
        try:
            return self.neighbors[position].index(other) + 1
        except ValueError:
            raise PortTableMismatch(node, f"no edge toward node {other}")

    def edges(self) -> Tuple[Edge, ...]:
        return tuple(sorted(
            (node, other)
            for node, ports in zip(self.nodes, self.neighbors)
            for other in ports
            if node < other
        ))

    def node_indices(self, node: int) -> np.ndarray:
        position = self.position_of(node)
        return np.arange(self.offsets[position], self.offsets[position + 1])

    @property
    def regular_degree(self) -> Optional[int]:
        """The common degree when every node has the same degree, else None."""
        distinct = set(self.degrees)
        return distinct.pop() if len(distinct) == 1 else None

    # --------------------------------------------------------------------------
    # Relabeling
    # --------------------------------------------------------------------------
    def relabeled(self, tables: Mapping[int, Sequence[int]]) -> "PortedGraph":
        """
        Rename ports node by node.

        ``tables[j][sigma - 1]`` is the new label of port sigma at node j. Every
        table must be a permutation of 1..N_j; the edges do not change.
        """
        neighbors: List[Tuple[int, ...]] = []
        reciprocals: List[Tuple[int, ...]] = []
        for position, node in enumerate(self.nodes):
            table = tables[node]
            new_neighbors = [0] * self.degrees[position]
            new_reciprocals = [0] * self.degrees[position]
            for port in range(1, self.degrees[position] + 1):
                other = self.neighbor(node, port)
                back = self.reciprocal(node, port)
                new_neighbors[table[port - 1] - 1] = other
                new_reciprocals[table[port - 1] - 1] = tables[other][back - 1]
            neighbors.append(tuple(new_neighbors))
            reciprocals.append(tuple(new_reciprocals))
        return PortedGraph(self.nodes, tuple(neighbors), tuple(reciprocals))

    def __repr__(self) -> str:
        return f"<PortedGraph(nodes={len(self.nodes)}, edges={len(self.edges())}, dim={self.dimension})>"


# ------------------------------------------------------------------------------
# Construction
# ------------------------------------------------------------------------------
def build_graph(
    edges: Iterable[Sequence[int]],
    ports: Optional[Mapping[int, Sequence[int]]] = None,
) -> PortedGraph:
    """
    Build a ported graph from an edge list.

    Ports are assigned 1..N_j in ascending order of neighbor id unless ``ports``
    gives an explicit neighbor order for a node. The result does not depend on
    the order of the edge list.

    Args:
        edges: unordered integer pairs
        ports: optional {node: [neighbor in port order]} override, per node

    Raises:
        SelfLoop, DuplicateEdge, EmptyGraph: invalid edge list
        UnknownNode, PortTableMismatch: invalid port override
    """
    adjacency: Dict[int, Set[int]] = {}
    seen: Set[Edge] = set()
    for edge in edges:
        pair = tuple(edge)
        if len(pair) != 2:
            raise ParseError(f"Edge {edge!r} is not a pair of node ids")
        u, v = int(pair[0]), int(pair[1])
        if u == v:
            raise SelfLoop(u)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge(key)
        seen.add(key)
        adjacency.setdefault(u, set()).add(v)
        adjacency.setdefault(v, set()).add(u)
    if not seen:
        raise EmptyGraph()

    overrides = dict(ports or {})
    for node in overrides:
        if node not in adjacency:
            raise UnknownNode(node)

    nodes = tuple(sorted(adjacency))
    neighbor_lists: List[Tuple[int, ...]] = []
    for node in nodes:
        if node in overrides:
            order = tuple(int(other) for other in overrides[node])
            if len(order) != len(set(order)) or set(order) != adjacency[node]:
                raise PortTableMismatch(
                    node, f"expected a permutation of {sorted(adjacency[node])}, got {list(order)}"
                )
        else:
            order = tuple(sorted(adjacency[node]))
        neighbor_lists.append(order)

    port_of = {
        (node, other): port
        for node, order in zip(nodes, neighbor_lists)
        for port, other in enumerate(order, start=1)
    }
    reciprocal_lists = tuple(
        tuple(port_of[(other, node)] for other in order)
        for node, order in zip(nodes, neighbor_lists)
    )
    graph = PortedGraph(nodes, tuple(neighbor_lists), reciprocal_lists)
    logger.debug(f"Built {graph!r}")
    return graph


def validate_graph(graph: PortedGraph) -> ValidationReport:
    """
    Check every ported-graph invariant and report all violations.

    Rules: table shapes, neighbors are known nodes, no self-loops, no repeated
    neighbor at a node, reciprocal port in range, and the involution
    gamma(gamma(sigma; j); e(sigma; j)) = sigma with e(gamma(sigma; j); e(sigma; j)) = j.
    """
    violations: List[Violation] = []

    if len(set(graph.nodes)) != len(graph.nodes):
        violations.append(Violation(rule="nodes", detail="node ids are not unique"))
    if not (len(graph.nodes) == len(graph.neighbors) == len(graph.reciprocals)):
        violations.append(Violation(rule="shape", detail="node, port and reciprocal tables differ in length"))
        return ValidationReport(violations=violations)

    positions = {node: position for position, node in enumerate(graph.nodes)}
    for position, node in enumerate(graph.nodes):
        ports = graph.neighbors[position]
        backs = graph.reciprocals[position]
        if len(ports) != len(backs):
            violations.append(Violation(node=node, rule="shape", detail="port and reciprocal tables differ in length"))
            continue
        if len(set(ports)) != len(ports):
            violations.append(Violation(node=node, rule="multi-edge", detail="two ports reach the same neighbor"))
        for port, (other, back) in enumerate(zip(ports, backs), start=1):
            if other == node:
                violations.append(Violation(node=node, port=port, rule="self-loop", detail="port reaches its own node"))
                continue
            if other not in positions:
                violations.append(Violation(node=node, port=port, rule="unknown-neighbor", detail=f"neighbor {other} is not a node"))
                continue
            other_position = positions[other]
            other_degree = len(graph.neighbors[other_position])
            if not 1 <= back <= other_degree:
                violations.append(Violation(
                    node=node, port=port, rule="reciprocal-range",
                    detail=f"reciprocal {back} outside 1..{other_degree} at node {other}",
                ))
                continue
            if (graph.neighbors[other_position][back - 1] != node
                    or back > len(graph.reciprocals[other_position])
                    or graph.reciprocals[other_position][back - 1] != port):
                violations.append(Violation(
                    node=node, port=port, rule="involution",
                    detail=f"port {back} of node {other} does not lead back to port {port}",
                ))
    return ValidationReport(violations=violations)


# ------------------------------------------------------------------------------
# Shift permutation
# ------------------------------------------------------------------------------
@dataclass(frozen=True)
class ShiftPermutation:
    """
    Landing-port mapping mu of the coin shift and its induced inverses.

    ``landing[j][sigma - 1]`` is mu(sigma; j), the port at e(sigma; j) on which a
    walker leaving j through sigma arrives. ``source_ports`` and ``source_nodes``
    hold nu and a: the state (a(sigma; j), nu(sigma; j)) is the unique state
    shifted onto (j, sigma).
    """
    graph: PortedGraph
    landing: Tuple[Tuple[int, ...], ...]
    source_ports: Tuple[Tuple[int, ...], ...]
    source_nodes: Tuple[Tuple[int, ...], ...]

    def mu(self, node: int, port: int) -> int:
        position = self.graph._check_port(node, port)
        return self.landing[position][port - 1]

    def nu(self, node: int, port: int) -> int:
        position = self.graph._check_port(node, port)
        return self.source_ports[position][port - 1]

    def source(self, node: int, port: int) -> int:
        """a(port; node): the node the state (node, port) was shifted from."""
        position = self.graph._check_port(node, port)
        return self.source_nodes[position][port - 1]

    @cached_property
    def index(self) -> np.ndarray:
        """Basis index of S|j, sigma> for every basis index (j, sigma)."""
        graph = self.graph
        target = np.empty(graph.dimension, dtype=np.int64)
        for position, node in enumerate(graph.nodes):
            base = int(graph.offsets[position])
            for port in range(1, graph.degrees[position] + 1):
                target[base + port - 1] = graph.basis_index(
                    graph.neighbor(node, port), self.landing[position][port - 1]
                )
        return target

    @property
    def is_flip_flop(self) -> bool:
        return self.landing == self.graph.reciprocals

    def identity_violations(self) -> List[Tuple[int, int]]:
        """
        (node, port) pairs where one of the four composition identities between
        e, mu, nu and a fails. Empty for every accepted permutation.
        """
        graph = self.graph
        failures: List[Tuple[int, int]] = []
        for node, port in graph.basis_labels():
            forward_node, forward_port = graph.neighbor(node, port), self.mu(node, port)
            back_node, back_port = self.source(node, port), self.nu(node, port)
            if (self.source(forward_node, forward_port) != node
                    or self.nu(forward_node, forward_port) != port
                    or graph.neighbor(back_node, back_port) != node
                    or self.mu(back_node, back_port) != port):
                failures.append((node, port))
        return failures


def _derive_shift(graph: PortedGraph, landing: Tuple[Tuple[int, ...], ...]) -> ShiftPermutation:
    source_ports = [[0] * degree for degree in graph.degrees]
    source_nodes = [[0] * degree for degree in graph.degrees]
    for position, node in enumerate(graph.nodes):
        for port in range(1, graph.degrees[position] + 1):
            target = graph.positions[graph.neighbors[position][port - 1]]
            label = landing[position][port - 1]
            source_ports[target][label - 1] = port
            source_nodes[target][label - 1] = node
    permutation = ShiftPermutation(
        graph=graph,
        landing=landing,
        source_ports=tuple(tuple(row) for row in source_ports),
        source_nodes=tuple(tuple(row) for row in source_nodes),
    )
    failures = permutation.identity_violations()
    if failures:
        node = failures[0][0]
        raise RestrictionViolated(node, permutation.landing[graph.position_of(node)])
    logger.debug(f"Derived shift permutation (flip-flop={permutation.is_flip_flop}) on {graph!r}")
    return permutation


def default_shift_permutation(graph: PortedGraph) -> ShiftPermutation:
    """The flip-flop choice mu = gamma; always satisfies the restriction."""
    return _derive_shift(graph, graph.reciprocals)


def custom_shift_permutation(
    graph: PortedGraph,
    mu_table: Mapping[int, Mapping[int, int]],
) -> ShiftPermutation:
    """
    Build a shift permutation from an explicit {node: {port: label}} table.

    Entries missing from the table fall back to the flip-flop value gamma. The
    table is accepted only when, at every node j, the labels
    mu(gamma(sigma; j); e(sigma; j)) over all ports sigma of j are exactly 1..N_j.

    Raises:
        UnknownNode, PortOutOfRange: table keys outside the graph
        RangeViolated: a label is not a port of the target node
        RestrictionViolated: the incoming labels at a node are not a permutation
    """
    landing = [list(row) for row in graph.reciprocals]
    for node, row in mu_table.items():
        position = graph.position_of(int(node))
        for port, label in row.items():
            port = int(port)
            graph._check_port(int(node), port)
            target_degree = graph.degree(graph.neighbor(int(node), port))
            if not isinstance(label, (int, np.integer)) or not 1 <= label <= target_degree:
                raise RangeViolated(int(node), port, label, target_degree)
            landing[position][port - 1] = int(label)

    for position, node in enumerate(graph.nodes):
        incoming = [
            landing[graph.positions[graph.neighbor(node, port)]][graph.reciprocal(node, port) - 1]
            for port in range(1, graph.degrees[position] + 1)
        ]
        if sorted(incoming) != list(range(1, graph.degrees[position] + 1)):
            raise RestrictionViolated(node, incoming)

    return _derive_shift(graph, tuple(tuple(row) for row in landing))
