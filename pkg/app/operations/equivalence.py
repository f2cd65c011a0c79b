# app/operations/equivalence.py
"""
Equivalence Module

Builds the explicit unitary equivalence between the scattering and the coin walk
on the same graph:

1. ``varphi``: per node, maps the scattering port of an edge to the coin port of
   the same physical edge.
2. ``phi``: the retagging of scattering ports,
   phi(sigma; j) = mu(gamma_c(varphi(sigma; j); j); e_c(varphi(sigma; j); j)),
   i.e. the coin port on which a walker coming along that edge lands at j.
3. ``E``: after retagging, the scattering state (j, sigma) incoming to j is sent
   to the coin state (j, sigma) outgoing from j. E is a basis permutation.
4. The coefficient correspondence: Gamma^(j) is c^(j) with its rows reordered
   (and back), which makes U_s = E^H U_c E.

The retagged scattering labeling is exposed as ``EquivalenceMap.relabeled_graph``;
Gamma families and states given in the original scattering labeling are moved
into it with ``relabel_family``/``relabel_state``.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Mapping, Optional, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from app.core.config import get_settings
from app.core.errors import EdgeSetMismatch, NotBijective, NotSameEdge, ParseError
from app.models.graph import PortedGraph, ShiftPermutation, default_shift_permutation
from app.models.state import WalkModel, WalkState
from app.models.unitaries import LocalUnitaryFamily, UnitaryRole
from app.operations.coin_walk import CoinWalkOperator, dense_matrix
from app.operations.scattering_walk import ScatteringWalkOperator, dense_matrix_s
from app.schemas.report import EquivalenceReport

logger = logging.getLogger(__name__)


# ------------------------------------------------------------------------------
# Label bijections
# ------------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class EdgeLabelBijection:
    """Per-node bijection of the ports 1..N_j; ``tables[j][sigma - 1]`` is the image of sigma."""
    tables: Mapping[int, Tuple[int, ...]]

    def __post_init__(self):
        tables = {int(node): tuple(int(label) for label in images) for node, images in self.tables.items()}
        for node, images in tables.items():
            if sorted(images) != list(range(1, len(images) + 1)):
                raise NotBijective(node, images)
        object.__setattr__(self, "tables", dict(sorted(tables.items())))

    def __call__(self, node: int, port: int) -> int:
        return self.tables[node][port - 1]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EdgeLabelBijection) and self.tables == other.tables

    @property
    def is_identity(self) -> bool:
        return all(images == tuple(range(1, len(images) + 1)) for images in self.tables.values())

    def inverse(self) -> "EdgeLabelBijection":
        inverse: Dict[int, Tuple[int, ...]] = {}
        for node, images in self.tables.items():
            row = [0] * len(images)
            for port, label in enumerate(images, start=1):
                row[label - 1] = port
            inverse[node] = tuple(row)
        return EdgeLabelBijection(inverse)

    @classmethod
    def identity(cls, graph: PortedGraph) -> "EdgeLabelBijection":
        return cls({node: tuple(range(1, degree + 1)) for node, degree in zip(graph.nodes, graph.degrees)})

    @classmethod
    def from_table(cls, graph: PortedGraph, table: Mapping[int, Mapping[int, int]]) -> "EdgeLabelBijection":
        """
        Build from a {node: {port: label}} table; ports missing from the table map
        to themselves.
        """
        tables = {node: list(range(1, degree + 1)) for node, degree in zip(graph.nodes, graph.degrees)}
        for node, row in table.items():
            node = int(node)
            graph.position_of(node)
            for port, label in row.items():
                graph._check_port(node, int(port))
                tables[node][int(port) - 1] = int(label)
        return cls({node: tuple(images) for node, images in tables.items()})


def infer_edge_bijection(coin_graph: PortedGraph, scattering_graph: PortedGraph) -> EdgeLabelBijection:
    """varphi read off the physical edges: scattering port -> coin port toward the same neighbor."""
    _check_edge_sets(coin_graph, scattering_graph)
    return EdgeLabelBijection({
        node: tuple(
            coin_graph.port_toward(node, scattering_graph.neighbor(node, port))
            for port in scattering_graph.ports(node)
        )
        for node in scattering_graph.nodes
    })


def _check_edge_sets(coin_graph: PortedGraph, scattering_graph: PortedGraph) -> None:
    coin_edges, scattering_edges = set(coin_graph.edges()), set(scattering_graph.edges())
    if coin_edges != scattering_edges:
        raise EdgeSetMismatch(sorted(coin_edges - scattering_edges), sorted(scattering_edges - coin_edges))


def build_phi(
    coin_graph: PortedGraph,
    scattering_graph: PortedGraph,
    varphi: EdgeLabelBijection,
    perm: ShiftPermutation,
) -> EdgeLabelBijection:
    """
    The retagging phi(sigma; j) = mu(gamma_c(varphi(sigma; j); j); e_c(varphi(sigma; j); j)).

    Raises:
        EdgeSetMismatch: the two labelings describe different graphs
        NotSameEdge: varphi sends a port to a coin port of another edge
    """
    _check_edge_sets(coin_graph, scattering_graph)
    if perm.graph != coin_graph:
        raise ParseError("Shift permutation was built for a different coin labeling")

    tables: Dict[int, Tuple[int, ...]] = {}
    for node in scattering_graph.nodes:
        images = []
        for port in scattering_graph.ports(node):
            coin_port = varphi(node, port)
            expected = scattering_graph.neighbor(node, port)
            actual = coin_graph.neighbor(node, coin_port)
            if actual != expected:
                raise NotSameEdge(node, port, expected, actual)
            images.append(perm.mu(actual, coin_graph.reciprocal(node, coin_port)))
        tables[node] = tuple(images)
    return EdgeLabelBijection(tables)


# ------------------------------------------------------------------------------
# Equivalence map
# ------------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class EquivalenceMap:
    """
    Everything needed to move between the two pictures.

    ``scattering_graph`` is the scattering labeling as given; ``relabeled_graph``
    is the same graph with every scattering port sigma renamed phi(sigma; j). E acts
    on states of the relabeled scattering basis.
    """
    coin_graph: PortedGraph
    scattering_graph: PortedGraph
    perm: ShiftPermutation
    varphi: EdgeLabelBijection
    phi: EdgeLabelBijection

    @cached_property
    def relabeled_graph(self) -> PortedGraph:
        return self.scattering_graph.relabeled(self.phi.tables)

    @cached_property
    def relabel_index(self) -> np.ndarray:
        """Original scattering basis index -> relabeled scattering basis index."""
        return np.array([
            self.relabeled_graph.basis_index(node, self.phi(node, port))
            for node, port in self.scattering_graph.basis_labels()
        ], dtype=np.int64)

    @cached_property
    def index(self) -> np.ndarray:
        """Relabeled scattering basis index -> coin basis index (the permutation E)."""
        return np.array([
            self.coin_graph.basis_index(node, port)
            for node, port in self.relabeled_graph.basis_labels()
        ], dtype=np.int64)

    @property
    def dimension(self) -> int:
        return self.coin_graph.dimension

    def matrix(self) -> np.ndarray:
        """Dense 0/1 matrix of E."""
        e = np.zeros((self.dimension, self.dimension), dtype=np.complex128)
        e[self.index, np.arange(self.dimension)] = 1.0
        return e

    # --------------------------------------------------------------------------
    # Moving data between the original and the relabeled scattering labeling
    # --------------------------------------------------------------------------
    def relabel_state(self, state: WalkState) -> WalkState:
        state.require(WalkModel.SCATTERING, self.scattering_graph)
        out = np.empty_like(state.amplitudes)
        out[self.relabel_index] = state.amplitudes
        return state.with_amplitudes(out, graph=self.relabeled_graph)

    def restore_state(self, state: WalkState) -> WalkState:
        state.require(WalkModel.SCATTERING, self.relabeled_graph)
        return state.with_amplitudes(state.amplitudes[self.relabel_index], graph=self.scattering_graph)

    def relabel_family(self, gammas: LocalUnitaryFamily) -> LocalUnitaryFamily:
        """Gamma'[phi(a), phi(s)] = Gamma[a, s] at every node."""
        gammas.check_dimensions(self.scattering_graph)
        matrices = {}
        for node, matrix in gammas.matrices.items():
            order = np.array(self.phi.tables[node]) - 1
            relabeled = np.empty_like(matrix)
            relabeled[np.ix_(order, order)] = matrix
            matrices[node] = relabeled
        return LocalUnitaryFamily(UnitaryRole.SCATTERING, matrices)

    def restore_family(self, gammas: LocalUnitaryFamily) -> LocalUnitaryFamily:
        gammas.check_dimensions(self.relabeled_graph)
        matrices = {}
        for node, matrix in gammas.matrices.items():
            order = np.array(self.phi.tables[node]) - 1
            matrices[node] = matrix[np.ix_(order, order)]
        return LocalUnitaryFamily(UnitaryRole.SCATTERING, matrices)

    def scattering_operator(self, gammas: LocalUnitaryFamily) -> ScatteringWalkOperator:
        """U_s on the relabeled scattering basis."""
        return ScatteringWalkOperator(self.relabeled_graph, gammas)

    # --------------------------------------------------------------------------
    # Row maps of the coefficient correspondence
    # --------------------------------------------------------------------------
    def gamma_rows(self, node: int) -> np.ndarray:
        """Row b of Gamma^(j) is row gamma_c(nu(b; j); a(b; j)) of c^(j)."""
        return np.array([
            self.coin_graph.reciprocal(self.perm.source(node, port), self.perm.nu(node, port)) - 1
            for port in self.coin_graph.ports(node)
        ], dtype=np.int64)

    def coin_rows(self, node: int) -> np.ndarray:
        """Row b of c^(j) is row mu(gamma_c(b; j); e_c(b; j)) of Gamma^(j)."""
        return np.array([
            self.perm.mu(self.coin_graph.neighbor(node, port), self.coin_graph.reciprocal(node, port)) - 1
            for port in self.coin_graph.ports(node)
        ], dtype=np.int64)


def build_equivalence(
    coin_graph: PortedGraph,
    perm: Optional[ShiftPermutation] = None,
    scattering_graph: Optional[PortedGraph] = None,
    varphi: Optional[EdgeLabelBijection] = None,
) -> EquivalenceMap:
    """
    Assemble the equivalence map. Defaults: flip-flop shift, scattering labeling
    equal to the coin labeling, and varphi inferred from the physical edges
    (the identity when both labelings coincide).
    """
    perm = perm if perm is not None else default_shift_permutation(coin_graph)
    scattering_graph = scattering_graph if scattering_graph is not None else coin_graph
    varphi = varphi if varphi is not None else infer_edge_bijection(coin_graph, scattering_graph)
    phi = build_phi(coin_graph, scattering_graph, varphi, perm)
    emap = EquivalenceMap(coin_graph, scattering_graph, perm, varphi, phi)
    logger.debug(f"Built equivalence map (phi identity={phi.is_identity}) on {coin_graph!r}")
    return emap


# ------------------------------------------------------------------------------
# E and E^H
# ------------------------------------------------------------------------------
def apply_E(state: WalkState, emap: EquivalenceMap) -> WalkState:
    """E|j, sigma>_s = |j, sigma>_c for a state in the relabeled scattering basis."""
    state.require(WalkModel.SCATTERING, emap.relabeled_graph)
    out = np.empty_like(state.amplitudes)
    out[emap.index] = state.amplitudes
    return WalkState(emap.coin_graph, out, WalkModel.COIN)


def apply_E_adjoint(state: WalkState, emap: EquivalenceMap) -> WalkState:
    state.require(WalkModel.COIN, emap.coin_graph)
    return WalkState(emap.relabeled_graph, state.amplitudes[emap.index], WalkModel.SCATTERING)


# ------------------------------------------------------------------------------
# Coefficient correspondence
# ------------------------------------------------------------------------------
def gamma_from_coin(coins: LocalUnitaryFamily, emap: EquivalenceMap) -> LocalUnitaryFamily:
    """Scattering matrices (relabeled basis) whose walk is unitarily equivalent to the coin walk."""
    coins.check_dimensions(emap.coin_graph)
    return LocalUnitaryFamily(UnitaryRole.SCATTERING, {
        node: matrix[emap.gamma_rows(node), :] for node, matrix in coins.matrices.items()
    })


def coin_from_gamma(gammas: LocalUnitaryFamily, emap: EquivalenceMap) -> LocalUnitaryFamily:
    """Inverse of ``gamma_from_coin``."""
    gammas.check_dimensions(emap.coin_graph)
    return LocalUnitaryFamily(UnitaryRole.COIN, {
        node: matrix[emap.coin_rows(node), :] for node, matrix in gammas.matrices.items()
    })


# ------------------------------------------------------------------------------
# Verification
# ------------------------------------------------------------------------------
def spectral_distance(first: np.ndarray, second: np.ndarray) -> float:
    """Largest distance between optimally matched eigenvalues of two spectra."""
    cost = np.abs(np.asarray(first)[:, None] - np.asarray(second)[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(np.max(cost[rows, cols])) if len(rows) else 0.0


def verify_equivalence(
    coin_op: CoinWalkOperator,
    scat_op: ScatteringWalkOperator,
    emap: EquivalenceMap,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    tolerance: Optional[float] = None,
    spectral_tolerance: Optional[float] = None,
    cap: Optional[int] = None,
) -> EquivalenceReport:
    """
    Compare U_s with E^H U_c E.

    Dense path (dimension within the cap): entrywise deviation of the two
    matrices and the distance between their spectra. Sparse path (always): the
    largest ||U_s psi - E^H U_c E psi|| over ``trials`` random unit states.
    The report passes when the dense and sparse deviations are below the
    tolerance.

    Raises:
        ParseError: operators on the wrong labelings, or zero trials above the cap
    """
    settings = get_settings()
    trials = settings.RANDOM_TRIALS if trials is None else trials
    seed = settings.DEFAULT_SEED if seed is None else seed
    tolerance = settings.TOLERANCE if tolerance is None else tolerance
    spectral_tolerance = settings.SPECTRAL_TOLERANCE if spectral_tolerance is None else spectral_tolerance
    cap = settings.DENSE_CAP if cap is None else cap

    if scat_op.graph != emap.relabeled_graph:
        raise ParseError("Scattering operator must act on the relabeled scattering basis of the map")
    if coin_op.graph != emap.coin_graph:
        raise ParseError("Coin operator was built for a different coin labeling")

    dimension = emap.dimension
    if trials < 0:
        raise ParseError(f"Number of random trials must be non-negative, got {trials}")
    if dimension > cap and trials == 0:
        raise ParseError(
            f"Nothing to check: dimension {dimension} is above the dense cap {cap} and no random trials were requested"
        )
    dense_deviation = spectral_deviation = None
    if dimension <= cap:
        u_s = dense_matrix_s(scat_op, cap)
        u_c = dense_matrix(coin_op, cap)
        e = emap.matrix()
        conjugated = e.conj().T @ u_c @ e
        dense_deviation = float(np.max(np.abs(u_s - conjugated)))
        spectral_deviation = spectral_distance(np.linalg.eigvals(u_c), np.linalg.eigvals(u_s))

    rng = np.random.default_rng(seed)
    states = rng.standard_normal((dimension, trials)) + 1j * rng.standard_normal((dimension, trials))
    states /= np.linalg.norm(states, axis=0)
    lifted = np.empty_like(states)
    lifted[emap.index] = states
    difference = scat_op.apply(states) - coin_op.apply(lifted)[emap.index]
    sparse_deviation = float(np.max(np.linalg.norm(difference, axis=0))) if trials else 0.0

    passed = sparse_deviation < tolerance and (dense_deviation is None or dense_deviation < tolerance)
    report = EquivalenceReport(
        dimension=dimension,
        dense_deviation=dense_deviation,
        sparse_deviation=sparse_deviation,
        spectral_deviation=spectral_deviation,
        trials=trials,
        seed=seed,
        tolerance=tolerance,
        spectral_tolerance=spectral_tolerance,
        passed=passed,
    )
    logger.info(
        f"Equivalence check dim={dimension}: dense={dense_deviation}, "
        f"sparse={sparse_deviation:.3e}, spectral={spectral_deviation}, passed={passed}"
    )
    return report
