# app/operations/measurement.py
"""
Measurement Module

Projectors are index sets over the basis of a walk: applying one keeps the
amplitudes at its indices and zeroes the rest, so P @ P == P holds by
construction. The probability of a projector is the squared norm of what it keeps.

Families used for distributions:

- coin nodes: one projector per node j, all (j, sigma)
- scattering edges: one projector per physical edge, both directed states
- cross: a projector of one picture carried to the other through E
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from app.core.errors import DimensionMismatch, ModeMismatch, ParseError
from app.models.graph import PortedGraph
from app.models.state import WalkModel, WalkState
from app.operations.equivalence import EquivalenceMap

logger = logging.getLogger(__name__)


class ProjectorKind(str, Enum):
    COIN_NODE = "coin-node"
    SCATTERING_EDGE = "scattering-edge"
    CROSS = "cross"


class DistributionMode(str, Enum):
    COIN_NODES = "coin-nodes"
    SCATTERING_EDGES = "scattering-edges"
    CROSS = "cross"


def node_label(node: int) -> str:
    return f"n{node}"


def edge_label(node: int, port: int) -> str:
    return f"e{node}:{port}"


@dataclass(frozen=True)
class Projector:
    """Orthogonal projector onto the basis states listed in ``indices``."""
    indices: FrozenSet[int]
    dimension: int
    label: str = ""
    kind: ProjectorKind = ProjectorKind.COIN_NODE

    def __post_init__(self):
        indices = frozenset(int(i) for i in self.indices)
        if any(not 0 <= i < self.dimension for i in indices):
            raise DimensionMismatch(f"indices in 0..{self.dimension - 1}", sorted(indices))
        object.__setattr__(self, "indices", indices)

    def __matmul__(self, other: "Projector") -> "Projector":
        """Product of two commuting index projectors: the common indices."""
        if self.dimension != other.dimension:
            raise DimensionMismatch(self.dimension, other.dimension)
        return Projector(self.indices & other.indices, self.dimension, self.label, self.kind)

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def index_array(self) -> np.ndarray:
        return np.array(sorted(self.indices), dtype=np.int64)

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        out = np.zeros_like(amplitudes)
        keep = self.index_array
        out[keep] = amplitudes[keep]
        return out

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.dimension, self.dimension), dtype=np.float64)
        keep = self.index_array
        m[keep, keep] = 1.0
        return m


# ------------------------------------------------------------------------------
# Native projectors
# ------------------------------------------------------------------------------
def projector_coin(graph: PortedGraph, node: int) -> Projector:
    """P_c^(j): every coin state (j, sigma) of node j."""
    return Projector(frozenset(graph.node_indices(node).tolist()), graph.dimension,
                     node_label(node), ProjectorKind.COIN_NODE)


def projector_scattering(graph: PortedGraph, node: int, port: int) -> Projector:
    """P_s^(j, sigma): both directed states of the edge through port sigma of j."""
    index = graph.basis_index(node, port)
    partner = int(graph.reversal_index[index])
    low = min(node, graph.neighbor(node, port))
    low_port = port if low == node else graph.reciprocal(node, port)
    return Projector(frozenset((index, partner)), graph.dimension,
                     edge_label(low, low_port), ProjectorKind.SCATTERING_EDGE)


def probability(state: WalkState, projector: Projector) -> float:
    """<psi| P |psi>: the squared norm of the amplitudes kept by P."""
    if state.dimension != projector.dimension:
        raise DimensionMismatch(projector.dimension, state.dimension)
    kept = state.amplitudes[projector.index_array]
    return float(np.sum(kept.real ** 2 + kept.imag ** 2))


# ------------------------------------------------------------------------------
# Cross projectors
# ------------------------------------------------------------------------------
def cross_projector_s_in_c(node: int, emap: EquivalenceMap) -> Projector:
    """
    E^H P_c^(j) E on the relabeled scattering basis. Measured on a scattering
    state it gives the probability that the matching coin walk sits on node j.
    """
    coin_indices = set(emap.coin_graph.node_indices(node).tolist())
    kept = frozenset(s for s, c in enumerate(emap.index.tolist()) if c in coin_indices)
    return Projector(kept, emap.dimension, node_label(node), ProjectorKind.CROSS)


def cross_projector_c_in_s(node: int, port: int, emap: EquivalenceMap) -> Projector:
    """
    E P_s^(j, sigma) E^H on the coin basis, with (j, sigma) named in the original
    scattering labeling. Measured on a coin state it gives the edge occupancy of
    the matching scattering walk.
    """
    relabeled = int(emap.relabel_index[emap.scattering_graph.basis_index(node, port)])
    partner = int(emap.relabeled_graph.reversal_index[relabeled])
    other = emap.scattering_graph.neighbor(node, port)
    low = min(node, other)
    low_port = port if low == node else emap.scattering_graph.reciprocal(node, port)
    return Projector(frozenset((int(emap.index[relabeled]), int(emap.index[partner]))),
                     emap.dimension, edge_label(low, low_port), ProjectorKind.CROSS)


# ------------------------------------------------------------------------------
# Distributions
# ------------------------------------------------------------------------------
def _edge_representatives(graph: PortedGraph) -> List[Tuple[int, int]]:
    """(smaller endpoint, its port) for every physical edge, in edge order."""
    return [(low, graph.port_toward(low, high)) for low, high in graph.edges()]


def _require_emap(emap: Optional[EquivalenceMap], state: WalkState) -> EquivalenceMap:
    if emap is None:
        raise ParseError("Cross distribution needs an equivalence map")
    if state.model == WalkModel.SCATTERING and state.graph != emap.relabeled_graph:
        raise ParseError("Scattering state is not in the relabeled basis of the equivalence map")
    if state.model == WalkModel.COIN and state.graph != emap.coin_graph:
        raise ParseError("Coin state uses a different labeling than the equivalence map")
    return emap


def projector_family(
    state: WalkState,
    mode: DistributionMode,
    emap: Optional[EquivalenceMap] = None,
) -> List[Projector]:
    """
    The partition measured by ``distribution``.

    Scattering edges and cross edges are labeled with the port of the smaller
    endpoint in the scattering labeling as given (``emap.scattering_graph``
    when a map is supplied).
    """
    mode = DistributionMode(mode)
    graph = state.graph

    if mode == DistributionMode.COIN_NODES:
        if state.model != WalkModel.COIN:
            raise ModeMismatch(mode.value, state.model.value)
        return [projector_coin(graph, node) for node in graph.nodes]

    if mode == DistributionMode.SCATTERING_EDGES:
        if state.model != WalkModel.SCATTERING:
            raise ModeMismatch(mode.value, state.model.value)
        if emap is None:
            return [projector_scattering(graph, node, port) for node, port in _edge_representatives(graph)]
        if graph != emap.relabeled_graph:
            raise ParseError("Scattering state is not in the relabeled basis of the equivalence map")
        family = []
        for node, port in _edge_representatives(emap.scattering_graph):
            projector = projector_scattering(graph, node, emap.phi(node, port))
            family.append(Projector(projector.indices, projector.dimension,
                                    edge_label(node, port), ProjectorKind.SCATTERING_EDGE))
        return family

    emap = _require_emap(emap, state)
    if state.model == WalkModel.SCATTERING:
        return [cross_projector_s_in_c(node, emap) for node in emap.coin_graph.nodes]
    return [cross_projector_c_in_s(node, port, emap)
            for node, port in _edge_representatives(emap.scattering_graph)]


def distribution(
    state: WalkState,
    mode: DistributionMode,
    emap: Optional[EquivalenceMap] = None,
) -> Dict[str, float]:
    """
    Probability of every member of the partition for ``mode``, keyed by label.

    Raises:
        ModeMismatch: coin-nodes on a scattering state or scattering-edges on a
            coin state
        ParseError: cross mode without a matching equivalence map
    """
    probabilities = {projector.label: probability(state, projector)
                     for projector in projector_family(state, mode, emap)}
    logger.debug(f"Distribution {DistributionMode(mode).value}: total {sum(probabilities.values())!r}")
    return probabilities
