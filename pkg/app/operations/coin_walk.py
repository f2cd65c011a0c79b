# app/operations/coin_walk.py
"""
Coin Walk Operations

One step of the coin walk is U_c = S C: every node applies its coin matrix to
the amplitudes of its outgoing directions, then the shift S moves the state
(j, sigma) to (e(sigma; j), mu(sigma; j)).

Both factors are applied sparsely: the coin as dense per-node blocks, the shift
as an index permutation. Dense matrices are only built as a test oracle and are
capped in size.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from app.core.config import get_settings
from app.core.errors import DimensionCapExceeded, NotRegular
from app.models.graph import PortedGraph, ShiftPermutation
from app.models.state import WalkModel, WalkState
from app.models.unitaries import BlockPlan, LocalUnitaryFamily, UnitaryRole
from app.schemas.report import DecompositionReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CoinWalkOperator:
    """U_c for a graph, a shift permutation and a coin family."""
    perm: ShiftPermutation
    coins: LocalUnitaryFamily

    def __post_init__(self):
        if self.coins.role != UnitaryRole.COIN:
            object.__setattr__(self, "coins", self.coins.with_role(UnitaryRole.COIN))
        self.coins.check_dimensions(self.perm.graph)

    @property
    def graph(self) -> PortedGraph:
        return self.perm.graph

    @property
    def dimension(self) -> int:
        return self.graph.dimension

    @cached_property
    def plan(self) -> BlockPlan:
        return BlockPlan.build(self.graph, self.coins)

    def apply(self, vectors: np.ndarray) -> np.ndarray:
        """U_c on a raw amplitude vector or on every column of a matrix."""
        mixed = self.plan.apply(vectors)
        out = np.empty_like(mixed)
        out[self.perm.index] = mixed
        return out

    def apply_adjoint(self, vectors: np.ndarray) -> np.ndarray:
        return self.plan.apply(vectors[self.perm.index], adjoint=True)


def apply_shift(state: WalkState, perm: ShiftPermutation) -> WalkState:
    """S: the amplitude at (j, sigma) moves to (e(sigma; j), mu(sigma; j))."""
    state.require(WalkModel.COIN, perm.graph)
    out = np.empty_like(state.amplitudes)
    out[perm.index] = state.amplitudes
    return state.with_amplitudes(out, graph=perm.graph)


def apply_shift_adjoint(state: WalkState, perm: ShiftPermutation) -> WalkState:
    """S^H: the amplitude at (j, sigma) moves to (a(sigma; j), nu(sigma; j))."""
    state.require(WalkModel.COIN, perm.graph)
    return state.with_amplitudes(state.amplitudes[perm.index], graph=perm.graph)


def apply_coin(state: WalkState, coins: LocalUnitaryFamily) -> WalkState:
    """Block-diagonal action of the coin matrices C^(j)."""
    state.require(WalkModel.COIN, state.graph)
    plan = BlockPlan.build(state.graph, coins)
    return state.with_amplitudes(plan.apply(state.amplitudes))


def step_coin(state: WalkState, op: CoinWalkOperator) -> WalkState:
    """One step U_c = S C."""
    state.require(WalkModel.COIN, op.graph)
    return state.with_amplitudes(op.apply(state.amplitudes), graph=op.graph)


def step_coin_adjoint(state: WalkState, op: CoinWalkOperator) -> WalkState:
    """U_c^H = C^H S^H."""
    state.require(WalkModel.COIN, op.graph)
    return state.with_amplitudes(op.apply_adjoint(state.amplitudes), graph=op.graph)


def dense_matrix(op: CoinWalkOperator, cap: Optional[int] = None) -> np.ndarray:
    """Column k is U_c applied to basis vector k."""
    cap = get_settings().DENSE_CAP if cap is None else cap
    if op.dimension > cap:
        raise DimensionCapExceeded(op.dimension, cap)
    return op.apply(np.eye(op.dimension, dtype=np.complex128))


def tensor_decomposition_check(
    op: CoinWalkOperator,
    tolerance: Optional[float] = None,
    cap: Optional[int] = None,
) -> DecompositionReport:
    """
    On an N-regular graph with one common coin C, rebuild U_c as
    S (C ⊗ I) in the factorized order |sigma> ⊗ |j> and compare it entrywise
    with ``dense_matrix(op)`` after reordering the indices.

    Raises:
        NotRegular: the graph has nodes of different degree
        NonUniformCoin: the coin matrices are not all equal
    """
    tolerance = get_settings().TOLERANCE if tolerance is None else tolerance
    graph = op.graph
    degree = graph.regular_degree
    if degree is None:
        raise NotRegular(graph.degrees)
    coin = op.coins.common_matrix()
    nodes = len(graph.nodes)

    # factorized index f = (sigma - 1) * |V| + position(j)
    factorized_shift = np.zeros((degree * nodes, degree * nodes), dtype=np.complex128)
    node_major = np.empty(degree * nodes, dtype=np.int64)
    for position, node in enumerate(graph.nodes):
        for port in range(1, degree + 1):
            source = (port - 1) * nodes + position
            target = (op.perm.mu(node, port) - 1) * nodes + graph.position_of(graph.neighbor(node, port))
            factorized_shift[target, source] = 1.0
            node_major[source] = graph.basis_index(node, port)
    factorized = factorized_shift @ np.kron(coin, np.eye(nodes))

    reference = dense_matrix(op, cap)[np.ix_(node_major, node_major)]
    deviation = float(np.max(np.abs(factorized - reference)))
    logger.info(f"Tensor decomposition check on {graph!r}: max deviation {deviation:.3e}")
    return DecompositionReport(
        degree=degree,
        nodes=nodes,
        max_deviation=deviation,
        tolerance=tolerance,
        passed=deviation < tolerance,
    )
