# app/operations/scattering_walk.py
"""
Scattering Walk Operations

The scattering basis state (j, sigma) is the walker on edge sigma of node j,
incoming to j. One step U_s = R + T scatters it at j: for every port alpha of j
the amplitude Gamma^(j)[alpha, sigma] leaves along alpha and becomes the state
incoming to e(alpha; j), i.e. (e(alpha; j), gamma(alpha; j)). Diagonal entries of
Gamma^(j) are the reflection coefficients r, off-diagonal ones the transmissions t.

So U_s is the block-diagonal Gamma followed by the edge reversal permutation.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from app.core.config import get_settings
from app.core.errors import DimensionCapExceeded
from app.models.graph import PortedGraph
from app.models.state import WalkModel, WalkState
from app.models.unitaries import BlockPlan, LocalUnitaryFamily, UnitaryRole

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ScatteringWalkOperator:
    """U_s for a scattering labeling of the graph and its Gamma^(j) matrices."""
    graph: PortedGraph
    gammas: LocalUnitaryFamily

    def __post_init__(self):
        if self.gammas.role != UnitaryRole.SCATTERING:
            object.__setattr__(self, "gammas", self.gammas.with_role(UnitaryRole.SCATTERING))
        self.gammas.check_dimensions(self.graph)

    @property
    def dimension(self) -> int:
        return self.graph.dimension

    @cached_property
    def plan(self) -> BlockPlan:
        return BlockPlan.build(self.graph, self.gammas)

    def apply(self, vectors: np.ndarray) -> np.ndarray:
        scattered = self.plan.apply(vectors)
        out = np.empty_like(scattered)
        out[self.graph.reversal_index] = scattered
        return out

    def apply_adjoint(self, vectors: np.ndarray) -> np.ndarray:
        return self.plan.apply(vectors[self.graph.reversal_index], adjoint=True)

    def reflection(self, node: int, port: int) -> complex:
        """r^(j)_{sigma, sigma}."""
        return complex(self.gammas[node][port - 1, port - 1])

    def transmission(self, node: int, to_port: int, from_port: int) -> complex:
        """t^(j)_{alpha, sigma} for alpha != sigma."""
        return complex(self.gammas[node][to_port - 1, from_port - 1])


def step_scattering(state: WalkState, op: ScatteringWalkOperator) -> WalkState:
    """One step U_s = R + T."""
    state.require(WalkModel.SCATTERING, op.graph)
    return state.with_amplitudes(op.apply(state.amplitudes), graph=op.graph)


def step_scattering_adjoint(state: WalkState, op: ScatteringWalkOperator) -> WalkState:
    """
    U_s^H = R^H + T^H: the state (j, sigma) picks up the conjugated column
    entries of Gamma at the far node e(sigma; j) and lands on its ports.
    """
    state.require(WalkModel.SCATTERING, op.graph)
    return state.with_amplitudes(op.apply_adjoint(state.amplitudes), graph=op.graph)


def dense_matrix_s(op: ScatteringWalkOperator, cap: Optional[int] = None) -> np.ndarray:
    """Column k is U_s applied to basis vector k."""
    cap = get_settings().DENSE_CAP if cap is None else cap
    if op.dimension > cap:
        raise DimensionCapExceeded(op.dimension, cap)
    return op.apply(np.eye(op.dimension, dtype=np.complex128))
