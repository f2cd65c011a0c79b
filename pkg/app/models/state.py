# app/models/state.py
"""
Walk state container shared by the coin and the scattering pictures.

In the coin picture the basis state (j, sigma) is the walker on node j with
outgoing direction sigma; in the scattering picture it is the walker on the edge
sigma of j, incoming to j. Amplitudes are stored in the basis order of the graph.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Tuple

import numpy as np

from app.core.config import get_settings
from app.core.errors import DimensionMismatch, LabelingMismatch, ModelMismatch, NormViolation
from app.models.graph import PortedGraph

logger = logging.getLogger(__name__)


class WalkModel(str, Enum):
    COIN = "coin"
    SCATTERING = "scattering"


@dataclass(frozen=True, eq=False)
class WalkState:
    """
    Complex amplitude per basis state (j, sigma).

    Use ``from_amplitudes``/``from_entries``/``basis`` to build validated states;
    the plain constructor is what evolution uses and does not renormalize.
    """
    graph: PortedGraph
    amplitudes: np.ndarray
    model: WalkModel = WalkModel.COIN

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if amplitudes.shape != (self.graph.dimension,):
            raise DimensionMismatch(self.graph.dimension, amplitudes.shape)
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    # --------------------------------------------------------------------------
    # Constructors
    # --------------------------------------------------------------------------
    @classmethod
    def from_amplitudes(
        cls,
        graph: PortedGraph,
        amplitudes: Iterable[complex],
        model: WalkModel = WalkModel.COIN,
        reject_tolerance: Optional[float] = None,
    ) -> "WalkState":
        """
        Build a unit-norm state. Norm deviations up to ``reject_tolerance``
        (NORM_REJECT_TOLERANCE by default) are renormalized; larger ones raise
        NormViolation.
        """
        if reject_tolerance is None:
            reject_tolerance = get_settings().NORM_REJECT_TOLERANCE
        vector = np.array(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes,
                          dtype=np.complex128)
        if vector.shape != (graph.dimension,):
            raise DimensionMismatch(graph.dimension, vector.shape)
        norm = float(np.linalg.norm(vector))
        # NaN fails every comparison, so test for the accepted range
        if not np.isfinite(vector).all() or not abs(norm - 1.0) <= reject_tolerance:
            raise NormViolation(norm, reject_tolerance)
        if norm != 1.0:
            vector = vector / norm
        return cls(graph, vector, WalkModel(model))

    @classmethod
    def from_entries(
        cls,
        graph: PortedGraph,
        entries: Iterable[Tuple[int, int, complex]],
        model: WalkModel = WalkModel.COIN,
        reject_tolerance: Optional[float] = None,
    ) -> "WalkState":
        """Build a state from (node, port, amplitude) triples; repeated entries add up."""
        vector = np.zeros(graph.dimension, dtype=np.complex128)
        for node, port, amplitude in entries:
            vector[graph.basis_index(node, port)] += amplitude
        return cls.from_amplitudes(graph, vector, model, reject_tolerance)

    @classmethod
    def basis(cls, graph: PortedGraph, node: int, port: int, model: WalkModel = WalkModel.COIN) -> "WalkState":
        vector = np.zeros(graph.dimension, dtype=np.complex128)
        vector[graph.basis_index(node, port)] = 1.0
        return cls(graph, vector, WalkModel(model))

    @classmethod
    def random(cls, graph: PortedGraph, rng: np.random.Generator, model: WalkModel = WalkModel.COIN) -> "WalkState":
        vector = rng.standard_normal(graph.dimension) + 1j * rng.standard_normal(graph.dimension)
        return cls(graph, vector / np.linalg.norm(vector), WalkModel(model))

    # --------------------------------------------------------------------------
    # Queries
    # --------------------------------------------------------------------------
    @property
    def dimension(self) -> int:
        return self.graph.dimension

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, node: int, port: int) -> complex:
        return complex(self.amplitudes[self.graph.basis_index(node, port)])

    def probabilities(self) -> np.ndarray:
        """Squared modulus of every amplitude."""
        return np.abs(self.amplitudes) ** 2

    def with_amplitudes(self, amplitudes: np.ndarray, graph: Optional[PortedGraph] = None,
                        model: Optional[WalkModel] = None) -> "WalkState":
        return WalkState(graph or self.graph, amplitudes, model or self.model)

    def require(self, model: WalkModel, graph: PortedGraph) -> None:
        """Guard used by the operators: same model, same dimension, same port tables."""
        if self.model != model:
            raise ModelMismatch(model.value, self.model.value)
        if self.dimension != graph.dimension:
            raise DimensionMismatch(graph.dimension, self.dimension)
        if self.graph is not graph and self.graph != graph:
            raise LabelingMismatch(model.value)

    def __repr__(self) -> str:
        return f"<WalkState(model={self.model.value}, dim={self.dimension}, norm={self.norm():.15f})>"
