# app/models/unitaries.py
"""
Local Unitary Module

Per-node unitary matrices of a walk: the coin matrices C^(j) of the coin picture
or the scattering matrices Gamma^(j) of the scattering picture. Both live in the
same container, tagged by role.

The builtin library follows the usual community choices:

- identity: N x N identity
- hadamard: (1/sqrt 2) [[1, 1], [1, -1]], degree 2 only
- grover: (2/N) J - I, any degree
- dft: F[s', s] = exp(2 pi i s' s / N) / sqrt N with ports s, s' in 1..N
- random: Haar random unitary (seeded)

``LocalUnitaryFamily.create`` picks the builder for every node from a default
name plus explicit per-node overrides, the same way a factory dispatches on a
type name.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.stats import unitary_group

from app.core.config import get_settings
from app.core.errors import DimensionMismatch, NonUniformCoin, ParseError, UnitarityViolation
from app.models.graph import PortedGraph

logger = logging.getLogger(__name__)


class UnitaryRole(str, Enum):
    COIN = "coin"
    SCATTERING = "scattering"


class BuiltinUnitary(str, Enum):
    IDENTITY = "identity"
    HADAMARD = "hadamard"
    GROVER = "grover"
    DFT = "dft"
    RANDOM = "random"


# ------------------------------------------------------------------------------
# Builtin matrices
# ------------------------------------------------------------------------------
def identity_matrix(n: int) -> NDArray[np.complex128]:
    return np.eye(n, dtype=np.complex128)


def hadamard_matrix(n: int = 2) -> NDArray[np.complex128]:
    if n != 2:
        raise DimensionMismatch(2, n)
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)


def grover_matrix(n: int) -> NDArray[np.complex128]:
    return (2.0 / n) * np.ones((n, n), dtype=np.complex128) - np.eye(n, dtype=np.complex128)


def dft_matrix(n: int) -> NDArray[np.complex128]:
    ports = np.arange(1, n + 1)
    return np.exp(2j * np.pi * np.outer(ports, ports) / n) / np.sqrt(n)


def random_unitary(n: int, rng: Optional[np.random.Generator] = None) -> NDArray[np.complex128]:
    """Haar random n x n unitary; a random phase when n == 1."""
    rng = rng if rng is not None else np.random.default_rng()
    if n == 1:
        return np.array([[np.exp(2j * np.pi * rng.random())]], dtype=np.complex128)
    return np.asarray(unitary_group.rvs(n, random_state=rng), dtype=np.complex128)


def unitarity_deviation(matrix: np.ndarray) -> float:
    """max |M^H M - I| over all entries."""
    matrix = np.asarray(matrix)
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0]))))


# ------------------------------------------------------------------------------
# Family
# ------------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class LocalUnitaryFamily:
    """
    One N_j x N_j matrix per node, tagged as coin or scattering matrices.

    Matrices are stored read-only, keyed by external node id.
    """
    role: UnitaryRole
    matrices: Mapping[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        frozen: Dict[int, np.ndarray] = {}
        for node, matrix in self.matrices.items():
            array = np.array(matrix, dtype=np.complex128)
            if array.ndim != 2 or array.shape[0] != array.shape[1]:
                raise DimensionMismatch("square matrix", array.shape, int(node))
            array.setflags(write=False)
            frozen[int(node)] = array
        object.__setattr__(self, "matrices", dict(sorted(frozen.items())))
        object.__setattr__(self, "role", UnitaryRole(self.role))

    def __getitem__(self, node: int) -> np.ndarray:
        return self.matrices[node]

    def __len__(self) -> int:
        return len(self.matrices)

    def unitarity_deviations(self) -> Dict[int, float]:
        return {node: unitarity_deviation(matrix) for node, matrix in self.matrices.items()}

    def max_unitarity_deviation(self) -> float:
        return max(self.unitarity_deviations().values(), default=0.0)

    def check_unitary(self, tolerance: Optional[float] = None) -> "LocalUnitaryFamily":
        """Raise UnitarityViolation for the first matrix off by ``tolerance`` or more."""
        tolerance = get_settings().TOLERANCE if tolerance is None else tolerance
        for node, deviation in self.unitarity_deviations().items():
            if not deviation < tolerance:
                raise UnitarityViolation(node, deviation, tolerance)
        return self

    def check_dimensions(self, graph: PortedGraph) -> "LocalUnitaryFamily":
        """Every node of ``graph`` has a matrix of size N_j x N_j."""
        for node, degree in zip(graph.nodes, graph.degrees):
            if node not in self.matrices:
                raise DimensionMismatch(f"{degree}x{degree} matrix", "none", node)
            shape = self.matrices[node].shape
            if shape != (degree, degree):
                raise DimensionMismatch((degree, degree), shape, node)
        extra = set(self.matrices) - set(graph.nodes)
        if extra:
            raise ParseError(f"Local matrices given for unknown nodes {sorted(extra)}")
        return self

    def common_matrix(self) -> np.ndarray:
        """The single matrix shared by every node; NonUniformCoin otherwise."""
        nodes = list(self.matrices)
        first = self.matrices[nodes[0]]
        for node in nodes[1:]:
            other = self.matrices[node]
            if other.shape != first.shape or not np.array_equal(other, first):
                raise NonUniformCoin(node)
        return first

    def with_role(self, role: UnitaryRole) -> "LocalUnitaryFamily":
        return LocalUnitaryFamily(role, self.matrices)

    @classmethod
    def create(
        cls,
        graph: PortedGraph,
        role: UnitaryRole,
        default: BuiltinUnitary = BuiltinUnitary.GROVER,
        overrides: Optional[Mapping[int, np.ndarray]] = None,
        rng: Optional[np.random.Generator] = None,
    ) -> "LocalUnitaryFamily":
        """
        Factory: a builtin matrix for every node, replaced by ``overrides`` where
        given. Override shapes are checked against the node degrees; unitarity is
        left to ``check_unitary``.

        Raises:
            ParseError: unknown builtin name or override for an unknown node
            DimensionMismatch: hadamard on a node of degree other than 2, or an
                override of the wrong size
        """
        builders: Dict[BuiltinUnitary, Callable[[int], np.ndarray]] = {
            BuiltinUnitary.IDENTITY: identity_matrix,
            BuiltinUnitary.HADAMARD: hadamard_matrix,
            BuiltinUnitary.GROVER: grover_matrix,
            BuiltinUnitary.DFT: dft_matrix,
            BuiltinUnitary.RANDOM: lambda n: random_unitary(n, rng),
        }
        try:
            builder = builders[BuiltinUnitary(default)]
        except ValueError:
            raise ParseError(
                f"Unsupported local unitary '{default}'. Valid options are: "
                f"{', '.join(b.value for b in BuiltinUnitary)}"
            )

        overrides = dict(overrides or {})
        for node in overrides:
            graph.position_of(int(node))

        matrices: Dict[int, np.ndarray] = {}
        for node, degree in zip(graph.nodes, graph.degrees):
            if node in overrides:
                matrices[node] = np.asarray(overrides[node], dtype=np.complex128)
                continue
            try:
                matrices[node] = builder(degree)
            except DimensionMismatch:
                raise DimensionMismatch((2, 2), (degree, degree), node)
        family = cls(role, matrices).check_dimensions(graph)
        logger.debug(f"Created {role.value} family '{BuiltinUnitary(default).value}' with {len(overrides)} overrides")
        return family

    @classmethod
    def random(cls, graph: PortedGraph, role: UnitaryRole, rng: np.random.Generator) -> "LocalUnitaryFamily":
        return cls.create(graph, role, BuiltinUnitary.RANDOM, rng=rng)

    def __repr__(self) -> str:
        return f"<LocalUnitaryFamily(role={self.role.value}, nodes={len(self.matrices)})>"


# ------------------------------------------------------------------------------
# Block-diagonal application
# ------------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class BlockPlan:
    """
    Nodes grouped by degree so that the block-diagonal action of a family is a
    handful of batched matrix products.

    Each group holds the basis indices (nodes x degree) and the stacked matrices
    (nodes x degree x degree).
    """
    groups: Tuple[Tuple[np.ndarray, np.ndarray], ...]

    @classmethod
    def build(cls, graph: PortedGraph, family: LocalUnitaryFamily) -> "BlockPlan":
        family.check_dimensions(graph)
        by_degree: Dict[int, List[int]] = {}
        for node, degree in zip(graph.nodes, graph.degrees):
            if degree:
                by_degree.setdefault(degree, []).append(node)
        groups = []
        for degree, nodes in sorted(by_degree.items()):
            indices = np.stack([graph.node_indices(node) for node in nodes])
            matrices = np.stack([family[node] for node in nodes])
            groups.append((indices, matrices))
        return cls(tuple(groups))

    def apply(self, vectors: np.ndarray, adjoint: bool = False) -> np.ndarray:
        """Apply the block-diagonal operator (or its adjoint) to a vector or to the columns of a matrix."""
        out = np.empty_like(vectors, dtype=np.complex128)
        for indices, matrices in self.groups:
            blocks = matrices.conj().transpose(0, 2, 1) if adjoint else matrices
            out[indices] = np.einsum("nij,nj...->ni...", blocks, vectors[indices])
        return out
