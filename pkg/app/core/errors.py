# app/core/errors.py
"""
Exception hierarchy for the walk engine.

Every failure raised by the engine is a ``WalkError`` (itself a ``ValueError``, so
callers that only know about ``ValueError`` keep working). Each class carries:

- ``category``: the message category printed by the command line
- ``exit_code``: the process exit status for that category

Exit codes: 2 parse/config errors, 3 numerical validation failures,
4 dimension errors.
"""

from typing import Any, Optional, Sequence, Tuple


class WalkError(ValueError):
    """Base class of all engine errors."""
    category = "WalkError"
    exit_code = 2


# ------------------------------------------------------------------------------
# Parse / configuration errors (exit 2)
# ------------------------------------------------------------------------------
class ParseError(WalkError):
    category = "ParseError"
    exit_code = 2


class SelfLoop(ParseError):
    def __init__(self, node: int):
        self.node = node
        super().__init__(f"Self-loop at node {node}")


class DuplicateEdge(ParseError):
    def __init__(self, edge: Tuple[int, int]):
        self.edge = edge
        super().__init__(f"Duplicate edge {edge}")


class EmptyGraph(ParseError):
    def __init__(self):
        super().__init__("Graph has no edges")


class PortTableMismatch(ParseError):
    def __init__(self, node: int, detail: str):
        self.node = node
        super().__init__(f"Port table of node {node} does not match the edge list: {detail}")


class UnknownNode(ParseError):
    def __init__(self, node: Any):
        self.node = node
        super().__init__(f"Unknown node {node}")


class PortOutOfRange(ParseError):
    def __init__(self, node: int, port: Any, degree: int):
        self.node = node
        self.port = port
        self.degree = degree
        super().__init__(f"Port {port} out of range 1..{degree} at node {node}")


class RangeViolated(ParseError):
    def __init__(self, node: int, port: int, value: Any, degree: int):
        self.node = node
        self.port = port
        self.value = value
        super().__init__(
            f"mu({port};{node}) = {value} is not a port of the neighbor (range 1..{degree})"
        )


class RestrictionViolated(ParseError):
    def __init__(self, node: int, labels: Sequence[int]):
        self.node = node
        self.labels = tuple(labels)
        super().__init__(
            f"Incoming shift labels at node {node} are {sorted(self.labels)}, "
            f"not a permutation of its ports"
        )


class NotBijective(ParseError):
    def __init__(self, node: int, images: Sequence[int]):
        self.node = node
        self.images = tuple(images)
        super().__init__(f"Label map at node {node} is not a bijection of its ports: {list(images)}")


class EdgeSetMismatch(ParseError):
    def __init__(self, missing: Sequence[Tuple[int, int]], extra: Sequence[Tuple[int, int]]):
        self.missing = tuple(missing)
        self.extra = tuple(extra)
        super().__init__(
            f"Coin and scattering labelings cover different edges "
            f"(only in coin: {list(missing)}, only in scattering: {list(extra)})"
        )


class NotSameEdge(ParseError):
    def __init__(self, node: int, port: int, expected: int, actual: int):
        self.node = node
        self.port = port
        super().__init__(
            f"Edge map sends scattering port {port} of node {node} (toward {expected}) "
            f"to a coin port toward {actual}"
        )


class NotRegular(ParseError):
    def __init__(self, degrees: Sequence[int]):
        self.degrees = tuple(sorted(set(degrees)))
        super().__init__(f"Graph is not regular (degrees {list(self.degrees)})")


class NonUniformCoin(ParseError):
    def __init__(self, node: int):
        self.node = node
        super().__init__(f"Local unitary at node {node} differs from the common matrix")


class ModeMismatch(ParseError):
    def __init__(self, mode: str, model: str):
        self.mode = mode
        self.model = model
        super().__init__(f"Distribution mode '{mode}' is not available for a {model} state")


class ModelMismatch(ParseError):
    def __init__(self, expected: str, actual: str):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Expected a {expected} state, got a {actual} state")


class LabelingMismatch(ParseError):
    """Same dimension, different port tables."""
    def __init__(self, model: str):
        self.model = model
        super().__init__(f"The {model} state uses a different port labeling than the operator")


# ------------------------------------------------------------------------------
# Numerical validation failures (exit 3)
# ------------------------------------------------------------------------------
class NumericalValidationError(WalkError):
    category = "NumericalValidationError"
    exit_code = 3


class UnitarityViolation(NumericalValidationError):
    category = "UnitarityViolation"

    def __init__(self, node: int, deviation: float, tolerance: float):
        self.node = node
        self.deviation = deviation
        super().__init__(
            f"Local matrix at node {node} is not unitary "
            f"(max |M^H M - I| = {deviation:.3e}, tolerance {tolerance:.0e})"
        )


class NormViolation(NumericalValidationError):
    def __init__(self, norm: float, tolerance: float):
        self.norm = norm
        super().__init__(f"State norm {norm!r} deviates from 1 by more than {tolerance:.0e}")


class EquivalenceFailure(NumericalValidationError):
    def __init__(self, deviation: float, tolerance: float):
        self.deviation = deviation
        super().__init__(f"U_s and E^H U_c E differ by {deviation:.3e} (tolerance {tolerance:.0e})")


# ------------------------------------------------------------------------------
# Dimension errors (exit 4)
# ------------------------------------------------------------------------------
class DimensionError(WalkError):
    category = "DimensionMismatch"
    exit_code = 4


class DimensionMismatch(DimensionError):
    def __init__(self, expected: Any, actual: Any, node: Optional[int] = None):
        self.expected = expected
        self.actual = actual
        self.node = node
        where = f" at node {node}" if node is not None else ""
        super().__init__(f"Dimension mismatch{where}: expected {expected}, got {actual}")


class DimensionCapExceeded(DimensionError):
    def __init__(self, dimension: int, cap: int):
        self.dimension = dimension
        self.cap = cap
        super().__init__(f"Dimension {dimension} exceeds the dense cap {cap}")
