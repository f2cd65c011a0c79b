# app/schemas/report.py
"""
Report Schemas

Reports produced by the checks of the engine. They are plain pydantic models so
they serialize straight to the JSON report files and HTTP responses.
"""

from typing import List, Optional
from pydantic import BaseModel, ConfigDict, Field, computed_field


class Violation(BaseModel):
    """One broken ported-graph invariant."""
    node: Optional[int] = Field(None, description="Node where the rule fails", example=0)
    port: Optional[int] = Field(None, description="Port where the rule fails", example=1)
    rule: str = Field(..., description="Name of the broken rule", example="involution")
    detail: str = Field("", description="Human readable explanation")

    model_config = ConfigDict(frozen=True)


class ValidationReport(BaseModel):
    """Result of validating a ported graph; empty when the graph is well formed."""
    violations: List[Violation] = Field(default_factory=list)

    @computed_field
    @property
    def valid(self) -> bool:
        return not self.violations

    def names(self, node: int, port: int) -> bool:
        """True when some violation is located at (node, port)."""
        return any(v.node == node and v.port == port for v in self.violations)


class DecompositionReport(BaseModel):
    """Comparison of U_c against S (C ⊗ I) on a regular graph."""
    degree: int = Field(..., description="Common degree N of the regular graph")
    nodes: int = Field(..., description="Number of nodes")
    max_deviation: float = Field(..., description="Largest entrywise deviation")
    tolerance: float
    passed: bool


class EquivalenceReport(BaseModel):
    """
    Numerical check of U_s = E^H U_c E.

    ``dense_deviation`` is only present when the dimension is within the dense cap;
    ``spectral_deviation`` compares optimally matched eigenvalues of both operators.
    """
    dimension: int
    dense_deviation: Optional[float] = None
    sparse_deviation: float
    spectral_deviation: Optional[float] = None
    gamma_unitarity_deviation: Optional[float] = None
    trials: int
    seed: int
    tolerance: float
    spectral_tolerance: float
    passed: bool

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "dimension": 6,
                "dense_deviation": 0.0,
                "sparse_deviation": 2.2e-16,
                "spectral_deviation": 4.4e-16,
                "gamma_unitarity_deviation": None,
                "trials": 200,
                "seed": 0,
                "tolerance": 1e-12,
                "spectral_tolerance": 1e-10,
                "passed": True,
            }
        }
    )
