# app/schemas/unitary.py
"""
Local Unitary Schemas

A coin file and a scattering file share one schema and differ only by the key
holding it:

    {"coin":  {"default": "grover", "overrides": {"0": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}}}
    {"gamma": {"default": "dft"}}

Override matrices are nested rows of [re, im] pairs.
"""

from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.unitaries import BuiltinUnitary, UnitaryRole

ComplexPair = Tuple[float, float]
ComplexMatrix = List[List[ComplexPair]]


def to_array(matrix: ComplexMatrix) -> np.ndarray:
    """Nested [re, im] rows -> complex array."""
    return np.array([[complex(re, im) for re, im in row] for row in matrix], dtype=np.complex128)


def to_pairs(matrix: np.ndarray) -> ComplexMatrix:
    return [[(float(z.real), float(z.imag)) for z in row] for row in np.asarray(matrix)]


class UnitaryConfig(BaseModel):
    """Builtin default for every node plus explicit per-node matrices."""
    default: BuiltinUnitary = Field(
        BuiltinUnitary.GROVER,
        description="Builtin used where no override is given",
        example="grover",
    )
    overrides: Dict[int, ComplexMatrix] = Field(
        default_factory=dict,
        description="Explicit matrices keyed by node, rows of [re, im] pairs",
    )
    seed: Optional[int] = Field(None, description="Seed of the 'random' builtin")

    model_config = ConfigDict(extra="forbid")

    @field_validator("default", mode="before")
    @classmethod
    def validate_default(cls, v):
        allowed = {b.value for b in BuiltinUnitary}
        if not isinstance(v, str) or v.lower() not in allowed:
            raise ValueError(f"default must be one of: {', '.join(sorted(allowed))}")
        return v.lower()

    @field_validator("overrides")
    @classmethod
    def validate_square(cls, v: Dict[int, ComplexMatrix]):
        for node, matrix in v.items():
            if any(len(row) != len(matrix) for row in matrix):
                raise ValueError(f"override for node {node} is not a square matrix")
        return v

    def override_arrays(self) -> Dict[int, np.ndarray]:
        return {node: to_array(matrix) for node, matrix in self.overrides.items()}


class UnitaryFile(BaseModel):
    """Exactly one of ``coin`` or ``gamma``."""
    coin: Optional[UnitaryConfig] = None
    gamma: Optional[UnitaryConfig] = None

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={"example": {"coin": {"default": "hadamard"}}},
    )

    @model_validator(mode="after")
    def exactly_one(self) -> "UnitaryFile":
        if (self.coin is None) == (self.gamma is None):
            raise ValueError("Unitary file must hold exactly one of 'coin' or 'gamma'")
        return self

    @property
    def role(self) -> UnitaryRole:
        return UnitaryRole.COIN if self.coin is not None else UnitaryRole.SCATTERING

    @property
    def config(self) -> UnitaryConfig:
        return self.coin if self.coin is not None else self.gamma
