# app/schemas/simulation.py
"""
Run Configuration Schemas

``SimulationConfig`` collects the file paths and options of one command line
run. The request models carry the same documents inline for the HTTP API.
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, FilePath, field_validator

from app.models.state import WalkModel
from app.operations.measurement import DistributionMode
from app.schemas.graph import GraphFile, LabelTable
from app.schemas.report import EquivalenceReport
from app.schemas.state import AmplitudeEntry
from app.schemas.unitary import UnitaryFile


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class SimulationConfig(BaseModel):
    """Everything a simulate or cross-prob run reads from disk."""
    graph: FilePath = Field(..., description="Graph file")
    model: WalkModel = Field(WalkModel.COIN, description="Walk picture to evolve")
    unitaries: FilePath = Field(..., description="Coin or gamma file; its key must match the model")
    mu: Optional[FilePath] = Field(None, description="Landing port table, overrides the graph file")
    phi: Optional[FilePath] = Field(None, description="Edge map table, overrides the graph file")
    initial: FilePath = Field(..., description="Initial state file")
    steps: int = Field(0, ge=0, description="Number of steps n")
    format: OutputFormat = Field(OutputFormat.CSV, description="Distribution file format")
    mode: Optional[DistributionMode] = Field(None, description="Distribution mode; native mode of the model when absent")
    seed: Optional[int] = Field(None, description="Seed of any randomized builtin; DEFAULT_SEED when absent")
    tolerance: Optional[float] = Field(None, gt=0, description="Unitarity tolerance; TOLERANCE when absent")

    model_config = ConfigDict(extra="forbid")


class EquivalenceConfig(BaseModel):
    """Inputs of an equivalence check."""
    graph: FilePath
    coin: FilePath
    gamma: Optional[FilePath] = None
    mu: Optional[FilePath] = None
    phi: Optional[FilePath] = None
    tolerance: Optional[float] = Field(None, gt=0)
    dense_cap: Optional[int] = Field(None, ge=0)
    trials: Optional[int] = Field(None, ge=0)
    seed: Optional[int] = None

    model_config = ConfigDict(extra="forbid")


# ------------------------------------------------------------------------------
# HTTP requests / responses
# ------------------------------------------------------------------------------
class SimulateRequest(BaseModel):
    graph: GraphFile
    model: WalkModel = WalkModel.COIN
    unitaries: UnitaryFile
    initial: List[AmplitudeEntry] = Field(..., min_length=1)
    steps: int = Field(0, ge=0, le=100_000)
    mode: Optional[DistributionMode] = None
    seed: int = 0

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "graph": {"edges": [[0, 1], [1, 2], [2, 0]]},
                "model": "coin",
                "unitaries": {"coin": {"default": "grover"}},
                "initial": [{"node": 0, "port": 1, "amp": [1.0, 0.0]}],
                "steps": 3,
            }
        }
    )


class CrossProbabilityRequest(SimulateRequest):
    phi: Optional[LabelTable] = None


class EquivalenceRequest(BaseModel):
    graph: GraphFile
    coin: UnitaryFile
    gamma: Optional[UnitaryFile] = None
    tolerance: Optional[float] = Field(None, gt=0)
    dense_cap: Optional[int] = Field(None, ge=0)
    trials: Optional[int] = Field(None, ge=0, le=10_000)
    seed: Optional[int] = None

    @field_validator("gamma")
    @classmethod
    def gamma_key(cls, v: Optional[UnitaryFile]):
        if v is not None and v.gamma is None:
            raise ValueError("gamma document must use the 'gamma' key")
        return v

    @field_validator("coin")
    @classmethod
    def coin_key(cls, v: UnitaryFile):
        if v.coin is None:
            raise ValueError("coin document must use the 'coin' key")
        return v


class DistributionResponse(BaseModel):
    model: WalkModel
    mode: DistributionMode
    steps: List[Dict[str, float]] = Field(..., description="Distribution per step, step 0 first")


class CrossProbabilityResponse(BaseModel):
    native: DistributionResponse
    cross: DistributionResponse


class EquivalenceResponse(BaseModel):
    report: EquivalenceReport
