# app/schemas/state.py
"""Initial state file: a list of {"node": j, "port": sigma, "amp": [re, im]} entries."""

from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, RootModel, field_validator


class AmplitudeEntry(BaseModel):
    node: int = Field(..., description="Node id", example=0)
    port: int = Field(..., description="Port label at the node", example=1)
    amp: Tuple[float, float] = Field(..., description="Amplitude as [re, im]", example=[1.0, 0.0])

    model_config = ConfigDict(extra="forbid")

    @property
    def amplitude(self) -> complex:
        return complex(*self.amp)


class InitialState(RootModel[List[AmplitudeEntry]]):

    @field_validator("root")
    @classmethod
    def not_empty(cls, v: List[AmplitudeEntry]):
        if not v:
            raise ValueError("Initial state needs at least one amplitude entry")
        return v

    def entries(self) -> List[Tuple[int, int, complex]]:
        return [(entry.node, entry.port, entry.amplitude) for entry in self.root]
