# app/schemas/graph.py
"""
Graph File Schemas

The graph file holds the edge list and, optionally, the port orders of the coin
and scattering labelings, the landing-port table mu and the edge map varphi:

    {
      "edges": [[0, 1], [0, 2], [1, 2]],
      "ports": {"0": [2, 1]},
      "scattering_ports": {"1": [2, 0]},
      "mu": {"1": {"1": 2}},
      "phi": {"0": {"1": 2, "2": 1}}
    }

Tables keyed by node accept JSON string keys; pydantic coerces them to ints.
Topological checks (self-loops, duplicates, port permutations) are left to the
graph builder so that they raise the domain errors.
"""

from typing import Any, ClassVar, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, RootModel, field_validator, model_validator

PortTable = Dict[int, List[int]]
LabelTable = Dict[int, Dict[int, int]]


class GraphFile(BaseModel):
    """Edge list plus optional labeling data."""
    edges: List[Tuple[int, int]] = Field(
        ...,
        description="Unordered node pairs",
        example=[[0, 1], [0, 2], [1, 2]],
    )
    ports: Optional[PortTable] = Field(
        None,
        description="Coin labeling: neighbors of a node in port order (ascending ids when absent)",
        example={0: [2, 1]},
    )
    scattering_ports: Optional[PortTable] = Field(
        None,
        description="Scattering labeling when it differs from the coin labeling",
    )
    mu: Optional[LabelTable] = Field(
        None,
        description="Landing port table {node: {port: label}}; flip-flop when absent",
    )
    phi: Optional[LabelTable] = Field(
        None,
        description="Scattering port -> coin port of the same edge {node: {port: port}}",
    )

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "edges": [[0, 1], [0, 2], [1, 2]],
                "mu": {1: {1: 2}, 2: {1: 1}},
            }
        },
    )

    @field_validator("edges", mode="before")
    @classmethod
    def check_edges_is_list(cls, v: Any):
        if not isinstance(v, list):
            raise ValueError("edges should be a list of node pairs")
        return v


class _TableFile(RootModel[LabelTable]):
    """A {node: {port: label}} table, optionally wrapped under its own key."""
    wrapper_key: ClassVar[str] = ""

    @model_validator(mode="before")
    @classmethod
    def unwrap(cls, data: Any):
        if isinstance(data, dict) and set(data) == {cls.wrapper_key}:
            return data[cls.wrapper_key]
        return data


class MuFile(_TableFile):
    wrapper_key: ClassVar[str] = "mu"


class PhiFile(_TableFile):
    wrapper_key: ClassVar[str] = "phi"
