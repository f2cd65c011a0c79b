# app/loaders.py
"""
JSON documents -> domain objects.

Reading and schema validation failures become ``ParseError`` so that every
malformed input ends up in the same exit category. Domain construction
(graphs, shift permutations, unitary families, states) raises its own errors.
"""

import json
import logging
from pathlib import Path
from typing import Any, Optional, Type, TypeVar, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from app.core.config import get_settings
from app.core.errors import ParseError
from app.models.graph import PortedGraph
from app.models.state import WalkModel, WalkState
from app.models.unitaries import LocalUnitaryFamily, UnitaryRole
from app.schemas.graph import GraphFile, LabelTable, MuFile, PhiFile
from app.schemas.state import InitialState
from app.schemas.unitary import UnitaryConfig, UnitaryFile

logger = logging.getLogger(__name__)

SchemaT = TypeVar("SchemaT", bound=BaseModel)


def read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise ParseError(f"File not found: {path}")
    except json.JSONDecodeError as e:
        raise ParseError(f"Malformed JSON in {path}: {e}")
    except UnicodeDecodeError as e:
        raise ParseError(f"{path} is not UTF-8 text: {e}")
    # directories, permissions
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e}")


def parse(schema: Type[SchemaT], data: Any, source: str = "input") -> SchemaT:
    """Validate ``data`` against ``schema``; schema errors become ParseError."""
    try:
        return schema.model_validate(data)
    except ValidationError as e:
        details = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or '<root>'}: {error['msg']}"
            for error in e.errors()
        )
        raise ParseError(f"Invalid {source}: {details}")


def load(schema: Type[SchemaT], path: Union[str, Path]) -> SchemaT:
    logger.debug(f"Loading {schema.__name__} from {path}")
    return parse(schema, read_json(path), str(path))


def load_graph_file(path: Union[str, Path]) -> GraphFile:
    return load(GraphFile, path)


def load_mu(path: Union[str, Path]) -> LabelTable:
    return load(MuFile, path).root


def load_phi(path: Union[str, Path]) -> LabelTable:
    return load(PhiFile, path).root


def load_unitary_file(path: Union[str, Path]) -> UnitaryFile:
    return load(UnitaryFile, path)


def load_initial(path: Union[str, Path]) -> InitialState:
    return load(InitialState, path)


# ------------------------------------------------------------------------------
# Schema -> domain
# ------------------------------------------------------------------------------
def family_from_config(
    graph: PortedGraph,
    config: UnitaryConfig,
    role: UnitaryRole,
    seed: Optional[int] = None,
) -> LocalUnitaryFamily:
    """
    Local matrices for every node of ``graph``. The 'random' builtin draws from
    the config seed, else ``seed``, else DEFAULT_SEED. Unitarity is not checked.
    """
    if config.seed is not None:
        seed = config.seed
    elif seed is None:
        seed = get_settings().DEFAULT_SEED
    return LocalUnitaryFamily.create(
        graph,
        role,
        config.default,
        config.override_arrays(),
        rng=np.random.default_rng(seed),
    )


def state_from_initial(graph: PortedGraph, initial: InitialState, model: WalkModel) -> WalkState:
    return WalkState.from_entries(graph, initial.entries(), model)
