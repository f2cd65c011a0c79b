"""
FastAPI Main Application Module

HTTP surface of the walk engine. Every endpoint takes the same JSON documents
as the command line files, inline in the request body:

- GET  /health              liveness
- POST /graphs/validate     build a graph document and report invariant violations
- POST /simulate            evolve a walk, distribution per step
- POST /equivalence         numerical check of U_s = E^H U_c E
- POST /cross-probability   native and cross-mapped distributions of one run

Engine errors are converted to HTTPException: parse and dimension errors give
400, numerical validation failures give 422.
"""

import logging
from contextlib import asynccontextmanager  # Logging setup in the lifespan hook

# FastAPI imports
from fastapi import FastAPI, HTTPException, status

# Application imports
from app.core.config import get_settings  # Log level and format
from app.core.errors import NumericalValidationError, WalkError  # Mapped to 422 and 400
from app.models.state import WalkModel
from app.operations.measurement import DistributionMode
# Shared with the command line: each endpoint is one pipeline call
from app.pipeline import (
    NATIVE_MODES,
    build_setup,
    check_graph_file,
    run_cross_probability,
    run_equivalence,
    run_simulation,
)
from app.schemas.graph import GraphFile
from app.schemas.report import ValidationReport
from app.schemas.simulation import (
    CrossProbabilityRequest,
    CrossProbabilityResponse,
    DistributionResponse,
    EquivalenceRequest,
    EquivalenceResponse,
    SimulateRequest,
)
from app.schemas.state import InitialState  # Request entries -> initial state document

logger = logging.getLogger(__name__)


# ------------------------------------------------------------------------------
# Logging setup on startup using the lifespan event
# ------------------------------------------------------------------------------
@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Configure logging from the settings when the server starts.

    Args:
        app: FastAPI application instance
    """
    settings = get_settings()
    logging.basicConfig(level=settings.LOG_LEVEL, format=settings.LOG_FORMAT)
    logger.info("Walk engine API starting")
    yield
    logger.info("Walk engine API stopped")


app = FastAPI(
    title="Quantum Walk API",
    description="Coin and scattering quantum walks on arbitrary graphs",
    version="1.0.0",
    lifespan=lifespan,
)


def to_http(e: WalkError) -> HTTPException:
    """
    Convert an engine error into an HTTP error carrying ``<category>: <message>``.

    Args:
        e: the engine error

    Returns:
        HTTPException: 422 for numerical validation failures, 400 otherwise
    """
    code = (
        status.HTTP_422_UNPROCESSABLE_ENTITY
        if isinstance(e, NumericalValidationError)
        else status.HTTP_400_BAD_REQUEST
    )
    return HTTPException(status_code=code, detail=f"{e.category}: {e}")


# ------------------------------------------------------------------------------
# Health Endpoint
# ------------------------------------------------------------------------------
@app.get("/health", tags=["health"])
def read_health():
    """Health check."""
    return {"status": "ok"}


# ------------------------------------------------------------------------------
# Graph Endpoints
# ------------------------------------------------------------------------------
@app.post("/graphs/validate", response_model=ValidationReport, tags=["graphs"])
def validate_graph_document(graph: GraphFile):
    """
    Build the graph document and check every labeling invariant.

    Args:
        graph: edges plus optional port, mu and phi tables

    Returns:
        ValidationReport: violations found after construction (empty when valid)

    Raises:
        HTTPException: 400 when the document cannot be built at all
    """
    try:
        return check_graph_file(graph)
    except WalkError as e:
        raise to_http(e)


# ------------------------------------------------------------------------------
# Walk Endpoints
# ------------------------------------------------------------------------------
@app.post("/simulate", response_model=DistributionResponse, tags=["walks"])
def simulate(request: SimulateRequest):
    """
    Evolve the initial state and return the distribution at steps 0..n.

    Args:
        request: graph, model, unitaries, initial entries, step count and mode

    Returns:
        DistributionResponse: one label -> probability map per step

    Raises:
        HTTPException: 400 for invalid input, 422 for a non-unitary matrix or a bad norm
    """
    mode = request.mode or NATIVE_MODES[request.model]
    try:
        setup = build_setup(request.graph)
        steps = run_simulation(
            setup,
            request.model,
            request.unitaries,
            InitialState(request.initial),
            request.steps,
            mode=mode,
            seed=request.seed,
        )
    except WalkError as e:
        raise to_http(e)
    return DistributionResponse(model=request.model, mode=mode, steps=steps)


@app.post("/cross-probability", response_model=CrossProbabilityResponse, tags=["walks"])
def cross_probability(request: CrossProbabilityRequest):
    """One evolution, native and cross-mapped distributions side by side."""
    try:
        setup = build_setup(request.graph, phi=request.phi)
        result = run_cross_probability(
            setup,
            request.model,
            request.unitaries,
            InitialState(request.initial),
            request.steps,
            seed=request.seed,
        )
    except WalkError as e:
        raise to_http(e)
    native = NATIVE_MODES[WalkModel(request.model)]
    return CrossProbabilityResponse(
        native=DistributionResponse(model=request.model, mode=native, steps=result.steps(native)),
        cross=DistributionResponse(model=request.model, mode=DistributionMode.CROSS,
                                   steps=result.steps(DistributionMode.CROSS)),
    )


@app.post("/equivalence", response_model=EquivalenceResponse, tags=["equivalence"])
def equivalence(request: EquivalenceRequest):
    """
    Report of the equivalence check. A failed check is still a 200 response
    with ``passed`` false; only invalid input is an error.

    Args:
        request: graph, coin document, optional gamma document and check parameters

    Returns:
        EquivalenceResponse: dense, sparse and spectral deviations with the verdict
    """
    try:
        setup = build_setup(request.graph)
        report = run_equivalence(
            setup,
            request.coin,
            request.gamma,
            tolerance=request.tolerance,
            cap=request.dense_cap,
            trials=request.trials,
            seed=request.seed,
        )
    except WalkError as e:
        raise to_http(e)
    return EquivalenceResponse(report=report)


# ------------------------------------------------------------------------------
# Main Block to Run the Server
# ------------------------------------------------------------------------------
if __name__ == "__main__":
    import uvicorn
    uvicorn.run("app.main:app", host="127.0.0.1", port=8001, log_level="info")
