# app/pipeline.py
"""
Runs shared by the command line and the HTTP API.

A ``WalkSetup`` is the validated topology of one run: the coin labeling, the
scattering labeling, the shift permutation and the edge map. Scattering runs
always evolve in the relabeled scattering basis of the equivalence map; their
edge labels are reported in the scattering labeling as given.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence

from app.core.config import get_settings
from app.core.errors import EquivalenceFailure, ParseError
from app.models.graph import (
    PortedGraph,
    ShiftPermutation,
    build_graph,
    custom_shift_permutation,
    default_shift_permutation,
    validate_graph,
)
from app.models.state import WalkModel, WalkState
from app.models.unitaries import LocalUnitaryFamily, UnitaryRole
from app.loaders import family_from_config, state_from_initial
from app.operations.coin_walk import CoinWalkOperator, step_coin
from app.operations.equivalence import (
    EdgeLabelBijection,
    EquivalenceMap,
    build_equivalence,
    gamma_from_coin,
    verify_equivalence,
)
from app.operations.measurement import DistributionMode, distribution
from app.operations.scattering_walk import step_scattering
from app.schemas.graph import GraphFile, LabelTable
from app.schemas.report import EquivalenceReport, ValidationReport
from app.schemas.state import InitialState
from app.schemas.unitary import UnitaryFile

logger = logging.getLogger(__name__)

Distribution = Dict[str, float]

NATIVE_MODES = {
    WalkModel.COIN: DistributionMode.COIN_NODES,
    WalkModel.SCATTERING: DistributionMode.SCATTERING_EDGES,
}


# ------------------------------------------------------------------------------
# Setup
# ------------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class WalkSetup:
    coin_graph: PortedGraph
    scattering_graph: PortedGraph
    perm: ShiftPermutation
    varphi: Optional[EdgeLabelBijection] = None

    @cached_property
    def emap(self) -> EquivalenceMap:
        return build_equivalence(self.coin_graph, self.perm, self.scattering_graph, self.varphi)


def build_setup(
    graph_file: GraphFile,
    mu: Optional[LabelTable] = None,
    phi: Optional[LabelTable] = None,
) -> WalkSetup:
    """
    Build both labelings, the shift and the edge map. ``mu``/``phi`` replace the
    tables of the graph file when given.
    """
    coin_graph = build_graph(graph_file.edges, graph_file.ports)
    scattering_graph = (
        build_graph(graph_file.edges, graph_file.scattering_ports)
        if graph_file.scattering_ports is not None
        else coin_graph
    )
    mu = mu if mu is not None else graph_file.mu
    perm = custom_shift_permutation(coin_graph, mu) if mu else default_shift_permutation(coin_graph)
    phi = phi if phi is not None else graph_file.phi
    varphi = EdgeLabelBijection.from_table(scattering_graph, phi) if phi else None
    setup = WalkSetup(coin_graph, scattering_graph, perm, varphi)
    logger.info(f"Setup: {coin_graph!r}, flip-flop shift={perm.is_flip_flop}, "
                f"distinct scattering labeling={scattering_graph != coin_graph}")
    return setup


def check_graph_file(graph_file: GraphFile) -> ValidationReport:
    """
    Build everything the graph file describes and report invariant violations
    of both labelings. Construction errors propagate.
    """
    setup = build_setup(graph_file)
    # phi is checked against both labelings when the map is built
    build_equivalence(setup.coin_graph, setup.perm, setup.scattering_graph, setup.varphi)
    violations = list(validate_graph(setup.coin_graph).violations)
    if setup.scattering_graph is not setup.coin_graph:
        violations += validate_graph(setup.scattering_graph).violations
    return ValidationReport(violations=violations)


# ------------------------------------------------------------------------------
# Evolution
# ------------------------------------------------------------------------------
@dataclass
class RunResult:
    model: WalkModel
    distributions: Dict[DistributionMode, List[Distribution]] = field(default_factory=dict)
    final_state: Optional[WalkState] = None

    def steps(self, mode: DistributionMode) -> List[Distribution]:
        return self.distributions[DistributionMode(mode)]


def _family(setup: WalkSetup, model: WalkModel, unitary_file: UnitaryFile, seed: Optional[int],
            tolerance: float) -> LocalUnitaryFamily:
    expected = UnitaryRole.COIN if model == WalkModel.COIN else UnitaryRole.SCATTERING
    if unitary_file.role != expected:
        key = "coin" if expected == UnitaryRole.COIN else "gamma"
        raise ParseError(f"A {model.value} run needs a unitary file under the '{key}' key")
    graph = setup.coin_graph if model == WalkModel.COIN else setup.scattering_graph
    return family_from_config(graph, unitary_file.config, expected, seed).check_unitary(tolerance)


def evolve(
    setup: WalkSetup,
    model: WalkModel,
    unitary_file: UnitaryFile,
    initial: InitialState,
    steps: int,
    modes: Sequence[DistributionMode],
    seed: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> RunResult:
    """
    Evolve the initial state ``steps`` times and record the distribution of
    every requested mode at steps 0..n.

    Raises:
        ParseError: wrong unitary key, bad initial entries
        UnitarityViolation: a local matrix is not unitary
        NormViolation: initial state norm too far from 1
        ModeMismatch: a mode that does not apply to the model
    """
    tolerance = get_settings().TOLERANCE if tolerance is None else tolerance
    model = WalkModel(model)
    modes = [DistributionMode(mode) for mode in modes]
    family = _family(setup, model, unitary_file, seed, tolerance)

    if model == WalkModel.COIN:
        op = CoinWalkOperator(setup.perm, family)
        state = state_from_initial(setup.coin_graph, initial, model)
        step = step_coin
    else:
        op = setup.emap.scattering_operator(setup.emap.relabel_family(family))
        state = setup.emap.relabel_state(state_from_initial(setup.scattering_graph, initial, model))
        step = step_scattering

    needs_map = model == WalkModel.SCATTERING or DistributionMode.CROSS in modes
    emap = setup.emap if needs_map else None

    result = RunResult(model, {mode: [] for mode in modes})
    for n in range(steps + 1):
        if n:
            state = step(state, op)
        for mode in modes:
            result.distributions[mode].append(distribution(state, mode, emap))
    result.final_state = state
    logger.info(f"Evolved {model.value} walk for {steps} steps, final norm {state.norm()!r}")
    return result


def run_simulation(
    setup: WalkSetup,
    model: WalkModel,
    unitary_file: UnitaryFile,
    initial: InitialState,
    steps: int,
    mode: Optional[DistributionMode] = None,
    seed: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> List[Distribution]:
    mode = NATIVE_MODES[WalkModel(model)] if mode is None else DistributionMode(mode)
    return evolve(setup, model, unitary_file, initial, steps, [mode], seed, tolerance).steps(mode)


def run_cross_probability(
    setup: WalkSetup,
    model: WalkModel,
    unitary_file: UnitaryFile,
    initial: InitialState,
    steps: int,
    seed: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> RunResult:
    """One evolution, native and cross distributions recorded side by side."""
    native = NATIVE_MODES[WalkModel(model)]
    return evolve(setup, model, unitary_file, initial, steps, [native, DistributionMode.CROSS], seed, tolerance)


# ------------------------------------------------------------------------------
# Equivalence
# ------------------------------------------------------------------------------
def run_equivalence(
    setup: WalkSetup,
    coin_file: UnitaryFile,
    gamma_file: Optional[UnitaryFile] = None,
    tolerance: Optional[float] = None,
    cap: Optional[int] = None,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
) -> EquivalenceReport:
    """
    Check U_s = E^H U_c E. Gamma comes from ``gamma_file`` (scattering labeling
    as given, unitarity recorded rather than rejected) or from the coins.
    """
    settings = get_settings()
    tolerance = settings.TOLERANCE if tolerance is None else tolerance
    emap = setup.emap
    coins = _family(setup, WalkModel.COIN, coin_file, seed, tolerance)
    coin_op = CoinWalkOperator(setup.perm, coins)

    gamma_deviation = None
    if gamma_file is not None:
        if gamma_file.role != UnitaryRole.SCATTERING:
            raise ParseError("The gamma document must use the 'gamma' key")
        supplied = family_from_config(setup.scattering_graph, gamma_file.config, UnitaryRole.SCATTERING, seed)
        gammas = emap.relabel_family(supplied)
        gamma_deviation = gammas.max_unitarity_deviation()
    else:
        gammas = gamma_from_coin(coins, emap)

    report = verify_equivalence(
        coin_op,
        emap.scattering_operator(gammas),
        emap,
        trials=trials,
        seed=seed,
        tolerance=tolerance,
        cap=cap,
    )
    if gamma_deviation is not None:
        report = report.model_copy(update={
            "gamma_unitarity_deviation": gamma_deviation,
            "passed": report.passed and gamma_deviation < tolerance,
        })
    return report


def require_passed(report: EquivalenceReport) -> EquivalenceReport:
    """Raise EquivalenceFailure with the worst deviation of a failed report."""
    if not report.passed:
        deviations = [d for d in (report.dense_deviation, report.sparse_deviation,
                                  report.gamma_unitarity_deviation) if d is not None]
        raise EquivalenceFailure(max(deviations), report.tolerance)
    return report
