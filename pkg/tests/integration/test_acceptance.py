"""
End-to-end properties of the engine on seeded random graphs and the standard
fixtures: unitarity, the equivalence U_s = E^H U_c E, exact coefficient round
trips, probability conservation and the structural identities of the labelings.
"""

import numpy as np
import pytest

from app.models.graph import build_graph, custom_shift_permutation, default_shift_permutation, validate_graph
from app.models.state import WalkState
from app.models.unitaries import LocalUnitaryFamily, UnitaryRole
from app.operations.coin_walk import CoinWalkOperator, dense_matrix, step_coin, tensor_decomposition_check
from app.operations.equivalence import build_equivalence, coin_from_gamma, gamma_from_coin, verify_equivalence
from app.operations.measurement import DistributionMode, projector_family
from app.operations.scattering_walk import ScatteringWalkOperator, dense_matrix_s
from tests.conftest import (
    IRREGULAR10,
    K4,
    PATH3,
    SINGLE_EDGE,
    TRIANGLE,
    cycle_edges,
    erdos_renyi_edges,
    erdos_renyi_graphs,
    random_family,
    random_mu_table,
    star_edges,
)

RANDOM_GRAPHS = erdos_renyi_graphs(20)
FIXTURES = [SINGLE_EDGE, PATH3, TRIANGLE, cycle_edges(8), star_edges(4), K4, IRREGULAR10]


def max_unitarity_deviation(m: np.ndarray) -> float:
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def test_dense_operators_are_unitary():
    rng = np.random.default_rng(100)
    for graph in RANDOM_GRAPHS:
        coin_op = CoinWalkOperator(default_shift_permutation(graph), random_family(graph, rng))
        scat_op = ScatteringWalkOperator(graph, random_family(graph, rng, UnitaryRole.SCATTERING))
        assert max_unitarity_deviation(dense_matrix(coin_op)) < 1e-12
        assert max_unitarity_deviation(dense_matrix_s(scat_op)) < 1e-12


@pytest.mark.parametrize("landing", ["flip_flop", "random"], ids=["flip_flop", "random_mu"])
def test_equivalence_on_random_graphs(landing: str):
    rng = np.random.default_rng(200)
    for graph in RANDOM_GRAPHS:
        perm = (
            default_shift_permutation(graph)
            if landing == "flip_flop"
            else custom_shift_permutation(graph, random_mu_table(graph, rng))
        )
        emap = build_equivalence(graph, perm)
        coins = random_family(graph, rng)
        coin_op = CoinWalkOperator(perm, coins)
        scat_op = emap.scattering_operator(gamma_from_coin(coins, emap))
        report = verify_equivalence(coin_op, scat_op, emap, trials=20)
        assert report.dense_deviation < 1e-12, graph
        assert report.passed


def test_coefficient_round_trip_is_exact():
    rng = np.random.default_rng(300)
    for graph in RANDOM_GRAPHS + [build_graph(edges) for edges in FIXTURES]:
        emap = build_equivalence(graph, custom_shift_permutation(graph, random_mu_table(graph, rng)))
        coins = random_family(graph, rng)
        back = coin_from_gamma(gamma_from_coin(coins, emap), emap)
        assert all(np.array_equal(back[node], coins[node]) for node in graph.nodes)


def test_probability_is_conserved_for_1000_steps():
    graph = build_graph(cycle_edges(8))
    op = CoinWalkOperator(default_shift_permutation(graph), LocalUnitaryFamily.create(graph, UnitaryRole.COIN, "dft"))
    state = WalkState.basis(graph, 0, 1)
    for _ in range(1000):
        state = step_coin(state, op)
        assert abs(float(np.sum(state.probabilities())) - 1.0) < 1e-12


@pytest.mark.parametrize(
    "edges, default",
    [(cycle_edges(4), "hadamard"), (K4, "grover")],
    ids=["c4_hadamard", "k4_grover"]
)
def test_regular_graph_decomposition(edges, default: str):
    graph = build_graph(edges)
    op = CoinWalkOperator(default_shift_permutation(graph), LocalUnitaryFamily.create(graph, UnitaryRole.COIN, default))
    assert tensor_decomposition_check(op).max_deviation < 1e-12


def test_structural_identities_hold_exactly():
    rng = np.random.default_rng(400)
    for graph in [build_graph(edges) for edges in FIXTURES] + RANDOM_GRAPHS:
        assert validate_graph(graph).valid
        perm = custom_shift_permutation(graph, random_mu_table(graph, rng))
        assert perm.identity_violations() == []
        emap = build_equivalence(graph, perm)
        e = emap.matrix().real
        assert np.array_equal(e @ e.T, np.eye(graph.dimension))

        coin = WalkState.basis(graph, graph.nodes[0], 1)
        covered = sorted(i for p in projector_family(coin, DistributionMode.COIN_NODES) for i in p.indices)
        assert covered == list(range(graph.dimension))


@pytest.mark.slow
def test_sparse_equivalence_above_dense_cap():
    rng = np.random.default_rng(500)
    graph = build_graph(erdos_renyi_edges(400, 0.03, seed=500))
    assert graph.dimension > 4096
    emap = build_equivalence(graph, custom_shift_permutation(graph, random_mu_table(graph, rng)))
    coins = random_family(graph, rng)
    report = verify_equivalence(CoinWalkOperator(emap.perm, coins),
                                emap.scattering_operator(gamma_from_coin(coins, emap)), emap)
    assert report.dense_deviation is None
    assert report.passed
