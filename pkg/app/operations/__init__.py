# app/operations/__init__.py
"""
Walk operations: evolution in both pictures, the equivalence between them, and
measurement.

- coin_walk: U_c = S C, its adjoint, the dense oracle and the regular-graph
  decomposition check
- scattering_walk: U_s = R + T, its adjoint and the dense oracle
- equivalence: the label bijections, E, the Gamma/coin correspondence and the
  numerical verification of U_s = E^H U_c E
- measurement: projectors, probabilities and distributions, including the
  projectors carried across E
"""

from .coin_walk import (
    CoinWalkOperator,
    apply_coin,
    apply_shift,
    apply_shift_adjoint,
    dense_matrix,
    step_coin,
    step_coin_adjoint,
    tensor_decomposition_check,
)
from .scattering_walk import (
    ScatteringWalkOperator,
    dense_matrix_s,
    step_scattering,
    step_scattering_adjoint,
)
from .equivalence import (
    EdgeLabelBijection,
    EquivalenceMap,
    apply_E,
    apply_E_adjoint,
    build_equivalence,
    build_phi,
    coin_from_gamma,
    gamma_from_coin,
    infer_edge_bijection,
    spectral_distance,
    verify_equivalence,
)
from .measurement import (
    DistributionMode,
    Projector,
    ProjectorKind,
    cross_projector_c_in_s,
    cross_projector_s_in_c,
    distribution,
    probability,
    projector_coin,
    projector_family,
    projector_scattering,
)

__all__ = [
    'CoinWalkOperator',
    'apply_coin',
    'apply_shift',
    'apply_shift_adjoint',
    'dense_matrix',
    'step_coin',
    'step_coin_adjoint',
    'tensor_decomposition_check',
    'ScatteringWalkOperator',
    'dense_matrix_s',
    'step_scattering',
    'step_scattering_adjoint',
    'EdgeLabelBijection',
    'EquivalenceMap',
    'apply_E',
    'apply_E_adjoint',
    'build_equivalence',
    'build_phi',
    'coin_from_gamma',
    'gamma_from_coin',
    'infer_edge_bijection',
    'spectral_distance',
    'verify_equivalence',
    'DistributionMode',
    'Projector',
    'ProjectorKind',
    'cross_projector_c_in_s',
    'cross_projector_s_in_c',
    'distribution',
    'probability',
    'projector_coin',
    'projector_family',
    'projector_scattering',
]
