"""
Network Models

Matrix-weighted signed graphs, node partitions and the augmented systems
built on top of them.
"""

from .graph import EdgeSign, MatrixWeightedSignedGraph, WeightedEdge, check_compatible, make_edge, union_graph
from .partition import (
    CharacteristicMatrix,
    EpViolation,
    EpWitness,
    Partition,
    cell_degree,
    characteristic_matrix,
    coarsest_common_ep,
    coarsest_ep,
    is_equitable,
    join,
    join_all,
    leader_partition,
    meet,
    quotient_laplacian,
    sign_class_sums,
)
from .system import (
    AugmentedSystem,
    Dynamics,
    HeterogeneousDynamics,
    SwitchingFamily,
    SystemVariant,
    assemble_fixed,
    assemble_heterogeneous,
    assemble_switching,
    assemble_union,
    dualize,
    leader_selector,
    lifted_characteristic,
)

__all__ = [
    'AugmentedSystem',
    'CharacteristicMatrix',
    'Dynamics',
    'EdgeSign',
    'EpViolation',
    'EpWitness',
    'HeterogeneousDynamics',
    'MatrixWeightedSignedGraph',
    'Partition',
    'SwitchingFamily',
    'SystemVariant',
    'WeightedEdge',
    'assemble_fixed',
    'assemble_heterogeneous',
    'assemble_switching',
    'assemble_union',
    'cell_degree',
    'characteristic_matrix',
    'check_compatible',
    'coarsest_common_ep',
    'coarsest_ep',
    'dualize',
    'is_equitable',
    'join',
    'join_all',
    'leader_partition',
    'leader_selector',
    'lifted_characteristic',
    'make_edge',
    'meet',
    'quotient_laplacian',
    'sign_class_sums',
    'union_graph',
]
