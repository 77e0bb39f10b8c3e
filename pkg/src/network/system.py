"""
Augmented Systems

Assembles the stacked state matrices L~ and input matrices M~ of networked
linear agents for fixed, heterogeneous, switching and union topologies, and
the transposed system used for observability.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, List, Optional, Sequence, Tuple

from linalg import BaseBackend
from utils.errors import DimensionMismatchError, GraphCompatibilityError
from .graph import MatrixWeightedSignedGraph, check_compatible, union_graph
from .partition import CharacteristicMatrix

logger = logging.getLogger(__name__)


class SystemVariant(str, Enum):
    FIXED = 'fixed'
    SWITCHING_MEMBER = 'switching-member'
    HETEROGENEOUS = 'heterogeneous'
    UNION = 'union'
    DUAL = 'dual'


@dataclass(frozen=True)
class Dynamics:
    """
    Shared agent dynamics: state matrix a, input b, gain k and leader input c.

    Shapes: a is d x d, b is d x p, k is p x d, c is d x q.
    """

    a: Any
    b: Any
    k: Any
    c: Any

    def __post_init__(self):
        d = self.a.shape[0]
        if self.a.shape != (d, d):
            raise DimensionMismatchError(f"A must be square, got {tuple(self.a.shape)}")
        if self.b.shape[0] != d:
            raise DimensionMismatchError(f"B has {self.b.shape[0]} rows, expected {d}")
        if tuple(self.k.shape) != (self.b.shape[1], d):
            raise DimensionMismatchError(f"K has shape {tuple(self.k.shape)}, expected ({self.b.shape[1]}, {d})")
        if self.c.shape[0] != d:
            raise DimensionMismatchError(f"C has {self.c.shape[0]} rows, expected {d}")

    @property
    def d(self) -> int:
        return self.a.shape[0]

    @property
    def p(self) -> int:
        return self.b.shape[1]

    @property
    def q(self) -> int:
        return self.c.shape[1]

    def is_first_order(self, backend: BaseBackend) -> bool:
        """True for A = 0 and B = K = C = I."""
        identity = backend.eye(self.d)
        return (
            backend.is_zero(self.a)
            and self.p == self.d == self.q
            and all(backend.equal(m, identity) for m in (self.b, self.k, self.c))
        )


@dataclass(frozen=True)
class HeterogeneousDynamics:
    """Per-node (A_i, B_i) pairs with a shared gain K and input matrix C."""

    per_node: Tuple[Tuple[Any, Any], ...]
    k: Any
    c: Any

    def __post_init__(self):
        if not self.per_node:
            raise DimensionMismatchError("Heterogeneous dynamics need at least one node")
        first_a, first_b = self.per_node[0]
        for index, (a, b) in enumerate(self.per_node):
            if a.shape != first_a.shape or b.shape != first_b.shape:
                raise DimensionMismatchError(
                    f"Node {index + 1} dynamics have shapes {tuple(a.shape)}, {tuple(b.shape)}; "
                    f"node 1 has {tuple(first_a.shape)}, {tuple(first_b.shape)}"
                )
        # shared shape checks
        self.node(0)

    @property
    def n(self) -> int:
        return len(self.per_node)

    @property
    def d(self) -> int:
        return self.per_node[0][0].shape[0]

    @property
    def q(self) -> int:
        return self.c.shape[1]

    def node(self, i: int) -> Dynamics:
        a, b = self.per_node[i]
        return Dynamics(a, b, self.k, self.c)

    def node_labels(self) -> List[Tuple[Any, Any]]:
        return [tuple(pair) for pair in self.per_node]

    def is_homogeneous(self, backend: BaseBackend) -> bool:
        a0, b0 = self.per_node[0]
        return all(backend.equal(a, a0) and backend.equal(b, b0) for a, b in self.per_node)


@dataclass(frozen=True)
class AugmentedSystem:
    """
    x' = l_tilde x + m_tilde y over n agents of dimension d.

    dual_of records the variant a dual system was built from.
    """

    l_tilde: Any
    m_tilde: Any
    variant: SystemVariant
    n: int
    d: int
    leaders: Tuple[int, ...]
    backend: BaseBackend = field(compare=False, repr=False)
    dual_of: Optional[SystemVariant] = None

    @property
    def ambient_dim(self) -> int:
        return self.n * self.d


@dataclass(frozen=True)
class SwitchingFamily:
    """Member systems sharing m_tilde, one per topology."""

    members: Tuple[AugmentedSystem, ...]
    source_graphs: Tuple[MatrixWeightedSignedGraph, ...]
    dynamics: Dynamics
    laplacians: Tuple[Any, ...] = field(default=())

    @property
    def t(self) -> int:
        return len(self.members)

    @property
    def ambient_dim(self) -> int:
        return self.members[0].ambient_dim

    @property
    def m_tilde(self) -> Any:
        return self.members[0].m_tilde


def _check_dimension(g: MatrixWeightedSignedGraph, d: int) -> None:
    if g.d != d:
        raise DimensionMismatchError(f"Dynamics have d={d}, graph has d={g.d}")


def _resolve_laplacian(g: MatrixWeightedSignedGraph, laplacian: Optional[Any]) -> Any:
    if laplacian is None:
        return g.laplacian()
    g.backend.require_shape(laplacian, (g.n * g.d, g.n * g.d), "Laplacian override")
    return laplacian


def leader_selector(g: MatrixWeightedSignedGraph, c: Any) -> Any:
    """
    M~ = M (I_m kron C): C at each leader's row block, columns in leader order.

    Args:
        g: Graph carrying the leader list
        c: d x q leader input matrix

    Returns:
        dn x (m q) matrix
    """
    backend = g.backend
    d, q = c.shape
    _check_dimension(g, d)
    m_tilde = backend.zeros(g.n * d, len(g.leaders) * q)
    for column, leader in enumerate(g.leaders):
        m_tilde[leader * d:(leader + 1) * d, column * q:(column + 1) * q] = c
    return m_tilde


def _coupled(backend: BaseBackend, a_blocks: Sequence[Any], gain_blocks: Sequence[Any], laplacian: Any,
             a_factor: int = 1) -> Any:
    return a_factor * backend.block_diag(a_blocks) - backend.block_diag(gain_blocks) @ laplacian


def assemble_fixed(g: MatrixWeightedSignedGraph, dyn: Dynamics, laplacian: Optional[Any] = None,
                   variant: SystemVariant = SystemVariant.FIXED) -> AugmentedSystem:
    """
    Fixed-topology system L~ = diag(A) - diag(BK) L.

    Args:
        g: Graph
        dyn: Shared dynamics
        laplacian: Optional dn x dn matrix used in place of g.laplacian()
        variant: Tag stored on the result

    Returns:
        AugmentedSystem: The assembled system
    """
    _check_dimension(g, dyn.d)
    backend = g.backend
    lap = _resolve_laplacian(g, laplacian)
    gain = dyn.b @ dyn.k
    l_tilde = _coupled(backend, [dyn.a] * g.n, [gain] * g.n, lap)
    m_tilde = leader_selector(g, dyn.c)
    logger.debug(f"Assembled {variant.value} system: {l_tilde.shape[0]} states, {m_tilde.shape[1]} inputs")
    return AugmentedSystem(backend.freeze(l_tilde), backend.freeze(m_tilde), variant, g.n, g.d, g.leaders, backend)


def assemble_heterogeneous(g: MatrixWeightedSignedGraph, dyn: HeterogeneousDynamics,
                           laplacian: Optional[Any] = None) -> AugmentedSystem:
    """Per-node system L~' = diag(A_i) - [B_i K L_ij]."""
    _check_dimension(g, dyn.d)
    if dyn.n != g.n:
        raise DimensionMismatchError(f"Heterogeneous dynamics list {dyn.n} node(s), graph has {g.n}")
    backend = g.backend
    lap = _resolve_laplacian(g, laplacian)
    a_blocks = [a for a, _ in dyn.per_node]
    gain_blocks = [b @ dyn.k for _, b in dyn.per_node]
    l_tilde = _coupled(backend, a_blocks, gain_blocks, lap)
    m_tilde = leader_selector(g, dyn.c)
    return AugmentedSystem(
        backend.freeze(l_tilde), backend.freeze(m_tilde), SystemVariant.HETEROGENEOUS, g.n, g.d, g.leaders, backend
    )


def assemble_switching(gs: Sequence[MatrixWeightedSignedGraph], dyn: Dynamics,
                       laplacians: Optional[Sequence[Optional[Any]]] = None) -> SwitchingFamily:
    """
    One member system per topology.

    Args:
        gs: Compatible graphs
        dyn: Shared dynamics
        laplacians: Optional per-member Laplacian overrides (None entries use the graph)

    Returns:
        SwitchingFamily: Members in input order
    """
    check_compatible(gs)
    if laplacians is None:
        laplacians = [None] * len(gs)
    if len(laplacians) != len(gs):
        raise GraphCompatibilityError(f"Got {len(laplacians)} Laplacian override(s) for {len(gs)} graph(s)")

    members = tuple(
        assemble_fixed(g, dyn, laplacian=lap, variant=SystemVariant.SWITCHING_MEMBER)
        for g, lap in zip(gs, laplacians)
    )
    resolved = tuple(_resolve_laplacian(g, lap) for g, lap in zip(gs, laplacians))
    logger.info(f"Assembled switching family with {len(members)} member(s)")
    return SwitchingFamily(members, tuple(gs), dyn, resolved)


def union_a_multiplier(union_a_factor: str, t: int) -> int:
    if union_a_factor == 't':
        return t
    if str(union_a_factor) == '1':
        return 1
    raise ValueError(f"union_a_factor must be 't' or '1', got {union_a_factor!r}")


def assemble_union(gs: Sequence[MatrixWeightedSignedGraph], dyn: Dynamics,
                   union_a_factor: str = 't') -> AugmentedSystem:
    """
    Union system L~* = t diag(A) - diag(BK) L*.

    Args:
        gs: Compatible graphs (t = len(gs))
        dyn: Shared dynamics
        union_a_factor: 't' multiplies the A blocks by t, '1' leaves them as is

    Returns:
        AugmentedSystem: Union system over union_graph(gs)
    """
    union = union_graph(gs)
    _check_dimension(union, dyn.d)
    backend = union.backend
    factor = union_a_multiplier(union_a_factor, len(gs))
    gain = dyn.b @ dyn.k
    l_tilde = _coupled(backend, [dyn.a] * union.n, [gain] * union.n, union.laplacian(), a_factor=factor)
    m_tilde = leader_selector(union, dyn.c)
    logger.info(f"Assembled union system over {len(gs)} graph(s) with A factor {factor}")
    return AugmentedSystem(
        backend.freeze(l_tilde), backend.freeze(m_tilde), SystemVariant.UNION, union.n, union.d, union.leaders, backend
    )


def dualize(sys: AugmentedSystem) -> AugmentedSystem:
    """Transpose l_tilde and keep m_tilde; dualizing a dual restores the original variant."""
    if sys.variant is SystemVariant.DUAL:
        return AugmentedSystem(sys.l_tilde.T, sys.m_tilde, sys.dual_of, sys.n, sys.d, sys.leaders, sys.backend)
    return AugmentedSystem(sys.l_tilde.T, sys.m_tilde, SystemVariant.DUAL, sys.n, sys.d, sys.leaders, sys.backend,
                           dual_of=sys.variant)


def lifted_characteristic(pi: CharacteristicMatrix, c: Any, backend: BaseBackend) -> Any:
    """
    P~_pi = P_pi diag(C, ..., C) with one C per cell.

    Returns:
        dn x kq matrix
    """
    if c.shape[0] != pi.d:
        raise DimensionMismatchError(f"C has {c.shape[0]} rows, characteristic matrix blocks are {pi.d} wide")
    return pi.p @ backend.block_diag([c] * pi.partition.card)
