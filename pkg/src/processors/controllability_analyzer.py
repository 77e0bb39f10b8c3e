"""
Controllability Analyzer

Controllable subspaces of fixed, heterogeneous and switching systems, Q
certificates for equitable partitions, and the subspace bounds they imply.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, List, Optional, Sequence, Tuple, Union

from linalg import BaseBackend, SubspaceBasis, contains, invariant_image_fixpoint
from network import (
    AugmentedSystem,
    Dynamics,
    HeterogeneousDynamics,
    MatrixWeightedSignedGraph,
    Partition,
    SwitchingFamily,
    assemble_fixed,
    assemble_heterogeneous,
    characteristic_matrix,
    coarsest_common_ep,
    coarsest_ep,
    is_equitable,
    join_all,
    lifted_characteristic,
    quotient_laplacian,
)
from utils.errors import PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ControllabilityVerdict:
    """
    Controllable subspace of a system.

    sequence holds the dimensions of the switching subspace sequence and is
    empty for a single system.
    """

    controllable: bool
    subspace_dim: int
    ambient_dim: int
    basis: SubspaceBasis
    sequence: Tuple[int, ...] = ()


def _verdict(basis: SubspaceBasis, sequence: Tuple[int, ...] = ()) -> ControllabilityVerdict:
    return ControllabilityVerdict(basis.dim == basis.ambient_dim, basis.dim, basis.ambient_dim, basis, sequence)


def ctrb(sys: AugmentedSystem) -> ControllabilityVerdict:
    """
    Smallest L~-invariant subspace containing im(M~).

    Args:
        sys: Augmented system

    Returns:
        ControllabilityVerdict: Dimension and basis of the controllable subspace
    """
    backend = sys.backend
    seed = backend.column_space(sys.m_tilde)
    basis = invariant_image_fixpoint([sys.l_tilde], seed, backend)
    verdict = _verdict(basis)
    logger.info(
        f"Controllable subspace ({sys.variant.value}): dim {verdict.subspace_dim}/{verdict.ambient_dim}"
        f" -> {'controllable' if verdict.controllable else 'uncontrollable'}"
    )
    return verdict


def kalman_matrix(sys: AugmentedSystem) -> Any:
    """Explicit [M~, L~M~, ..., L~^(dn-1) M~]."""
    backend = sys.backend
    blocks = [sys.m_tilde]
    for _ in range(sys.ambient_dim - 1):
        blocks.append(sys.l_tilde @ blocks[-1])
    return backend.hstack(blocks)


# -- Q certificates -----------------------------------------------------------

class CertificateVariant(str, Enum):
    FIXED = 'fixed'
    HETEROGENEOUS = 'heterogeneous'
    DUAL = 'dual'


@dataclass(frozen=True)
class QCertificate:
    """
    Solution of L~ P~_pi = P~_pi Q for an equitable partition.

    q1_blocks holds one block per cell for the heterogeneous variant and a
    single block otherwise. failing_equation names the first equation
    without a solution.
    """

    exists: bool
    variant: CertificateVariant
    q1_blocks: Optional[Tuple[Any, ...]] = None
    qij_blocks: Optional[Tuple[Tuple[Any, ...], ...]] = None
    q: Optional[Any] = None
    failing_equation: Optional[str] = None
    complete_input: bool = False


def is_complete_input(c: Any, backend: BaseBackend) -> bool:
    """C is a complete control input when it is square and invertible."""
    return backend.is_invertible(c)


def _cell_dynamics(g: MatrixWeightedSignedGraph, pi: Partition, dyn: HeterogeneousDynamics) -> List[Tuple[Any, Any]]:
    backend = g.backend
    per_cell = []
    for cell in pi.cells:
        a0, b0 = dyn.per_node[cell[0]]
        for v in cell[1:]:
            a, b = dyn.per_node[v]
            if not (backend.equal(a, a0) and backend.equal(b, b0)):
                raise PreconditionError(
                    f"Nodes {cell[0] + 1} and {v + 1} share a cell but have different (A_i, B_i)"
                )
        per_cell.append((a0, b0))
    return per_cell


def q_certificate(g: MatrixWeightedSignedGraph, pi: Partition, dyn: Union[Dynamics, HeterogeneousDynamics],
                  variant: CertificateVariant = CertificateVariant.FIXED) -> QCertificate:
    """
    Try to solve the block equations that make im(P~_pi) invariant.

    fixed:          A C = C Q1,     B K Lpi_ij C = C Q_ij
    heterogeneous:  A_i C = C Q1_i, B_i K Lpi_ij C = C Q_ij
    dual:           A^T C = C Q1,   Lpi_ij K^T B^T C = C Q_ij

    Q = diag(Q1) - [Q_ij]; on success L~ P~ = P~ Q is checked on the
    assembled matrices.

    Args:
        g: Graph
        pi: Equitable partition of g
        dyn: Dynamics (HeterogeneousDynamics for the heterogeneous variant)
        variant: Which equations to solve

    Returns:
        QCertificate: Blocks when every equation is solvable

    Raises:
        PreconditionError: pi is not equitable, or dynamics differ inside a cell
    """
    variant = CertificateVariant(variant)
    backend = g.backend
    if not is_equitable(g, pi):
        raise PreconditionError(f"Q certificate needs an equitable partition; {pi} is not")
    if (variant is CertificateVariant.HETEROGENEOUS) != isinstance(dyn, HeterogeneousDynamics):
        raise PreconditionError(f"The {variant.value} certificate does not match the dynamics type")

    d = g.d
    k = pi.card
    c = dyn.c
    lpi = quotient_laplacian(g, pi)
    complete = is_complete_input(c, backend)

    def fail(equation: str) -> QCertificate:
        logger.info(f"No {variant.value} Q certificate for {pi}: {equation} has no solution")
        return QCertificate(False, variant, failing_equation=equation, complete_input=complete)

    if variant is CertificateVariant.HETEROGENEOUS:
        per_cell = _cell_dynamics(g, pi, dyn)
    else:
        per_cell = [(dyn.a, dyn.b)] * k

    q1_blocks = []
    for i, (a, _) in enumerate(per_cell):
        if variant is not CertificateVariant.HETEROGENEOUS and q1_blocks:
            q1_blocks.append(q1_blocks[0])
            continue
        lhs = a.T if variant is CertificateVariant.DUAL else a
        q1 = backend.solve_right(c, lhs @ c)
        if q1 is None:
            if variant is CertificateVariant.HETEROGENEOUS:
                return fail(f"A_{i + 1} C = C Q1_{i + 1}")
            return fail('A^T C = C Q1' if variant is CertificateVariant.DUAL else 'A C = C Q1')
        q1_blocks.append(q1)

    qij_rows = []
    for i in range(k):
        b = per_cell[i][1]
        row = []
        for j in range(k):
            block = backend.block(lpi, i, j, d, d)
            if variant is CertificateVariant.DUAL:
                rhs = block @ dyn.k.T @ b.T @ c
                label = f"Lpi[{i + 1},{j + 1}] K^T B^T C = C Q_{i + 1}{j + 1}"
            else:
                rhs = b @ dyn.k @ block @ c
                label = f"B K Lpi[{i + 1},{j + 1}] C = C Q_{i + 1}{j + 1}"
            qij = backend.solve_right(c, rhs)
            if qij is None:
                return fail(label)
            row.append(qij)
        qij_rows.append(tuple(row))

    qdim = c.shape[1]
    q = backend.block_diag(q1_blocks)
    for i in range(k):
        for j in range(k):
            q[i * qdim:(i + 1) * qdim, j * qdim:(j + 1) * qdim] = (
                backend.block(q, i, j, qdim, qdim) - qij_rows[i][j]
            )

    if variant is CertificateVariant.HETEROGENEOUS:
        l_tilde = assemble_heterogeneous(g, dyn).l_tilde
    else:
        l_tilde = assemble_fixed(g, dyn).l_tilde
        if variant is CertificateVariant.DUAL:
            l_tilde = l_tilde.T
    p_tilde = lifted_characteristic(characteristic_matrix(pi, d, backend), c, backend)
    if not backend.equal(l_tilde @ p_tilde, p_tilde @ q):
        logger.warning(f"Blockwise {variant.value} certificate for {pi} fails L~ P~ = P~ Q")
        return fail('L~ P~ = P~ Q')

    single = variant is not CertificateVariant.HETEROGENEOUS
    logger.debug(f"{variant.value} Q certificate found for {pi} ({k} cell(s))")
    return QCertificate(
        True,
        variant,
        q1_blocks=(q1_blocks[0],) if single else tuple(q1_blocks),
        qij_blocks=tuple(qij_rows),
        q=backend.freeze(q),
        complete_input=complete,
    )


def direct_certificate(l_tilde: Any, pi: Partition, c: Any, d: int, backend: BaseBackend,
                       variant: CertificateVariant = CertificateVariant.FIXED) -> QCertificate:
    """
    Solve L~ P~_pi = P~_pi Q on an assembled system matrix.

    For systems built from a Laplacian override, whose blocks need not
    follow the graph's quotient.
    """
    variant = CertificateVariant(variant)
    p_tilde = lifted_characteristic(characteristic_matrix(pi, d, backend), c, backend)
    complete = is_complete_input(c, backend)
    q = backend.solve_right(p_tilde, l_tilde @ p_tilde)
    if q is None:
        logger.info(f"im(P~) of {pi} is not invariant under the overridden system matrix")
        return QCertificate(False, variant, failing_equation='L~_override P~ = P~ Q', complete_input=complete)
    return QCertificate(True, variant, q=backend.freeze(q), complete_input=complete)


# -- bounds ---------------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    """
    Subspace bound from an equitable partition.

    bound is None when the theorem does not apply (no certificate, or a
    leader shares a cell); reason then says why.
    """

    bound: Optional[int]
    achieved_dim: int
    ambient_dim: int
    partition_used: Partition
    tight: bool
    applicable: bool
    certificate: Optional[QCertificate] = None
    contained: Optional[bool] = None
    uncontrollable_by_partition: bool = False
    reason: Optional[str] = None
    violated: bool = False
    common_bound: Optional[int] = None
    common_partition: Optional[Partition] = None
    member_partitions: Tuple[Partition, ...] = field(default=())
    verdict: Optional[ControllabilityVerdict] = None


def _leaders_isolated(leaders: Sequence[int], pi: Partition) -> bool:
    return all(len(pi.cells[pi.cell_of(v)]) == 1 for v in leaders)


def theorem1_bound(g: MatrixWeightedSignedGraph, dyn: Union[Dynamics, HeterogeneousDynamics],
                   pi: Optional[Partition] = None, laplacian: Optional[Any] = None) -> BoundReport:
    """
    Bound the controllable subspace by im(P~_pi).

    When a Q certificate exists and every leader is a singleton cell, the
    controllable subspace lies in im(P~_pi), so its dimension is at most
    rank(P~_pi) and any nontrivial cell rules out controllability.

    Args:
        g: Graph
        dyn: Shared or per-node dynamics
        pi: Equitable partition (defaults to the coarsest leader-respecting EP,
            refined by node dynamics for heterogeneous systems)
        laplacian: Optional dn x dn Laplacian used in place of g.laplacian();
            the certificate is then solved on the assembled system

    Returns:
        BoundReport: Bound, achieved dimension and containment check
    """
    backend = g.backend
    heterogeneous = isinstance(dyn, HeterogeneousDynamics)
    if pi is None:
        pi = coarsest_ep(g, node_labels=dyn.node_labels() if heterogeneous else None)
    elif not is_equitable(g, pi):
        raise PreconditionError(f"Partition {pi} is not equitable for this graph")

    if heterogeneous:
        sys = assemble_heterogeneous(g, dyn, laplacian=laplacian)
    else:
        sys = assemble_fixed(g, dyn, laplacian=laplacian)
    verdict = ctrb(sys)

    variant = CertificateVariant.HETEROGENEOUS if heterogeneous else CertificateVariant.FIXED
    try:
        if laplacian is None:
            certificate = q_certificate(g, pi, dyn, variant)
        else:
            certificate = direct_certificate(sys.l_tilde, pi, dyn.c, g.d, backend, variant)
    except PreconditionError as e:
        return BoundReport(None, verdict.subspace_dim, verdict.ambient_dim, pi, False, False, reason=str(e),
                           verdict=verdict)

    if not certificate.exists:
        return BoundReport(None, verdict.subspace_dim, verdict.ambient_dim, pi, False, False,
                           certificate=certificate, reason=f"no Q certificate ({certificate.failing_equation})",
                           verdict=verdict)
    if not _leaders_isolated(g.leaders, pi):
        return BoundReport(None, verdict.subspace_dim, verdict.ambient_dim, pi, False, False,
                           certificate=certificate, reason="a leader shares a cell with another node",
                           verdict=verdict)

    p_tilde = lifted_characteristic(characteristic_matrix(pi, g.d, backend), dyn.c, backend)
    image = backend.column_space(p_tilde)
    contained = contains(backend, image, verdict.basis.basis)
    if not contained:
        logger.warning(f"Controllable subspace is not contained in im(P~) for {pi}")

    nontrivial = bool(pi.nontrivial_cells())
    report = BoundReport(
        bound=image.dim,
        achieved_dim=verdict.subspace_dim,
        ambient_dim=verdict.ambient_dim,
        partition_used=pi,
        tight=verdict.subspace_dim == image.dim,
        applicable=True,
        certificate=certificate,
        contained=contained,
        uncontrollable_by_partition=nontrivial,
        violated=verdict.subspace_dim > image.dim,
        verdict=verdict,
    )
    logger.info(f"Partition bound for {pi}: {report.achieved_dim} <= {report.bound}"
                + (" (nontrivial cells: uncontrollable)" if nontrivial else ""))
    return report


# -- switching ------------------------------------------------------------------

def _sum_spaces(backend: BaseBackend, spaces: Sequence[SubspaceBasis]) -> SubspaceBasis:
    return backend.column_space(backend.hstack([s.basis for s in spaces]))


def subspace_sequence(family: SwitchingFamily) -> List[SubspaceBasis]:
    """
    W_1 = sum_s <L~_s | im M~>, W_(i+1) = sum_s <L~_s | W_i>, until the dimension stops growing.

    Returns:
        List[SubspaceBasis]: W_1, W_2, ... with the last entry the limit
    """
    backend = family.members[0].backend
    current = backend.column_space(family.m_tilde)
    sequence = []
    while True:
        spaces = [invariant_image_fixpoint([member.l_tilde], current, backend) for member in family.members]
        following = _sum_spaces(backend, spaces)
        sequence.append(following)
        logger.debug(f"Subspace sequence step {len(sequence)}: dim {following.dim}")
        if following.dim == current.dim and len(sequence) > 1:
            return sequence
        if following.dim == following.ambient_dim:
            return sequence
        current = following


def switching_ctrb(family: SwitchingFamily) -> ControllabilityVerdict:
    """
    Controllable subspace of a switching family.

    This is the smallest subspace containing im(M~) and invariant under every
    member's L~; the subspace sequence converges to it.
    """
    backend = family.members[0].backend
    seed = backend.column_space(family.m_tilde)
    basis = invariant_image_fixpoint([member.l_tilde for member in family.members], seed, backend)
    sequence = subspace_sequence(family)
    if sequence[-1].dim != basis.dim:
        logger.warning(f"Subspace sequence ends at dim {sequence[-1].dim}, fixpoint gives {basis.dim}")
    verdict = _verdict(basis, tuple(space.dim for space in sequence))
    logger.info(f"Switching controllable subspace over {family.t} member(s): dim {verdict.subspace_dim}"
                f"/{verdict.ambient_dim}")
    return verdict


def theorem2_bound(family: SwitchingFamily, partitions: Optional[Sequence[Partition]] = None) -> BoundReport:
    """
    Bound the switching controllable subspace by card(join of member EPs) * d.

    The join-based bound can fail on some families; violated records that.
    common_bound comes from the coarsest partition equitable for every member
    and always holds when its certificates exist.

    Args:
        family: Switching family
        partitions: One equitable partition per member (defaults to each
            member's coarsest leader-respecting EP)

    Returns:
        BoundReport: Join bound, common-partition bound and achieved dimension
    """
    graphs = family.source_graphs
    dyn = family.dynamics
    backend = graphs[0].backend
    if partitions is None:
        partitions = [coarsest_ep(g) for g in graphs]
    if len(partitions) != len(graphs):
        raise PreconditionError(f"Got {len(partitions)} partition(s) for {len(graphs)} member(s)")
    for index, (g, pi) in enumerate(zip(graphs, partitions), start=1):
        if not is_equitable(g, pi):
            raise PreconditionError(f"Partition {pi} is not equitable for member {index}")

    verdict = switching_ctrb(family)
    combined = join_all(list(partitions))

    certificates = [q_certificate(g, pi, dyn) for g, pi in zip(graphs, partitions)]
    missing = [index for index, cert in enumerate(certificates, start=1) if not cert.exists]

    common = coarsest_common_ep(graphs)
    common_bound = None
    if all(q_certificate(g, common, dyn).exists for g in graphs):
        p_tilde = lifted_characteristic(characteristic_matrix(common, graphs[0].d, backend), dyn.c, backend)
        common_bound = backend.rank(p_tilde)

    if missing:
        return BoundReport(
            None, verdict.subspace_dim, verdict.ambient_dim, combined, False, False,
            reason=f"no Q certificate for member(s) {missing}",
            common_bound=common_bound, common_partition=common, member_partitions=tuple(partitions),
            verdict=verdict,
        )

    bound = combined.card * graphs[0].d
    violated = verdict.subspace_dim > bound
    if violated:
        logger.warning(f"Switching dimension {verdict.subspace_dim} exceeds the join bound {bound} for {combined}")
    if common_bound is not None and verdict.subspace_dim > common_bound:
        logger.warning(f"Switching dimension {verdict.subspace_dim} exceeds the common-partition bound {common_bound}")

    return BoundReport(
        bound=bound,
        achieved_dim=verdict.subspace_dim,
        ambient_dim=verdict.ambient_dim,
        partition_used=combined,
        tight=verdict.subspace_dim == bound,
        applicable=True,
        uncontrollable_by_partition=not combined.is_discrete,
        violated=violated,
        common_bound=common_bound,
        common_partition=common,
        member_partitions=tuple(partitions),
        verdict=verdict,
    )
