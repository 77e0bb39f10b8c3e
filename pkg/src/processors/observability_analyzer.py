"""
Observability Analyzer

Observability of the leader-output system through controllability of its
transpose, with the partition test for unobservability.
"""

import logging
from dataclasses import dataclass
from typing import Any, Optional

from network import AugmentedSystem, Dynamics, MatrixWeightedSignedGraph, Partition, coarsest_ep, dualize, is_equitable
from utils.errors import PreconditionError
from .controllability_analyzer import (
    CertificateVariant,
    ControllabilityVerdict,
    QCertificate,
    ctrb,
    direct_certificate,
    q_certificate,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ObservabilityReport:
    """
    Observability verdict and partition-based conclusions.

    first_order_verdict is set only for A = 0, B = K = C = I, where a
    nontrivial cell makes the system both uncontrollable and unobservable.
    """

    observable: bool
    dual_verdict: ControllabilityVerdict
    partition: Optional[Partition] = None
    certificate: Optional[QCertificate] = None
    unobservable_by_partition: Optional[bool] = None
    consistent: bool = True
    first_order: bool = False
    controllable: Optional[bool] = None
    first_order_verdict: Optional[str] = None


def observability(sys: AugmentedSystem, g: Optional[MatrixWeightedSignedGraph] = None,
                  dyn: Optional[Dynamics] = None, pi: Optional[Partition] = None,
                  laplacian: Optional[Any] = None) -> ObservabilityReport:
    """
    Decide observability of y = M~^T x via the dual system.

    Args:
        sys: Primal system (outputs at the leaders)
        g: Graph the system was built on; enables the partition test
        dyn: Shared dynamics of sys; enables the partition test
        pi: Equitable partition (defaults to the coarsest leader-respecting EP)
        laplacian: Laplacian override sys was assembled with, if any; the
            partition test then runs on the transposed system matrix

    Returns:
        ObservabilityReport: Verdict plus partition-based conclusions
    """
    dual = dualize(sys)
    dual_verdict = ctrb(dual)
    observable = dual_verdict.controllable
    logger.info(f"Dual controllable subspace: dim {dual_verdict.subspace_dim}/{dual_verdict.ambient_dim}"
                f" -> {'observable' if observable else 'unobservable'}")

    if g is None or dyn is None:
        return ObservabilityReport(observable, dual_verdict)

    if pi is None:
        pi = coarsest_ep(g)
    elif not is_equitable(g, pi):
        raise PreconditionError(f"Partition {pi} is not equitable for this graph")

    if laplacian is None:
        certificate = q_certificate(g, pi, dyn, CertificateVariant.DUAL)
    else:
        certificate = direct_certificate(dual.l_tilde, pi, dyn.c, g.d, sys.backend, CertificateVariant.DUAL)
    leaders_isolated = all(len(pi.cells[pi.cell_of(v)]) == 1 for v in g.leaders)
    unobservable_claim = None
    consistent = True
    if certificate.exists and leaders_isolated:
        unobservable_claim = bool(pi.nontrivial_cells())
        if unobservable_claim and observable:
            consistent = False
            logger.warning(f"Nontrivial cells in {pi} predict unobservability, but the dual is controllable")

    first_order = dyn.is_first_order(sys.backend)
    controllable = None
    first_order_verdict = None
    if first_order:
        controllable = ctrb(sys).controllable
        if pi.nontrivial_cells() and leaders_isolated and certificate.exists:
            first_order_verdict = 'uncontrollable and unobservable'
            if controllable or observable:
                consistent = False
        else:
            first_order_verdict = 'no conclusion'

    return ObservabilityReport(
        observable=observable,
        dual_verdict=dual_verdict,
        partition=pi,
        certificate=certificate,
        unobservable_by_partition=unobservable_claim,
        consistent=consistent,
        first_order=first_order,
        controllable=controllable,
        first_order_verdict=first_order_verdict,
    )
