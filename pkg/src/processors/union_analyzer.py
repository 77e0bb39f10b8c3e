"""
Union Analyzer

Compares the switching family of a set of topologies with the single system
built on their union graph, and records which implications between the two
verdicts are settled by the partition results.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from network import (
    Dynamics,
    MatrixWeightedSignedGraph,
    Partition,
    assemble_switching,
    assemble_union,
    coarsest_ep,
    union_graph,
)
from .controllability_analyzer import ControllabilityVerdict, ctrb, q_certificate, switching_ctrb

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ImplicationStatus:
    """
    One implication between verdicts.

    applicable: the hypothesis holds; asserted: the conclusion it predicts;
    consistent: the computed verdicts agree with that conclusion.
    """

    applicable: bool
    asserted: Optional[bool]
    consistent: bool
    note: str


@dataclass(frozen=True)
class UnionReport:
    union_verdict: ControllabilityVerdict
    switched_verdict: ControllabilityVerdict
    member_partitions: Tuple[Partition, ...]
    member_certificates: Tuple[bool, ...]
    union_partition: Partition
    union_a_factor: str
    union_implies_switched: ImplicationStatus
    nontrivial_member_blocks_union: ImplicationStatus
    indeterminate: bool


def union_analysis(gs: Sequence[MatrixWeightedSignedGraph], dyn: Dynamics,
                   union_a_factor: str = 't') -> UnionReport:
    """
    Analyze a family of topologies against their union.

    Args:
        gs: Compatible member graphs
        dyn: Shared dynamics
        union_a_factor: 't' or '1', the multiplier on the union system's A blocks

    Returns:
        UnionReport: Both verdicts, member partitions and implication records
    """
    union_verdict = ctrb(assemble_union(gs, dyn, union_a_factor=union_a_factor))
    switched_verdict = switching_ctrb(assemble_switching(gs, dyn))

    partitions = tuple(coarsest_ep(g) for g in gs)
    certificates = tuple(q_certificate(g, pi, dyn).exists for g, pi in zip(gs, partitions))
    union_partition = coarsest_ep(union_graph(gs))

    # a controllable union forces a controllable switching family
    if union_verdict.controllable:
        forward = ImplicationStatus(
            applicable=True,
            asserted=True,
            consistent=switched_verdict.controllable,
            note='union controllable, so the switching family is controllable',
        )
    else:
        forward = ImplicationStatus(False, None, True, 'union uncontrollable; no conclusion for the switching family')

    nontrivial = [index for index, pi in enumerate(partitions, start=1) if pi.nontrivial_cells()]
    if all(certificates) and nontrivial:
        backward = ImplicationStatus(
            applicable=True,
            asserted=False,
            consistent=not union_verdict.controllable,
            note=f"member(s) {nontrivial} have nontrivial cells, so the union is uncontrollable",
        )
    elif not all(certificates):
        missing = [index for index, ok in enumerate(certificates, start=1) if not ok]
        backward = ImplicationStatus(False, None, True, f"no Q certificate for member(s) {missing}")
    else:
        backward = ImplicationStatus(False, None, True, 'every member partition is discrete')

    for label, status in (('union => switched', forward), ('nontrivial member => union', backward)):
        if not status.consistent:
            logger.warning(f"Implication '{label}' contradicted by the computed verdicts: {status.note}")

    indeterminate = not union_verdict.controllable and switched_verdict.controllable
    if indeterminate:
        logger.info("Union uncontrollable while the switching family is controllable")

    return UnionReport(
        union_verdict=union_verdict,
        switched_verdict=switched_verdict,
        member_partitions=partitions,
        member_certificates=certificates,
        union_partition=union_partition,
        union_a_factor=str(union_a_factor),
        union_implies_switched=forward,
        nontrivial_member_blocks_union=backward,
        indeterminate=indeterminate,
    )
