"""
Command Handlers

One function per CLI command. Each turns a NetworkSpec into the
command-specific result dictionary of a report; the CLI and the corpus
runner share them.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from linalg import BaseBackend, get_backend, resolve_backend_name
from network import (
    HeterogeneousDynamics,
    MatrixWeightedSignedGraph,
    Partition,
    assemble_fixed,
    assemble_heterogeneous,
    assemble_switching,
    coarsest_ep,
    dualize,
    is_equitable,
    quotient_laplacian,
    union_graph,
)
from reporters.dot_exporter import DotExporter
from reporters.report_builder import ReportBuilder
from utils.errors import PreconditionError, SpecValidationError
from utils.settings import Settings
from .controllability_analyzer import kalman_matrix, theorem1_bound, theorem2_bound
from .observability_analyzer import observability
from .spec_parser import NetworkSpec
from .union_analyzer import union_analysis

logger = logging.getLogger(__name__)

CTRB_MODES = ('fixed', 'heterogeneous', 'switching', 'union')


def select_backend(spec: NetworkSpec, settings: Settings) -> BaseBackend:
    """Backend for a spec under the configured backend choice."""
    name = resolve_backend_name(settings.backend, spec.all_rational())
    backend = get_backend(name, settings.float_tolerance)
    logger.info(f"Using {name} backend")
    return backend


@dataclass
class CommandContext:
    """Per-invocation state shared by the handlers."""

    spec: NetworkSpec
    settings: Settings
    backend: BaseBackend
    verify_kalman: bool = False
    dot_path: Optional[Path] = None
    warnings: List[str] = field(default_factory=list)

    @classmethod
    def create(cls, spec: NetworkSpec, settings: Settings, **kwargs: Any) -> 'CommandContext':
        return cls(spec, settings, select_backend(spec, settings), **kwargs)

    @property
    def builder(self) -> ReportBuilder:
        return ReportBuilder(self.backend, self.settings.report_schema, self.settings.certificate_max_dim)

    def graph(self) -> MatrixWeightedSignedGraph:
        g = self.spec.graph(self.backend)
        self.warnings.extend(g.warnings())
        return g

    def member_graphs(self) -> List[MatrixWeightedSignedGraph]:
        graphs = self.spec.member_graphs(self.backend)
        for index, g in enumerate(graphs, start=1):
            self.warnings.extend(f"topology {index}: {note}" for note in g.warnings())
        return graphs

    def partition(self, text: Optional[str], n: int) -> Optional[Partition]:
        return Partition.parse(text, n) if text else None

    def export_dot(self, g: MatrixWeightedSignedGraph, pi: Optional[Partition] = None) -> None:
        if self.dot_path is not None:
            DotExporter().export(self.dot_path, g, pi)

    def spec_info(self) -> Dict[str, Any]:
        return {'name': self.spec.name, 'n': self.spec.n, 'd': self.spec.d, 'leaders': list(self.spec.leaders)}


def _kalman_check(ctx: CommandContext, sys, fixpoint_dim: int) -> Dict[str, Any]:
    rank = ctx.backend.rank(kalman_matrix(sys))
    if rank != fixpoint_dim:
        logger.warning(f"Kalman rank {rank} differs from fixpoint dimension {fixpoint_dim}")
        ctx.warnings.append(f"Kalman rank {rank} differs from fixpoint dimension {fixpoint_dim}")
    return {'rank': rank, 'agrees': rank == fixpoint_dim}


def cmd_laplacian(ctx: CommandContext) -> Dict[str, Any]:
    """Block Laplacian of the primary graph, or the override when one is given."""
    g = ctx.graph()
    builder = ctx.builder
    override = ctx.spec.override(ctx.backend)
    lap = g.laplacian()
    result = {
        'source': 'graph',
        'laplacian': builder.matrix(lap),
        'symmetric': ctx.backend.is_symmetric(lap),
        'edges': [
            {'i': e.i + 1, 'j': e.j + 1, 'sign': e.sign.value, 'definiteness': e.definiteness.value}
            for e in g.edges
        ],
    }
    if override is not None:
        result['source'] = 'laplacian_override'
        result['graph_laplacian'] = result['laplacian']
        result['laplacian'] = builder.matrix(override)
        result['symmetric'] = ctx.backend.is_symmetric(override)
        result['override_matches_graph'] = ctx.backend.equal(override, lap)
    ctx.export_dot(g)
    return result


def cmd_ep(ctx: CommandContext, partition_text: Optional[str] = None) -> Dict[str, Any]:
    """Check a given partition, or find the coarsest leader-respecting equitable partition."""
    g = ctx.graph()
    builder = ctx.builder
    pi = ctx.partition(partition_text, g.n)
    discovered = pi is None
    if discovered:
        pi = coarsest_ep(g)

    result: Dict[str, Any] = {
        'partition': builder.partition(pi),
        'discovered': discovered,
        'card': pi.card,
        'nontrivial_cells': [[v + 1 for v in cell] for cell in pi.nontrivial_cells()],
    }
    witness = is_equitable(g, pi)
    result.update(builder.witness(witness))
    if witness:
        result['quotient_laplacian'] = builder.matrix(quotient_laplacian(g, pi))
        ctx.export_dot(g, pi)
    return result


def _ctrb_fixed(ctx: CommandContext, pi: Optional[Partition], heterogeneous: bool) -> Dict[str, Any]:
    g = ctx.graph()
    builder = ctx.builder
    override = ctx.spec.override(ctx.backend)
    if heterogeneous:
        dyn = ctx.spec.dynamics_for(ctx.backend)
        if not isinstance(dyn, HeterogeneousDynamics):
            dyn = HeterogeneousDynamics(tuple((dyn.a, dyn.b) for _ in range(g.n)), dyn.k, dyn.c)
        sys = assemble_heterogeneous(g, dyn, laplacian=override)
    else:
        dyn = ctx.spec.shared_dynamics(ctx.backend)
        sys = assemble_fixed(g, dyn, laplacian=override)

    report = theorem1_bound(g, dyn, pi, laplacian=override)
    verdict = report.verdict
    result = builder.verdict(verdict)
    result['source'] = 'graph' if override is None else 'laplacian_override'
    if ctx.verify_kalman:
        result['kalman'] = _kalman_check(ctx, sys, verdict.subspace_dim)

    result.update(builder.bound(report))
    if report.applicable and report.contained is False:
        ctx.warnings.append('controllable subspace leaves im(P~) despite a Q certificate')
    if override is not None and not report.applicable:
        ctx.warnings.append(f"no partition bound for the Laplacian override: {report.reason}")
    ctx.export_dot(g, report.partition_used)
    return result


def _ctrb_switching(ctx: CommandContext) -> Dict[str, Any]:
    graphs = ctx.member_graphs()
    dyn = ctx.spec.shared_dynamics(ctx.backend)
    builder = ctx.builder
    family = assemble_switching(graphs, dyn, laplacians=ctx.spec.member_laplacians(ctx.backend))

    report = theorem2_bound(family)
    verdict = report.verdict
    result = builder.verdict(verdict)
    result.update(builder.bound(report))
    result['consistent'] = not report.violated
    if report.violated:
        ctx.warnings.append(f"switching dimension {verdict.subspace_dim} exceeds the join bound {report.bound}")
    union = union_graph(graphs)
    ctx.export_dot(union, coarsest_ep(union))
    return result


def _ctrb_union(ctx: CommandContext) -> Dict[str, Any]:
    graphs = ctx.member_graphs()
    dyn = ctx.spec.shared_dynamics(ctx.backend)
    report = union_analysis(graphs, dyn, union_a_factor=ctx.settings.union_a_factor)
    for label, status in (('union => switched', report.union_implies_switched),
                          ('nontrivial member => union', report.nontrivial_member_blocks_union)):
        if not status.consistent:
            ctx.warnings.append(f"implication '{label}' contradicted: {status.note}")
    union = union_graph(graphs)
    ctx.warnings.extend(f"union: {note}" for note in union.warnings())
    ctx.export_dot(union, report.union_partition)
    return ctx.builder.union(report)


def cmd_ctrb(ctx: CommandContext, mode: str = 'fixed', partition_text: Optional[str] = None) -> Dict[str, Any]:
    """
    Controllability verdict with partition bounds for one mode.

    Args:
        ctx: Command context
        mode: fixed, heterogeneous, switching or union
        partition_text: Optional partition for the fixed and heterogeneous modes

    Returns:
        Dict[str, Any]: Result section of the report
    """
    if mode not in CTRB_MODES:
        raise SpecValidationError(f"Unknown mode {mode!r}; expected one of {', '.join(CTRB_MODES)}", 'mode')
    if mode in ('switching', 'union'):
        if partition_text:
            raise PreconditionError(f"--partition is not used in {mode} mode")
        result = _ctrb_switching(ctx) if mode == 'switching' else _ctrb_union(ctx)
    else:
        pi = ctx.partition(partition_text, ctx.spec.n)
        result = _ctrb_fixed(ctx, pi, heterogeneous=mode == 'heterogeneous')
    result['mode'] = mode
    return result


def cmd_obsv(ctx: CommandContext, partition_text: Optional[str] = None) -> Dict[str, Any]:
    """Observability from the leader outputs, through the transposed system."""
    g = ctx.graph()
    dyn = ctx.spec.shared_dynamics(ctx.backend)
    override = ctx.spec.override(ctx.backend)
    sys = assemble_fixed(g, dyn, laplacian=override)
    pi = ctx.partition(partition_text, g.n)
    report = observability(sys, g, dyn, pi, laplacian=override)
    result = ctx.builder.observability(report)
    if not report.consistent:
        ctx.warnings.append('partition-based observability conclusion contradicted by the dual rank')
    if ctx.verify_kalman:
        result['kalman'] = _kalman_check(ctx, dualize(sys), report.dual_verdict.subspace_dim)
    ctx.export_dot(g, report.partition)
    return result
