"""
Report Builder

Converts analysis results into the JSON report document written to
standard output. Output is deterministic: keys are sorted, exact entries
are integers or "p/q" strings, and partitions use 1-based node ids.
"""

import json
import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional

from linalg import BaseBackend
from network import EpWitness, Partition
from processors.controllability_analyzer import BoundReport, ControllabilityVerdict, QCertificate
from processors.observability_analyzer import ObservabilityReport
from processors.union_analyzer import ImplicationStatus, UnionReport

logger = logging.getLogger(__name__)


class ReportBuilder:
    """
    Builds report dictionaries for one backend.
    """

    def __init__(self, backend: BaseBackend, schema: str = 'matnet.report/v1', certificate_max_dim: int = 16):
        """
        Initialize the report builder.

        Args:
            backend (BaseBackend): Backend whose matrices are being reported
            schema (str): Value of the report's schema field
            certificate_max_dim (int): Largest assembled Q embedded in reports
        """
        self.backend = backend
        self.schema = schema
        self.certificate_max_dim = certificate_max_dim

    # -- primitives -------------------------------------------------------

    def scalar(self, value: Any) -> Any:
        if isinstance(value, Fraction):
            return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
        value = float(value)
        return 0.0 if value == 0 else value

    def matrix(self, m: Any) -> List[List[Any]]:
        return [[self.scalar(x) for x in row] for row in self.backend.to_python(m)]

    @staticmethod
    def partition(pi: Optional[Partition]) -> Optional[List[List[int]]]:
        return None if pi is None else pi.to_external()

    # -- analysis records -------------------------------------------------

    def verdict(self, verdict: ControllabilityVerdict) -> Dict[str, Any]:
        result = {
            'controllable': verdict.controllable,
            'subspace_dim': verdict.subspace_dim,
            'ambient_dim': verdict.ambient_dim,
        }
        if verdict.sequence:
            result['sequence'] = list(verdict.sequence)
        return result

    def certificate(self, cert: Optional[QCertificate]) -> Optional[Dict[str, Any]]:
        if cert is None:
            return None
        result = {
            'variant': cert.variant.value,
            'exists': cert.exists,
            'failing_equation': cert.failing_equation,
            'complete_input': cert.complete_input,
        }
        if cert.exists and cert.q is not None and max(cert.q.shape) <= self.certificate_max_dim:
            result['q'] = self.matrix(cert.q)
        return result

    def bound(self, report: BoundReport) -> Dict[str, Any]:
        result = {
            'partition': self.partition(report.partition_used),
            'nontrivial_cells': [[v + 1 for v in cell] for cell in report.partition_used.nontrivial_cells()],
            'applicable': report.applicable,
            'bound': report.bound,
            'tight': report.tight,
            'violated': report.violated,
            'uncontrollable_by_partition': report.uncontrollable_by_partition if report.applicable else None,
            'reason': report.reason,
        }
        if report.contained is not None:
            result['contained'] = report.contained
        if report.certificate is not None:
            result['certificate'] = self.certificate(report.certificate)
        if report.member_partitions:
            result['member_partitions'] = [self.partition(pi) for pi in report.member_partitions]
        if report.common_partition is not None:
            result['common_partition'] = self.partition(report.common_partition)
            result['common_bound'] = report.common_bound
        return result

    def witness(self, witness: EpWitness) -> Dict[str, Any]:
        result: Dict[str, Any] = {'equitable': witness.verdict, 'violation': None}
        if witness.violation is not None:
            violation = witness.violation
            result['violation'] = {
                'cells': [violation.cell_pair[0] + 1, violation.cell_pair[1] + 1],
                'nodes': [violation.nodes[0] + 1, violation.nodes[1] + 1],
                'sign': violation.sign.value,
                'sums': [self.matrix(violation.sums[0]), self.matrix(violation.sums[1])],
            }
        return result

    @staticmethod
    def implication(status: ImplicationStatus) -> Dict[str, Any]:
        return {
            'applicable': status.applicable,
            'asserted_controllable': status.asserted,
            'consistent': status.consistent,
            'note': status.note,
        }

    def union(self, report: UnionReport) -> Dict[str, Any]:
        switched = self.verdict(report.switched_verdict)
        return {
            **switched,
            'union_dim': report.union_verdict.subspace_dim,
            'union_controllable': report.union_verdict.controllable,
            'union_a_factor': report.union_a_factor,
            'union_partition': self.partition(report.union_partition),
            'member_partitions': [self.partition(pi) for pi in report.member_partitions],
            'member_certificates': list(report.member_certificates),
            'indeterminate': report.indeterminate,
            'implications': {
                'union_implies_switched': self.implication(report.union_implies_switched),
                'nontrivial_member_blocks_union': self.implication(report.nontrivial_member_blocks_union),
            },
        }

    def observability(self, report: ObservabilityReport) -> Dict[str, Any]:
        result = {
            'observable': report.observable,
            'subspace_dim': report.dual_verdict.subspace_dim,
            'ambient_dim': report.dual_verdict.ambient_dim,
            'partition': self.partition(report.partition),
            'unobservable_by_partition': report.unobservable_by_partition,
            'consistent': report.consistent,
            'first_order': report.first_order,
        }
        if report.certificate is not None:
            result['certificate'] = self.certificate(report.certificate)
        if report.first_order:
            result['controllable'] = report.controllable
            result['first_order_verdict'] = report.first_order_verdict
        return result

    # -- document ---------------------------------------------------------

    def envelope(self, command: str, spec_info: Dict[str, Any], result: Dict[str, Any],
                 warnings: Optional[List[str]] = None, timing: Optional[float] = None) -> Dict[str, Any]:
        """
        Wrap a command result in the versioned report document.

        Args:
            command (str): Command name
            spec_info (Dict[str, Any]): name, n, d and leaders of the input
            result (Dict[str, Any]): Command-specific result
            warnings (Optional[List[str]]): Notes such as indefinite weights
            timing (Optional[float]): Elapsed seconds, only when requested

        Returns:
            Dict[str, Any]: Report document
        """
        report = {
            'schema': self.schema,
            'command': command,
            'backend': self.backend.name,
            'spec': spec_info,
            'warnings': sorted(set(warnings or [])),
            'result': result,
        }
        if timing is not None:
            report['timing'] = {'seconds': round(timing, 6)}
        return report

    @staticmethod
    def dumps(report: Dict[str, Any]) -> str:
        return json.dumps(report, indent=2, sort_keys=True)
