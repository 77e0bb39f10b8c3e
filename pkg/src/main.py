#!/usr/bin/env python3
"""
matnet

Command-line entry point for controllability and observability analysis of
multi-agent systems on matrix-weighted signed networks. Reports go to
standard output as JSON; logs and the human summary go to standard error.
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional

try:
    import coloredlogs
except ImportError:  # pragma: no cover - optional dependency
    coloredlogs = None

from linalg import get_backend
from processors.command_handlers import CTRB_MODES, CommandContext, cmd_ctrb, cmd_ep, cmd_laplacian, cmd_obsv
from processors.corpus_runner import CorpusRunner
from processors.spec_parser import NetworkSpecParser
from reporters.report_builder import ReportBuilder
from reporters.summary_printer import print_corpus_summary, print_summary
from utils.errors import CorpusRegressionError, MatnetError, handle_matnet_error
from utils.settings import BACKEND_CHOICES, UNION_A_FACTOR_CHOICES, Settings, get_settings

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(level: str) -> None:
    """Install colored logging on stderr, or plain logging when coloredlogs is missing."""
    if coloredlogs:
        coloredlogs.install(level=level, fmt=LOG_FORMAT, stream=sys.stderr)
    else:
        logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)
        logger.warning("coloredlogs not installed; falling back to basic logging formatting")


def print_banner():
    """Print application banner to stderr."""
    banner = """
    ╔═══════════════════════════════════════════════════════════╗
    ║                                                           ║
    ║    matnet - matrix-weighted signed network analysis       ║
    ║                                                           ║
    ║  Controllability, observability and equitable partitions  ║
    ║  of leader-follower multi-agent systems                   ║
    ║                                                           ║
    ╚═══════════════════════════════════════════════════════════╝
    """
    print(banner, file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per analysis."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--backend', choices=BACKEND_CHOICES,
                        help='Arithmetic backend (default: auto, exact for rational input)')
    common.add_argument('--float-tolerance', type=float,
                        help='Absolute tolerance for the float backend')
    common.add_argument('--union-a-factor', choices=UNION_A_FACTOR_CHOICES,
                        help='Multiplier on blockdiag(A) in the union system')
    common.add_argument('--config', type=Path, help='Settings YAML (default: config/matnet.yaml)')
    common.add_argument('--timing', action='store_true', help='Include elapsed time in the report')
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('--verbose', '-v', action='store_true', help='Debug logging')
    verbosity.add_argument('--quiet', '-q', action='store_true', help='Warnings only, no banner or summary')

    parser = argparse.ArgumentParser(
        prog='matnet',
        description='Controllability and observability of matrix-weighted signed networks',
    )
    commands = parser.add_subparsers(dest='command', required=True)

    def spec_command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument('spec', type=Path, help='Network specification (JSON)')
        sub.add_argument('--dot', type=Path, help='Write a DOT export to this path')
        return sub

    spec_command('laplacian', 'Print the block Laplacian')

    ep = spec_command('ep', 'Check or discover an equitable partition')
    ep.add_argument('--partition', help='Partition to check, e.g. "1|2,3|4"')

    ctrb = spec_command('ctrb', 'Controllability verdict and partition bounds')
    ctrb.add_argument('--mode', choices=CTRB_MODES, default='fixed', help='System variant (default: fixed)')
    ctrb.add_argument('--partition', help='Equitable partition for the bound, e.g. "1|2,3|4"')
    ctrb.add_argument('--verify-kalman', action='store_true', help='Cross-check with the explicit Kalman matrix')

    obsv = spec_command('obsv', 'Observability from the leader outputs')
    obsv.add_argument('--partition', help='Equitable partition for the partition test')
    obsv.add_argument('--verify-kalman', action='store_true', help='Cross-check with the explicit Kalman matrix')

    corpus = commands.add_parser('corpus', parents=[common], help='Replay the built-in examples')
    corpus.add_argument('corpus_dir', type=Path, nargs='?', help='Directory of example specs')

    return parser


def run_spec_command(args: argparse.Namespace, settings: Settings) -> int:
    """Load the spec, run one command and write its report."""
    spec = NetworkSpecParser().load(args.spec)
    ctx = CommandContext.create(
        spec,
        settings,
        verify_kalman=getattr(args, 'verify_kalman', False),
        dot_path=args.dot,
    )

    start = time.perf_counter()
    if args.command == 'laplacian':
        result = cmd_laplacian(ctx)
    elif args.command == 'ep':
        result = cmd_ep(ctx, args.partition)
    elif args.command == 'ctrb':
        result = cmd_ctrb(ctx, args.mode, args.partition)
    else:
        result = cmd_obsv(ctx, args.partition)
    elapsed = time.perf_counter() - start

    report = ctx.builder.envelope(args.command, ctx.spec_info(), result, ctx.warnings,
                                  timing=elapsed if args.timing else None)
    print(ReportBuilder.dumps(report))
    if not args.quiet:
        print_summary(report)
    return 0


def run_corpus(args: argparse.Namespace, settings: Settings) -> int:
    """Replay the corpus; raise CorpusRegressionError on any mismatch."""
    start = time.perf_counter()
    results = CorpusRunner(settings, args.corpus_dir).run()
    elapsed = time.perf_counter() - start

    rows = [
        {'example': r.name, 'mode': r.mode, 'backend': r.backend, 'passed': r.passed, 'mismatches': r.mismatches}
        for r in results
    ]
    passed = sum(1 for r in results if r.passed)
    builder = ReportBuilder(get_backend('exact'), settings.report_schema, settings.certificate_max_dim)
    report = builder.envelope(
        'corpus',
        {'name': 'corpus', 'n': None, 'd': None, 'leaders': []},
        {'examples': rows, 'passed': passed, 'total': len(results)},
        timing=elapsed if args.timing else None,
    )
    report['backend'] = settings.backend
    print(ReportBuilder.dumps(report))
    if not args.quiet:
        print_corpus_summary([{**row, 'mismatches': len(row['mismatches'])} for row in rows])

    if not results or passed != len(results):
        failed = [r.name for r in results if not r.passed]
        raise CorpusRegressionError(f"{len(failed)} example(s) did not reproduce: {', '.join(failed) or 'none found'}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Main execution function."""
    parser = build_parser()
    args = parser.parse_args(argv)

    settings = get_settings(args.config).with_overrides(
        backend=args.backend,
        float_tolerance=args.float_tolerance,
        union_a_factor=args.union_a_factor,
    )
    level = 'DEBUG' if args.verbose else 'WARNING' if args.quiet else settings.log_level
    setup_logging(level)
    if not args.quiet:
        print_banner()

    try:
        if args.command == 'corpus':
            return run_corpus(args, settings)
        return run_spec_command(args, settings)

    except MatnetError as e:
        return handle_matnet_error(e, f"'{args.command}'")

    except KeyboardInterrupt:
        logger.warning("Operation cancelled by user")
        return 1

    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        return 1


if __name__ == '__main__':
    sys.exit(main())
