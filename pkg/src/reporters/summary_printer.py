"""
Summary Printer

Human-readable table of a report's headline values, written to stderr.
"""

import sys
from typing import Any, Dict, List, TextIO, Tuple

import pandas as pd


def _rows(report: Dict[str, Any]) -> List[Tuple[str, Any]]:
    rows = [('command', report['command']), ('backend', report['backend'])]
    result = report.get('result', {})
    for key in sorted(result):
        value = result[key]
        if isinstance(value, (bool, int, float, str)) or value is None:
            rows.append((key, value))
        elif key in ('partition', 'union_partition', 'common_partition'):
            rows.append((key, '|'.join(','.join(str(v) for v in cell) for cell in value)))
    return rows


def summary_frame(report: Dict[str, Any]) -> pd.DataFrame:
    """One row per scalar result entry."""
    return pd.DataFrame(_rows(report), columns=['item', 'value'])


def print_summary(report: Dict[str, Any], stream: TextIO = sys.stderr) -> None:
    frame = summary_frame(report)
    spec = report.get('spec', {})
    stream.write(f"\n{spec.get('name') or 'network'} (n={spec.get('n')}, d={spec.get('d')})\n")
    stream.write(frame.to_string(index=False))
    stream.write('\n')
    for note in report.get('warnings', []):
        stream.write(f"warning: {note}\n")


def print_corpus_summary(rows: List[Dict[str, Any]], stream: TextIO = sys.stderr) -> None:
    """Pass/fail table for a corpus run."""
    frame = pd.DataFrame(rows, columns=['example', 'mode', 'passed', 'mismatches'])
    stream.write('\n')
    stream.write(frame.to_string(index=False))
    stream.write(f"\n{int(frame['passed'].sum())}/{len(frame)} passed\n")
