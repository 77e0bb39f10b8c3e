"""
Corpus Runner

Replays the built-in example networks in config/corpus/ and compares each
report against the example's expected block.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from tqdm import tqdm

from utils.errors import MatnetError
from utils.settings import CONFIG_DIR, Settings
from .command_handlers import CommandContext, cmd_ctrb, cmd_obsv
from .spec_parser import NetworkSpecParser

logger = logging.getLogger(__name__)

DEFAULT_CORPUS_DIR = CONFIG_DIR / 'corpus'


@dataclass
class CaseResult:
    """Outcome of one corpus example."""

    name: str
    mode: str
    backend: str
    passed: bool
    mismatches: List[str] = field(default_factory=list)
    result: Dict[str, Any] = field(default_factory=dict)


class CorpusRunner:
    """
    Replays corpus examples through the command handlers.
    """

    def __init__(self, settings: Settings, corpus_dir: Optional[Union[str, Path]] = None,
                 parser: Optional[NetworkSpecParser] = None):
        """
        Initialize the corpus runner.

        Args:
            settings (Settings): Settings used for every example
            corpus_dir (Optional[Union[str, Path]]): Directory of example specs
            parser (Optional[NetworkSpecParser]): Spec parser to reuse
        """
        self.settings = settings
        self.corpus_dir = Path(corpus_dir) if corpus_dir else DEFAULT_CORPUS_DIR
        self.parser = parser or NetworkSpecParser()
        logger.info(f"Corpus runner initialized for {self.corpus_dir}")

    def spec_files(self) -> List[Path]:
        return sorted(self.corpus_dir.glob('*.json'))

    @staticmethod
    def compare(expected: Dict[str, Any], result: Dict[str, Any]) -> List[str]:
        """Mismatch messages for every expected key except 'mode'."""
        mismatches = []
        for key in sorted(expected):
            if key == 'mode':
                continue
            actual = result.get(key)
            if actual != expected[key]:
                mismatches.append(f"{key}: expected {expected[key]!r}, got {actual!r}")
        return mismatches

    def run_case(self, path: Path) -> CaseResult:
        """
        Run one example.

        Args:
            path (Path): Example spec with an expected block

        Returns:
            CaseResult: Pass/fail with mismatch details
        """
        spec = self.parser.load(path)
        name = spec.name or path.stem
        mode = spec.expected.get('mode', 'fixed')
        ctx = CommandContext.create(spec, self.settings)
        try:
            if mode == 'obsv':
                result = cmd_obsv(ctx)
            else:
                result = cmd_ctrb(ctx, mode)
        except MatnetError as e:
            logger.error(f"Example {name} failed to run: {e}")
            return CaseResult(name, mode, ctx.backend.name, False, [f"error: {e}"])

        mismatches = self.compare(spec.expected, result)
        for mismatch in mismatches:
            logger.error(f"Example {name}: {mismatch}")
        return CaseResult(name, mode, ctx.backend.name, not mismatches, mismatches, result)

    def run(self) -> List[CaseResult]:
        """Run every example in file-name order."""
        files = self.spec_files()
        if not files:
            logger.warning(f"No corpus examples found in {self.corpus_dir}")
            return []

        results = []
        for path in tqdm(files, desc="Replaying corpus", unit=" example"):
            results.append(self.run_case(path))

        passed = sum(1 for r in results if r.passed)
        logger.info(f"Corpus: {passed}/{len(results)} example(s) reproduced")
        return results
