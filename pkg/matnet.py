#!/usr/bin/env python3
"""
matnet - Matrix-Weighted Signed Network Analysis

Usage: python matnet.py {laplacian,ep,ctrb,obsv,corpus} [options]

Puts src/ on the import path and hands the command line to main().
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent / 'src'))

from main import main  # noqa: E402

if __name__ == '__main__':
    sys.exit(main())
