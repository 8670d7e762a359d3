#!/usr/bin/env python
"""
Community Detection Evaluation Toolkit - Launcher

Usage:
    python launcher.py eval --graph G --reference R --predicted P [P ...]
    python launcher.py generate planted|lfr --output-graph G --output-communities C
    python launcher.py rank SCORES.csv [--alpha 0.05]
    python launcher.py experiment --output-dir DIR
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from src.cli import main


if __name__ == '__main__':
    sys.exit(main())
