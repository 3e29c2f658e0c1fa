#!/usr/bin/env python3
"""Write the eight fixed-point regimes of the 5×5 two-cycle/loop operator.

Files are named regime_1.yaml … regime_8.yaml in table order: none of the
cycle products equal to 1, then (1 2), (3 5), (4) alone, then the pairs,
then all three.
"""

import argparse
import logging
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.builders import CYCLE_TABLE_REGIMES, cycle_table_operator
from src.reports.matrix_file import write_matrix_file

logging.basicConfig(level=logging.INFO, format="%(message)s")
logger = logging.getLogger(__name__)


def write_cases(out_dir: str, scale: float) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for k, flags in enumerate(CYCLE_TABLE_REGIMES, start=1):
        path = os.path.join(out_dir, f"regime_{k}.yaml")
        write_matrix_file(path, cycle_table_operator(*flags, scale=scale))
        paths.append(path)
        logger.info("  %s  (unit cycles: %s)", path,
                    ", ".join(c for c, f in zip(("(1 2)", "(3 5)", "(4)"), flags) if f) or "none")
    return paths


def main():
    parser = argparse.ArgumentParser(description="Write the cycle-table regime matrix files")
    parser.add_argument("--out", default="cases", help="Output directory (default: cases)")
    parser.add_argument("--scale", type=float, default=2.0, help="Weight used for non-unit entries")
    args = parser.parse_args()

    paths = write_cases(args.out, args.scale)
    logger.info("Wrote %d files", len(paths))


if __name__ == "__main__":
    main()
