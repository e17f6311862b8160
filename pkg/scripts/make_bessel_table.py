#!/usr/bin/env python3
"""Generate the high-precision Bessel reference table.

Usage:
    uv run python scripts/make_bessel_table.py --out artifacts/bessel_reference.txt
    uv run python scripts/make_bessel_table.py --dps 80 --orders 0 1 2 --args 0.5 1 10

Requires the dev extra (mpmath).
"""

from __future__ import annotations

import argparse
import sys

from proxyscat.core.logging import configure_logging
from proxyscat.features.specfun.reference import (
    DEFAULT_ARGUMENTS,
    DEFAULT_ORDERS,
    compute_reference_values,
    write_reference_table,
)


def create_parser() -> argparse.ArgumentParser:
    """Create argument parser."""
    parser = argparse.ArgumentParser(
        description="Write 'n x re_J re_Y' reference records computed with mpmath",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--out", default="artifacts/bessel_reference.txt", help="Output file")
    parser.add_argument("--dps", type=int, default=60, help="mpmath decimal precision")
    parser.add_argument("--orders", type=int, nargs="*", default=list(DEFAULT_ORDERS))
    parser.add_argument("--args", type=float, nargs="*", default=list(DEFAULT_ARGUMENTS))
    return parser


def main() -> int:
    """Main entry point."""
    configure_logging()
    args = create_parser().parse_args()
    records = compute_reference_values(args.orders, args.args, dps=args.dps)
    path = write_reference_table(args.out, records)
    print(f"Wrote {len(records)} records to {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
