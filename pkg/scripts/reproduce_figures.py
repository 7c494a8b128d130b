"""Run the five reference parameter sets and print the correlation sign table.

    python3 scripts/reproduce_figures.py [OUT_DIR] [--jobs N]
"""

import sys

from oqs_interplay.runner.cli import main

if __name__ == "__main__":
    args = sys.argv[1:]
    out_dir = args.pop(0) if args and not args[0].startswith("-") else "out"
    sys.exit(main(["reproduce-figures", "--out-dir", out_dir, *args]))
