"""Run the 3/6/8/10-objective IGD tables for one or more objective counts.

    python scripts/run_tables.py --objectives 3 --runs 20 --out results/m3
"""

import sys

from moea_csod.cli import main

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
