"""Command-line entry point: ``python -m moea_csod --problem lsmop1 --objectives 3 ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness
from .core import ConfigError


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="moea-csod",
        description="Run LSMOP experiments and write raw and summary IGD tables.",
    )
    p.add_argument("--config", type=Path, help="key = value settings file; flags override it")
    p.add_argument("--problem", help="lsmop1..lsmop9, a comma list, or 'all'")
    p.add_argument("--objectives", help="3, 6, 8, 10 or a comma list")
    p.add_argument("--algorithm", help="moea-csod, nsga2, random, a comma list, or 'all'")
    p.add_argument("--generations", help="generations per run (default 50)")
    p.add_argument("--runs", help="independent runs per cell (default 20)")
    p.add_argument("--seed", help="base seed; run r uses seed + r")
    p.add_argument("--alpha", help="APD penalty rate (default 2.0)")
    p.add_argument("--out", help="output directory for raw.csv and summary.csv")
    p.add_argument("--workers", help="parallel worker processes")
    p.add_argument("--dimension", help="override D for every objective count")
    p.add_argument("--population", help="override N for every objective count")
    p.add_argument("--pf-points", dest="pf_points", help="reference-front size for IGD")
    p.add_argument("--external", type=Path, action="append", default=[],
                   help="raw CSV of other algorithms to include in the summary")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        values = harness.load_config(args.config) if args.config else {}
        for key in harness._PARSERS:
            flag = getattr(args, key, None)
            if flag is not None:
                values[key] = flag
        config = harness.build_config(values)
        external = [r for path in args.external for r in harness.read_raw(path)]
        out = harness.run_experiment(config, external)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for row in out.summary:
        print(f"{row['problem']:>7} M={row['M']:<2} {row['algorithm']:<10} "
              f"{row['median_igd']:.4e} {row['mark']}")
    print(f"raw: {out.raw_path}\nsummary: {out.summary_path}")
    return 1 if out.errors else 0


if __name__ == "__main__":
    sys.exit(main())
