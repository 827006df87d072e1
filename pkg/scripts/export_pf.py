"""Write a reference Pareto front as whitespace-separated text, one point per line.

    python scripts/export_pf.py --problem 5 --objectives 3 --points 10000 pf_lsmop5_m3.txt
"""

import argparse

from moea_csod import lsmop


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--problem", type=int, required=True)
    p.add_argument("--objectives", type=int, required=True)
    p.add_argument("--points", type=int, default=10000)
    p.add_argument("path")
    args = p.parse_args(argv)
    inst = lsmop.make_instance(args.problem, args.objectives, max(args.objectives, 2))
    front = lsmop.sample_pf(inst, args.points)
    lsmop.save_pf(front, args.path)
    print(f"{len(front)} points -> {args.path}")


if __name__ == "__main__":
    main()
