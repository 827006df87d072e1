"""Train the adversarial generator on a 2-D Gaussian and print how its mean moves.

    python scripts/toy_dan.py --generations 50 --seed 0
"""

import argparse

import numpy as np

from moea_csod import dan
from moea_csod.core import make_rng


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--generations", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mean", type=float, nargs=2, default=(0.25, 0.7))
    p.add_argument("--std", type=float, default=0.05)
    p.add_argument("--samples", type=int, default=500)
    args = p.parse_args(argv)

    cfg = dan.DanConfig()
    rng = make_rng(args.seed)
    real = np.clip(rng.normal(args.mean, args.std, (args.samples, 2)), 0.0, 1.0)
    model = dan.init_model(2, cfg, rng)
    target = real.mean(axis=0)
    for g in range(args.generations + 1):
        if g % 5 == 0:
            gen = dan.generate(model, 2000, make_rng(args.seed + 1))
            gap = np.abs(gen.mean(axis=0) - target)
            print(f"gen {g:3d}  mean {np.round(gen.mean(axis=0), 4)}  std {np.round(gen.std(axis=0), 4)}"
                  f"  gap {np.round(gap, 4)}")
        if g < args.generations:
            model = dan.train(model, real, cfg, rng)


if __name__ == "__main__":
    main()
