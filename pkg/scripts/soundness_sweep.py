"""Sweep random planar networks and compare the criterion with grid coverage.

    python3 scripts/soundness_sweep.py --count 200 --seed 9
"""

from __future__ import annotations

import argparse
import math
import random

from covfail.complex import build_rips_2skeleton
from covfail.generate import GeneratorSpec, coverage_oracle, generate
from covfail.persistence import check_dsg, reduce_complex


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--rb", type=float, nargs=2, default=(0.25, 0.55), metavar=("LO", "HI"))
    ap.add_argument("--n", type=int, nargs=2, default=(8, 60), metavar=("LO", "HI"))
    args = ap.parse_args()

    rng = random.Random(args.seed)
    passes = covered = both = 0
    for _ in range(args.count):
        spec = GeneratorSpec(n=rng.randint(*args.n), r_b=rng.uniform(*args.rb), seed=rng.randrange(2**32))
        g = generate(spec)
        ok = check_dsg(reduce_complex(build_rips_2skeleton(g))).passed
        cov = coverage_oracle(list(g.positions().values()), spec.r_c, spec.polygon).covered
        passes += ok
        covered += cov
        both += ok and cov
    print(f"instances      {args.count}")
    print(f"criterion pass {passes}")
    print(f"grid covered   {covered}")
    print(f"pass, covered  {both}")
    print(f"pass, hole     {passes - both}")
    if passes - both:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
