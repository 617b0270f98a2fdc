"""Failure-probability curve for one generated network, exact and sampled.

    python3 scripts/failure_curve.py --n 14 --rb 0.6 --rate 0.2 --seed 3
"""

from __future__ import annotations

import argparse

import numpy as np

from covfail.complex import build_rips_2skeleton
from covfail.deathsets import cake_or_death
from covfail.generate import GeneratorSpec, generate
from covfail.probability import Exponential, FailureModel, prob_failure_exact, prob_failure_mc


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=14)
    ap.add_argument("--rb", type=float, default=0.6)
    ap.add_argument("--rate", type=float, default=0.2)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--samples", type=int, default=50_000)
    ap.add_argument("--tmax", type=float, default=10.0)
    args = ap.parse_args()

    g = generate(GeneratorSpec(n=args.n, r_b=args.rb, seed=args.seed))
    K = build_rips_2skeleton(g)
    report = cake_or_death(K)
    if report.baseline_failed:
        raise SystemExit("generated network already fails the criterion; try another seed")
    sets = report.as_labels(K)
    print(f"{len(K.interior)} interior sensors, {len(sets)} minimal death sets")
    model = FailureModel.uniform([K.labels[v] for v in K.interior], Exponential(args.rate))
    times = list(np.linspace(0.0, args.tmax, 11))
    exact = prob_failure_exact(sets, model, times).probabilities
    mc = prob_failure_mc(sets, model, times, args.samples, args.seed).points
    print(f"{'t':>6} {'exact':>10} {'mc':>10} {'stderr':>9}")
    for t, e, p in zip(times, exact, mc):
        print(f"{t:6.2f} {e:10.6f} {p.probability:10.6f} {p.stderr:9.2e}")


if __name__ == "__main__":
    main()
