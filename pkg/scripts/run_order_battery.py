#!/usr/bin/env python3
"""Randomized order-comparison battery.

Draws random pairs of location-scale elliptical mixtures that share a
profile/map/mixing family, runs every order check on each pair, and prints a
verdict tally per order plus a few sanity tallies (reflexivity, lattice
implications).  Useful for eyeballing how often each order is decidable on a
given parameter regime.

Example:
    python scripts/run_order_battery.py --pairs 200 --seed 7 --max-dim 3
"""

from __future__ import annotations

import argparse
import collections
import sys

import numpy as np

from lsemix import (
    AlphaBetaMap,
    BetaLambdaOne,
    Degenerate,
    DensityGenerator,
    DiscreteWeighted,
    GeneralizedInverseGaussian,
    GeneratorFamily,
    LseDistribution,
    OrderKind,
    Verdict,
    compare,
)

GENERATORS = [
    DensityGenerator(GeneratorFamily.NORMAL),
    DensityGenerator(GeneratorFamily.STUDENT, dof=5),
    DensityGenerator(GeneratorFamily.CAUCHY),
    DensityGenerator(GeneratorFamily.LAPLACE),
]
MIXINGS = [
    Degenerate(1.0),
    BetaLambdaOne(3.0),
    GeneralizedInverseGaussian(1.0, 1.0, 2.0),
    DiscreteWeighted(((0.5, 0.4), (1.5, 0.6))),
]
MAPS = [
    AlphaBetaMap.plain(),
    AlphaBetaMap.mean_variance(),
    AlphaBetaMap.skew_slash(),
]


def random_pair(rng: np.random.Generator, max_dim: int):
    n = int(rng.integers(1, max_dim + 1))
    gen = GENERATORS[int(rng.integers(len(GENERATORS)))]
    mixing = MIXINGS[int(rng.integers(len(MIXINGS)))]
    ab = MAPS[int(rng.integers(len(MAPS)))]

    mu1 = rng.normal(size=n)
    delta1 = rng.normal(size=n) if rng.random() < 0.5 else np.zeros(n)
    b = rng.normal(size=(n, n))
    sigma1 = b @ b.T + n * np.eye(n)

    mu2 = mu1.copy() if rng.random() < 0.5 else mu1 + rng.uniform(0.0, 0.5, n)
    delta2 = delta1.copy() if rng.random() < 0.6 else delta1 + rng.uniform(0.0, 0.4, n)
    mode = rng.random()
    if mode < 0.35:
        sigma2 = sigma1.copy()
    elif mode < 0.65:
        c = rng.normal(size=(n, n))
        sigma2 = sigma1 + 0.4 * (c @ c.T)
    else:
        sigma2 = sigma1 + np.abs(rng.normal(size=(n, n)))
        sigma2 = 0.5 * (sigma2 + sigma2.T)
        if np.linalg.eigvalsh(sigma2).min() <= 1e-6:
            sigma2 = sigma1 + np.ones((n, n))

    build = lambda mu, sigma, delta: LseDistribution(
        mu=mu, sigma=sigma, delta=delta, generator=gen, ab_map=ab, mixing=mixing
    )
    return build(mu1, sigma1, delta1), build(mu2, sigma2, delta2)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pairs", type=int, default=200)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--max-dim", type=int, default=3)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    tally: dict[OrderKind, collections.Counter] = {
        order: collections.Counter() for order in OrderKind
    }
    lattice_checks = 0
    for _ in range(args.pairs):
        d1, d2 = random_pair(rng, args.max_dim)
        reports = compare(d1, d2)
        for order, report in reports.items():
            tally[order][report.verdict] += 1
        if reports[OrderKind.ST].verdict is Verdict.ORDERED:
            assert reports[OrderKind.PLST].verdict is Verdict.ORDERED
            assert reports[OrderKind.ICX].verdict is Verdict.ORDERED
            lattice_checks += 1
        if reports[OrderKind.CX].verdict is Verdict.ORDERED:
            assert reports[OrderKind.LCX].verdict is Verdict.ORDERED
            lattice_checks += 1

    print(f"{args.pairs} random pairs, seed {args.seed}, n <= {args.max_dim}")
    print(f"{'order':8s} {'ordered':>8s} {'not-ord':>8s} {'inconcl':>8s}")
    for order in OrderKind:
        c = tally[order]
        print(f"{order.value:8s} {c[Verdict.ORDERED]:8d} "
              f"{c[Verdict.NOT_ORDERED]:8d} {c[Verdict.INCONCLUSIVE]:8d}")
    print(f"lattice implications verified on {lattice_checks} ordered pairs")
    return 0


if __name__ == "__main__":
    sys.exit(main())
