"""Empirical approximation ratios |H| / OPT on small instances, per class and nu.

The exact oracle bounds the instance size, so every run uses few vertices and
keeps only instances with at most ``--max-active`` active edges. The table
reports the mean and worst ratio next to the proven factor B + nu.
"""

import argparse
import statistics

from segstab.epsilon_net import net_size_bound, variant_for
from segstab.generators import GenConfig, generate
from segstab.instance import GraphClass, split_isolated
from segstab.oracle import exact_opt
from segstab.solver import solve


def run(cls: GraphClass, nu: float, count: int, n: int, max_active: int) -> list[float]:
    ratios, seed = [], 0
    while len(ratios) < count:
        inst = generate(cls, GenConfig(seed=seed, n=n))
        seed += 1
        active, _ = split_isolated(inst)
        if not 1 <= len(active) <= max_active:
            continue
        sol = solve(inst, nu)
        ratios.append(sol.stats["H"] / exact_opt(inst).active_opt)
    return ratios


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=30)
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--nu", default="1,6")
    ap.add_argument("--max-active", type=int, default=12)
    args = ap.parse_args(argv)
    print(f"{'class':<20}{'nu':>5}{'mean':>9}{'max':>9}{'bound':>10}")
    for cls in GraphClass:
        for nu in map(float, args.nu.split(",")):
            ratios = run(cls, nu, args.count, args.n, args.max_active)
            bound = net_size_bound(variant_for(cls)) + nu
            print(f"{cls.value:<20}{nu:>5g}{statistics.mean(ratios):>9.2f}{max(ratios):>9.2f}{bound:>10.2f}")


if __name__ == "__main__":
    main()
