#!/usr/bin/env python3
"""Space per k-mer as k grows, measured against the closed-form bounds.

Builds both variants over one synthetic SPSS for a sweep of k and prints
bits/k-mer next to the bound instantiated with the measured inner-MPHF cost.
"""

import argparse

from lpmphf import (MinimizerScheme, SpssInput, TheoryParams, build_basic,
                    build_partitioned, census, generate_spss,
                    space_bound_basic, space_bound_partitioned)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--length", type=int, default=2_000_000)
    ap.add_argument("-m", type=int, default=15)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--kmin", type=int, default=31)
    ap.add_argument("--kmax", type=int, default=63)
    ap.add_argument("--kstep", type=int, default=8)
    args = ap.parse_args()

    base = generate_spss(args.length, args.kmin, seed=args.seed)
    print(f"{'k':>3} {'w':>3} {'variant':>12} {'bits/kmer':>10} "
          f"{'bound':>8} {'ratio':>6} {'xi':>8}")
    for k in range(args.kmin, args.kmax + 1, args.kstep):
        spss = SpssInput(k=k, codes=base.codes)
        scheme = MinimizerScheme(k=k, m=args.m, seed=args.seed)
        xi = census(spss, scheme).xi
        for builder, bound_fn, name in (
                (build_basic, space_bound_basic, "basic"),
                (build_partitioned, space_bound_partitioned, "partitioned")):
            f = builder(spss, scheme)
            params = TheoryParams(k=k, m=args.m, b=f.fm.bits_per_key)
            bound = bound_fn(spss.n, params, xi=xi) / spss.n
            got = f.bits_per_kmer()
            print(f"{k:>3} {scheme.w:>3} {name:>12} {got:>10.4f} "
                  f"{bound:>8.4f} {got / bound:>6.3f} {xi:>8.5f}")


if __name__ == "__main__":
    main()
