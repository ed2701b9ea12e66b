#!/usr/bin/env python3
"""Empirical sweep of the shift-range product (d_star * |U|)^2 against (n/2)^2.

The exact cap holds strictly on every instance seen; this reports how much
headroom random instances actually leave, per scale exponent.
"""

import argparse
from fractions import Fraction

from slabsum.instance import gen_random
from slabsum.quantize import QuantizationUnderflow, quantize, shift_bound_report


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=8)
    parser.add_argument("--bits", type=int, default=8)
    parser.add_argument("--instances", type=int, default=1000)
    parser.add_argument("--c", type=int, default=2)
    args = parser.parse_args()

    cap = Fraction(args.n * args.n, 4)
    worst = Fraction(0)
    worst_seed = None
    checked = 0
    seed = 0
    while checked < args.instances:
        inst = gen_random(args.n, args.bits, seed=seed)
        seed += 1
        try:
            q = quantize(inst, c=args.c)
        except QuantizationUnderflow:
            continue
        rep = shift_bound_report(q)
        assert rep.within
        ratio = rep.value_sq / cap
        if ratio > worst:
            worst, worst_seed = ratio, seed - 1
        checked += 1
    print(f"n={args.n} c={args.c}: worst (d*|U|)^2 / (n/2)^2 over "
          f"{checked} instances = {float(worst):.6f} (seed {worst_seed})")
    print(f"exact value: {worst}")


if __name__ == "__main__":
    main()
