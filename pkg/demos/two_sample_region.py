#!/usr/bin/env python3
"""Joint inference for Gini-correlation differences across two samples.

With two independent samples there are two differences to track at
once: d1 = gamma_1(X,Y) - gamma_2(X,Y) and d2 = gamma_1(Y,X) -
gamma_2(Y,X).  The pooled empirical-likelihood statistic tests any
candidate pair and, referred to chi-square(2), carves a joint
confidence region out of the (d1, d2) plane.  This script tests
(0, 0) and then sketches the 90% region as ASCII art.
"""

import numpy as np

from ginijel import (
    DistributionSpec,
    ScatterSpec,
    draw_sample,
    joint_region_grid,
    test_two_sample,
)

SEED = 11
RHO = 0.5
SCATTER = ScatterSpec(1.0, 4.0 * RHO, 16.0)


def sketch(region):
    print(f"      d2 from {region.delta2[0]:+.2f} to {region.delta2[-1]:+.2f}"
          f"  ('#' inside, '.' outside, 'o' point estimate)")
    p1, p2 = region.point_estimate
    i_pt = int(np.argmin(np.abs(region.delta1 - p1)))
    j_pt = int(np.argmin(np.abs(region.delta2 - p2)))
    for i in range(len(region.delta1) - 1, -1, -1):  # d1 increasing upward
        cells = ["#" if m else "." for m in region.member[i]]
        if i == i_pt:
            cells[j_pt] = "o"
        print(f"  d1 {region.delta1[i]:+.2f}  {' '.join(cells)}")


def main():
    sample1 = draw_sample(DistributionSpec("normal", SCATTER), 150, SEED)
    sample2 = draw_sample(
        DistributionSpec("normal_lognormal", SCATTER), 200, SEED + 1)

    result = test_two_sample(sample1, sample2)
    print(f"joint test of (d1, d2) = (0, 0): -2 log R = "
          f"{result.statistic:.3f}, df = {result.df}, "
          f"p = {result.p_value:.4f}")

    region = joint_region_grid(sample1, sample2, level=0.90,
                               bounds=(-0.30, 0.30, -0.65, 0.15),
                               resolution=(15, 23))
    p1, p2 = region.point_estimate
    print(f"point estimate (d1, d2) = ({p1:+.4f}, {p2:+.4f}), "
          f"inside region: {region.point_member}\n")
    sketch(region)

    print("\nSample 2's second marginal is exponentiated, which pushes its")
    print("gamma(Y,X) up without touching its gamma(X,Y): the region sits")
    print("at clearly negative d2 while straddling zero along d1, and the")
    print("joint test of (0, 0) rejects.")


if __name__ == "__main__":
    main()
