#!/usr/bin/env python3
"""Endpoint convergence study: | |a(tau0)| - e^(-pi/(2 eps)) | versus tau0.

The deviation carries the decaying interference envelope ~|chi|/(eps*tau0)
modulated by cos(phi_b(tau0)), so individual endpoints scatter below the
envelope; the fitted power law should come out near -1 whenever no sample
sits at a node of the cosine.
"""

import argparse
import math

import numpy as np

from lzkit import LZConfig, sweep


def run(epsilon: float, tau0s: list[float]) -> None:
    a_lim = math.exp(-math.pi / (2.0 * epsilon))
    rows = sweep([LZConfig(epsilon, t) for t in tau0s])
    devs = []
    print(f"eps = {epsilon}, adiabatic limit |a| -> {a_lim:.9f}")
    print(f"{'tau0':>8}  {'|a(tau0)|':>14}  {'deviation':>12}")
    for row in rows:
        dev = abs(abs(row.a_end) - a_lim)
        devs.append(dev)
        print(f"{row.tau0:8.1f}  {abs(row.a_end):14.9f}  {dev:12.3e}")
    slope = np.polyfit(np.log(tau0s), np.log(devs), 1)[0]
    print(f"fitted power law: deviation ~ tau0^{slope:+.3f}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--epsilon", type=float, default=3.3)
    parser.add_argument(
        "--tau0", type=float, nargs="+", default=[25.0, 50.0, 100.0, 200.0]
    )
    args = parser.parse_args()
    run(args.epsilon, args.tau0)
