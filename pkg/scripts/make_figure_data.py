#!/usr/bin/env python3
"""Generate the four plot-ready data sets at the canonical parameters.

Writes figure1.csv .. figure4.csv (moduli/phases, complex-plane
trajectories, asymptotics-vs-numeric comparison on a log grid, and the
phase-singularity diagnostics) plus compare.json into --outdir.
"""

import argparse
import pathlib
import sys

from lzkit.cli import main as lzkit_main


def run(outdir: pathlib.Path, epsilon: float, tau0: float, samples: int) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    common = ["--epsilon", str(epsilon), "--tau0", str(tau0), "--samples", str(samples)]
    for which in (1, 2, 3, 4):
        out = outdir / f"figure{which}.csv"
        rc = lzkit_main(["figures", "--which", str(which), *common, "--output", str(out)])
        if rc != 0:
            sys.exit(rc)
        print(f"wrote {out}")
    out = outdir / "compare.json"
    rc = lzkit_main(
        ["compare", *common, "--grid", "logsym",
         "--methods", "exact,asymptotic_negative,asymptotic_positive",
         "--output", str(out)]
    )
    if rc != 0:
        sys.exit(rc)
    print(f"wrote {out}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", type=pathlib.Path, default=pathlib.Path("figure_data"))
    parser.add_argument("--epsilon", type=float, default=3.0)
    parser.add_argument("--tau0", type=float, default=100.0)
    parser.add_argument("--samples", type=int, default=2000)
    args = parser.parse_args()
    run(args.outdir, args.epsilon, args.tau0, args.samples)
