#!/usr/bin/env python3
"""Tabulate the squared-radial drift relative to its driftless counterpart,
(sigma^2 d - 2 theta rho^2) / (sigma^2 d), for d = 2 .. 128.

Two tables: radii inside the ball (rho <= L, where the ratio approaches 1 as
d grows) and far beyond it (rho up to 10 L, where it diverges for every d).
"""

import argparse
import sys
from pathlib import Path

from ouexit.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results", type=Path)
    ap.add_argument("--L", default=3.0, type=float)
    args = ap.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    for name, rho_max in (("inside", args.L), ("far", 10.0 * args.L)):
        out = args.outdir / f"drift_ratio_{name}.csv"
        code = cli_main([
            "drift-ratio", "--theta", "0.7", "--sigma", "1.0",
            "--L", str(args.L), "--rho-max", str(rho_max),
            "--output", str(out),
        ])
        if code != 0:
            return code
        print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
