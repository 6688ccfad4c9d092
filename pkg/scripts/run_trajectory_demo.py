#!/usr/bin/env python3
"""Record coupled radius-vs-time traces of the mean-reverting process and the
driftless one, for d in {2, 10, 1000} with L=2.5, sigma=1, theta=0.7.

The d=2 pair shows the drift stretching the exit dramatically; by d=1000 the
two traces exit at nearly the same time.
"""

import argparse
import sys
from pathlib import Path

from ouexit.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results", type=Path)
    ap.add_argument("--d", default="2,10,1000")
    ap.add_argument("--dt", default=0.001, type=float)
    ap.add_argument("--stride", default=1, type=int)
    ap.add_argument("--seed", default=123456789, type=int)
    args = ap.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    out = args.outdir / "trajectories.csv"
    code = cli_main([
        "trajectories", "--d", args.d, "--dt", str(args.dt),
        "--stride", str(args.stride), "--seed", str(args.seed),
        "--output", str(out),
    ])
    if code == 0:
        print(f"wrote {out}")
    return code


if __name__ == "__main__":
    sys.exit(main())
