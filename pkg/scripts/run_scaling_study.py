#!/usr/bin/env python3
"""Reproduce the bound-scaling study: exact value, closed-form bounds, and a
Monte-Carlo estimate over doubling dimensions, for both parameter panels.

Writes scaling_left.csv (L=4, lambda=0.5, dt=1e-3) and scaling_right.csv
(L=3, lambda=0.7, dt=1e-4) plus their manifests into --outdir.  Plot each
value column against d on log-log axes with any tool.
"""

import argparse
import sys
from pathlib import Path

from ouexit.cli import main as cli_main

PANELS = {
    "left": ["--L", "4.0", "--lambda", "0.5", "--dt", "0.001"],
    "right": ["--L", "3.0", "--lambda", "0.7", "--dt", "0.0001"],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results", type=Path)
    ap.add_argument("--d-max", default=256, type=int,
                    help="largest dimension (power of two); the right panel is "
                         "10x slower per path, lower this if pressed for time")
    ap.add_argument("--paths", default=100, type=int)
    ap.add_argument("--seed", default=123456789, type=int)
    args = ap.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    for name, flags in PANELS.items():
        out = args.outdir / f"scaling_{name}.csv"
        code = cli_main([
            "scaling", "--d-min", "2", "--d-max", str(args.d_max),
            "--paths", str(args.paths), "--seed", str(args.seed),
            *flags, "--output", str(out),
        ])
        if code != 0:
            return code
        print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
