#!/usr/bin/env python3
"""Regenerate the reference spectrum table: converged and WKB eigenvalues
for (2,2), harmonic numbers and WKB values for (1,1), on the kappa/2 scale.

Writes table1.csv next to this script unless an output path is given.
"""
import argparse
import pathlib
import sys

from kab.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--output",
        default=str(pathlib.Path(__file__).resolve().parent / "table1.csv"),
    )
    ap.add_argument("--u-max", type=float, default=40.0)
    ap.add_argument("--m-points", type=int, default=4096)
    args = ap.parse_args()
    return cli_main(
        [
            "table1",
            "--output", args.output,
            "--u-max", str(args.u_max),
            "--m-points", str(args.m_points),
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
