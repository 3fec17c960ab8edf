#!/usr/bin/env python3
"""Scaling sweep over the voting benchmark.

For each voter count k the sweep prints one row per (pipeline, engine):
full composition vs assume-guarantee decomposition, strategy search vs
fixpoint approximation. Cells hit by a resource cap render as memout,
which is the interesting part: the monolithic pipeline dies around k=5
while the compositional one keeps going.

Usage: python3 scripts/bench_voting.py [--voters 1 2 3] [--mode both]
Caps come from AGRMC_STATE_CAP / AGRMC_TRANS_CAP / AGRMC_MEM_CAP.
"""

import argparse

from agrmc.cli import _bench_rows_agr, _bench_rows_mono
from agrmc.composer import Caps
from agrmc.voting import generate_simple_voting


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--voters", type=int, nargs="+", default=[1, 2, 3])
    parser.add_argument("--mode", choices=("mono", "agr", "both"), default="both")
    args = parser.parse_args()

    caps = Caps.from_env()
    print(
        f"{'k':>3} {'pipeline':<9} {'engine':<6} {'states':>9} "
        f"{'transitions':>12} {'verdict':<13} {'time_s':>9}"
    )
    for k in args.voters:
        doc = generate_simple_voting(k)
        rows = []
        if args.mode in ("mono", "both"):
            rows.extend(_bench_rows_mono(doc, caps))
        if args.mode in ("agr", "both"):
            rows.extend(_bench_rows_agr(doc, caps))
        for pipeline, engine, st, tr, verdict, dt in rows:
            print(
                f"{k:>3} {pipeline:<9} {engine:<6} {st!s:>9} {tr!s:>12} "
                f"{verdict:<13} {dt:>9.3f}"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
