"""Infidelity vs dephasing strength for bare and encoded qubits.

Writes the sweep CSV and prints log-log slopes (about 2 unencoded, 4 for t=1,
6 for t=2).

    python scripts/scaling_law.py --trials 100000 --out sweep.csv
"""

import argparse
from pathlib import Path

import numpy as np

from dephasecode.codes import CodeSpec
from dephasecode.experiments import GENERIC_INPUT, loglog_slope, records_to_csv, run_sweep
from dephasecode.noise import parse_model


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=100_000)
    parser.add_argument("--points", type=int, default=6)
    parser.add_argument("--sigma-min", type=float, default=0.05)
    parser.add_argument("--sigma-max", type=float, default=0.4)
    parser.add_argument("--model", default="iid:gauss")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=4)
    parser.add_argument("--out", type=Path, default=None)
    args = parser.parse_args()

    sigmas = np.geomspace(args.sigma_min, args.sigma_max, args.points)
    specs = [CodeSpec(1), CodeSpec(2)]
    records = run_sweep(specs, parse_model(args.model), sigmas, args.trials,
                        seed=args.seed, data=GENERIC_INPUT, threads=args.threads)
    if args.out:
        args.out.write_text(records_to_csv(records))

    for code in ["unencoded"] + [s.label for s in specs]:
        infid = [1 - r.mean_fidelity for r in records if r.code == code]
        print(f"{code:>10}  slope {loglog_slope(sigmas, infid):6.3f}   "
              + "  ".join(f"{x:.2e}" for x in infid))


if __name__ == "__main__":
    main()
