#!/usr/bin/env python3
"""Average throughput vs. interferer offset F_n, one curve per SIR.

Reproduces the offset-sweep experiment: SNR 20 dB, F_n from 0.40 to 0.70,
SIR in {-20, -10, 0, 10, 20} dB. Writes one CSV (plus JSON sidecar) per SIR.
"""

import argparse

import numpy as np

from ofdm_bitload import SweepKind, SweepSpec, SystemConfig, run_sweep
from ofdm_bitload.experiments import write_sweep_csv, write_sweep_json

SIRS = (-20.0, -10.0, 0.0, 10.0, 20.0)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--prefix", default="fn_sweep")
    args = parser.parse_args()

    grid = tuple(np.round(np.arange(0.40, 0.701, 0.02), 10))
    cfg = SystemConfig()
    for sir in SIRS:
        spec = SweepSpec(SweepKind.FN, grid, args.trials, args.seed,
                         fixed={"link.sir_db": sir})
        records = run_sweep(spec, cfg, workers=args.workers)
        stem = f"{args.prefix}_sir{sir:+g}"
        write_sweep_csv(records, stem + ".csv")
        write_sweep_json(records, spec, cfg, stem + ".json")
        print(stem + ".csv")


if __name__ == "__main__":
    main()
