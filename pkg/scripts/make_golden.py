#!/usr/bin/env python3
"""Regenerate the frozen golden regression value used by the acceptance suite.

Operating point: SNR 20 dB, SIR 0 dB, F_n 0.52, sigma_h^2 0, 10^4 trials,
base seed 42. Paste the printed value into tests/test_acceptance.py if the
simulation pipeline changes intentionally.
"""

from ofdm_bitload import SweepKind, SweepSpec, SystemConfig, run_sweep


def main() -> None:
    spec = SweepSpec(SweepKind.SNR, (20.0,), 10_000, 42)
    record = run_sweep(spec, SystemConfig())[0]
    print(f"GOLDEN_SEED = {spec.base_seed}")
    print(f"GOLDEN_AVG_THROUGHPUT_BITS = {record.avg_throughput_bits!r}")
    print(f"GOLDEN_STOPPED_FRACTION = {record.stopped_fraction!r}")
    print(f"# stderr_bits = {record.stderr_bits!r}, point seed = {record.seed}")


if __name__ == "__main__":
    main()
