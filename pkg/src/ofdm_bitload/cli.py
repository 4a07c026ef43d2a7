"""Command-line entry point.

Subcommands: sweep-fn, sweep-snr, sweep-sigma-h, allocate, profile-dump,
verify. Machine-readable summaries go to stdout; progress and diagnostics to
stderr. Output files are written atomically (temp file + rename) with a JSON
provenance sidecar next to each CSV.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys

import numpy as np

from . import experiments, interference, verifier
from .allocator import AllocationStatus
from .channel import draw_realization
from .config import SystemConfig, config_as_dict, load_config, updated, validate
from .errors import DomainError
from .experiments import SweepKind, SweepSpec, run_sweep, run_trial
from .link import sinr

CONFIG_ENV = "OFDM_BITLOAD_CONFIG"

_SWEEP_DEFAULT_GRID = {
    SweepKind.FN: tuple(np.round(np.arange(0.40, 0.701, 0.02), 10)),
    SweepKind.SNR: tuple(float(x) for x in range(0, 41, 5)),
    SweepKind.SIGMA_H: (0.0, 0.001, 0.01, 0.1),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ofdm-bitload",
        description="Adaptive OFDM bit loading next to a narrowband interferer")
    parser.add_argument("--config", default=None,
                        help=f"flat key-value config file (default: ${CONFIG_ENV} "
                             "or built-in defaults)")
    parser.add_argument("--seed", type=int, default=0, help="base random seed")
    parser.add_argument("--trials", type=int, default=100,
                        help="Monte Carlo trials per grid point (default 100)")
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                        help="parallel worker processes")
    parser.add_argument("--output", default=None, help="output CSV path")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, kind in (("sweep-fn", SweepKind.FN), ("sweep-snr", SweepKind.SNR),
                       ("sweep-sigma-h", SweepKind.SIGMA_H)):
        p = sub.add_parser(name, help=f"average-throughput sweep over {kind.value}")
        p.set_defaults(kind=kind)
        p.add_argument("--grid", default=None,
                       help="comma-separated grid values (default: built-in grid)")
        p.add_argument("--snr-db", type=float, default=None)
        p.add_argument("--sir-db", type=float, default=None)
        p.add_argument("--fn", type=float, default=None)
        p.add_argument("--sigma-h2", type=float, default=None)

    p = sub.add_parser("allocate", help="one-shot allocation for a single channel draw")
    for flag, typ in (("--snr-db", float), ("--sir-db", float), ("--fn", float),
                      ("--sigma-h2", float)):
        p.add_argument(flag, type=typ, default=None)

    p = sub.add_parser("profile-dump", help="per-subcarrier interference variance CSV")
    p.add_argument("--fn", type=float, default=None)
    p.add_argument("--sir-db", type=float, default=None)
    p.add_argument("--mc-symbols", type=int, default=0,
                   help="also compute the Monte Carlo profile over this many symbols")

    p = sub.add_parser("verify", help="symbol-level re-measurement of one allocation")
    p.add_argument("--snr-db", type=float, default=None)
    p.add_argument("--sir-db", type=float, default=None)
    p.add_argument("--fn", type=float, default=None)
    p.add_argument("--sigma-h2", type=float, default=None)
    p.add_argument("--symbols", type=int, default=100_000,
                   help="OFDM symbols to transmit per subcarrier")
    return parser


def _load_base_config(args) -> SystemConfig:
    path = args.config or os.environ.get(CONFIG_ENV)
    cfg = load_config(path) if path else SystemConfig()
    overrides = {}
    for attr, key in (("snr_db", "link.avg_snr_db"), ("sir_db", "link.sir_db"),
                      ("fn", "nb.normalized_freq"), ("sigma_h2", "link.est_error_var")):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    return validate(updated(cfg, overrides))


def _profile_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(0x9E37,)))


def _cmd_sweep(args, cfg: SystemConfig) -> int:
    kind = args.kind
    if args.grid:
        grid = tuple(float(v) for v in args.grid.split(","))
    else:
        grid = _SWEEP_DEFAULT_GRID[kind]
    spec = SweepSpec(kind=kind, grid=grid, trials=args.trials, base_seed=args.seed)
    print(f"running {kind.value} sweep: {len(grid)} points x {args.trials} trials",
          file=sys.stderr)
    records = run_sweep(spec, cfg, workers=args.workers)
    out = args.output or f"sweep_{kind.value}.csv"
    experiments.write_sweep_csv(records, out)
    experiments.write_sweep_json(records, spec, cfg, os.path.splitext(out)[0] + ".json")
    print(out)
    return 0


def _cmd_allocate(args, cfg: SystemConfig) -> int:
    profile = interference.calibrated_profile(cfg, rng=_profile_rng(args.seed))
    result = run_trial(cfg, profile, trial_index=0, base_seed=args.seed)
    summary = {
        "status": result.status.value,
        "throughput_bits": result.throughput_bits,
        "mean_ber": None if result.status is AllocationStatus.TRANSMISSION_STOPPED
        else result.mean_ber,
        "iterations": result.iterations,
        "loads": [c.name for c in result.loads],
        "seed": args.seed,
    }
    print(json.dumps(summary))
    return 0


def _cmd_profile_dump(args, cfg: SystemConfig) -> int:
    analytic = interference.calibrated_profile(cfg, rng=_profile_rng(args.seed))
    mc = None
    if args.mc_symbols > 0:
        mc = interference.mc_variance(cfg, analytic.symbol_power, args.mc_symbols,
                                      np.random.default_rng(args.seed))
    buf = io.StringIO()
    interference.dump_profile_csv(buf, analytic, mc)
    out = args.output or "interference_profile.csv"
    experiments._atomic_write(out, buf.getvalue())
    sidecar = {"config": config_as_dict(cfg), "seed": args.seed,
               "sigma_b2": analytic.symbol_power}
    experiments._atomic_write(os.path.splitext(out)[0] + ".json",
                              json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    print(out)
    return 0


def _cmd_verify(args, cfg: SystemConfig) -> int:
    profile = interference.calibrated_profile(cfg, rng=_profile_rng(args.seed))
    result = run_trial(cfg, profile, trial_index=0, base_seed=args.seed)
    if result.status is AllocationStatus.TRANSMISSION_STOPPED:
        print(json.dumps({"status": result.status.value, "throughput_bits": 0}))
        return 0
    rng = experiments.trial_stream(args.seed, 0)
    realization = draw_realization(cfg.channel, cfg.ofdm, rng)
    gammas = sinr(realization.gains_sq, cfg.link.symbol_power,
                  cfg.link.noise_variance, cfg.link.est_error_var, profile.variances)
    measured = verifier.measure_allocation_ber(
        gammas, result.loads, cfg.ofdm.cp_loss_factor, args.symbols,
        np.random.default_rng(args.seed + 1))
    print(json.dumps({"status": result.status.value,
                      "throughput_bits": result.throughput_bits,
                      "predicted_mean_ber": result.mean_ber,
                      "measured_mean_ber": measured,
                      "target_ber": cfg.link.target_ber}))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _load_base_config(args)
        if args.command in ("sweep-fn", "sweep-snr", "sweep-sigma-h"):
            return _cmd_sweep(args, cfg)
        if args.command == "allocate":
            return _cmd_allocate(args, cfg)
        if args.command == "profile-dump":
            return _cmd_profile_dump(args, cfg)
        return _cmd_verify(args, cfg)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - single-line diagnostic contract
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
