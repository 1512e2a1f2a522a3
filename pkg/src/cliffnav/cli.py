"""Command-line interface: simulate / filter / run / verify."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .errors import CliffnavError, ConfigError, NumericalError, OrderingError, ParseError
from .filters import FilterKind
from .harness import (
    MetricsReport,
    ScenarioConfig,
    VariantConfig,
    load_logs,
    load_scenario,
    run_filter,
    run_scenario,
    save_gnss_csv,
    save_imu_csv,
    save_results_csv,
    save_summary_csv,
    save_truth_csv,
)
from .mechanization import EarthModel
from .simulate import generate_trajectory, simulate_gnss, simulate_imu

_EXIT_CODES = (
    (ConfigError, 2),
    ((ParseError, OrderingError), 3),
    (NumericalError, 4),
)


def _load_config(args) -> ScenarioConfig:
    cfg = load_scenario(args.config) if args.config else ScenarioConfig()
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.variants:
        wanted = []
        for name in args.variants.split(","):
            name = name.strip().lower()
            if name == "ideal":
                wanted.append(VariantConfig(FilterKind.EKF, iterated=False, ideal_init=True))
            else:
                wanted.append(VariantConfig(FilterKind(name)))
        cfg = replace(cfg, variants=tuple(wanted))
    return cfg


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    out = _out_dir(args)
    model = EarthModel()
    truth = generate_trajectory(cfg.profile, model)
    imu = simulate_imu(truth, replace(cfg.imu_spec, seed=cfg.seed))
    gnss = simulate_gnss(
        truth, cfg.lever_true, cfg.gnss_vel_std, cfg.profile.gnss_rate,
        cfg.seed + 1, cfg.gnss_pos_std, model,
    )
    save_truth_csv(out / "truth.csv", truth)
    save_imu_csv(out / "imu.csv", imu)
    save_gnss_csv(out / "gnss.csv", gnss)
    print(f"wrote {len(truth)} truth, {len(imu)} IMU, {len(gnss)} GNSS samples to {out}")
    return 0


def _cmd_filter(args) -> int:
    cfg = _load_config(args)
    out = _out_dir(args)
    imu, gnss = load_logs(args.imu, args.gnss)
    model = EarthModel()
    report = MetricsReport(runs=[], windows=cfg.windows)
    for vc in cfg.variants:
        report.runs.append(run_filter(vc, cfg, imu, gnss, truth=None, model=model))
    save_results_csv(out / "results.csv", report)
    print(f"filtered {len(imu)} IMU epochs with {len(cfg.variants)} variants -> {out}")
    return 0


def _cmd_run(args) -> int:
    cfg = _load_config(args)
    out = _out_dir(args)
    report = run_scenario(cfg)
    save_results_csv(out / "results.csv", report)
    save_summary_csv(out / "summary.csv", report)
    for row in report.summary_rows():
        print(row)
    return 0


def _cmd_verify(args) -> int:
    from .checks import run_all

    return 0 if run_all(verbose=True) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliffnav",
        description="Clifford-algebra INS/GNSS filter bank: simulation and replay harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario JSON file")
    common.add_argument("--seed", type=int, help="override the master seed")
    common.add_argument("--out-dir", default="out", help="output directory")
    common.add_argument("--variants", help="comma list: ekf,lqekf,rqekf,clifford,ideal")

    p = sub.add_parser("simulate", parents=[common], help="write truth + sensor CSVs")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("filter", parents=[common], help="run filters over recorded CSVs")
    p.add_argument("--imu", required=True, help="IMU CSV path")
    p.add_argument("--gnss", required=True, help="GNSS CSV path")
    p.set_defaults(fn=_cmd_filter)

    p = sub.add_parser("run", parents=[common], help="end-to-end Monte-Carlo scenario")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("verify", parents=[common], help="run the self-check suite")
    p.set_defaults(fn=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliffnavError as exc:
        for types, code in _EXIT_CODES:
            if isinstance(exc, types):
                print(f"error: {exc}", file=sys.stderr)
                return code
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
