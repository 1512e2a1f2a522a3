"""Canned scenario configurations for the benchmark experiments.

Three scenarios drive the headline results:

  * `nominal_scenario`  -- low-cost IMU error budget, unknown initial attitude
    ([60, 180, 60] deg error, 180 deg prior std per axis).
  * `enlarged_scenario` -- same course with intentionally enlarged biases
    (gyro 2000 deg/h per axis, accel [80, 60, 50] mg) and priors widened to
    match the stress level.
  * `reset_scenario`    -- enlarged biases on an urban-style drive (crawl
    start, dense maneuvers, 0.5 Hz GNSS) with a covariance reset at 10 s.

All three are deterministic given their master seed.
"""

from __future__ import annotations

from dataclasses import replace

from .filters import FilterKind
from .harness import DEFAULT_VARIANTS, InitSpec, ScenarioConfig, VariantConfig
from .simulate import ImuErrorSpec, default_profile, reset_test_profile

ENLARGED_GYRO_BIAS = (2000.0, 2000.0, 2000.0)   # deg/h
ENLARGED_ACCEL_BIAS = (80.0, 60.0, 50.0)        # mg


def nominal_scenario(runs: int = 20, seed: int = 74001, duration: float = 600.0) -> ScenarioConfig:
    return ScenarioConfig(
        profile=default_profile(duration),
        imu_spec=ImuErrorSpec(),
        variants=DEFAULT_VARIANTS,
        init=InitSpec(),
        monte_carlo_runs=runs,
        seed=seed,
    )


def enlarged_scenario(runs: int = 20, seed: int = 74002, duration: float = 600.0) -> ScenarioConfig:
    return ScenarioConfig(
        profile=default_profile(duration),
        imu_spec=ImuErrorSpec(gyro_bias=ENLARGED_GYRO_BIAS, accel_bias=ENLARGED_ACCEL_BIAS),
        variants=(
            VariantConfig(FilterKind.LQEKF),
            VariantConfig(FilterKind.RQEKF),
            VariantConfig(FilterKind.CLIFFORD),
        ),
        init=InitSpec(bg_std_deg_h=3000.0, ba_std_mg=120.0),
        monte_carlo_runs=runs,
        seed=seed,
    )


def reset_scenario(
    runs: int = 20, seed: int = 74003, duration: float = 600.0, with_reset: bool = True
) -> ScenarioConfig:
    cfg = ScenarioConfig(
        profile=reset_test_profile(duration),
        imu_spec=ImuErrorSpec(gyro_bias=ENLARGED_GYRO_BIAS, accel_bias=ENLARGED_ACCEL_BIAS),
        variants=(
            VariantConfig(FilterKind.CLIFFORD),
            VariantConfig(FilterKind.EKF),
        ),
        init=InitSpec(bg_std_deg_h=3000.0, ba_std_mg=120.0),
        monte_carlo_runs=runs,
        seed=seed,
        reset_times=(10.0,),
    )
    if not with_reset:
        cfg = replace(cfg, reset_times=())
    return cfg
