"""Scenario configuration, Monte-Carlo execution, metrics and file I/O."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .errors import ConfigError, OrderingError, ParseError
from .filters import (
    ATT,
    FilterKind,
    FilterVariant,
    ResetStds,
    build_FG,
    init_covariance,
    iterated_update,
    predict,
    reset_filter,
)
from .mechanization import EarthModel, GnssSample, ImuSample, propagate
from .quaternions import Quaternion, dcm, quat_from_dcm, quat_mul
from .simulate import (
    G0,
    DEG_PER_HOUR,
    ImuErrorSpec,
    Segment,
    TrajectoryProfile,
    TruthSample,
    default_profile,
    generate_trajectory,
    ned_to_ecef_matrix,
    simulate_gnss,
    simulate_imu,
)
from .state import ExtendedCliffordState

_CANONICAL_LABELS = {
    (FilterKind.EKF, True): "EKF-Iter",
    (FilterKind.EKF, False): "EKF",
    (FilterKind.LQEKF, True): "LQEKF-Iter",
    (FilterKind.LQEKF, False): "LQEKF",
    (FilterKind.RQEKF, True): "RQEKF-Iter",
    (FilterKind.RQEKF, False): "RQEKF",
    (FilterKind.CLIFFORD, True): "Clifford-RQEKF-Iter",
    (FilterKind.CLIFFORD, False): "Clifford-RQEKF",
}

DEFAULT_WINDOWS = ((1.0, 10.0), (10.0, 50.0), (200.0, 600.0))


@dataclass(frozen=True)
class VariantConfig:
    kind: FilterKind
    iterated: bool = True
    ideal_init: bool = False
    label: str = ""
    max_iter: int = 20
    term_threshold_deg: float = 0.01

    def __post_init__(self):
        object.__setattr__(self, "kind", FilterKind(self.kind))
        if not self.label:
            base = _CANONICAL_LABELS[(self.kind, self.iterated)]
            object.__setattr__(self, "label", "Ideal-EKF" if self.ideal_init else base)

    def to_variant(self) -> FilterVariant:
        return FilterVariant(
            kind=self.kind,
            iterated=self.iterated,
            max_iter=self.max_iter,
            term_threshold=np.radians(self.term_threshold_deg),
        )


IDEAL_EKF = VariantConfig(FilterKind.EKF, iterated=False, ideal_init=True)

DEFAULT_VARIANTS = (
    VariantConfig(FilterKind.EKF),
    VariantConfig(FilterKind.LQEKF),
    VariantConfig(FilterKind.RQEKF),
    VariantConfig(FilterKind.CLIFFORD),
)


@dataclass(frozen=True)
class InitSpec:
    """Initialization errors and additive prior standard deviations."""

    att_error_deg: tuple[float, float, float] = (60.0, 180.0, 60.0)  # roll, heading, pitch
    att_std_deg: tuple[float, float, float] = (180.0, 180.0, 180.0)
    ideal_att_std_deg: float = 1.0
    vel_std: float = 0.1
    pos_std: float = 1.0
    bg_std_deg_h: float = 1200.0
    ba_std_mg: float = 30.0
    lever_std: float = 1.0

    def additive_covariance(self, ideal: bool = False) -> np.ndarray:
        att = (
            np.full(3, np.radians(self.ideal_att_std_deg))
            if ideal
            else np.radians(self.att_std_deg)
        )
        d = np.concatenate(
            [
                np.asarray(att, dtype=float) ** 2,
                np.full(3, self.vel_std**2),
                np.full(3, self.pos_std**2),
                np.full(3, (self.bg_std_deg_h * DEG_PER_HOUR) ** 2),
                np.full(3, (self.ba_std_mg * 1e-3 * G0) ** 2),
                np.full(3, self.lever_std**2),
            ]
        )
        return np.diag(d)

    def reset_stds(self) -> ResetStds:
        return ResetStds(
            att=np.pi,
            vel=max(self.vel_std, 0.1),
            pos=max(self.pos_std, 1.0),
            bg=self.bg_std_deg_h * DEG_PER_HOUR,
            ba=self.ba_std_mg * 1e-3 * G0,
            lever=self.lever_std,
        )


@dataclass(frozen=True)
class ScenarioConfig:
    profile: TrajectoryProfile = field(default_factory=default_profile)
    imu_spec: ImuErrorSpec = field(default_factory=ImuErrorSpec)
    variants: tuple[VariantConfig, ...] = DEFAULT_VARIANTS
    init: InitSpec = field(default_factory=InitSpec)
    lever_true: tuple[float, float, float] = (0.5, 0.8, 0.3)
    lever_init: tuple[float, float, float] = (0.0, 0.0, 0.0)
    gnss_vel_std: float = 0.1
    gnss_pos_std: float = 0.1
    lever_psd: float = 1e-8
    reset_times: tuple[float, ...] = ()
    monte_carlo_runs: int = 1
    seed: int = 20240001
    cov_stride: int = 10
    windows: tuple[tuple[float, float], ...] = DEFAULT_WINDOWS

    def __post_init__(self):
        if self.monte_carlo_runs < 1:
            raise ConfigError("monte_carlo_runs must be >= 1")
        if not self.variants:
            raise ConfigError("at least one filter variant is required")
        if self.cov_stride < 1:
            raise ConfigError("cov_stride must be >= 1")


@dataclass
class VariantRun:
    """Per-update time series for one (variant, Monte-Carlo run) pair."""

    label: str
    run: int
    t: np.ndarray
    err_deg: np.ndarray        # (N, 3) roll/pitch/heading estimate-minus-truth, deg
    sig3_head_deg: np.ndarray  # (N,)
    iters: np.ndarray          # (N,)
    bg: np.ndarray             # (N, 3) rad/s
    ba: np.ndarray             # (N, 3) m/s^2
    lever: np.ndarray          # (N, 3) m
    est_pos: np.ndarray        # (N, 3) m
    est_vel: np.ndarray        # (N, 3) m/s, ground velocity

    @property
    def err_head(self) -> np.ndarray:
        return self.err_deg[:, 2]


def rmse_intervals(err_series, windows) -> list[float]:
    """Root-mean-square of the values with t0 <= t < t1 for each window."""
    pairs = list(err_series)
    t = np.array([p[0] for p in pairs])
    v = np.array([p[1] for p in pairs])
    out = []
    for t0, t1 in windows:
        mask = (t >= t0) & (t < t1)
        if not np.any(mask):
            raise ConfigError(f"window [{t0}, {t1}) contains no samples")
        out.append(float(np.sqrt(np.mean(v[mask] ** 2))))
    return out


def _wrap_deg(x: np.ndarray) -> np.ndarray:
    return (x + 180.0) % 360.0 - 180.0


def euler_from_dcm_bn(rot: np.ndarray) -> np.ndarray:
    """(roll, pitch, yaw) of a body-to-NED rotation, radians."""
    pitch = -np.arcsin(np.clip(rot[2, 0], -1.0, 1.0))
    roll = np.arctan2(rot[2, 1], rot[2, 2])
    yaw = np.arctan2(rot[1, 0], rot[0, 0])
    return np.array([roll, pitch, yaw])


def quat_from_euler(roll: float, pitch: float, yaw: float) -> Quaternion:
    """Body-to-reference quaternion from yaw-pitch-roll angles (radians)."""
    cr, sr = np.cos(roll / 2), np.sin(roll / 2)
    cp, sp = np.cos(pitch / 2), np.sin(pitch / 2)
    cy, sy = np.cos(yaw / 2), np.sin(yaw / 2)
    return Quaternion(
        cy * cp * cr + sy * sp * sr,
        np.array(
            [
                cy * cp * sr - sy * sp * cr,
                cy * sp * cr + sy * cp * sr,
                sy * cp * cr - cy * sp * sr,
            ]
        ),
    )


def heading_sigma(variant: FilterVariant, state: ExtendedCliffordState,
                  P: np.ndarray, c_ne: np.ndarray) -> float:
    """1-sigma heading uncertainty projected from the attitude error block."""
    down_e = c_ne[:, 2]
    if variant.kind is FilterKind.LQEKF:
        d = dcm(state.att).T @ down_e
    else:
        d = down_e
    return float(np.sqrt(max(d @ P[ATT, ATT] @ d, 0.0)))


def run_filter(
    variant_cfg: VariantConfig,
    cfg: ScenarioConfig,
    imu: list[ImuSample],
    gnss: list[GnssSample],
    truth: list[TruthSample] | None,
    model: EarthModel,
    run_index: int = 0,
    initial: ExtendedCliffordState | None = None,
) -> VariantRun:
    """Run one filter over one sensor log; errors need truth, estimates do not."""
    variant = variant_cfg.to_variant()
    c_ne = ned_to_ecef_matrix(cfg.profile.origin_llh[0], cfg.profile.origin_llh[1])
    w_vec = model.omega_vec

    if initial is not None:
        state = initial
    elif truth is not None:
        t0 = truth[0]
        if variant_cfg.ideal_init:
            att0 = t0.att
        else:
            roll_e, head_e, pitch_e = np.radians(cfg.init.att_error_deg)
            att0 = quat_mul(t0.att, quat_from_euler(roll_e, pitch_e, head_e))
        state = ExtendedCliffordState(
            att0,
            t0.vel_ground + np.cross(w_vec, t0.pos),
            t0.pos,
            np.zeros(3),
            np.zeros(3),
            np.asarray(cfg.lever_init, dtype=float),
        )
    else:
        # replay without truth: local-level attitude guess at the origin,
        # position/velocity from the first fix
        first = gnss[0]
        state = ExtendedCliffordState(
            quat_from_dcm(c_ne),
            first.vel + np.cross(w_vec, first.pos),
            first.pos,
            np.zeros(3),
            np.zeros(3),
            np.asarray(cfg.lever_init, dtype=float),
        )

    P = init_covariance(
        variant, cfg.init.additive_covariance(ideal=variant_cfg.ideal_init), state
    )
    noise = cfg.imu_spec.to_noise_spec(cfg.lever_psd, cfg.gnss_vel_std)
    reset_pending = sorted(cfg.reset_times)

    rec: dict[str, list] = {k: [] for k in (
        "t", "err", "sig3", "iters", "bg", "ba", "lever", "pos", "vel")}

    gi = 0
    t_prev = imu[0].t - (imu[1].t - imu[0].t) if len(imu) > 1 else 0.0
    if truth is not None:
        t_prev = truth[0].t
    t_cov = t_prev
    imu_rate = cfg.profile.imu_rate

    for i, u in enumerate(imu):
        dt = u.t - t_prev
        if dt <= 0:
            raise OrderingError(f"IMU time not increasing at t = {u.t}")
        state = propagate(state, u, dt, model)
        t_prev = u.t

        update_due = gi < len(gnss) and gnss[gi].t <= u.t + 0.5 * dt
        if (i + 1) % cfg.cov_stride == 0 or update_due:
            F, G = build_FG(variant, state, u, model)
            P = predict(P, F, G, noise, u.t - t_cov)
            t_cov = u.t

        if not update_due:
            continue
        y = gnss[gi]
        gi += 1
        state, P, iters = iterated_update(state, P, y, variant, u, model)

        rec["t"].append(u.t)
        rec["iters"].append(iters)
        rec["sig3"].append(3.0 * np.degrees(heading_sigma(variant, state, P, c_ne)))
        rec["bg"].append(state.bg.copy())
        rec["ba"].append(state.ba.copy())
        rec["lever"].append(state.lever.copy())
        rec["pos"].append(state.pos.copy())
        rec["vel"].append(state.ground_velocity(w_vec))
        if truth is not None:
            k = int(round(u.t * imu_rate))
            tru = truth[min(k, len(truth) - 1)]
            e_est = euler_from_dcm_bn(c_ne.T @ dcm(state.att))
            e_tru = euler_from_dcm_bn(c_ne.T @ dcm(tru.att))
            rec["err"].append(_wrap_deg(np.degrees(e_est - e_tru)))
        else:
            rec["err"].append(np.full(3, np.nan))

        if reset_pending and u.t >= reset_pending[0] - 0.5 * dt:
            reset_pending.pop(0)
            state, p_add = reset_filter(
                state, P, y.pos, y.vel, model, cfg.init.reset_stds()
            )
            P = init_covariance(variant, p_add, state)

    return VariantRun(
        label=variant_cfg.label,
        run=run_index,
        t=np.array(rec["t"]),
        err_deg=np.array(rec["err"]).reshape(-1, 3),
        sig3_head_deg=np.array(rec["sig3"]),
        iters=np.array(rec["iters"], dtype=int),
        bg=np.array(rec["bg"]).reshape(-1, 3),
        ba=np.array(rec["ba"]).reshape(-1, 3),
        lever=np.array(rec["lever"]).reshape(-1, 3),
        est_pos=np.array(rec["pos"]).reshape(-1, 3),
        est_vel=np.array(rec["vel"]).reshape(-1, 3),
    )


@dataclass
class MetricsReport:
    runs: list[VariantRun]
    windows: tuple[tuple[float, float], ...] = DEFAULT_WINDOWS

    def labels(self) -> list[str]:
        seen = []
        for r in self.runs:
            if r.label not in seen:
                seen.append(r.label)
        return seen

    def runs_for(self, label: str) -> list[VariantRun]:
        out = [r for r in self.runs if r.label == label]
        if not out:
            raise ConfigError(f"no runs recorded for variant {label!r}")
        return out

    def heading_rmse(self, label: str, window: tuple[float, float]) -> float:
        """Pooled-over-runs heading RMSE inside [t0, t1)."""
        sq, n = 0.0, 0
        for r in self.runs_for(label):
            mask = (r.t >= window[0]) & (r.t < window[1])
            if not np.any(mask):
                raise ConfigError(f"window {window} is empty for {label}")
            sq += float(np.sum(r.err_head[mask] ** 2))
            n += int(np.sum(mask))
        return float(np.sqrt(sq / n))

    def heading_rmse_per_run(self, label: str, window: tuple[float, float]) -> np.ndarray:
        vals = []
        for r in self.runs_for(label):
            vals.append(
                rmse_intervals(zip(r.t, r.err_head), [window])[0]
            )
        return np.array(vals)

    def median_iterations(self, label: str, t_min: float = 0.0) -> float:
        pooled = np.concatenate(
            [r.iters[r.t >= t_min] for r in self.runs_for(label)]
        )
        return float(np.median(pooled))

    def consistency_fraction(self, label: str, t_min: float = 0.0) -> float:
        """Mean fraction of epochs with |heading error| within the 3-sigma bound."""
        fracs = []
        for r in self.runs_for(label):
            mask = r.t >= t_min
            fracs.append(
                float(np.mean(np.abs(r.err_head[mask]) <= r.sig3_head_deg[mask]))
            )
        return float(np.mean(fracs))

    def heading_error_at(self, label: str, t_query: float) -> np.ndarray:
        """|heading error| of each run at the epoch closest to t_query."""
        vals = []
        for r in self.runs_for(label):
            idx = int(np.argmin(np.abs(r.t - t_query)))
            vals.append(abs(float(r.err_head[idx])))
        return np.array(vals)

    def summary_rows(self) -> list[dict]:
        rows = []
        for label in self.labels():
            row = {"variant": label}
            for w in self.windows:
                try:
                    row[f"rmse_head_{w[0]:g}_{w[1]:g}"] = self.heading_rmse(label, w)
                except ConfigError:
                    row[f"rmse_head_{w[0]:g}_{w[1]:g}"] = float("nan")
            row["median_iters_after_50s"] = self.median_iterations(label, 50.0)
            row["consistency_after_50s"] = self.consistency_fraction(label, 50.0)
            rows.append(row)
        return rows


_WORKER_STATE: dict = {}


def _worker_init(cfg: ScenarioConfig, model: EarthModel) -> None:
    _WORKER_STATE["cfg"] = cfg
    _WORKER_STATE["model"] = model
    _WORKER_STATE["truth"] = generate_trajectory(cfg.profile, model)


def _run_one(args: tuple[int, int, int, tuple[VariantConfig, ...]]) -> list[VariantRun]:
    run_idx, imu_seed, gnss_seed, variants = args
    cfg = _WORKER_STATE["cfg"]
    model = _WORKER_STATE["model"]
    truth = _WORKER_STATE["truth"]
    imu = simulate_imu(truth, replace(cfg.imu_spec, seed=imu_seed))
    gnss = simulate_gnss(
        truth, cfg.lever_true, cfg.gnss_vel_std, cfg.profile.gnss_rate,
        gnss_seed, cfg.gnss_pos_std, model,
    )
    return [
        run_filter(vc, cfg, imu, gnss, truth, model, run_index=run_idx)
        for vc in variants
    ]


def run_scenario(
    cfg: ScenarioConfig, model: EarthModel | None = None, jobs: int = 1
) -> MetricsReport:
    """Generate truth once, then filter every variant over per-run sensor draws.

    Runs are independent; `jobs > 1` schedules them over a process pool. The
    report is identical either way: per-run seeds are drawn up front from the
    master seed and results are ordered by run index.
    """
    model = model or EarthModel()

    variants = tuple(cfg.variants)
    if not any(v.ideal_init for v in variants):
        variants = (IDEAL_EKF,) + variants

    seeder = np.random.default_rng(cfg.seed)
    tasks = []
    for run_idx in range(cfg.monte_carlo_runs):
        imu_seed = int(seeder.integers(2**31 - 1))
        gnss_seed = int(seeder.integers(2**31 - 1))
        tasks.append((run_idx, imu_seed, gnss_seed, variants))

    report = MetricsReport(runs=[], windows=cfg.windows)
    if jobs <= 1:
        _worker_init(cfg, model)
        results = [_run_one(task) for task in tasks]
        _WORKER_STATE.clear()
    else:
        import multiprocessing as mp

        ctx = mp.get_context("fork")
        with ctx.Pool(jobs, initializer=_worker_init, initargs=(cfg, model)) as pool:
            results = pool.map(_run_one, tasks)
    for batch in results:
        report.runs.extend(batch)
    return report


# ---------------------------------------------------------------------------
# CSV / JSON I/O

_IMU_HEADER = ["t", "gx", "gy", "gz", "ax", "ay", "az"]
_GNSS_HEADER = ["t", "vx", "vy", "vz", "px", "py", "pz", "vel_std"]
_TRUTH_HEADER = ["t", "qw", "qx", "qy", "qz", "px", "py", "pz", "vx", "vy", "vz"]
_RESULT_HEADER = [
    "t", "variant", "run", "err_roll", "err_pitch", "err_head", "iters", "sig3_head",
    "bg_x", "bg_y", "bg_z", "ba_x", "ba_y", "ba_z", "lev_x", "lev_y", "lev_z",
]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def save_imu_csv(path, imu: list[ImuSample]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(_IMU_HEADER)
        for s in imu:
            w.writerow([_fmt(s.t)] + [_fmt(v) for v in s.gyro] + [_fmt(v) for v in s.accel])


def save_gnss_csv(path, gnss: list[GnssSample]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(_GNSS_HEADER)
        for s in gnss:
            w.writerow(
                [_fmt(s.t)]
                + [_fmt(v) for v in s.vel]
                + [_fmt(v) for v in s.pos]
                + [_fmt(s.vel_std)]
            )


def save_truth_csv(path, truth: list[TruthSample]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(_TRUTH_HEADER)
        for s in truth:
            w.writerow(
                [_fmt(s.t)]
                + [_fmt(v) for v in s.att.wxyz]
                + [_fmt(v) for v in s.pos]
                + [_fmt(v) for v in s.vel_ground]
            )


def save_results_csv(path, report: MetricsReport) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(_RESULT_HEADER)
        for r in report.runs:
            for k in range(len(r.t)):
                w.writerow(
                    [_fmt(r.t[k]), r.label, r.run]
                    + [_fmt(v) for v in r.err_deg[k]]
                    + [int(r.iters[k]), _fmt(r.sig3_head_deg[k])]
                    + [_fmt(v) for v in r.bg[k]]
                    + [_fmt(v) for v in r.ba[k]]
                    + [_fmt(v) for v in r.lever[k]]
                )


def save_summary_csv(path, report: MetricsReport) -> None:
    rows = report.summary_rows()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        header = list(rows[0].keys())
        w.writerow(header)
        for row in rows:
            w.writerow([row[h] if isinstance(row[h], str) else _fmt(row[h]) for h in header])


def _parse_row(row: list[str], expected: int, line: int) -> list[float]:
    if len(row) != expected:
        raise ParseError(f"expected {expected} fields, got {len(row)}", line)
    try:
        return [float(x) for x in row]
    except ValueError as exc:
        raise ParseError(str(exc), line) from exc


def load_logs(imu_path, gnss_path) -> tuple[list[ImuSample], list[GnssSample]]:
    """Read IMU and GNSS CSV streams; validates headers and time ordering."""
    imu: list[ImuSample] = []
    with open(imu_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _IMU_HEADER:
            raise ParseError(f"bad IMU header {header!r}", 1)
        prev = -np.inf
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            vals = _parse_row(row, 7, line)
            if vals[0] <= prev:
                raise OrderingError(f"IMU time not increasing at line {line}")
            prev = vals[0]
            imu.append(ImuSample(vals[0], np.array(vals[1:4]), np.array(vals[4:7])))

    gnss: list[GnssSample] = []
    with open(gnss_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _GNSS_HEADER:
            raise ParseError(f"bad GNSS header {header!r}", 1)
        prev = -np.inf
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            vals = _parse_row(row, 8, line)
            if vals[0] <= prev:
                raise OrderingError(f"GNSS time not increasing at line {line}")
            prev = vals[0]
            gnss.append(
                GnssSample(vals[0], np.array(vals[1:4]), np.array(vals[4:7]), vals[7])
            )
    return imu, gnss


def _require_keys(d: dict, allowed: set[str], context: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown {context} keys: {sorted(unknown)}")


def profile_from_dict(d: dict) -> TrajectoryProfile:
    _require_keys(
        d,
        {"origin_lat_deg", "origin_lon_deg", "origin_height_m", "base_speed",
         "imu_rate", "gnss_rate", "segments", "duration"},
        "profile",
    )
    if "segments" in d:
        segments = tuple(
            Segment(s["kind"], float(s["duration"]), float(s.get("param", 0.0)))
            for s in d["segments"]
        )
    else:
        segments = default_profile(float(d.get("duration", 600.0))).segments
    return TrajectoryProfile(
        origin_llh=(
            np.radians(float(d.get("origin_lat_deg", 31.0))),
            np.radians(float(d.get("origin_lon_deg", 121.4))),
            float(d.get("origin_height_m", 10.0)),
        ),
        segments=segments,
        base_speed=float(d.get("base_speed", 12.0)),
        imu_rate=float(d.get("imu_rate", 100.0)),
        gnss_rate=float(d.get("gnss_rate", 1.0)),
    )


def scenario_from_dict(d: dict) -> ScenarioConfig:
    _require_keys(
        d,
        {"profile", "imu_spec", "variants", "init", "lever_true", "lever_init",
         "gnss_vel_std", "gnss_pos_std", "lever_psd", "reset_times",
         "monte_carlo_runs", "seed", "cov_stride", "windows"},
        "scenario",
    )
    kwargs: dict = {}
    if "profile" in d:
        kwargs["profile"] = profile_from_dict(d["profile"])
    if "imu_spec" in d:
        spec = d["imu_spec"]
        _require_keys(
            spec,
            {f.name for f in fields(ImuErrorSpec)},
            "imu_spec",
        )
        kwargs["imu_spec"] = ImuErrorSpec(**{
            k: tuple(v) if isinstance(v, list) else v for k, v in spec.items()
        })
    if "variants" in d:
        out = []
        for v in d["variants"]:
            _require_keys(
                v, {f.name for f in fields(VariantConfig)}, "variant"
            )
            out.append(VariantConfig(**v))
        kwargs["variants"] = tuple(out)
    if "init" in d:
        _require_keys(d["init"], {f.name for f in fields(InitSpec)}, "init")
        kwargs["init"] = InitSpec(**{
            k: tuple(v) if isinstance(v, list) else v for k, v in d["init"].items()
        })
    for key in ("lever_true", "lever_init"):
        if key in d:
            kwargs[key] = tuple(float(x) for x in d[key])
    for key in ("gnss_vel_std", "gnss_pos_std", "lever_psd"):
        if key in d:
            kwargs[key] = float(d[key])
    for key in ("seed", "monte_carlo_runs", "cov_stride"):
        if key in d:
            kwargs[key] = int(d[key])
    if "reset_times" in d:
        kwargs["reset_times"] = tuple(float(x) for x in d["reset_times"])
    if "windows" in d:
        kwargs["windows"] = tuple((float(a), float(b)) for a, b in d["windows"])
    return ScenarioConfig(**kwargs)


def load_scenario(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    return scenario_from_dict(raw)
