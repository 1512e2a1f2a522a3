"""Ground-truth trajectory generation and IMU/GNSS sensor synthesis.

The vehicle drives in a local tangent (NED) plane anchored at the profile
origin on a spherical earth; truth is lifted to the earth frame with the
fixed plane alignment, so every emitted quantity is exactly consistent with
the earth-frame kinematics the filters integrate.

Body frame is forward-right-down and the motion is planar: roll and pitch
stay zero, heading follows the turn segments. Specific force and angular
rate are derived analytically per segment, including earth rate, Coriolis
and centripetal terms.

Sampling convention: truth sample k is the state at t_k = k/imu_rate, while
its stored rates (omega_ib_b, f_b) are evaluated at the midpoint of
[t_k, t_{k+1}), i.e. they are the rates an averaging IMU would report for
that interval. Segment boundaries are snapped to the sample grid so an
interval never straddles two segments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .filters import NoiseSpec
from .mechanization import EARTH_RADIUS, EarthModel, GnssSample, ImuSample, gravity
from .quaternions import Quaternion, dcm, quat_from_dcm

G0 = 9.80665  # m/s^2, conventional gravity for spec-sheet unit conversions
DEG_PER_HOUR = np.pi / 180.0 / 3600.0
DEG_PER_SQRT_HOUR = np.pi / 180.0 / 60.0

SEGMENT_KINDS = ("straight", "accel", "decel", "turn")


@dataclass(frozen=True)
class Segment:
    kind: str
    duration: float
    param: float = 0.0  # accel/decel: m/s^2 magnitude; turn: rad/s signed

    def __post_init__(self):
        if self.kind not in SEGMENT_KINDS:
            raise ConfigError(f"unknown segment kind {self.kind!r}")
        if self.duration <= 0:
            raise ConfigError("segment duration must be positive")


@dataclass(frozen=True)
class TrajectoryProfile:
    origin_llh: tuple[float, float, float] = (np.radians(31.0), np.radians(121.4), 10.0)
    segments: tuple[Segment, ...] = ()
    base_speed: float = 12.0
    imu_rate: float = 100.0
    gnss_rate: float = 1.0

    def __post_init__(self):
        if self.imu_rate <= 0 or self.gnss_rate <= 0:
            raise ConfigError("rates must be positive")
        if not self.segments:
            raise ConfigError("profile needs at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def duration(self) -> float:
        dt = 1.0 / self.imu_rate
        return sum(round(s.duration / dt) * dt for s in self.segments)


def _fill_with_laps(lead: list[Segment], lap: list[Segment], duration: float) -> tuple[Segment, ...]:
    """Append lap segments after the lead, clipping the last one at `duration`."""
    segments = list(lead)
    total = sum(s.duration for s in segments)
    if total > duration:
        raise ConfigError("lead segments longer than the requested duration")
    i = 0
    while total < duration - 1e-9:
        seg = lap[i % len(lap)]
        length = min(seg.duration, duration - total)
        segments.append(Segment(seg.kind, length, seg.param))
        total += length
        i += 1
    return tuple(segments)


def default_profile(duration: float = 600.0, imu_rate: float = 100.0) -> TrajectoryProfile:
    """Land-vehicle course: a maneuver-rich opening (two turn/accel/brake
    blocks in the first ~170 s) followed by long straights with gentle
    alternating bends. Mostly uniform speed, periodic maneuvers.
    """

    def block(sign: float) -> list[Segment]:
        return [
            Segment("turn", 15.0, sign * np.radians(6.0)),
            Segment("accel", 5.0, 1.0),
            Segment("straight", 10.0),
            Segment("turn", 15.0, -sign * np.radians(6.0)),
            Segment("straight", 10.0),
            Segment("decel", 5.0, 1.0),
            Segment("straight", 10.0),
        ]

    lead = [Segment("straight", 5.0)] + block(1.0) + block(-1.0) + [Segment("straight", 25.0)]
    lap = [
        Segment("straight", 60.0),
        Segment("turn", 20.0, np.radians(1.5)),
        Segment("straight", 60.0),
        Segment("turn", 20.0, -np.radians(1.5)),
    ]
    return TrajectoryProfile(
        segments=_fill_with_laps(lead, lap, duration),
        base_speed=10.0,
        imu_rate=imu_rate,
    )


def reset_test_profile(duration: float = 600.0, imu_rate: float = 100.0) -> TrajectoryProfile:
    """Urban-drive-style course for the covariance-reset experiment.

    Starts with an 18 s crawl (the misattribution of large accelerometer
    biases into tilt accumulates while nearly stationary), then a dense
    maneuvering phase, then the same sparse weave as `default_profile`.
    GNSS runs at 0.5 Hz, reflecting degraded urban availability.
    """
    lead = [
        Segment("straight", 18.0),
        Segment("accel", 9.2, 1.0),
        Segment("turn", 12.0, np.radians(7.5)),
        Segment("accel", 5.0, 1.0),
        Segment("turn", 12.0, -np.radians(7.5)),
        Segment("decel", 5.0, 1.0),
        Segment("turn", 12.0, np.radians(7.5)),
        Segment("accel", 5.0, 1.0),
        Segment("turn", 12.0, -np.radians(7.5)),
        Segment("decel", 5.0, 1.0),
        Segment("turn", 12.0, np.radians(7.5)),
        Segment("straight", 8.8),
    ]
    lap = [
        Segment("straight", 60.0),
        Segment("turn", 20.0, np.radians(1.5)),
        Segment("straight", 60.0),
        Segment("turn", 20.0, -np.radians(1.5)),
    ]
    return TrajectoryProfile(
        segments=_fill_with_laps(lead, lap, duration),
        base_speed=0.8,
        imu_rate=imu_rate,
        gnss_rate=0.5,
    )


@dataclass(frozen=True)
class ImuErrorSpec:
    """Low-cost MEMS error budget, spec-sheet units."""

    gyro_bias: tuple[float, float, float] = (1000.0, 500.0, 800.0)  # deg/h
    accel_bias: tuple[float, float, float] = (15.0, 5.0, 8.0)       # mg
    gyro_instability: float = 10.0     # deg/h
    accel_instability: float = 20.0    # ug
    gyro_rw: float = 0.2               # deg/sqrt(h)
    accel_rw: float = 200.0            # ug/sqrt(Hz)
    seed: int = 0
    bias_tau: float = 5.0              # s, correlation surrogate for instability

    def __post_init__(self):
        for name in ("gyro_instability", "accel_instability", "gyro_rw", "accel_rw"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")

    def gyro_bias_si(self) -> np.ndarray:
        return np.asarray(self.gyro_bias, dtype=float) * DEG_PER_HOUR

    def accel_bias_si(self) -> np.ndarray:
        return np.asarray(self.accel_bias, dtype=float) * 1e-3 * G0

    def to_noise_spec(self, lever_psd: float = 1e-8, gnss_vel_std: float = 0.1) -> NoiseSpec:
        return NoiseSpec(
            gyro_arw=self.gyro_rw * DEG_PER_SQRT_HOUR,
            accel_vrw=self.accel_rw * 1e-6 * G0,
            gyro_bias_psd=self.gyro_instability * DEG_PER_HOUR / np.sqrt(self.bias_tau),
            accel_bias_psd=self.accel_instability * 1e-6 * G0 / np.sqrt(self.bias_tau),
            lever_psd=lever_psd,
            gnss_vel_std=gnss_vel_std,
        )


@dataclass(frozen=True)
class TruthSample:
    t: float
    att: Quaternion          # body-to-earth
    pos: np.ndarray          # m, earth frame
    vel_ground: np.ndarray   # m/s, earth frame
    omega_ib_b: np.ndarray   # rad/s; interval-midpoint value, see module docstring
    f_b: np.ndarray          # m/s^2; interval-midpoint value


def ned_to_ecef_matrix(lat: float, lon: float) -> np.ndarray:
    """Columns are the local North/East/Down axes in earth-frame coordinates."""
    sl, cl = np.sin(lat), np.cos(lat)
    so, co = np.sin(lon), np.cos(lon)
    return np.array(
        [
            [-sl * co, -so, -cl * co],
            [-sl * so, co, -cl * so],
            [cl, 0.0, -sl],
        ]
    )


class _PlanarPath:
    """Closed-form planar kinematics over the snapped segment list."""

    def __init__(self, profile: TrajectoryProfile):
        dt = 1.0 / profile.imu_rate
        self.starts: list[float] = []
        self.segs: list[tuple[str, float, float]] = []
        self.init: list[tuple[float, float, np.ndarray]] = []  # (speed, heading, pos2)
        t0, speed, heading = 0.0, profile.base_speed, 0.0
        pos = np.zeros(2)
        for seg in profile.segments:
            duration = round(seg.duration / dt) * dt
            if duration <= 0:
                raise ConfigError("segment shorter than one IMU interval")
            self.starts.append(t0)
            self.segs.append((seg.kind, duration, seg.param))
            self.init.append((speed, heading, pos.copy()))
            pos, speed, heading = self._end_state(seg.kind, duration, seg.param, speed, heading, pos)
            t0 += duration
        self.total = t0
        if self.total <= 0:
            raise ConfigError("zero-duration profile")

    @staticmethod
    def _end_state(kind, duration, param, speed, heading, pos):
        p, v, _, psi, _, _ = _PlanarPath._segment_eval(kind, duration, param, speed, heading, pos)
        if v <= 0:
            raise ConfigError("segment decelerates through zero speed")
        return p, v, psi

    @staticmethod
    def _segment_eval(kind, tau, param, v0, psi0, p0):
        """Position, speed, accel vector, heading, turn rate, speed rate at local time tau."""
        if kind == "turn":
            omega = param
            psi = psi0 + omega * tau
            p = p0 + (v0 / omega) * np.array(
                [np.sin(psi) - np.sin(psi0), np.cos(psi0) - np.cos(psi)]
            )
            vel = v0 * np.array([np.cos(psi), np.sin(psi)])
            acc = v0 * omega * np.array([-np.sin(psi), np.cos(psi)])
            return p, v0, acc, psi, omega, 0.0
        a = 0.0
        if kind == "accel":
            a = abs(param)
        elif kind == "decel":
            a = -abs(param)
        direction = np.array([np.cos(psi0), np.sin(psi0)])
        p = p0 + (v0 * tau + 0.5 * a * tau * tau) * direction
        return p, v0 + a * tau, a * direction, psi0, 0.0, a

    def eval(self, t: float):
        """(pos2, vel2, acc2, heading, turn_rate, speed_rate) at time t."""
        idx = int(np.searchsorted(self.starts, t + 1e-12) - 1)
        idx = max(0, min(idx, len(self.segs) - 1))
        kind, _, param = self.segs[idx]
        v0, psi0, p0 = self.init[idx]
        tau = t - self.starts[idx]
        p, v, acc, psi, psidot, vdot = self._segment_eval(kind, tau, param, v0, psi0, p0)
        vel = v * np.array([np.cos(psi), np.sin(psi)])
        return p, vel, acc, psi, psidot, vdot


def _heading_dcm(psi: float) -> np.ndarray:
    c, s = np.cos(psi), np.sin(psi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def generate_trajectory(
    profile: TrajectoryProfile, model: EarthModel | None = None
) -> list[TruthSample]:
    """Deterministic truth at the IMU rate; see module docstring for conventions."""
    model = model or EarthModel()
    path = _PlanarPath(profile)
    lat, lon, height = profile.origin_llh
    c_ne = ned_to_ecef_matrix(lat, lon)
    radial = np.array([np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)])
    origin = (model.r_ref + height) * radial
    w_vec = model.omega_vec
    dt = 1.0 / profile.imu_rate
    n_steps = int(round(path.total / dt))

    def lift(t: float, rate_t: float) -> TruthSample:
        p2, v2, _, psi, _, _ = path.eval(t)
        # rates and specific force from the (possibly different) rate epoch
        _, _, a2r, psir, psidotr, _ = path.eval(rate_t)
        pos = origin + c_ne @ np.array([p2[0], p2[1], 0.0])
        vel = c_ne @ np.array([v2[0], v2[1], 0.0])
        rot_be = c_ne @ _heading_dcm(psi)
        att = quat_from_dcm(rot_be)

        rot_be_r = c_ne @ _heading_dcm(psir)
        p2r, v2r, _, _, _, _ = path.eval(rate_t)
        pos_r = origin + c_ne @ np.array([p2r[0], p2r[1], 0.0])
        vel_r = c_ne @ np.array([v2r[0], v2r[1], 0.0])
        acc_r = c_ne @ np.array([a2r[0], a2r[1], 0.0])
        omega_ib = rot_be_r.T @ w_vec + np.array([0.0, 0.0, psidotr])
        f_e = (
            acc_r
            + 2.0 * np.cross(w_vec, vel_r)
            + np.cross(w_vec, np.cross(w_vec, pos_r))
            - gravity(pos_r, model)
        )
        f_b = rot_be_r.T @ f_e
        return TruthSample(t, att, pos, vel, omega_ib, f_b)

    samples = []
    for k in range(n_steps + 1):
        t = k * dt
        rate_t = min(t + 0.5 * dt, path.total)
        samples.append(lift(t, rate_t))
    return samples


def simulate_imu(truth: list[TruthSample], spec: ImuErrorSpec) -> list[ImuSample]:
    """Corrupt true rates with constant bias, bias random walk, and white noise.

    Sample k is stamped at the end of the interval it averages over.
    """
    if len(truth) < 2:
        raise ConfigError("need at least two truth samples")
    dt = truth[1].t - truth[0].t
    n = len(truth) - 1
    rng = np.random.default_rng(spec.seed)

    omega = np.array([s.omega_ib_b for s in truth[:n]])
    force = np.array([s.f_b for s in truth[:n]])

    noise = spec.to_noise_spec()
    gyro_walk = np.cumsum(
        rng.normal(0.0, noise.gyro_bias_psd * np.sqrt(dt), size=(n, 3)), axis=0
    )
    accel_walk = np.cumsum(
        rng.normal(0.0, noise.accel_bias_psd * np.sqrt(dt), size=(n, 3)), axis=0
    )
    gyro_white = rng.normal(0.0, noise.gyro_arw / np.sqrt(dt), size=(n, 3))
    accel_white = rng.normal(0.0, noise.accel_vrw / np.sqrt(dt), size=(n, 3))

    omega = omega + spec.gyro_bias_si() + gyro_walk + gyro_white
    force = force + spec.accel_bias_si() + accel_walk + accel_white

    times = np.array([s.t for s in truth[1:]])
    return [ImuSample(float(times[k]), omega[k], force[k]) for k in range(n)]


def simulate_gnss(
    truth: list[TruthSample],
    lever: np.ndarray = (0.5, 0.8, 0.3),
    vel_std: float = 0.1,
    rate: float = 1.0,
    seed: int = 0,
    pos_std: float = 0.1,
    model: EarthModel | None = None,
) -> list[GnssSample]:
    """Antenna velocity (ground velocity plus lever rate) and position fixes."""
    model = model or EarthModel()
    lever = np.asarray(lever, dtype=float)
    rng = np.random.default_rng(seed)
    dt = truth[1].t - truth[0].t
    stride = round(1.0 / (rate * dt))
    if stride < 1 or abs(stride * rate * dt - 1.0) > 1e-9:
        raise ConfigError("GNSS rate must divide the IMU rate")
    out = []
    for k in range(stride, len(truth), stride):
        s = truth[k]
        rot = dcm(s.att)
        w_eb_b = s.omega_ib_b - rot.T @ model.omega_vec
        vel = s.vel_ground + rot @ np.cross(w_eb_b, lever)
        pos = s.pos + rot @ lever
        vel = vel + rng.normal(0.0, vel_std, 3) if vel_std > 0 else vel
        pos = pos + rng.normal(0.0, pos_std, 3) if pos_std > 0 else pos
        out.append(GnssSample(s.t, vel, pos, vel_std))
    return out
