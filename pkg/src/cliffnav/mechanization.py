"""Earth-frame strapdown propagation of the extended INS state.

Kinematics, all in the rotating earth frame with transformed velocity vt:

    qdot  = (q w_ib^b - w_ie^e q) / 2
    vtdot = Ad_q(f^b) - w_ie x vt + g(r)
    rdot  = vt - w_ie x r

Biases and lever arm are constant. Gravity is point-mass spherical; a fixed
`uniform_gravity` override turns the field constant for diagnostics that
assume it (group-affine residual, Jacobian oracles).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quaternions import Quaternion, TridentQuaternion, dcm, quat_exp, quat_mul
from .state import ExtendedCliffordState, ExtendedElement, compose

OMEGA_IE = 7.292115e-5  # rad/s
EARTH_MU = 3.986004418e14  # m^3/s^2
EARTH_RADIUS = 6.378137e6  # m

_MIN_RADIUS = 1e5
_MAX_DT = 0.1


@dataclass(frozen=True)
class ImuSample:
    """One IMU epoch: measured angular rate and specific force."""

    t: float
    gyro: np.ndarray   # rad/s
    accel: np.ndarray  # m/s^2

    def __post_init__(self):
        object.__setattr__(self, "gyro", np.asarray(self.gyro, dtype=float))
        object.__setattr__(self, "accel", np.asarray(self.accel, dtype=float))


@dataclass(frozen=True)
class GnssSample:
    """One GNSS epoch: antenna velocity and position in the earth frame."""

    t: float
    vel: np.ndarray     # m/s
    pos: np.ndarray     # m
    vel_std: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "vel", np.asarray(self.vel, dtype=float))
        object.__setattr__(self, "pos", np.asarray(self.pos, dtype=float))


@dataclass(frozen=True)
class EarthModel:
    omega_ie: float = OMEGA_IE
    mu: float = EARTH_MU
    r_ref: float = EARTH_RADIUS
    uniform_gravity: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.omega_ie < 0:
            raise DomainError("earth rate must be non-negative")

    @property
    def omega_vec(self) -> np.ndarray:
        return np.array([0.0, 0.0, self.omega_ie])


def gravity(pos: np.ndarray, model: EarthModel) -> np.ndarray:
    """Gravitational attraction at an earth-frame position.

    The centripetal part is carried explicitly by the omega_ie cross terms of
    the kinematics, so this is pure -mu r / |r|^3.
    """
    if model.uniform_gravity is not None:
        return np.asarray(model.uniform_gravity, dtype=float)
    pos = np.asarray(pos, dtype=float)
    r = np.linalg.norm(pos)
    if r <= _MIN_RADIUS:
        raise DomainError(f"position norm {r:.3g} m inside guard radius {_MIN_RADIUS:.3g} m")
    return (-model.mu / r**3) * pos


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.array(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    )


def _qmul4(a, b):
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def _qexp4(rx, ry, rz):
    theta = math.sqrt(rx * rx + ry * ry + rz * rz)
    if theta < 1e-8:
        k = 0.5 - theta * theta / 48.0
        return (1.0 - theta * theta / 8.0, k * rx, k * ry, k * rz)
    k = math.sin(0.5 * theta) / theta
    return (math.cos(0.5 * theta), k * rx, k * ry, k * rz)


def _dcm4(q):
    w, x, y, z = q
    return np.array(
        [
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ]
    )


def _cross_z(w_z: float, v: np.ndarray) -> np.ndarray:
    """[0, 0, w_z] x v."""
    return np.array([-w_z * v[1], w_z * v[0], 0.0])


def _gravity_fast(pos: np.ndarray, model: EarthModel) -> np.ndarray:
    if model.uniform_gravity is not None:
        return np.asarray(model.uniform_gravity, dtype=float)
    r = math.sqrt(pos @ pos)
    if r <= _MIN_RADIUS:
        raise DomainError(f"position norm {r:.3g} m inside guard radius {_MIN_RADIUS:.3g} m")
    return (-model.mu / (r * r * r)) * pos


def propagate(
    state: ExtendedCliffordState, u: ImuSample, dt: float, model: EarthModel
) -> ExtendedCliffordState:
    """One strapdown step: exact attitude factorization, midpoint velocity/position."""
    if not 0.0 < dt <= _MAX_DT:
        raise DomainError(f"dt = {dt} outside (0, {_MAX_DT}]")

    w_ib = u.gyro - state.bg
    f_b = u.accel - state.ba
    w_z = model.omega_ie

    # q(t+dt) = exp(-w_ie dt) q exp(w_ib dt) solves qdot = (q w_ib - w_ie q)/2
    # exactly for constant rates; two half-steps give the midpoint attitude.
    half = 0.5 * dt
    a = -w_z * half * 0.5
    q_earth_half = (math.cos(a), 0.0, 0.0, math.sin(a))
    q_body_half = _qexp4(half * w_ib[0], half * w_ib[1], half * w_ib[2])
    q0 = (state.att.w, state.att.v[0], state.att.v[1], state.att.v[2])
    q_mid = _qmul4(_qmul4(q_earth_half, q0), q_body_half)
    q_new = _qmul4(_qmul4(q_earth_half, q_mid), q_body_half)
    n = math.sqrt(q_new[0] ** 2 + q_new[1] ** 2 + q_new[2] ** 2 + q_new[3] ** 2)

    acc0 = _dcm4(q0) @ f_b - _cross_z(w_z, state.vt) + _gravity_fast(state.pos, model)
    rdot0 = state.vt - _cross_z(w_z, state.pos)

    v_mid = state.vt + half * acc0
    r_mid = state.pos + half * rdot0
    acc_mid = _dcm4(q_mid) @ f_b - _cross_z(w_z, v_mid) + _gravity_fast(r_mid, model)
    rdot_mid = v_mid - _cross_z(w_z, r_mid)

    return state.with_nav(
        Quaternion(q_new[0] / n, np.array(q_new[1:]) / n),
        state.vt + dt * acc_mid,
        state.pos + dt * rdot_mid,
    )


def _derivative_element(
    x: ExtendedCliffordState, u: ImuSample, model: EarthModel
) -> ExtendedElement:
    """Time derivative of the packed algebra slots under the bias-corrected dynamics."""
    q = x.att
    w_ib = u.gyro - x.bg
    f_b = u.accel - x.ba
    w_ie = model.omega_vec

    qdot = Quaternion.from_wxyz(
        0.5
        * (
            quat_mul(q, Quaternion.pure(w_ib)).wxyz
            - quat_mul(Quaternion.pure(w_ie), q).wxyz
        )
    )
    vtdot = dcm(q) @ f_b - _cross(w_ie, x.vt) + gravity(x.pos, model)
    rdot = x.vt - _cross(w_ie, x.pos)

    def _left(t: np.ndarray, tdot: np.ndarray) -> np.ndarray:
        # d/dt [ (1/2) t q ] with left-packed slot
        return 0.5 * (
            quat_mul(Quaternion.pure(tdot), q).wxyz
            + quat_mul(Quaternion.pure(t), qdot).wxyz
        )

    def _right(b: np.ndarray) -> np.ndarray:
        # d/dt [ (1/2) q b ] with constant body vector
        return 0.5 * quat_mul(qdot, Quaternion.pure(b)).wxyz

    slots = np.vstack(
        [
            qdot.wxyz,
            _left(x.vt, vtdot),
            _left(x.pos, rdot),
            _right(x.bg),
            _right(x.ba),
            _right(x.lever),
        ]
    )
    return ExtendedElement(slots)


def _as_extended(x) -> ExtendedCliffordState:
    if isinstance(x, ExtendedCliffordState):
        return x
    if isinstance(x, TridentQuaternion):
        v, r = x.translations()
        z = np.zeros(3)
        return ExtendedCliffordState(x.real, v, r, z, z, z)
    raise TypeError(f"expected state or trident, got {type(x)!r}")


def group_affine_residual(x1, x2, u: ImuSample, model: EarthModel) -> float:
    """Defect of x1 f(x2) + f(x1) x2 - x1 f(1) x2 = f(x1 x2) over the slot coefficients.

    Zero (to rounding) when the dynamics are group-affine: the bias-free,
    lever-free extended pose under a constant gravity vector. Any body-frame
    vector entering the state breaks it.
    """
    if model.uniform_gravity is None:
        raise DomainError("group-affine diagnostic requires a uniform gravity model")
    s1 = _as_extended(x1)
    s2 = _as_extended(x2)
    e1 = ExtendedElement.from_state(s1)
    e2 = ExtendedElement.from_state(s2)
    f1 = _derivative_element(s1, u, model)
    f2 = _derivative_element(s2, u, model)
    f_id = _derivative_element(ExtendedCliffordState.identity(), u, model)
    f12 = _derivative_element(compose(s1, s2), u, model)
    defect = (e1 @ f2) + (f1 @ e2) - (e1 @ f_id @ e2) - f12
    return defect.norm()
