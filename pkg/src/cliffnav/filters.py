"""Error-state Kalman filter models for the four variants.

State error vector (18): [att, vel, pos, bg, ba, lever], three components each.
What the components mean depends on the variant:

  * clifford -- right-error tangent on SE_{k+2}(3): the whole state, body
    vectors included, lives on the group.
  * rqekf    -- right-error tangent on SE_2(3) for (att, vel, pos); additive
    body-frame errors for biases and lever arm.
  * lqekf    -- left-error tangent on SE_2(3); additive body vectors.
  * ekf      -- reference-frame multiplicative attitude error, additive ground
    velocity / position / bias / lever errors.

Sign conventions follow the linearized models verbatim, and are pinned down
by the finite-difference oracles in the test suite: for `ekf` the attitude
and bias errors carry the estimate-minus-truth sense, for `lqekf` the bias
errors do. `retract` and `state_error` are exact inverses of each other in
every variant.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NumericalError
from .lie import left_jacobian, left_jacobian_inv, skew, so3_exp
from .mechanization import EarthModel, GnssSample, ImuSample, gravity
from .quaternions import dcm, quat_exp, quat_mul, quat_to_rotvec
from .state import ExtendedCliffordState

ATT = slice(0, 3)
VEL = slice(3, 6)
POS = slice(6, 9)
BG = slice(9, 12)
BA = slice(12, 15)
LEV = slice(15, 18)

N_STATES = 18
N_NOISE = 15


class FilterKind(str, Enum):
    EKF = "ekf"
    LQEKF = "lqekf"
    RQEKF = "rqekf"
    CLIFFORD = "clifford"


@dataclass(frozen=True)
class FilterVariant:
    kind: FilterKind
    iterated: bool = True
    max_iter: int = 20
    term_threshold: float = np.radians(0.01)  # on the attitude sub-increment, rad
    joseph: bool = False

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.term_threshold <= 0:
            raise ValueError("term_threshold must be positive")

    @property
    def effective_max_iter(self) -> int:
        return self.max_iter if self.iterated else 1


@dataclass(frozen=True)
class NoiseSpec:
    """Continuous-time noise densities driving the error-state model."""

    gyro_arw: float          # rad/sqrt(s)
    accel_vrw: float         # (m/s^2)/sqrt(Hz)
    gyro_bias_psd: float     # rad/s/sqrt(s)
    accel_bias_psd: float    # m/s^2/sqrt(s)
    lever_psd: float = 1e-8  # m/sqrt(s); keeps the lever block invertible
    gnss_vel_std: float = 0.1

    def __post_init__(self):
        for name in ("gyro_arw", "accel_vrw", "gyro_bias_psd", "accel_bias_psd",
                     "lever_psd", "gnss_vel_std"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    def psd_matrix(self) -> np.ndarray:
        """15x15 PSD of [gyro white, accel white, gyro-bias, accel-bias, lever] drives."""
        d = np.concatenate(
            [
                np.full(3, self.gyro_arw**2),
                np.full(3, self.accel_vrw**2),
                np.full(3, self.gyro_bias_psd**2),
                np.full(3, self.accel_bias_psd**2),
                np.full(3, self.lever_psd**2),
            ]
        )
        return np.diag(d)


def omega_eb_body(state: ExtendedCliffordState, u: ImuSample, model: EarthModel) -> np.ndarray:
    """Bias-corrected body rate relative to the earth frame."""
    return (u.gyro - state.bg) - dcm(state.att).T @ model.omega_vec


def build_FG(
    variant: FilterVariant,
    state: ExtendedCliffordState,
    u: ImuSample,
    model: EarthModel,
) -> tuple[np.ndarray, np.ndarray]:
    """Continuous-time error dynamics F (18x18) and noise map G (18x15)."""
    rot = dcm(state.att)
    w_ie = skew(model.omega_vec)
    g_e = gravity(state.pos, model)
    v_hat = state.vt
    r_hat = state.pos
    F = np.zeros((N_STATES, N_STATES))
    G = np.zeros((N_STATES, N_NOISE))
    eye = np.eye(3)

    kind = variant.kind
    if kind in (FilterKind.CLIFFORD, FilterKind.RQEKF):
        F[ATT, ATT] = -w_ie
        F[VEL, ATT] = skew(g_e)
        F[VEL, VEL] = -w_ie
        F[POS, VEL] = eye
        F[POS, POS] = -w_ie
        G[ATT, 0:3] = -rot
        G[VEL, 0:3] = -skew(v_hat) @ rot
        G[VEL, 3:6] = -rot
        G[POS, 0:3] = -skew(r_hat) @ rot
        if kind is FilterKind.CLIFFORD:
            F[ATT, BG] = -eye
            F[VEL, BG] = -skew(v_hat)
            F[VEL, BA] = -eye
            F[POS, BG] = -skew(r_hat)
            d_blk = skew(rot @ omega_eb_body(state, u, model))
            F[BG, BG] = d_blk
            F[BA, BA] = d_blk
            F[LEV, LEV] = d_blk
            G[BG, 6:9] = rot
            G[BA, 9:12] = rot
            G[LEV, 12:15] = rot
        else:
            F[ATT, BG] = -rot
            F[VEL, BG] = -skew(v_hat) @ rot
            F[VEL, BA] = -rot
            F[POS, BG] = -skew(r_hat) @ rot
            G[BG, 6:9] = eye
            G[BA, 9:12] = eye
            G[LEV, 12:15] = eye
    elif kind is FilterKind.LQEKF:
        w_ib = skew(u.gyro - state.bg)
        f_hat = u.accel - state.ba
        F[ATT, ATT] = -w_ib
        F[ATT, BG] = eye
        F[VEL, ATT] = -skew(f_hat)
        F[VEL, VEL] = -w_ib
        F[VEL, BA] = eye
        F[POS, VEL] = eye
        F[POS, POS] = -w_ib
        G[ATT, 0:3] = -eye
        G[VEL, 3:6] = -eye
        G[BG, 6:9] = eye
        G[BA, 9:12] = eye
        G[LEV, 12:15] = eye
    elif kind is FilterKind.EKF:
        f_hat = u.accel - state.ba
        F[ATT, ATT] = -w_ie
        F[ATT, BG] = -rot
        F[VEL, ATT] = skew(rot @ f_hat)
        F[VEL, VEL] = -2.0 * w_ie
        F[VEL, BA] = rot
        F[POS, VEL] = eye
        G[ATT, 0:3] = -rot
        G[VEL, 3:6] = rot
        G[BG, 6:9] = eye
        G[BA, 9:12] = eye
        G[LEV, 12:15] = eye
    else:
        raise ValueError(f"unknown filter kind {kind!r}")
    return F, G


def _measurement_given_rate(
    state: ExtendedCliffordState, w_eb_b: np.ndarray, model: EarthModel
) -> np.ndarray:
    """Ground velocity plus lever-arm rate, with the body rate held fixed."""
    rot = dcm(state.att)
    ground = state.vt - np.cross(model.omega_vec, state.pos)
    return ground + rot @ np.cross(w_eb_b, state.lever)


def predict_measurement(
    state: ExtendedCliffordState, u: ImuSample, model: EarthModel
) -> np.ndarray:
    """Predicted GNSS antenna velocity in the earth frame."""
    return _measurement_given_rate(state, omega_eb_body(state, u, model), model)


def build_H(
    variant: FilterVariant,
    state: ExtendedCliffordState,
    u: ImuSample,
    model: EarthModel,
) -> np.ndarray:
    """3x18 measurement matrix for the GNSS velocity update."""
    rot = dcm(state.att)
    w_ie = skew(model.omega_vec)
    w_eb = omega_eb_body(state, u, model)
    lever_rate_e = rot @ np.cross(w_eb, state.lever)
    H = np.zeros((3, N_STATES))

    kind = variant.kind
    if kind in (FilterKind.CLIFFORD, FilterKind.RQEKF):
        H[:, ATT] = -skew(state.vt) + w_ie @ skew(state.pos) - skew(lever_rate_e)
        H[:, VEL] = np.eye(3)
        H[:, POS] = -w_ie
        if kind is FilterKind.CLIFFORD:
            H[:, LEV] = skew(rot @ w_eb)
        else:
            H[:, LEV] = rot @ skew(w_eb)
    elif kind is FilterKind.LQEKF:
        H[:, ATT] = -rot @ skew(np.cross(w_eb, state.lever))
        H[:, VEL] = rot
        H[:, POS] = -w_ie @ rot
        H[:, LEV] = rot @ skew(w_eb)
    elif kind is FilterKind.EKF:
        H[:, ATT] = skew(lever_rate_e)
        H[:, VEL] = np.eye(3)
        H[:, LEV] = rot @ skew(w_eb)
    else:
        raise ValueError(f"unknown filter kind {kind!r}")
    return H


def predict(
    P: np.ndarray, F: np.ndarray, G: np.ndarray, noise: NoiseSpec, dt: float
) -> np.ndarray:
    """Discrete covariance propagation: 2nd-order transition, trapezoidal noise."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    f_dt = F * dt
    phi = np.eye(N_STATES) + f_dt + 0.5 * (f_dt @ f_dt)
    gqg = G @ noise.psd_matrix() @ G.T
    q_d = 0.5 * dt * (phi @ gqg @ phi.T + gqg)
    out = phi @ P @ phi.T + q_d
    out = 0.5 * (out + out.T)
    if np.any(np.diag(out) <= 0) or not np.all(np.isfinite(out)):
        raise NumericalError("covariance propagation produced a non-SPD matrix")
    return out


def retract(
    variant: FilterVariant,
    state: ExtendedCliffordState,
    delta: np.ndarray,
    model: EarthModel,
) -> ExtendedCliffordState:
    """Apply an estimated error vector to the state; exact inverse of state_error."""
    delta = np.asarray(delta, dtype=float)
    sig = delta[ATT]
    kind = variant.kind

    if kind in (FilterKind.CLIFFORD, FilterKind.RQEKF):
        rot_err = so3_exp(sig)
        jac = left_jacobian(sig)
        att = quat_mul(quat_exp(sig), state.att)
        vt = rot_err @ state.vt + jac @ delta[VEL]
        pos = rot_err @ state.pos + jac @ delta[POS]
        if kind is FilterKind.CLIFFORD:
            back = dcm(state.att).T @ left_jacobian(-sig)
            return ExtendedCliffordState(
                att, vt, pos,
                state.bg + back @ delta[BG],
                state.ba + back @ delta[BA],
                state.lever + back @ delta[LEV],
            )
        return ExtendedCliffordState(
            att, vt, pos,
            state.bg + delta[BG],
            state.ba + delta[BA],
            state.lever + delta[LEV],
        )

    if kind is FilterKind.LQEKF:
        rot = dcm(state.att)
        jac = left_jacobian(sig)
        return ExtendedCliffordState(
            quat_mul(state.att, quat_exp(sig)),
            state.vt + rot @ (jac @ delta[VEL]),
            state.pos + rot @ (jac @ delta[POS]),
            state.bg - delta[BG],
            state.ba - delta[BA],
            state.lever + delta[LEV],
        )

    if kind is FilterKind.EKF:
        w_vec = model.omega_vec
        ground = state.vt - np.cross(w_vec, state.pos) + delta[VEL]
        pos = state.pos + delta[POS]
        return ExtendedCliffordState(
            quat_mul(quat_exp(-sig), state.att),
            ground + np.cross(w_vec, pos),
            pos,
            state.bg - delta[BG],
            state.ba - delta[BA],
            state.lever + delta[LEV],
        )

    raise ValueError(f"unknown filter kind {kind!r}")


def state_error(
    variant: FilterVariant,
    truth: ExtendedCliffordState,
    est: ExtendedCliffordState,
    model: EarthModel,
) -> np.ndarray:
    """Error vector of `truth` relative to `est` in the variant's coordinates."""
    out = np.zeros(N_STATES)
    kind = variant.kind

    if kind in (FilterKind.CLIFFORD, FilterKind.RQEKF):
        sig = quat_to_rotvec(quat_mul(truth.att, est.att.conj()))
        rot_err = so3_exp(sig)
        jac_inv = left_jacobian_inv(sig)
        out[ATT] = sig
        out[VEL] = jac_inv @ (truth.vt - rot_err @ est.vt)
        out[POS] = jac_inv @ (truth.pos - rot_err @ est.pos)
        if kind is FilterKind.CLIFFORD:
            back = np.linalg.inv(left_jacobian(-sig)) @ dcm(est.att)
            out[BG] = back @ (truth.bg - est.bg)
            out[BA] = back @ (truth.ba - est.ba)
            out[LEV] = back @ (truth.lever - est.lever)
        else:
            out[BG] = truth.bg - est.bg
            out[BA] = truth.ba - est.ba
            out[LEV] = truth.lever - est.lever
        return out

    if kind is FilterKind.LQEKF:
        sig = quat_to_rotvec(quat_mul(est.att.conj(), truth.att))
        jac_inv = left_jacobian_inv(sig)
        rot_t = dcm(est.att).T
        out[ATT] = sig
        out[VEL] = jac_inv @ (rot_t @ (truth.vt - est.vt))
        out[POS] = jac_inv @ (rot_t @ (truth.pos - est.pos))
        out[BG] = est.bg - truth.bg
        out[BA] = est.ba - truth.ba
        out[LEV] = truth.lever - est.lever
        return out

    if kind is FilterKind.EKF:
        w_vec = model.omega_vec
        out[ATT] = quat_to_rotvec(quat_mul(est.att, truth.att.conj()))
        out[VEL] = truth.ground_velocity(w_vec) - est.ground_velocity(w_vec)
        out[POS] = truth.pos - est.pos
        out[BG] = est.bg - truth.bg
        out[BA] = est.ba - truth.ba
        out[LEV] = truth.lever - est.lever
        return out

    raise ValueError(f"unknown filter kind {kind!r}")


def init_covariance(
    variant: FilterVariant, P_add: np.ndarray, state: ExtendedCliffordState
) -> np.ndarray:
    """Re-base an additive-error covariance into the variant's error coordinates."""
    jac = np.eye(N_STATES)
    kind = variant.kind
    rot = dcm(state.att)
    if kind in (FilterKind.CLIFFORD, FilterKind.RQEKF):
        jac[VEL, ATT] = skew(state.vt)
        jac[POS, ATT] = skew(state.pos)
        if kind is FilterKind.CLIFFORD:
            jac[BG, BG] = rot
            jac[BA, BA] = rot
            jac[LEV, LEV] = rot
    elif kind is FilterKind.LQEKF:
        jac[ATT, ATT] = rot.T
        jac[VEL, VEL] = rot.T
        jac[POS, POS] = rot.T
    elif kind is FilterKind.EKF:
        pass
    else:
        raise ValueError(f"unknown filter kind {kind!r}")
    out = jac @ P_add @ jac.T
    return 0.5 * (out + out.T)


def _solve_gain(P: np.ndarray, H: np.ndarray, R: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    S = H @ P @ H.T + R
    if not np.all(np.isfinite(S)):
        raise NumericalError("innovation covariance is not finite")
    try:
        gain = np.linalg.solve(S, H @ P).T
    except np.linalg.LinAlgError as exc:
        raise NumericalError("innovation covariance is singular") from exc
    return gain, S


def _iterated_loop(
    P: np.ndarray,
    R: np.ndarray,
    y_vec: np.ndarray,
    h_fn,
    H_fn,
    retract_fn,
    max_iter: int,
    term_threshold: float,
    change_slice: slice = ATT,
):
    """Gauss-Newton iteration of the indirect-filter update, generic over dimension.

    delta_1 = 0, eta_1 = predicted state; each pass solves
    delta_{i+1} = K [y - h(eta_i) - H(eta_i)(0 - delta_i)] and re-retracts from
    the predicted state. Terminates once the attitude sub-increment stops
    moving (checked from the second pass on) or at max_iter.
    """
    dim = P.shape[0]
    delta = np.zeros(dim)
    eta = retract_fn(delta)
    gain = None
    H = None
    iters = 0
    for i in range(max_iter):
        H = H_fn(eta)
        gain, _ = _solve_gain(P, H, R)
        innov = y_vec - h_fn(eta)
        new_delta = gain @ (innov + H @ delta)
        eta = retract_fn(new_delta)
        change = float(np.linalg.norm(new_delta[change_slice] - delta[change_slice]))
        delta = new_delta
        iters = i + 1
        if i > 0 and change < term_threshold:
            break
    return eta, delta, gain, H, iters


def iterated_update(
    state: ExtendedCliffordState,
    P: np.ndarray,
    y: GnssSample,
    variant: FilterVariant,
    u: ImuSample,
    model: EarthModel,
) -> tuple[ExtendedCliffordState, np.ndarray, int]:
    """Measurement update; with max_iter 1 this is the standard EKF update."""
    R = np.eye(3) * y.vel_std**2

    eta, _, gain, H, iters = _iterated_loop(
        P,
        R,
        y.vel,
        h_fn=lambda s: predict_measurement(s, u, model),
        H_fn=lambda s: build_H(variant, s, u, model),
        retract_fn=lambda d: retract(variant, state, d, model),
        max_iter=variant.effective_max_iter,
        term_threshold=variant.term_threshold,
    )

    ikh = np.eye(N_STATES) - gain @ H
    if variant.joseph:
        P_new = ikh @ P @ ikh.T + gain @ R @ gain.T
    else:
        P_new = ikh @ P
    P_new = 0.5 * (P_new + P_new.T)
    return eta, P_new, iters


@dataclass(frozen=True)
class ResetStds:
    """Additive standard deviations applied on a covariance reset."""

    att: float = np.pi  # 180 deg on every axis
    vel: float = 1.0
    pos: float = 10.0
    bg: float = np.radians(3000.0 / 3600.0)  # 3000 deg/h
    ba: float = 100e-3 * 9.80665             # 100 mg
    lever: float = 1.0

    def diagonal(self) -> np.ndarray:
        d = np.concatenate(
            [
                np.full(3, self.att**2),
                np.full(3, self.vel**2),
                np.full(3, self.pos**2),
                np.full(3, self.bg**2),
                np.full(3, self.ba**2),
                np.full(3, self.lever**2),
            ]
        )
        return np.diag(d)


def reset_filter(
    state: ExtendedCliffordState,
    P: np.ndarray,
    gnss_pos: np.ndarray,
    gnss_vel: np.ndarray,
    model: EarthModel,
    stds: ResetStds | None = None,
) -> tuple[ExtendedCliffordState, np.ndarray]:
    """Reinitialize from a GNSS fix, keeping the current attitude.

    Velocity and position restart from the fix, biases and lever arm from
    zero, and the returned covariance is diagonal in additive coordinates
    (attitude at 180 deg per axis). Run it through `init_covariance` to enter
    a variant's error coordinates, exactly as at filter start.
    """
    stds = stds or ResetStds()
    gnss_pos = np.asarray(gnss_pos, dtype=float)
    gnss_vel = np.asarray(gnss_vel, dtype=float)
    zero = np.zeros(3)
    new_state = ExtendedCliffordState(
        att=state.att,
        vt=gnss_vel + np.cross(model.omega_vec, gnss_pos),
        pos=gnss_pos,
        bg=zero,
        ba=zero,
        lever=zero,
    )
    return new_state, stds.diagonal()
