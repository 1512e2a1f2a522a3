"""Full INS state on the extended Clifford algebra, plus its matrix embeddings.

The state packs the extended pose together with the body-frame vectors:

    q  +  eps1 (1/2) vt q  +  eps2 (1/2) r q        (reference-frame slots)
       +  eps3 (1/2) q bg  +  eps4 (1/2) q ba  +  eps5 (1/2) q l   (body slots)

with eps_i^2 = eps_i eps_j = 0. `vt` is the transformed velocity
omega_ie x r + rdot, the velocity variable used throughout the filter models.
The same object embeds into SE_{k+2}(3) as an 8x8 matrix; `compose` is the
group product and matches the matrix product under `sek3_embed`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .quaternions import (
    Quaternion,
    TridentQuaternion,
    dcm,
    quat_mul,
)


@dataclass(frozen=True)
class ExtendedCliffordState:
    """Attitude, transformed velocity, position, IMU biases and lever arm."""

    att: Quaternion
    vt: np.ndarray      # transformed velocity C_i^e rdot^i, m/s
    pos: np.ndarray     # r^e, m
    bg: np.ndarray      # gyro bias, rad/s (body frame)
    ba: np.ndarray      # accel bias, m/s^2 (body frame)
    lever: np.ndarray   # IMU-to-antenna lever arm, m (body frame)

    def __post_init__(self):
        for name in ("vt", "pos", "bg", "ba", "lever"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))

    @classmethod
    def identity(cls) -> "ExtendedCliffordState":
        z = np.zeros(3)
        return cls(Quaternion.identity(), z, z, z, z, z)

    def nav_trident(self) -> TridentQuaternion:
        return TridentQuaternion.from_parts(self.att, self.vt, self.pos)

    def with_nav(self, att: Quaternion, vt: np.ndarray, pos: np.ndarray) -> "ExtendedCliffordState":
        return ExtendedCliffordState(att, vt, pos, self.bg, self.ba, self.lever)

    def ground_velocity(self, omega_ie_vec: np.ndarray) -> np.ndarray:
        """rdot^e = vt - omega_ie x r."""
        w = np.asarray(omega_ie_vec)
        return self.vt - np.cross(w, self.pos)


def compose(a: ExtendedCliffordState, b: ExtendedCliffordState) -> ExtendedCliffordState:
    """Group product; semi-direct on both the reference-frame and body slots."""
    rot_a = dcm(a.att)
    rot_b = dcm(b.att)
    return ExtendedCliffordState(
        att=quat_mul(a.att, b.att),
        vt=a.vt + rot_a @ b.vt,
        pos=a.pos + rot_a @ b.pos,
        bg=b.bg + rot_b.T @ a.bg,
        ba=b.ba + rot_b.T @ a.ba,
        lever=b.lever + rot_b.T @ a.lever,
    )


def se23_embed(t: TridentQuaternion) -> np.ndarray:
    """5x5 SE_2(3) matrix [R, v, r; 0, I2] of a trident quaternion."""
    v, r = t.translations()
    out = np.eye(5)
    out[:3, :3] = dcm(t.real)
    out[:3, 3] = v
    out[:3, 4] = r
    return out


def sek3_embed(s: ExtendedCliffordState) -> np.ndarray:
    """8x8 SE_{k+2}(3) matrix; body-frame columns are premultiplied by C_b^e."""
    rot = dcm(s.att)
    out = np.eye(8)
    out[:3, :3] = rot
    out[:3, 3] = s.vt
    out[:3, 4] = s.pos
    out[:3, 5] = rot @ s.bg
    out[:3, 6] = rot @ s.ba
    out[:3, 7] = rot @ s.lever
    return out


class ExtendedElement:
    """Raw element of the extended algebra: six quaternion slots.

    Not necessarily a group element; also holds tangent values such as state
    derivatives. The product keeps only real*real and real*eps cross terms,
    which is all the nilpotent eps units allow.
    """

    __slots__ = ("slots",)

    def __init__(self, slots: np.ndarray):
        self.slots = np.asarray(slots, dtype=float).reshape(6, 4)

    @classmethod
    def from_state(cls, s: ExtendedCliffordState) -> "ExtendedElement":
        q = s.att
        half = 0.5
        slots = np.vstack(
            [
                q.wxyz,
                (half * quat_mul(Quaternion.pure(s.vt), q).wxyz),
                (half * quat_mul(Quaternion.pure(s.pos), q).wxyz),
                (half * quat_mul(q, Quaternion.pure(s.bg)).wxyz),
                (half * quat_mul(q, Quaternion.pure(s.ba)).wxyz),
                (half * quat_mul(q, Quaternion.pure(s.lever)).wxyz),
            ]
        )
        return cls(slots)

    @classmethod
    def identity(cls) -> "ExtendedElement":
        slots = np.zeros((6, 4))
        slots[0, 0] = 1.0
        return cls(slots)

    def __matmul__(self, other: "ExtendedElement") -> "ExtendedElement":
        a, b = self.slots, other.slots
        qa = Quaternion.from_wxyz(a[0])
        qb = Quaternion.from_wxyz(b[0])
        out = np.zeros((6, 4))
        out[0] = quat_mul(qa, qb).wxyz
        for k in range(1, 6):
            out[k] = (
                quat_mul(qa, Quaternion.from_wxyz(b[k])).wxyz
                + quat_mul(Quaternion.from_wxyz(a[k]), qb).wxyz
            )
        return ExtendedElement(out)

    def __add__(self, other: "ExtendedElement") -> "ExtendedElement":
        return ExtendedElement(self.slots + other.slots)

    def __sub__(self, other: "ExtendedElement") -> "ExtendedElement":
        return ExtendedElement(self.slots - other.slots)

    def norm(self) -> float:
        return float(np.linalg.norm(self.slots))
