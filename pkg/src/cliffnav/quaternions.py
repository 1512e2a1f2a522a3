"""Quaternion, dual-quaternion and trident-quaternion types with their products.

Conventions:
  * Hamilton product, components stored as scalar w plus vector v = (x, y, z).
  * An attitude quaternion q acts on body vectors through the adjoint
    Ad_q x = q [0, x] q*, equal to dcm(q) @ x (body-to-reference rotation).
  * Dual/trident translations are packed on the left: q + eps * (1/2) [0, t] q.

The trident type is the fast path isomorphic to SE_2(3); `trident_to_multivector`
bridges to the generic Cl(0,3,2) engine so the product can be cross-checked
against first principles.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import TRIDENT_SIGNATURE, Multivector, geometric_product
from .errors import DomainError
from .lie import _dcm_to_wxyz, left_jacobian

_SMALL_ANGLE = 1e-8
_UNIT_TOL = 1e-6


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # np.cross has high overhead for single 3-vectors; this path is hot.
    return np.array(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    )


@dataclass(frozen=True)
class Quaternion:
    w: float
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w", float(self.w))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))

    @classmethod
    def identity(cls) -> "Quaternion":
        return cls(1.0, np.zeros(3))

    @classmethod
    def pure(cls, vec: np.ndarray) -> "Quaternion":
        """Vector quaternion [0, vec]."""
        return cls(0.0, vec)

    @classmethod
    def from_wxyz(cls, wxyz: np.ndarray) -> "Quaternion":
        return cls(wxyz[0], wxyz[1:4])

    @property
    def wxyz(self) -> np.ndarray:
        return np.array([self.w, self.v[0], self.v[1], self.v[2]])

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.v)

    def norm(self) -> float:
        return float(np.sqrt(self.w * self.w + self.v @ self.v))

    def normalized(self) -> "Quaternion":
        n = self.norm()
        return Quaternion(self.w / n, self.v / n)


def quat_mul(q1: Quaternion, q2: Quaternion) -> Quaternion:
    """Hamilton product [s1 s2 - v1.v2, s1 v2 + s2 v1 + v1 x v2]."""
    return Quaternion(
        q1.w * q2.w - q1.v @ q2.v,
        q1.w * q2.v + q2.w * q1.v + _cross(q1.v, q2.v),
    )


def quat_exp(rotvec: np.ndarray) -> Quaternion:
    """Unit quaternion [cos(theta/2), sin(theta/2) n] for rotation vector theta*n."""
    rotvec = np.asarray(rotvec, dtype=float)
    theta = np.linalg.norm(rotvec)
    if theta < _SMALL_ANGLE:
        # 4th-order series for sin(theta/2)/theta
        k = 0.5 - theta * theta / 48.0
        return Quaternion(1.0 - theta * theta / 8.0, k * rotvec)
    half = 0.5 * theta
    return Quaternion(np.cos(half), (np.sin(half) / theta) * rotvec)


def quat_to_rotvec(q: Quaternion) -> np.ndarray:
    """Rotation vector of a unit quaternion; robust for all angles in [0, pi]."""
    w, v = q.w, q.v
    if w < 0.0:
        w, v = -w, -v
    s = np.linalg.norm(v)
    if s < 1e-9:
        return 2.0 * v / w
    return (2.0 * np.arctan2(s, w) / s) * v


def dcm(q: Quaternion) -> np.ndarray:
    """Direction cosine matrix of q: dcm(q) @ x == Ad_q x."""
    w = q.w
    x, y, z = q.v
    return np.array(
        [
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ]
    )


def quat_from_dcm(rot: np.ndarray) -> Quaternion:
    return Quaternion.from_wxyz(_dcm_to_wxyz(rot))


def quat_adjoint(q: Quaternion, x: np.ndarray) -> np.ndarray:
    """Ad_q x = q [0, x] q*; requires unit q."""
    if abs(q.norm() - 1.0) > _UNIT_TOL:
        raise DomainError(f"adjoint needs a unit quaternion, |q| = {q.norm():.9f}")
    t = quat_mul(quat_mul(q, Quaternion.pure(np.asarray(x, dtype=float))), q.conj())
    return t.v


@dataclass(frozen=True)
class DualQuaternion:
    """q + eps * (1/2) t q; verification stepping-stone, unused by the filters."""

    real: Quaternion
    dual: Quaternion

    @classmethod
    def identity(cls) -> "DualQuaternion":
        return cls(Quaternion.identity(), Quaternion(0.0, np.zeros(3)))

    @classmethod
    def from_rot_trans(cls, q: Quaternion, t: np.ndarray) -> "DualQuaternion":
        half_t = Quaternion.pure(0.5 * np.asarray(t, dtype=float))
        return cls(q, quat_mul(half_t, q))

    def translation(self) -> np.ndarray:
        return 2.0 * quat_mul(self.dual, self.real.conj()).v

    def translation_purity(self) -> float:
        """Scalar leakage of the encoded translation; ~0 for a valid element."""
        return abs(2.0 * quat_mul(self.dual, self.real.conj()).w)


def dq_mul(a: DualQuaternion, b: DualQuaternion) -> DualQuaternion:
    real = quat_mul(a.real, b.real)
    d1 = quat_mul(a.real, b.dual)
    d2 = quat_mul(a.dual, b.real)
    return DualQuaternion(real, Quaternion(d1.w + d2.w, d1.v + d2.v))


@dataclass(frozen=True)
class TridentQuaternion:
    """q + eps1 * (1/2) t1 q + eps2 * (1/2) t2 q, isomorphic to SE_2(3).

    Slot 1 carries the (transformed) velocity, slot 2 the position.
    """

    real: Quaternion
    dual1: Quaternion
    dual2: Quaternion

    @classmethod
    def identity(cls) -> "TridentQuaternion":
        return cls(
            Quaternion.identity(),
            Quaternion(0.0, np.zeros(3)),
            Quaternion(0.0, np.zeros(3)),
        )

    @classmethod
    def from_parts(cls, q: Quaternion, t1: np.ndarray, t2: np.ndarray) -> "TridentQuaternion":
        return cls(
            q,
            quat_mul(Quaternion.pure(0.5 * np.asarray(t1, dtype=float)), q),
            quat_mul(Quaternion.pure(0.5 * np.asarray(t2, dtype=float)), q),
        )

    def translations(self) -> tuple[np.ndarray, np.ndarray]:
        rc = self.real.conj()
        return (
            2.0 * quat_mul(self.dual1, rc).v,
            2.0 * quat_mul(self.dual2, rc).v,
        )

    def validate(self, tol: float = 1e-9) -> None:
        if abs(self.real.norm() - 1.0) > tol:
            raise DomainError("trident real part is not unit norm")
        rc = self.real.conj()
        for dual in (self.dual1, self.dual2):
            if abs(2.0 * quat_mul(dual, rc).w) > tol:
                raise DomainError("encoded translation is not a pure vector")

    def inverse(self) -> "TridentQuaternion":
        t1, t2 = self.translations()
        qc = self.real.conj()
        rot = dcm(qc)
        return TridentQuaternion.from_parts(qc, -(rot @ t1), -(rot @ t2))

    def coeffs(self) -> np.ndarray:
        """Flat 12-vector of the three quaternion parts."""
        return np.concatenate([self.real.wxyz, self.dual1.wxyz, self.dual2.wxyz])


def trident_mul(a: TridentQuaternion, b: TridentQuaternion) -> TridentQuaternion:
    """Geometric product; eps_i^2 = eps_i eps_j = 0 kills all cross terms."""
    real = quat_mul(a.real, b.real)
    p1 = quat_mul(a.real, b.dual1)
    p2 = quat_mul(a.dual1, b.real)
    p3 = quat_mul(a.real, b.dual2)
    p4 = quat_mul(a.dual2, b.real)
    return TridentQuaternion(
        real,
        Quaternion(p1.w + p2.w, p1.v + p2.v),
        Quaternion(p3.w + p4.w, p3.v + p4.v),
    )


def trident_exp(rotvec: np.ndarray, t1_gen: np.ndarray, t2_gen: np.ndarray) -> TridentQuaternion:
    """Exponential map from tangent components (rotation vector, two translation generators)."""
    real = quat_exp(rotvec)
    jac = left_jacobian(rotvec)
    return TridentQuaternion.from_parts(
        real,
        jac @ np.asarray(t1_gen, dtype=float),
        jac @ np.asarray(t2_gen, dtype=float),
    )


@lru_cache(maxsize=None)
def _trident_basis() -> list[Multivector]:
    """Basis of the trident subalgebra in engine coordinates.

    Order: [1, i, j, k, eps1, eps1*i, eps1*j, eps1*k, eps2, eps2*i, eps2*j, eps2*k]
    with i = e2 e3, j = e3 e1, k = e1 e2, eps1 = e1 e2 e3 e4, eps2 = e1 e2 e3 e5.
    Every product is computed by the generic engine, never by hand.
    """
    sig = TRIDENT_SIGNATURE
    e = [Multivector.generator(sig, idx) for idx in range(5)]
    one = Multivector.scalar(sig)
    i = geometric_product(e[1], e[2])
    j = geometric_product(e[2], e[0])
    k = geometric_product(e[0], e[1])
    eps1 = geometric_product(geometric_product(k, e[2]), e[3])
    eps2 = geometric_product(geometric_product(k, e[2]), e[4])
    basis = [one, i, j, k]
    basis += [eps1] + [geometric_product(eps1, b) for b in (i, j, k)]
    basis += [eps2] + [geometric_product(eps2, b) for b in (i, j, k)]
    return basis


def trident_to_multivector(t: TridentQuaternion) -> Multivector:
    """Embed a trident quaternion into the generic Cl(0,3,2) engine."""
    basis = _trident_basis()
    coeffs = np.concatenate(
        [
            [t.real.w], t.real.v,
            [t.dual1.w], t.dual1.v,
            [t.dual2.w], t.dual2.v,
        ]
    )
    out = Multivector.scalar(TRIDENT_SIGNATURE, 0.0)
    for c, b in zip(coeffs, basis):
        out = out + float(c) * b
    return out


def multivector_to_trident(m: Multivector) -> TridentQuaternion:
    """Read trident components back out of an engine element."""
    basis = _trident_basis()
    vals = []
    for b in basis:
        mask = int(np.argmax(np.abs(b.coeffs)))
        vals.append(m.coeffs[mask] / b.coeffs[mask])
    return TridentQuaternion(
        Quaternion(vals[0], np.array(vals[1:4])),
        Quaternion(vals[4], np.array(vals[5:8])),
        Quaternion(vals[8], np.array(vals[9:12])),
    )
