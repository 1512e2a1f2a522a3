"""Matrix Lie-group helpers: SO(3) maps, the left Jacobian, SE_2(3) blocks.

Rotation matrices, SE_2(3) and SE_{k+2}(3) elements are plain dense ndarrays
(3x3, 5x5, 8x8); validators below are used by tests instead of wrapper types.
"""

from __future__ import annotations

import numpy as np

_SMALL_ANGLE = 1e-8
_SMALL_JACOBIAN = 1e-6


def skew(v: np.ndarray) -> np.ndarray:
    """Cross-product matrix: skew(a) @ b == a x b."""
    return np.array(
        [
            [0.0, -v[2], v[1]],
            [v[2], 0.0, -v[0]],
            [-v[1], v[0], 0.0],
        ]
    )


def so3_exp(rotvec: np.ndarray) -> np.ndarray:
    """Rodrigues formula; series branch below 1e-8 rad."""
    rotvec = np.asarray(rotvec, dtype=float)
    theta = np.linalg.norm(rotvec)
    s = skew(rotvec)
    if theta < _SMALL_ANGLE:
        return np.eye(3) + s + 0.5 * (s @ s)
    return (
        np.eye(3)
        + (np.sin(theta) / theta) * s
        + ((1.0 - np.cos(theta)) / theta**2) * (s @ s)
    )


def _dcm_to_wxyz(dcm: np.ndarray) -> np.ndarray:
    """Rotation matrix to unit quaternion [w, x, y, z], Shepperd's method."""
    m = dcm
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    choice = int(np.argmax([tr, m[0, 0], m[1, 1], m[2, 2]]))
    if choice == 0:
        w = 0.5 * np.sqrt(1.0 + tr)
        f = 0.25 / w
        q = np.array(
            [w, f * (m[2, 1] - m[1, 2]), f * (m[0, 2] - m[2, 0]), f * (m[1, 0] - m[0, 1])]
        )
    elif choice == 1:
        x = 0.5 * np.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2])
        f = 0.25 / x
        q = np.array(
            [f * (m[2, 1] - m[1, 2]), x, f * (m[0, 1] + m[1, 0]), f * (m[0, 2] + m[2, 0])]
        )
    elif choice == 2:
        y = 0.5 * np.sqrt(1.0 - m[0, 0] + m[1, 1] - m[2, 2])
        f = 0.25 / y
        q = np.array(
            [f * (m[0, 2] - m[2, 0]), f * (m[0, 1] + m[1, 0]), y, f * (m[1, 2] + m[2, 1])]
        )
    else:
        z = 0.5 * np.sqrt(1.0 - m[0, 0] - m[1, 1] + m[2, 2])
        f = 0.25 / z
        q = np.array(
            [f * (m[1, 0] - m[0, 1]), f * (m[0, 2] + m[2, 0]), f * (m[1, 2] + m[2, 1]), z]
        )
    if q[0] < 0.0:
        q = -q
    return q / np.linalg.norm(q)


def so3_log(rot: np.ndarray) -> np.ndarray:
    """Rotation vector of a rotation matrix; robust near 0 and pi."""
    w, x, y, z = _dcm_to_wxyz(rot)
    v = np.array([x, y, z])
    s = np.linalg.norm(v)
    if s < 1e-9:
        return 2.0 * v / w
    return (2.0 * np.arctan2(s, w) / s) * v


def left_jacobian(rotvec: np.ndarray) -> np.ndarray:
    """Left Jacobian of SO(3): sum_k skew(phi)^k / (k+1)!.

    Satisfies so3_exp(phi) @ left_jacobian(-phi) == left_jacobian(phi).
    """
    rotvec = np.asarray(rotvec, dtype=float)
    theta = np.linalg.norm(rotvec)
    s = skew(rotvec)
    if theta < _SMALL_JACOBIAN:
        return np.eye(3) + 0.5 * s + (s @ s) / 6.0
    return (
        np.eye(3)
        + ((1.0 - np.cos(theta)) / theta**2) * s
        + ((theta - np.sin(theta)) / theta**3) * (s @ s)
    )


def left_jacobian_inv(rotvec: np.ndarray) -> np.ndarray:
    """Inverse of the left Jacobian (theta must stay below 2*pi)."""
    return np.linalg.inv(left_jacobian(rotvec))


def se23_exp(rotvec: np.ndarray, gen_v: np.ndarray, gen_p: np.ndarray) -> np.ndarray:
    """Exponential of an SE_2(3) tangent [rotvec; gen_v; gen_p] as a 5x5 matrix."""
    jac = left_jacobian(rotvec)
    out = np.eye(5)
    out[:3, :3] = so3_exp(rotvec)
    out[:3, 3] = jac @ np.asarray(gen_v, dtype=float)
    out[:3, 4] = jac @ np.asarray(gen_p, dtype=float)
    return out


def se23_log(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tangent components (rotvec, gen_v, gen_p) of an SE_2(3) element."""
    rotvec = so3_log(mat[:3, :3])
    jac_inv = left_jacobian_inv(rotvec)
    return rotvec, jac_inv @ mat[:3, 3], jac_inv @ mat[:3, 4]


def is_rotation(mat: np.ndarray, tol: float = 1e-9) -> bool:
    return (
        mat.shape == (3, 3)
        and np.abs(mat @ mat.T - np.eye(3)).max() < tol
        and abs(np.linalg.det(mat) - 1.0) < tol
    )


def is_se23(mat: np.ndarray, tol: float = 1e-9) -> bool:
    return (
        mat.shape == (5, 5)
        and is_rotation(mat[:3, :3], tol)
        and np.abs(mat[3:, :] - np.eye(5)[3:, :]).max() == 0.0
    )


def is_sek3(mat: np.ndarray, tol: float = 1e-9) -> bool:
    return (
        mat.shape == (8, 8)
        and is_rotation(mat[:3, :3], tol)
        and np.abs(mat[3:, :] - np.eye(8)[3:, :]).max() == 0.0
    )
