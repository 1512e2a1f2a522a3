"""Fast self-verification suite behind the `verify` CLI verb.

Each check re-derives an expected result from first principles (generic
algebra engine, finite differences, brute-force re-integration) and compares
the fast implementation against it. The pytest suite runs the same families
of checks at full depth; this module is the quick, dependency-free gate.
"""

from __future__ import annotations

import numpy as np

from .algebra import Multivector, Signature, geometric_product, quotient_reduce
from .filters import (
    FilterKind,
    FilterVariant,
    build_FG,
    build_H,
    retract,
    state_error,
)
from .lie import left_jacobian, so3_exp
from .mechanization import EarthModel, ImuSample, group_affine_residual, propagate
from .quaternions import (
    Quaternion,
    TridentQuaternion,
    dcm,
    quat_exp,
    quat_mul,
    trident_exp,
    trident_mul,
    trident_to_multivector,
)
from .state import ExtendedCliffordState, se23_embed

ALL_VARIANTS = (
    FilterVariant(FilterKind.EKF),
    FilterVariant(FilterKind.LQEKF),
    FilterVariant(FilterKind.RQEKF),
    FilterVariant(FilterKind.CLIFFORD),
)


def random_quaternion(rng) -> Quaternion:
    return quat_exp(rng.normal(0.0, 1.0, 3))


def random_state(rng, scale_pos: float = 100.0) -> ExtendedCliffordState:
    return ExtendedCliffordState(
        att=random_quaternion(rng),
        vt=rng.normal(0.0, 10.0, 3),
        pos=rng.normal(0.0, scale_pos, 3),
        bg=rng.normal(0.0, 0.01, 3),
        ba=rng.normal(0.0, 0.1, 3),
        lever=rng.normal(0.0, 1.0, 3),
    )


def random_imu(rng) -> ImuSample:
    return ImuSample(0.0, rng.normal(0.0, 0.2, 3), rng.normal(0.0, 2.0, 3))


def frozen_gravity_model(state: ExtendedCliffordState, model: EarthModel) -> EarthModel:
    """Freeze the gravity field at the linearization point, as the linearized
    models do (the position-error gravity term is neglected)."""
    from .mechanization import gravity

    try:
        g_e = gravity(state.pos, model)
    except Exception:
        g_e = np.array([0.0, 0.0, -9.8])
    return EarthModel(model.omega_ie, model.mu, model.r_ref, tuple(g_e))


def fd_state_jacobian(
    variant: FilterVariant,
    est: ExtendedCliffordState,
    u: ImuSample,
    model: EarthModel,
    eps: float = 1e-6,
    h: float = 1e-3,
) -> np.ndarray:
    """Central finite differences of the exact nonlinear error flow.

    Truth and estimate both propagate from the same IMU measurement under
    the frozen-gravity dynamics; the error is recomputed after propagation
    and differentiated in time with a third-order one-sided stencil.
    """
    frozen = frozen_gravity_model(est, model)

    def err_dot(delta: np.ndarray) -> np.ndarray:
        tru = retract(variant, est, delta, frozen)
        errs = [state_error(variant, tru, est, frozen)]
        x, xh = tru, est
        for _ in range(3):
            x = propagate(x, u, h, frozen)
            xh = propagate(xh, u, h, frozen)
            errs.append(state_error(variant, x, xh, frozen))
        return (-11.0 * errs[0] + 18.0 * errs[1] - 9.0 * errs[2] + 2.0 * errs[3]) / (6.0 * h)

    cols = []
    for j in range(18):
        d = np.zeros(18)
        d[j] = eps
        cols.append((err_dot(d) - err_dot(-d)) / (2.0 * eps))
    return np.column_stack(cols)


def fd_measurement_jacobian(
    variant: FilterVariant,
    est: ExtendedCliffordState,
    u: ImuSample,
    model: EarthModel,
    eps: float = 1e-6,
) -> np.ndarray:
    """Central finite differences of the predicted measurement through retract.

    The body rate entering the lever term is held at the linearization point,
    exactly as the measurement matrices do.
    """
    from .filters import _measurement_given_rate, omega_eb_body

    w_eb = omega_eb_body(est, u, model)
    cols = []
    for j in range(18):
        d = np.zeros(18)
        d[j] = eps
        y_plus = _measurement_given_rate(retract(variant, est, d, model), w_eb, model)
        y_minus = _measurement_given_rate(retract(variant, est, -d, model), w_eb, model)
        cols.append((y_plus - y_minus) / (2.0 * eps))
    return np.column_stack(cols)


def _rel_err_by_column(approx: np.ndarray, exact: np.ndarray) -> float:
    worst = 0.0
    for j in range(exact.shape[1]):
        denom = max(np.linalg.norm(exact[:, j]), 1.0)
        worst = max(worst, np.linalg.norm(approx[:, j] - exact[:, j]) / denom)
    return worst


def check_quaternion_relations() -> tuple[str, bool, str]:
    sig = Signature(0, 3, 0)
    e = [Multivector.generator(sig, k) for k in range(3)]
    i = geometric_product(e[1], e[2])
    j = geometric_product(e[2], e[0])
    k = geometric_product(e[0], e[1])
    minus_one = Multivector.scalar(sig, -1.0)
    worst = 0.0
    for lhs, rhs in [
        (geometric_product(i, i), minus_one),
        (geometric_product(j, j), minus_one),
        (geometric_product(k, k), minus_one),
        (geometric_product(geometric_product(i, j), k), minus_one),
        (geometric_product(i, j), k),
        (geometric_product(j, k), i),
        (geometric_product(k, i), j),
    ]:
        worst = max(worst, (lhs - rhs).norm())
    return "quaternion relations in Cl+(0,3,0)", worst < 1e-12, f"max defect {worst:.2e}"


def check_associativity(n_cases: int = 200) -> tuple[str, bool, str]:
    rng = np.random.default_rng(7)
    worst = 0.0
    for sig in (Signature(0, 3, 0), Signature(0, 3, 1), Signature(0, 3, 2), Signature(3, 0, 0)):
        for _ in range(n_cases):
            a, b, c = (Multivector(sig, rng.normal(0, 1, sig.dim)) for _ in range(3))
            lhs = geometric_product(geometric_product(a, b), c)
            rhs = geometric_product(a, geometric_product(b, c))
            worst = max(worst, (lhs - rhs).norm() / max(a.norm() * b.norm() * c.norm(), 1.0))
    return "geometric product associativity", worst < 1e-12, f"max defect {worst:.2e}"


def check_trident_isomorphism(n_cases: int = 200) -> tuple[str, bool, str]:
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(n_cases):
        a = TridentQuaternion.from_parts(
            random_quaternion(rng), rng.normal(0, 5, 3), rng.normal(0, 5, 3)
        )
        b = TridentQuaternion.from_parts(
            random_quaternion(rng), rng.normal(0, 5, 3), rng.normal(0, 5, 3)
        )
        diff = se23_embed(trident_mul(a, b)) - se23_embed(a) @ se23_embed(b)
        worst = max(worst, np.abs(diff).max())
    return "trident product vs SE_2(3) matrices", worst < 1e-12, f"max defect {worst:.2e}"


def check_quotient_correspondence(n_cases: int = 50) -> tuple[str, bool, str]:
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(n_cases):
        a = TridentQuaternion.from_parts(
            random_quaternion(rng), rng.normal(0, 2, 3), rng.normal(0, 2, 3)
        )
        b = TridentQuaternion.from_parts(
            random_quaternion(rng), rng.normal(0, 2, 3), rng.normal(0, 2, 3)
        )
        engine = quotient_reduce(
            geometric_product(trident_to_multivector(a), trident_to_multivector(b))
        )
        fast = trident_to_multivector(trident_mul(a, b))
        worst = max(worst, (engine - fast).norm())
    return "trident product vs Cl(0,3,2) quotient", worst < 1e-12, f"max defect {worst:.2e}"


def check_left_jacobian_identity(n_cases: int = 200) -> tuple[str, bool, str]:
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(n_cases):
        axis = rng.normal(0, 1, 3)
        axis /= np.linalg.norm(axis)
        phi = rng.uniform(1e-4, np.pi - 1e-4) * axis
        diff = so3_exp(phi) @ left_jacobian(-phi) - left_jacobian(phi)
        worst = max(worst, np.abs(diff).max())
    return "left Jacobian identity", worst < 1e-12, f"max defect {worst:.2e}"


def check_group_affine() -> tuple[str, bool, str]:
    rng = np.random.default_rng(19)
    model = EarthModel(uniform_gravity=(0.1, -0.2, -9.8))
    u = random_imu(rng)
    worst_free = 0.0
    worst_biased = np.inf
    for _ in range(20):
        z = np.zeros(3)
        x1 = ExtendedCliffordState(random_quaternion(rng), rng.normal(0, 5, 3),
                                   rng.normal(0, 50, 3), z, z, z)
        x2 = ExtendedCliffordState(random_quaternion(rng), rng.normal(0, 5, 3),
                                   rng.normal(0, 50, 3), z, z, z)
        worst_free = max(worst_free, group_affine_residual(x1, x2, u, model))
        b1 = ExtendedCliffordState(x1.att, x1.vt, x1.pos, rng.normal(0, 0.02, 3), z, z)
        b2 = ExtendedCliffordState(x2.att, x2.vt, x2.pos, rng.normal(0, 0.02, 3), z, z)
        worst_biased = min(worst_biased, group_affine_residual(b1, b2, u, model))
    ok = worst_free < 1e-10 and worst_biased > 1e-3
    return (
        "group-affine diagnostic",
        ok,
        f"bias-free max {worst_free:.2e}, biased min {worst_biased:.2e}",
    )


def check_jacobians(n_states: int = 5) -> tuple[str, bool, str]:
    rng = np.random.default_rng(23)
    model = EarthModel()
    worst = 0.0
    for variant in ALL_VARIANTS:
        for _ in range(n_states):
            est = random_state(rng)
            u = random_imu(rng)
            F, _ = build_FG(variant, est, u, frozen_gravity_model(est, model))
            worst = max(worst, _rel_err_by_column(fd_state_jacobian(variant, est, u, model), F))
            H = build_H(variant, est, u, model)
            worst = max(worst, _rel_err_by_column(fd_measurement_jacobian(variant, est, u, model), H))
    return "F/H vs finite differences", worst < 1e-4, f"max column error {worst:.2e}"


def check_retraction_consistency() -> tuple[str, bool, str]:
    rng = np.random.default_rng(29)
    model = EarthModel()
    ok = True
    detail = []
    for variant in ALL_VARIANTS:
        est = random_state(rng)
        d1 = rng.normal(0, 1, 18)
        d2 = rng.normal(0, 1, 18)

        def residual(eps: float) -> float:
            a = retract(variant, est, eps * d1, model)
            b = retract(variant, est, eps * d2, model)
            return float(np.linalg.norm(state_error(variant, a, b, model) - eps * (d1 - d2)))

        ratio = residual(2e-4) / residual(1e-4)
        detail.append(f"{variant.kind.value}:{ratio:.2f}")
        ok = ok and 3.5 <= ratio <= 4.5
    return "retraction quadratic remainder", ok, " ".join(detail)


ALL_CHECKS = (
    check_quaternion_relations,
    check_associativity,
    check_trident_isomorphism,
    check_quotient_correspondence,
    check_left_jacobian_identity,
    check_group_affine,
    check_jacobians,
    check_retraction_consistency,
)


def run_all(verbose: bool = True) -> bool:
    all_ok = True
    for fn in ALL_CHECKS:
        name, ok, detail = fn()
        all_ok = all_ok and ok
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return all_ok
