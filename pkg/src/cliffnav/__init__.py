"""Clifford-algebra state estimation for low-cost INS/GNSS integration.

Layers, bottom up: `algebra` (generic Cl(p,q,r) engine), `quaternions`
(quaternion / dual / trident fast types), `lie` (matrix-group mirror),
`state` (full INS state and embeddings), `mechanization` (strapdown
propagation), `filters` (the four error-state Kalman variants),
`simulate` (truth + sensor synthesis), `harness` (scenarios, metrics, I/O).
"""

from .algebra import Multivector, Signature, geometric_product, quotient_reduce
from .errors import (
    CliffnavError,
    ConfigError,
    DomainError,
    NumericalError,
    OrderingError,
    ParseError,
    SignatureMismatch,
)
from .filters import (
    FilterKind,
    FilterVariant,
    NoiseSpec,
    build_FG,
    build_H,
    init_covariance,
    iterated_update,
    predict,
    predict_measurement,
    reset_filter,
    retract,
    state_error,
)
from .harness import (
    MetricsReport,
    ScenarioConfig,
    VariantConfig,
    load_logs,
    rmse_intervals,
    run_scenario,
)
from .lie import left_jacobian, se23_exp, so3_exp, so3_log
from .mechanization import (
    EarthModel,
    GnssSample,
    ImuSample,
    gravity,
    group_affine_residual,
    propagate,
)
from .quaternions import (
    DualQuaternion,
    Quaternion,
    TridentQuaternion,
    dcm,
    quat_adjoint,
    quat_exp,
    quat_mul,
    trident_exp,
    trident_mul,
)
from .simulate import (
    ImuErrorSpec,
    Segment,
    TrajectoryProfile,
    TruthSample,
    default_profile,
    generate_trajectory,
    simulate_gnss,
    simulate_imu,
)
from .state import ExtendedCliffordState, compose, se23_embed, sek3_embed

__version__ = "0.1.0"
