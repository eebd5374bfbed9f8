"""Uncertainty relations built on the Aharonov-Vaidman decomposition."""

from .av import (
    AvDecomposition,
    CorrelationValue,
    av_decompose,
    cauchy_schwarz_identity,
    correlation,
    expectation,
    std_dev,
    sum_residual_identity,
)
from .errors import (
    ConstraintError,
    DegenerateError,
    DimensionError,
    NonCommutingError,
    NotHermitianError,
    NotPSDError,
    UncertaintyKitError,
    UnsupportedShapeError,
)
from .linalg import check_density, is_hermitian, partial_trace, polar_decompose, psd_sqrt
from .mixed import (
    ConjectureSweepRow,
    MixedBoundResult,
    amplitude_from_density,
    amplitude_from_purification,
    amplitude_validate,
    av_operator_decompose,
    conjecture_sweep,
    mp1_mixed,
    mp2_mixed,
    optimize_mixed_bound,
    purify,
    replay_restart,
    rho_perp,
)
from .propagation import linear_variance, pauli_shortcut_variance, taylor_validate, taylor_variance
from .relations import (
    RelationReport,
    evaluate,
    maccone_pati_1,
    maccone_pati_2,
    robertson,
    schrodinger,
    sum_relation,
    weighted_general,
    weighted_general_2,
    xiao_weighted,
)
from .sampling import sample
from .search import find_intelligent_state

__version__ = "0.1.0"
