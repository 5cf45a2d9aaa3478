"""Certified theta constants, tangent-cone ranks, and theta-null strata."""

__version__ = "0.1.0"

from .covariant import (
    CovariantMatrix,
    MinorMatrix,
    covariant_determinant,
    covariant_matrix,
    minor_matrix,
    tau_derivative_matrix,
)
from .engine import (
    CertifiedArray,
    CertifiedValue,
    ThetaJet,
    dtheta_dtau,
    shift_identity_residual,
    theta,
    theta_jet,
    theta_jet_many,
    theta_many,
    truncation_radius,
)
from .errors import (
    BadCharacteristic,
    BadOrder,
    DerivativeTooSmall,
    DomainError,
    LeftSiegelSpace,
    NoConvergence,
    NotOnThetaNull,
    NotPositiveDefinite,
    NotSymmetric,
    NotSymplectic,
    NumericalError,
    SingularCocycle,
    TargetUnreachable,
    ThetanullError,
    ToleranceBelowCertificate,
)
from .genus4 import (
    discriminant_q_coefficients,
    jacobi_derivative_residual,
    local_coefficient,
    local_polynomial,
    modular_discriminant,
    substitution_identity_check,
)
from .poly import IntPolynomial
from .siegel import (
    Characteristic,
    HalfPeriod,
    SiegelPoint,
    SymplecticMatrix,
    block_diag,
    char_action,
    enumerate_even_chars,
    enumerate_odd_chars,
    in_level_subgroup,
    point_of_order_two,
    symplectic_action,
    validate_siegel,
)
from .strata import (
    StrataReport,
    find_theta_null,
    hessian_rank,
    rank_minors_consistent,
    stratum,
    vanishing_even_chars,
)
