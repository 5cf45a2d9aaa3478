"""Exactly checkable genus-4 local-expansion ingredients.

Three independent pieces: the sparse integer polynomial governing the local
expansion at a four-fold diagonal point (with its substitution identities,
checked coefficient-by-coefficient), the weight-12 cusp form given by the
24th power of the Euler product (with a certified product tail), and the
classical g = 1 derivative identity used to cross-validate the jet engine.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .engine import DEFAULT_TARGET_EPS, CertifiedValue, theta_jet, theta_many
from .errors import TargetUnreachable
from .poly import IntPolynomial
from .siegel import Characteristic, validate_siegel

MIN_IMAG_OMEGA = 0.02  # below this the product tail cannot reach sensible targets
_PRODUCT_CAP = 1 << 20

__all__ = [
    "local_polynomial",
    "substitution_identity_check",
    "modular_discriminant",
    "discriminant_q_coefficients",
    "local_coefficient",
    "jacobi_derivative_residual",
    "MIN_IMAG_OMEGA",
]


def local_polynomial() -> IntPolynomial:
    """The degree-8 polynomial in x1..x6 controlling the local expansion:

        (x1 x2 - x3 x4)^2 (x5 x6)^2 - 2 (x1 x2 + x3 x4) x1 x2 x3 x4 x5 x6
            + (x1 x2 x3 x4)^2
    """
    x = [IntPolynomial.variable(i, 6) for i in range(6)]
    x12, x34, x56 = x[0] * x[1], x[2] * x[3], x[4] * x[5]
    all_six = x12 * x34 * x56
    return (x12 - x34) ** 2 * x56**2 - 2 * (x12 + x34) * all_six + (x12 * x34) ** 2


def substitution_identity_check() -> bool:
    """x1 := 0 collapses the polynomial to (x3 x4 x5 x6)^2, exactly."""
    x = [IntPolynomial.variable(i, 6) for i in range(6)]
    return local_polynomial().substitute(0, 0) == (x[2] * x[3] * x[4] * x[5]) ** 2


def discriminant_q_coefficients(count: int) -> list:
    """First ``count`` q-expansion coefficients (exact ints, leading 1).

    Expands q * prod_{n=1..count} (1 - q^n)^24 to degree ``count`` — factors
    beyond n = count cannot touch these coefficients.
    """
    series = [0] * (count + 1)
    series[0] = 1
    for n in range(1, count + 1):
        for _ in range(24):
            # multiply by (1 - q^n), truncated
            for k in range(count, n - 1, -1):
                series[k] -= series[k - n]
    return series[:count]


def modular_discriminant(omega: complex, target_eps: float = DEFAULT_TARGET_EPS) -> CertifiedValue:
    """q * prod_{n>=1} (1 - q^n)^24 at q = exp(2 pi i omega), certified.

    The dropped factors satisfy |log prod_{n>N}(1-q^n)^24| <= t with
    t = 24 r^{N+1} / ((1-r)(1-r^{N+1})), r = |q|, so the truncated value v
    obeys |true - v| <= |v| (e^t - 1).
    """
    omega = complex(omega)
    if omega.imag < MIN_IMAG_OMEGA:
        raise TargetUnreachable(f"Im omega = {omega.imag:.4f} below {MIN_IMAG_OMEGA}")
    if not target_eps > 0.0:
        raise ValueError("target_eps must be positive")
    q = cmath.exp(2j * math.pi * omega)
    r = abs(q)
    value = q
    qn = 1.0 + 0.0j
    for n in range(1, _PRODUCT_CAP):
        qn *= q
        value *= (1.0 - qn) ** 24
        rn1 = r ** (n + 1)
        tail = 24.0 * rn1 / ((1.0 - r) * (1.0 - rn1))
        err = abs(value) * math.expm1(tail)
        if err <= target_eps:
            return CertifiedValue(value, err, 64.0 * np.finfo(float).eps * n * abs(value))
    raise TargetUnreachable("product tail did not reach the target")  # pragma: no cover


def local_coefficient(omegas, target_eps: float = DEFAULT_TARGET_EPS) -> CertifiedValue:
    """2^16 times the product of the four discriminant values.

    This is the scalar multiplying the local polynomial in the expansion at a
    four-fold diagonal point; it is reported with a propagated certificate
    but never compared against an independent target.
    """
    omegas = list(omegas)
    if len(omegas) != 4:
        raise ValueError("exactly four upper-half-plane points expected")
    value, err = complex(2**16), 0.0
    for om in omegas:
        factor = modular_discriminant(om, target_eps)
        err = abs(value) * factor.err + abs(factor.value) * err + err * factor.err
        value = value * factor.value
    return CertifiedValue(value, err)


def jacobi_derivative_residual(omega: complex, target_eps: float = DEFAULT_TARGET_EPS) -> float:
    """| |theta'[1,1](omega, 0)| - pi |theta00 theta01 theta10| | at g = 1.

    The classical derivative identity ties the odd constant's z-derivative to
    the product of the three even constants; the residual cross-validates the
    jet machinery against plain value evaluation.
    """
    tau = validate_siegel(1, [[complex(omega)]])
    jet = theta_jet(tau, None, Characteristic((1,), (1,)), target_eps)
    derivative = abs(jet.grad.values[0])
    evens = theta_many(
        tau,
        None,
        [Characteristic((0,), (0,)), Characteristic((0,), (1,)), Characteristic((1,), (0,))],
        target_eps,
    )
    product = abs(evens[0].value * evens[1].value * evens[2].value)
    return abs(derivative - math.pi * product)
