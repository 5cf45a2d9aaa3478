"""Local polynomial identities, the cusp form, and the derivative cross-check."""

import numpy as np
import pytest

from thetanull import (
    IntPolynomial,
    TargetUnreachable,
    discriminant_q_coefficients,
    jacobi_derivative_residual,
    local_coefficient,
    local_polynomial,
    modular_discriminant,
    substitution_identity_check,
)
from thetanull.sampling import random_omega


def test_local_polynomial_shape():
    p = local_polynomial()
    assert p.total_degree() == 8
    assert p.evaluate([1, 1, 1, 1, 1, 1]) == -3
    assert p.evaluate([1, 1, 1, 1, 0, 0]) == 1  # only the (x1 x2 x3 x4)^2 term survives


def test_local_polynomial_substitutions():
    p = local_polynomial()
    x = [IntPolynomial.variable(i, 6) for i in range(6)]
    assert substitution_identity_check()
    assert p.substitute(0, 0) == (x[2] * x[3] * x[4] * x[5]) ** 2
    assert p.substitute(1, 0) == (x[2] * x[3] * x[4] * x[5]) ** 2
    assert p.substitute(2, 0) == (x[0] * x[1] * x[4] * x[5]) ** 2
    assert p.substitute(3, 0) == (x[0] * x[1] * x[4] * x[5]) ** 2


def test_local_polynomial_symmetries():
    p = local_polynomial()
    assert p.permute([1, 0, 2, 3, 4, 5]) == p  # swap within the first pair
    assert p.permute([0, 1, 3, 2, 4, 5]) == p
    assert p.permute([2, 3, 0, 1, 4, 5]) == p  # swap the first two pairs
    assert p.permute([0, 1, 2, 3, 5, 4]) == p
    # moving a singleton across pair boundaries is NOT a symmetry
    assert p.permute([4, 1, 2, 3, 0, 5]) != p


def test_discriminant_q_coefficients():
    # Ramanujan tau values for n = 1..8
    assert discriminant_q_coefficients(8) == [1, -24, 252, -1472, 4830, -6048, -16744, 84480]


def test_q_coefficients_match_brute_force_product():
    # expand q prod_{n<=6} (1 - q^n)^24 with integer convolution, no shared code
    trunc = 7
    poly = [0] * (trunc + 1)
    poly[0] = 1
    for n in range(1, trunc + 1):
        # multiply by (1 - q^n) 24 times
        for _ in range(24):
            for k in range(trunc, n - 1, -1):
                poly[k] -= poly[k - n]
    expect = poly[: trunc]  # coefficient of q^(1+k) in q * prod
    assert discriminant_q_coefficients(trunc) == expect


def test_modular_discriminant_frozen_value():
    cv = modular_discriminant(1j)
    assert abs(cv.value.imag) <= cv.err + 1e-18
    assert abs(cv.value.real - 0.0017853698506431232) <= cv.err + 1e-17
    assert cv.err <= 1e-13


def test_modular_discriminant_covariances():
    om = 0.31 + 0.92j
    base = modular_discriminant(om, 1e-16)
    assert abs(modular_discriminant(om + 1.0, 1e-16).value - base.value) < 1e-12 * abs(base.value)
    inv = modular_discriminant(-1.0 / om, 1e-16)
    assert abs(inv.value - om**12 * base.value) < 1e-10 * abs(inv.value)


def test_modular_discriminant_guards():
    with pytest.raises(TargetUnreachable):
        modular_discriminant(0.5 + 0.001j)
    with pytest.raises(ValueError):
        modular_discriminant(1j, target_eps=0.0)


def test_local_coefficient_is_scaled_product():
    rng = np.random.default_rng(40)
    omegas = [random_omega(rng) for _ in range(4)]
    cv = local_coefficient(omegas)
    direct = 2**16 * np.prod([modular_discriminant(om).value for om in omegas])
    assert abs(cv.value - direct) <= cv.err + 1e-14 * abs(direct)
    assert cv.err > 0.0


def test_jacobi_derivative_residual_small():
    assert jacobi_derivative_residual(1j) < 1e-12
    assert jacobi_derivative_residual(0.4 + 0.8j) < 1e-12
    rng = np.random.default_rng(41)
    for _ in range(5):
        assert jacobi_derivative_residual(random_omega(rng)) < 1e-10
