"""Covariant matrices, minors, and the division-free determinant."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetanull import (
    BadCharacteristic,
    BadOrder,
    Characteristic,
    covariant_determinant,
    covariant_matrix,
    minor_matrix,
    tau_derivative_matrix,
    theta,
    validate_siegel,
)
from thetanull.covariant import certified_det
from thetanull.sampling import random_tau

CH2_A = Characteristic((0, 1), (1, 0))
CH2_B = Characteristic((1, 1), (1, 1))


def test_tau_derivative_matches_finite_differences():
    tau = random_tau(np.random.default_rng(20), 2)
    ch = Characteristic.zero(2)
    dm = tau_derivative_matrix(tau, ch)
    h = 1e-6
    for i in range(2):
        for j in range(2):
            t_ij = complex(tau.entries[i, j])
            plus = theta(tau.with_entry(i, j, t_ij + h), None, ch, 1e-15).value
            minus = theta(tau.with_entry(i, j, t_ij - h), None, ch, 1e-15).value
            fd = (plus - minus) / (2.0 * h)
            # off-diagonal entries hold HALF the symmetric tau-derivative
            expect = fd if i == j else fd / 2.0
            assert abs(dm.values[i, j] - expect) < 1e-8


def test_covariant_matrix_is_antisymmetric_in_the_pair():
    tau = random_tau(np.random.default_rng(21), 2)
    ab = covariant_matrix(tau, CH2_A, base=CH2_B)
    ba = covariant_matrix(tau, CH2_B, base=CH2_A)
    assert np.array_equal(ab.values, -ba.values)  # same batch, exact negation
    assert np.allclose(ab.errs, ba.errs, rtol=1e-12)  # same terms, summed in swapped order


def test_covariant_matrix_rejects_bad_pairs():
    tau = random_tau(np.random.default_rng(22), 2)
    with pytest.raises(BadCharacteristic):
        covariant_matrix(tau, Characteristic((1, 0), (1, 1)))  # odd
    with pytest.raises(BadCharacteristic):
        covariant_matrix(tau, Characteristic.zero(2))  # equals default base


def test_certified_det_exact_small_cases():
    a = np.array([[2.0, 1.0], [1.0, 3.0]], dtype=complex)
    val, bound = certified_det(a, np.zeros((2, 2)))
    assert val == 5.0 + 0.0j and bound == 0.0
    b = np.array([[1, 2, 3], [4, 5, 6], [7, 8, 10]], dtype=complex)
    val, _ = certified_det(b, np.zeros((3, 3)))
    assert abs(val - (-3.0)) < 1e-12
    zero_col = np.array([[0.0, 1.0], [0.0, 2.0]], dtype=complex)
    val, _ = certified_det(zero_col, np.zeros((2, 2)))
    assert val == 0.0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(2, 4))
def test_certified_det_bound_dominates_perturbations(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    errs = np.abs(rng.normal(size=(n, n))) * 1e-6
    val, bound = certified_det(a, errs)
    assert abs(val - np.linalg.det(a)) < 1e-10 * max(1.0, abs(val))
    for _ in range(5):
        # any perturbation bounded entrywise by errs moves det by at most bound
        shift = errs * rng.uniform(-1.0, 1.0, size=(n, n))
        moved = np.linalg.det(a + shift)
        assert abs(moved - np.linalg.det(a)) <= bound * (1.0 + 1e-9) + 1e-15


def test_minor_matrix_order_one_and_full():
    tau = random_tau(np.random.default_rng(23), 3)
    cm = covariant_matrix(tau, Characteristic((0, 1, 1), (0, 1, 1)))
    m1 = minor_matrix(cm, 1)
    assert m1.subsets == tuple((k,) for k in range(3))
    assert np.array_equal(m1.values, cm.values)
    m3 = minor_matrix(cm, 3)
    assert m3.values.shape == (1, 1)
    det, bound = certified_det(cm.values, cm.errs)
    assert m3.values[0, 0] == det
    assert m3.errs[0, 0] == bound


def test_minor_matrix_subset_order_and_values():
    tau = random_tau(np.random.default_rng(24), 3)
    cm = covariant_matrix(tau, Characteristic((1, 1, 0), (1, 1, 0)))
    m2 = minor_matrix(cm, 2)
    assert m2.subsets == tuple(itertools.combinations(range(3), 2))
    for r, rows in enumerate(m2.subsets):
        for c, cols in enumerate(m2.subsets):
            sub = cm.values[np.ix_(rows, cols)]
            assert abs(m2.values[r, c] - np.linalg.det(sub)) < 1e-12


def test_minor_matrix_rejects_bad_order():
    tau = random_tau(np.random.default_rng(25), 2)
    cm = covariant_matrix(tau, CH2_A)
    with pytest.raises(BadOrder):
        minor_matrix(cm, 0)
    with pytest.raises(BadOrder):
        minor_matrix(cm, 3)


def test_minor_scaling_is_exact_for_powers_of_two():
    tau = random_tau(np.random.default_rng(26), 3)
    cm = covariant_matrix(tau, Characteristic((0, 1, 1), (0, 1, 1)))
    for h in (1, 2, 3):
        base = minor_matrix(cm, h)
        scaled = minor_matrix(cm.scaled(2.0), h)
        assert np.array_equal(scaled.values, base.values * 2.0**h)


def test_covariant_determinant_matches_numpy_det():
    tau = random_tau(np.random.default_rng(27), 3)
    ch = Characteristic((0, 1, 1), (0, 1, 1))
    cm = covariant_matrix(tau, ch)
    f = covariant_determinant(tau, ch)
    assert abs(f.value - np.linalg.det(cm.values)) <= f.err + 1e-12
    assert f.err >= 0.0


def test_covariant_determinant_genus1_oracle():
    # at g = 1 the covariant matrix is the 1x1 Wronskian-type pairing
    # theta_a * Dtheta_b - theta_b * Dtheta_a with D = (4 pi i)^(-1) d^2/dz^2
    tau = validate_siegel(1, np.array([[0.37 + 1.21j]]))
    a = Characteristic((0,), (1,))
    b = Characteristic((0,), (0,))
    f = covariant_determinant(tau, a, base=b)

    def series(ch, second):
        total = 0.0 + 0.0j
        for n in range(-40, 41):
            m = n + ch.eps[0] / 2.0
            term = np.exp(1j * np.pi * (m * m * (0.37 + 1.21j) + m * ch.delta[0]))
            total += (2j * np.pi * m) ** 2 * term if second else term
        return total

    expect = (series(a, False) * series(b, True) - series(b, False) * series(a, True)) / (4j * np.pi)
    assert abs(f.value - expect) <= f.err + 1e-13
