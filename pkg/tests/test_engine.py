"""Certified evaluation: frozen oracle values, certificates, invariances.

The frozen literals were produced by a direct double sum over a large box
(the `_oracle` below with R = 24..60), entirely independent of the engine's
lattice logic, and are pinned here to detect regressions.
"""

import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetanull import (
    Characteristic,
    TargetUnreachable,
    shift_identity_residual,
    theta,
    theta_jet,
    theta_jet_many,
    theta_many,
    truncation_radius,
    validate_siegel,
)
from thetanull.sampling import random_tau, random_z

TAU2_RAW = np.array([[0.3 + 1.1j, 0.1 + 0.2j], [0.1 + 0.2j, -0.4 + 0.9j]])
Z2 = np.array([0.15 - 0.1j, -0.2 + 0.05j])

# (eps, delta) -> value of the double sum at (TAU2_RAW, Z2), R = 24
FROZEN_G2 = {
    ((0, 0), (0, 0)): 1.0482649853114976 + 0.047069389572784975j,
    ((0, 1), (1, 1)): 0.4586615681122622 - 0.32425677305969464j,
    ((1, 1), (0, 1)): 0.5670193636553494 - 0.19913702988309426j,
    ((1, 1), (1, 1)): 0.031915553606165874 + 0.16006861524810928j,
}


def _oracle(tau_rows, z, eps, delta, R):
    """Reference double sum with plain cmath; no shared code with the engine."""
    g = len(tau_rows)
    total = 0.0 + 0.0j
    def rec(prefix):
        nonlocal total
        if len(prefix) == g:
            m = [prefix[k] + eps[k] / 2.0 for k in range(g)]
            quad = sum(m[i] * tau_rows[i][j] * m[j] for i in range(g) for j in range(g))
            lin = 2.0 * sum(m[k] * (z[k] + delta[k] / 2.0) for k in range(g))
            total += cmath.exp(1j * cmath.pi * (quad + lin))
            return
        for n in range(-R, R + 1):
            rec(prefix + [n])
    rec([])
    return total


def test_frozen_genus1_value():
    tau = validate_siegel(1, np.array([[1j]]))
    cv = theta(tau, None, Characteristic((0,), (0,)))
    assert abs(cv.value - 1.0864348112133082) <= cv.err + 5e-16
    assert cv.err <= 1e-13


def test_frozen_genus2_values():
    tau = validate_siegel(2, TAU2_RAW)
    chars = [Characteristic(e, d) for e, d in FROZEN_G2]
    values = theta_many(tau, Z2, chars)
    for (ed, expect), cv in zip(FROZEN_G2.items(), values):
        assert abs(cv.value - expect) <= cv.err + 5e-15, ed


def test_matches_fresh_oracle_at_random_points():
    rng = np.random.default_rng(10)
    tau = random_tau(rng, 2)
    z = random_z(rng, 2)
    rows = [[complex(v) for v in row] for row in tau.entries]
    for ch in (Characteristic((0, 0), (0, 0)), Characteristic((1, 0), (0, 1))):
        cv = theta(tau, z, ch)
        ref = _oracle(rows, list(z), ch.eps, ch.delta, R=12)
        assert abs(cv.value - ref) < 1e-11


def test_certificate_fields():
    tau = validate_siegel(1, np.array([[1j]]))
    cv = theta(tau, None, Characteristic((0,), (0,)), 1e-10)
    assert cv.err >= 0.0 and np.isfinite(cv.err)
    assert cv.roundoff >= 0.0
    assert cv.err <= 1e-10


def test_tighter_target_shrinks_certificate():
    tau = random_tau(np.random.default_rng(11), 2)
    loose = theta(tau, None, Characteristic.zero(2), 1e-8)
    tight = theta(tau, None, Characteristic.zero(2), 1e-14)
    assert tight.err < loose.err
    assert abs(loose.value - tight.value) <= loose.err + tight.err


def test_truncation_radius_certifies():
    tau = validate_siegel(1, np.array([[1j]]))
    radius, bound = truncation_radius(tau, None, 1e-15)
    assert radius == 3
    assert 0.0 < bound <= 1e-15


def test_single_equals_batched_bitwise():
    rng = np.random.default_rng(12)
    tau = random_tau(rng, 3)
    z = random_z(rng, 3)
    from thetanull import enumerate_even_chars

    chars = enumerate_even_chars(3)[:7]
    batch = theta_many(tau, z, chars)
    for ch, cv in zip(chars, batch):
        single = theta(tau, z, ch)
        assert single.value == cv.value  # bitwise
        assert single.err == cv.err


def test_rerun_is_bitwise_deterministic():
    rng = np.random.default_rng(13)
    tau = random_tau(rng, 2)
    z = random_z(rng, 2)
    ch = Characteristic((1, 0), (0, 0))
    a = theta(tau, z, ch)
    b = theta(tau, z, ch)
    assert a.value == b.value and a.err == b.err


def test_odd_characteristics_vanish_at_origin():
    rng = np.random.default_rng(14)
    from thetanull import enumerate_odd_chars

    for g in (1, 2, 3):
        tau = random_tau(rng, g)
        for cv in theta_many(tau, None, enumerate_odd_chars(g)):
            assert abs(cv.value) <= cv.err


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 3))
def test_parity_symmetry_in_z(seed, g):
    # theta[ch](tau, -z) = (-1)^(eps.delta) theta[ch](tau, z)
    rng = np.random.default_rng(seed)
    tau = random_tau(rng, g)
    z = random_z(rng, g)
    eps = tuple(int(b) for b in rng.integers(0, 2, size=g))
    delta = tuple(int(b) for b in rng.integers(0, 2, size=g))
    ch = Characteristic(eps, delta)
    plus = theta(tau, z, ch)
    minus = theta(tau, -z, ch)
    sign = 1.0 if ch.is_even else -1.0
    assert abs(minus.value - sign * plus.value) <= plus.err + minus.err + 1e-13


def test_integer_translation_in_z():
    # theta[eps,delta](tau, z + n) = (-1)^(eps.n) theta[eps,delta](tau, z)
    rng = np.random.default_rng(15)
    tau = random_tau(rng, 2)
    z = random_z(rng, 2)
    for ch in (Characteristic((1, 0), (1, 1)), Characteristic((0, 1), (0, 0))):
        for n in ([1, 0], [1, 1], [-2, 3]):
            base = theta(tau, z, ch)
            moved = theta(tau, z + np.array(n, dtype=float), ch)
            sign = (-1.0) ** (ch.eps[0] * n[0] + ch.eps[1] * n[1])
            assert abs(moved.value - sign * base.value) <= 50 * (base.err + moved.err)


def test_jet_gradient_matches_finite_differences():
    tau = validate_siegel(2, TAU2_RAW)
    jet = theta_jet(tau, Z2, Characteristic.zero(2))
    h = 1e-6
    for k in range(2):
        step = np.zeros(2)
        step[k] = h
        plus = theta(tau, Z2 + step, Characteristic.zero(2), 1e-15)
        minus = theta(tau, Z2 - step, Characteristic.zero(2), 1e-15)
        fd = (plus.value - minus.value) / (2.0 * h)
        assert abs(fd - jet.grad.values[k]) < 1e-9


def test_jet_hessian_matches_finite_differences():
    tau = validate_siegel(2, TAU2_RAW)
    jet = theta_jet(tau, Z2, Characteristic.zero(2))
    h = 1e-5
    for i in range(2):
        for j in range(2):
            zpp = Z2.copy(); zpp[i] += h; zpp[j] += h
            zpm = Z2.copy(); zpm[i] += h; zpm[j] -= h
            zmp = Z2.copy(); zmp[i] -= h; zmp[j] += h
            zmm = Z2.copy(); zmm[i] -= h; zmm[j] -= h
            fpp = theta(tau, zpp, Characteristic.zero(2), 1e-15).value
            fpm = theta(tau, zpm, Characteristic.zero(2), 1e-15).value
            fmp = theta(tau, zmp, Characteristic.zero(2), 1e-15).value
            fmm = theta(tau, zmm, Characteristic.zero(2), 1e-15).value
            fd = (fpp - fpm - fmp + fmm) / (4.0 * h * h)
            assert abs(fd - jet.hess.values[i, j]) < 1e-5


def test_jet_batch_matches_singles():
    rng = np.random.default_rng(16)
    tau = random_tau(rng, 2)
    chars = [Characteristic.zero(2), Characteristic((1, 1), (1, 1))]
    jets = theta_jet_many(tau, None, chars)
    for ch, jet in zip(chars, jets):
        single = theta_jet(tau, None, ch)
        assert np.array_equal(single.hess.values, jet.hess.values)
        assert single.value.value == jet.value.value


def test_shift_identity_residual_small():
    rng = np.random.default_rng(17)
    tau = random_tau(rng, 2)
    z = random_z(rng, 2)
    for ch in (Characteristic((1, 1), (0, 1)), Characteristic((1, 0), (1, 0))):
        assert shift_identity_residual(tau, z, ch) < 1e-10


def test_unreachable_target_raises():
    tau = validate_siegel(1, np.array([[0.001j]]))
    with pytest.raises(TargetUnreachable):
        theta(tau, None, Characteristic((0,), (0,)))


def test_genus_mismatch_rejected():
    tau = validate_siegel(2, 1j * np.eye(2))
    with pytest.raises(Exception):
        theta(tau, None, Characteristic((0,), (0,)))
