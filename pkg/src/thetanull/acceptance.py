"""The self-test suite: twelve seeded end-to-end checks with pinned tolerances.

Each criterion is a pure function of (seed, threads) returning a pass flag
and a deterministic detail string (no timings, no environment state), so a
fixed seed gives a byte-identical report across runs and thread counts.
Elapsed times are returned separately for callers that want to display or
budget them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .covariant import covariant_determinant, covariant_matrix, tau_derivative_matrix
from .engine import theta, theta_jet_many, theta_many
from .genus4 import (
    discriminant_q_coefficients,
    jacobi_derivative_residual,
    local_polynomial,
    modular_discriminant,
    substitution_identity_check,
)
from .poly import IntPolynomial
from .sampling import (
    random_block_tau,
    random_level_generator,
    random_omega,
    random_tau,
    random_word,
    random_z,
)
from .siegel import (
    Characteristic,
    SymplecticMatrix,
    char_action,
    enumerate_even_chars,
    enumerate_odd_chars,
    in_level_subgroup,
    symplectic_action,
    validate_siegel,
)
from .strata import find_theta_null, rank_minors_consistent, stratum

__all__ = ["CriterionResult", "CRITERION_NAMES", "run_criteria"]


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str
    elapsed: float  # wall seconds; excluded from serialized reports


def _rng(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng([seed, *tags])


# --- 1 -----------------------------------------------------------------------


def _crit_odd_vanishing(seed, threads):
    """Odd constants vanish within certificates, err <= 1e-12, g = 1..4."""
    worst_val = 0.0
    worst_err = 0.0
    for g in (1, 2, 3, 4):
        rng = _rng(seed, 1, g)
        odds = enumerate_odd_chars(g)
        for _ in range(20):
            tau = random_tau(rng, g)
            for cv in theta_many(tau, None, odds):
                worst_val = max(worst_val, abs(cv.value))
                worst_err = max(worst_err, cv.err)
                if abs(cv.value) > cv.err or cv.err > 1e-12:
                    return False, f"violation: |value| {abs(cv.value):.3e} err {cv.err:.3e}"
    return True, f"80 points, worst |value| {worst_val:.3e}, worst err {worst_err:.3e}"


# --- 2 -----------------------------------------------------------------------


def _crit_heat_equation(seed, threads):
    """Analytic tau-derivatives match central differences (step 1e-5).

    Deviations are measured against the per-point scale max |entry| over all
    even characteristics: strict entrywise ratios are unattainable in double
    precision because the finite difference of O(1) theta values carries an
    absolute noise floor around 1e-11, while the smallest derivative entries
    at g = 4 sit below it.
    """
    h = 1e-5
    worst = 0.0
    for g in (1, 2, 3, 4):
        rng = _rng(seed, 2, g)
        evens = enumerate_even_chars(g)
        scaler = 2j * math.pi * (1.0 + np.eye(g))
        for _ in range(10):
            tau = random_tau(rng, g)
            jets = theta_jet_many(tau, None, evens, 1e-14)
            analytic = [jet.hess.values / scaler for jet in jets]
            scale = max(float(np.max(np.abs(a))) for a in analytic)
            dev = 0.0
            for i in range(g):
                for j in range(i, g):
                    t_ij = complex(tau.entries[i, j])
                    plus = theta_many(tau.with_entry(i, j, t_ij + h), None, evens, 1e-16)
                    minus = theta_many(tau.with_entry(i, j, t_ij - h), None, evens, 1e-16)
                    for k in range(len(evens)):
                        fd = (plus[k].value - minus[k].value) / (2.0 * h)
                        dev = max(dev, abs(analytic[k][i, j] - fd))
            worst = max(worst, dev / scale)
    return worst < 1e-6, f"40 points, worst scaled deviation {worst:.3e} (limit 1e-6)"


# --- 3 -----------------------------------------------------------------------


def _crit_shift_formula(seed, threads):
    """Half-period shift identity residual < 1e-10, g = 2 and 3."""
    from .engine import shift_identity_residual

    worst = 0.0
    for g in (2, 3):
        rng = _rng(seed, 3, g)
        evens = enumerate_even_chars(g)
        for _ in range(10):
            tau = random_tau(rng, g)
            z = random_z(rng, g)
            for ch in evens:
                worst = max(worst, shift_identity_residual(tau, z, ch))
    return worst < 1e-10, f"20 (tau, z) pairs, worst residual {worst:.3e} (limit 1e-10)"


# --- 4 -----------------------------------------------------------------------


def _crit_block_factorization(seed, threads):
    """theta at a block point factors into block thetas within 3x certificates."""
    from .siegel import block_diag

    splits = [(1, 1), (1, 2), (2, 2), (1, 3)]
    worst_margin = 0.0
    rng = _rng(seed, 4)
    for r in range(20):
        g1, g2 = splits[r % 4]
        t1 = random_tau(rng, g1)
        t2 = random_tau(rng, g2)
        joint = block_diag(t1, t2)
        g = g1 + g2
        chars = enumerate_even_chars(g)
        joint_vals = theta_many(joint, None, chars)
        parts = [ch.split(g1) for ch in chars]
        left_vals = theta_many(t1, None, [p[0] for p in parts])
        right_vals = theta_many(t2, None, [p[1] for p in parts])
        for jv, lv, rv in zip(joint_vals, left_vals, right_vals):
            err = jv.err + abs(lv.value) * rv.err + abs(rv.value) * lv.err + lv.err * rv.err
            gap = abs(jv.value - lv.value * rv.value)
            if gap > 3.0 * err:
                return False, f"split {g1}+{g2}: gap {gap:.3e} > 3*err {3*err:.3e}"
            worst_margin = max(worst_margin, gap / max(err, 1e-300))
    return True, f"20 block pairs, worst gap/err {worst_margin:.3e} (limit 3)"


# --- 5 -----------------------------------------------------------------------


def _crit_squared_modularity(seed, threads):
    """Squared theta constants have weight 1, the determinant form weight g+2,
    on words from the level-group generator family."""
    worst_theta = 0.0
    worst_f = 0.0
    for g in (1, 2, 3):
        rng = _rng(seed, 5, g)
        evens = enumerate_even_chars(g)
        done = 0
        while done < 10:
            word = random_level_generator(rng, g)
            if rng.integers(0, 2) == 1:
                word = word @ random_level_generator(rng, g)
            if not in_level_subgroup(word, 4, tight=True):
                return False, "generator word escaped the level group"
            tau = random_tau(rng, g)
            moved = symplectic_action(word, tau)
            if moved.lambda_min() < 0.05:
                continue  # keep jet evaluations inside the lattice cap
            den = complex(np.linalg.det(word.c @ tau.entries + word.d))
            for ch in (evens[0], evens[len(evens) // 2], evens[-1]):
                before = theta(tau, None, ch).value
                after = theta(moved, None, ch).value
                rel = abs(after**2 - den * before**2) / max(abs(den * before**2), 1e-300)
                worst_theta = max(worst_theta, rel)
            aux = evens[1] if g == 1 else evens[2]
            f_before = covariant_determinant(tau, aux).value
            f_after = covariant_determinant(moved, aux).value
            relf = abs(f_after - den ** (g + 2) * f_before) / max(abs(den ** (g + 2) * f_before), 1e-300)
            worst_f = max(worst_f, relf)
            done += 1
    passed = worst_theta < 1e-8 and worst_f < 1e-7
    return passed, (
        f"30 words, worst squared-theta rel {worst_theta:.3e} (limit 1e-8), "
        f"worst det-form rel {worst_f:.3e} (limit 1e-7)"
    )


# --- 6 -----------------------------------------------------------------------


def _crit_jacobi_derivative(seed, threads):
    rng = _rng(seed, 6)
    worst = 0.0
    for _ in range(20):
        worst = max(worst, jacobi_derivative_residual(random_omega(rng)))
    return worst < 1e-10, f"20 points, worst residual {worst:.3e} (limit 1e-10)"


# --- 7 -----------------------------------------------------------------------


def _crit_reducible_rank(seed, threads):
    """Two-block genus-4 points: minimal Hessian rank exactly 2, verdict flagged."""
    rng = _rng(seed, 7)
    worst_s3 = 0.0
    least_s2 = 1.0
    for r in range(50):
        g1 = 1 if r % 2 == 0 else 2
        tau = random_block_tau(rng, g1, 4 - g1)
        rep = stratum(tau, threads=threads)
        if rep.verdict != "REDUCIBLE_CANDIDATE" or rep.stratum != 2:
            return False, f"trial {r}: stratum {rep.stratum}, verdict {rep.verdict}"
        for _, sv, rank in rep.ranks:
            if rank != 2:
                return False, f"trial {r}: vanishing characteristic with rank {rank}"
            worst_s3 = max(worst_s3, sv[2] / sv[0])
            least_s2 = min(least_s2, sv[1] / sv[0])
    passed = worst_s3 < 1e-8 and least_s2 > 1e-3
    return passed, (
        f"50 block points, worst s3/s1 {worst_s3:.3e} (limit 1e-8), "
        f"least s2/s1 {least_s2:.3e} (limit 1e-3)"
    )


# --- helpers for the Newton-point criteria ------------------------------------


def _newton_points_g2(rng, count, vanish_target):
    """Seeded points on the 11/11 theta-null near the diagonal locus."""
    ch = Characteristic((1, 1), (1, 1))
    points = []
    while len(points) < count:
        d = 0.9 + rng.uniform(0.0, 0.6, size=2)
        off = 0.05 + rng.uniform(0.0, 0.1) + 1j * rng.uniform(0.0, 0.04)
        a = rng.uniform(-0.15, 0.15, size=(2, 2))
        raw = (a + a.T) / 2.0 + 1j * np.diag(d)
        raw[0, 1] += off
        raw[1, 0] = raw[0, 1]
        points.append((find_theta_null(validate_siegel(2, raw), ch, (0, 1), vanish_target), ch))
    return points


def _newton_points_g3(rng, count, vanish_target):
    """Seeded points on the 110/110 theta-null near the 2+1 block locus."""
    ch = Characteristic((1, 1, 0), (1, 1, 0))
    points = []
    while len(points) < count:
        m = np.zeros((3, 3), dtype=complex)
        m[0, 0] = 1j * (1.0 + rng.uniform(0.0, 0.4))
        m[1, 1] = 1j * (0.9 + rng.uniform(0.0, 0.4))
        m[2, 2] = 1j * (1.1 + rng.uniform(0.0, 0.4))
        m[0, 1] = m[1, 0] = 0.05 + rng.uniform(0.0, 0.08) + 1j * rng.uniform(0.0, 0.03)
        m[0, 2] = m[2, 0] = rng.uniform(-0.15, 0.15) + 1j * rng.uniform(0.0, 0.05)
        m[1, 2] = m[2, 1] = rng.uniform(-0.15, 0.15) + 1j * rng.uniform(0.0, 0.05)
        points.append((find_theta_null(validate_siegel(3, m), ch, (0, 1), vanish_target), ch))
    return points


# --- 8 -----------------------------------------------------------------------


def _crit_rank_minors(seed, threads):
    """Rank <= h iff all (h+1)-minors vanish, both directions, every h."""
    rng = _rng(seed, 8)
    points = _newton_points_g2(rng, 10, 1e-13) + _newton_points_g3(rng, 10, 1e-13)
    checked = 0
    for tau, ch in points:
        g = tau.genus
        for h in range(0, g + 1):
            if not rank_minors_consistent(tau, h, vanishing_ch=ch):
                return False, f"inconsistent at genus {g}, h = {h}"
            checked += 1
    return True, f"20 Newton points, {checked} (point, h) combinations consistent"


# --- 9 -----------------------------------------------------------------------


def _crit_covariant_det_identity(seed, threads):
    """On the null locus the determinant form collapses to theta^g det(D theta)."""
    rng = _rng(seed, 9)
    points = _newton_points_g2(rng, 5, 5e-13) + _newton_points_g3(rng, 5, 5e-13)
    worst = 0.0
    for tau, van in points:
        g = tau.genus
        if abs(theta(tau, None, van).value) >= 1e-12:
            return False, "Newton point drifted off the null locus"
        detd = complex(np.linalg.det(tau_derivative_matrix(tau, van).values))
        done = 0
        for aux in enumerate_even_chars(g):
            if aux == van:
                continue
            f_val = covariant_determinant(tau, aux, base=van).value
            tv = theta(tau, None, aux).value
            gap = abs(f_val - tv**g * detd) / max(1.0, abs(f_val))
            worst = max(worst, gap)
            if gap >= 1e-9:
                return False, f"genus {g}: gap {gap:.3e} >= 1e-9"
            done += 1
            if done == 3:
                break
    return True, f"10 points x 3 auxiliaries, worst gap {worst:.3e} (limit 1e-9)"


# --- 10 ----------------------------------------------------------------------


def _crit_local_polynomial(seed, threads):
    """Exact integer identities of the local polynomial."""
    p = local_polynomial()
    x = [IntPolynomial.variable(i, 6) for i in range(6)]
    checks = [
        substitution_identity_check(),
        p.substitute(1, 0) == (x[2] * x[3] * x[4] * x[5]) ** 2,
        p.substitute(2, 0) == (x[0] * x[1] * x[4] * x[5]) ** 2,
        p.evaluate([1] * 6) == -3,
        p.total_degree() == 8,
        p.permute([1, 0, 3, 2, 5, 4]) == p,
        p.permute([2, 3, 0, 1, 4, 5]) == p,
    ]
    return all(checks), f"{sum(checks)}/7 exact identities hold"


# --- 11 ----------------------------------------------------------------------


def _crit_discriminant_covariance(seed, threads):
    rng = _rng(seed, 11)
    coeffs = discriminant_q_coefficients(4)
    if coeffs != [1, -24, 252, -1472]:
        return False, f"q-coefficients {coeffs}"
    worst = 0.0
    for _ in range(20):
        om = random_omega(rng)
        # the comparison is relative while the evaluation target is absolute;
        # 1e-16 keeps the certified tail well below 1e-9 relative even at the
        # smallest |delta| the sampler can produce (Im omega <= 2).
        base = modular_discriminant(om, 1e-16)
        inv = modular_discriminant(-1.0 / om, 1e-16)
        shift = modular_discriminant(om + 1.0, 1e-16)
        rel_w = abs(inv.value - om**12 * base.value) / abs(inv.value)
        rel_t = abs(shift.value - base.value) / abs(base.value)
        worst = max(worst, rel_w, rel_t)
    passed = worst < 1e-9
    return passed, (
        f"q-coefficients 1,-24,252,-1472 exact; 20 points, "
        f"worst covariance rel {worst:.3e} (limit 1e-9)"
    )


# --- 12 ----------------------------------------------------------------------


def _crit_stratum_invariance(seed, threads):
    """Stratum and vanishing set are symplectic invariants (mod char_action)."""
    rng = _rng(seed, 12)
    done = 0
    while done < 10:
        g1 = 1 if done % 2 == 0 else 2
        tau = random_block_tau(rng, g1, 4 - g1)
        word = random_word(rng, 4, int(rng.integers(1, 3)))
        moved = symplectic_action(word, tau)
        if moved.lambda_min() < 0.08:
            continue  # keep jet evaluations inside the lattice cap
        rep = stratum(tau, threads=threads)
        rep_moved = stratum(moved, threads=threads)
        if rep.stratum != rep_moved.stratum or rep.verdict != rep_moved.verdict:
            return False, f"trial {done}: stratum {rep.stratum} vs {rep_moved.stratum}"
        image = {char_action(word, ch) for ch, _ in rep.vanishing}
        moved_set = {ch for ch, _ in rep_moved.vanishing}
        if image != moved_set:
            return False, f"trial {done}: vanishing sets do not correspond"
        done += 1
    return True, "10 (point, word) pairs: stratum, verdict and vanishing sets match"


CRITERIA = [
    ("odd_vanishing", _crit_odd_vanishing),
    ("heat_equation", _crit_heat_equation),
    ("shift_formula", _crit_shift_formula),
    ("block_factorization", _crit_block_factorization),
    ("squared_modularity", _crit_squared_modularity),
    ("jacobi_derivative", _crit_jacobi_derivative),
    ("reducible_rank", _crit_reducible_rank),
    ("rank_minors_consistency", _crit_rank_minors),
    ("covariant_det_identity", _crit_covariant_det_identity),
    ("local_polynomial", _crit_local_polynomial),
    ("discriminant_covariance", _crit_discriminant_covariance),
    ("stratum_invariance", _crit_stratum_invariance),
]

CRITERION_NAMES = [name for name, _ in CRITERIA]


def run_criteria(name_filter: str | None = None, seed: int = 0, threads: int = 1):
    """Run all (or name-matched) criteria; returns CriterionResult list.

    ``name_filter`` keeps criteria whose name contains the given substring.
    """
    results = []
    for name, func in CRITERIA:
        if name_filter and name_filter not in name:
            continue
        started = time.perf_counter()
        passed, detail = func(seed, threads)
        results.append(CriterionResult(name, passed, detail, time.perf_counter() - started))
    return results
