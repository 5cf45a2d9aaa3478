"""Theta-null detection, tangent-cone ranks, stratum assignment, verdicts.

A point lies on the theta-null locus when some even theta constant vanishes;
the stratum is the minimal numerical rank of the z-Hessian taken over the
vanishing characteristics.  At genus 4 the rank maps to a verdict: a full
rank-4 tangent cone is an ordinary theta-null, rank 3 flags a Jacobian, and
rank <= 2 flags a candidate reducible point (rank 2 is what a product of two
smaller ppavs produces; the label stays a candidate because float rank is a
necessary indicator, not a proof).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .covariant import covariant_matrix, minor_matrix
from .engine import (
    DEFAULT_TARGET_EPS,
    CertifiedValue,
    dtheta_dtau,
    theta,
    theta_jet,
    theta_many,
)
from .errors import (
    BadCharacteristic,
    DerivativeTooSmall,
    LeftSiegelSpace,
    NoConvergence,
    NotOnThetaNull,
    NotPositiveDefinite,
    ToleranceBelowCertificate,
)
from .siegel import Characteristic, SiegelPoint, enumerate_even_chars

DEFAULT_VANISH_TOL = 1e-10
DEFAULT_RANK_TOL = 1e-8
ABS_RANK_FLOOR = 1e-12  # below this top singular value the matrix counts as zero
NEWTON_DERIVATIVE_FLOOR = 1e-8
NEWTON_MAX_ITER = 50

VERDICT_NOT_THETANULL = "NOT_THETANULL"
VERDICT_THETANULL_RANK4 = "THETANULL_RANK4"
VERDICT_JACOBIAN = "JACOBIAN_THETANULL"
VERDICT_REDUCIBLE = "REDUCIBLE_CANDIDATE"

__all__ = [
    "StrataReport",
    "vanishing_even_chars",
    "hessian_rank",
    "stratum",
    "rank_minors_consistent",
    "find_theta_null",
    "DEFAULT_VANISH_TOL",
    "DEFAULT_RANK_TOL",
    "ABS_RANK_FLOOR",
    "VERDICT_NOT_THETANULL",
    "VERDICT_THETANULL_RANK4",
    "VERDICT_JACOBIAN",
    "VERDICT_REDUCIBLE",
]


@dataclass(frozen=True, eq=False)
class StrataReport:
    """Everything the classifier decided about one period matrix."""

    genus: int
    vanishing: list  # (Characteristic, CertifiedValue), modulus ascending
    ranks: list  # (Characteristic, singular values, rank), aligned with vanishing
    stratum: int | None  # min rank over vanishing characteristics; None if none vanish
    verdict: str | None  # populated only at genus 4
    max_eval_err: float


def _verdict_g4(stratum_value: int | None) -> str:
    if stratum_value is None:
        return VERDICT_NOT_THETANULL
    if stratum_value == 4:
        return VERDICT_THETANULL_RANK4
    if stratum_value == 3:
        return VERDICT_JACOBIAN
    return VERDICT_REDUCIBLE


def vanishing_even_chars(
    tau: SiegelPoint,
    vanish_tol: float = DEFAULT_VANISH_TOL,
    target_eps: float = DEFAULT_TARGET_EPS,
) -> list:
    """All even characteristics whose constant is below vanish_tol in modulus.

    Sorted by modulus ascending (ties keep enumeration order).  The tolerance
    must exceed every evaluation certificate, otherwise "vanishing" would be
    indistinguishable from truncation error.
    """
    chars = enumerate_even_chars(tau.genus)
    values = theta_many(tau, None, chars, target_eps)
    max_err = max(v.err for v in values)
    if vanish_tol <= max_err:
        raise ToleranceBelowCertificate(
            f"vanish_tol {vanish_tol:.3e} not above evaluation err {max_err:.3e}"
        )
    hits = [(ch, v) for ch, v in zip(chars, values) if abs(v.value) < vanish_tol]
    hits.sort(key=lambda pair: abs(pair[1].value))
    return hits


def hessian_rank(
    tau: SiegelPoint,
    ch: Characteristic,
    rank_tol: float = DEFAULT_RANK_TOL,
    target_eps: float = DEFAULT_TARGET_EPS,
):
    """Numerical rank and singular values of the z-Hessian at z = 0.

    rank = #{i : sigma_i > rank_tol * sigma_1}, with rank 0 when the whole
    matrix sits below the absolute floor.  The raw singular values are
    returned so borderline thresholds can be audited by the caller.
    """
    if not ch.is_even:
        raise BadCharacteristic("Hessian rank is defined for even characteristics")
    jet = theta_jet(tau, None, ch, target_eps)
    sv = np.linalg.svd(jet.hess.values, compute_uv=False)
    if sv[0] <= ABS_RANK_FLOOR:
        return 0, sv
    return int(np.sum(sv > rank_tol * sv[0])), sv


def stratum(
    tau: SiegelPoint,
    vanish_tol: float = DEFAULT_VANISH_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
    target_eps: float = DEFAULT_TARGET_EPS,
    threads: int = 1,
) -> StrataReport:
    """Classify one period matrix into its theta-null stratum.

    Per-characteristic rank work is independent and may run on a thread pool;
    results are assembled in the fixed vanishing order, so the report does not
    depend on the thread count.
    """
    chars = enumerate_even_chars(tau.genus)
    values = theta_many(tau, None, chars, target_eps)
    max_err = max(v.err for v in values)
    if vanish_tol <= max_err:
        raise ToleranceBelowCertificate(
            f"vanish_tol {vanish_tol:.3e} not above evaluation err {max_err:.3e}"
        )
    vanishing = [(ch, v) for ch, v in zip(chars, values) if abs(v.value) < vanish_tol]
    vanishing.sort(key=lambda pair: abs(pair[1].value))

    def rank_of(ch):
        return hessian_rank(tau, ch, rank_tol, target_eps)

    targets = [ch for ch, _ in vanishing]
    if threads > 1 and len(targets) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rank_results = list(pool.map(rank_of, targets))
    else:
        rank_results = [rank_of(ch) for ch in targets]
    ranks = [(ch, sv, rank) for ch, (rank, sv) in zip(targets, rank_results)]
    stratum_value = min((rank for _, _, rank in ranks), default=None)
    verdict = _verdict_g4(stratum_value) if tau.genus == 4 else None
    return StrataReport(
        genus=tau.genus,
        vanishing=vanishing,
        ranks=ranks,
        stratum=stratum_value,
        verdict=verdict,
        max_eval_err=max_err,
    )


def rank_minors_consistent(
    tau: SiegelPoint,
    h: int,
    vanish_tol: float = DEFAULT_VANISH_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
    target_eps: float = DEFAULT_TARGET_EPS,
    vanishing_ch: Characteristic | None = None,
) -> bool:
    """Check that Hessian rank <= h iff every (h+1)-minor entry vanishes.

    The two sides are evaluated independently: the left from the singular
    values of the vanishing characteristic's Hessian, the right from the
    minor matrices of its covariant pairings with every other even
    characteristic.  A minor entry counts as vanishing when its modulus stays
    below rank_tol * sigma_1(cm)^(h+1) plus its own propagated error bound
    (the additive term keeps the test meaningful when the auxiliary constant
    happens to vanish too and the whole covariant matrix deflates).
    For h >= g both sides are vacuously true.
    """
    g = tau.genus
    if vanishing_ch is None:
        vanishing_ch = Characteristic.zero(g)
    if not vanishing_ch.is_even:
        raise BadCharacteristic("the vanishing characteristic must be even")
    val = theta(tau, None, vanishing_ch, target_eps)
    if abs(val.value) >= vanish_tol:
        raise NotOnThetaNull(
            f"|theta[{vanishing_ch}]| = {abs(val.value):.3e} >= vanish_tol {vanish_tol:.3e}"
        )
    rank, _ = hessian_rank(tau, vanishing_ch, rank_tol, target_eps)
    rank_side = rank <= h
    if h >= g:
        return rank_side  # minor side vacuous: no (h+1)-minors exist
    minors_side = True
    for aux in enumerate_even_chars(g):
        if aux == vanishing_ch:
            continue
        cm = covariant_matrix(tau, aux, target_eps, base=vanishing_ch)
        top = float(np.linalg.norm(cm.values, 2))
        mm = minor_matrix(cm, h + 1)
        threshold = rank_tol * top ** (h + 1) + mm.errs
        if np.any(np.abs(mm.values) > threshold):
            minors_side = False
            break
    return rank_side == minors_side


def find_theta_null(
    tau0: SiegelPoint,
    ch: Characteristic,
    coord,
    vanish_target: float,
    target_eps: float = DEFAULT_TARGET_EPS,
) -> SiegelPoint:
    """Newton-drive one theta constant to zero along one matrix coordinate.

    Only the coordinate ``(i, j)`` moves (with its mirror (j, i), preserving
    symmetry); the derivative along that move is the symmetric-convention
    tau-partial.  Stops as soon as |theta| < vanish_target; a start already
    below the target returns unchanged.  A step that would lose positive
    definiteness is halved (up to 12 times) before the iteration gives up.
    """
    if not ch.is_even:
        raise BadCharacteristic("only even constants have theta-null loci")
    i, j = coord
    tau = tau0
    for _ in range(NEWTON_MAX_ITER):
        val = theta(tau, None, ch, target_eps).value
        if abs(val) < vanish_target:
            return tau
        der = dtheta_dtau(tau, ch, target_eps).values[i, j]
        if abs(der) < NEWTON_DERIVATIVE_FLOOR:
            raise DerivativeTooSmall(
                f"|d theta / d tau[{i},{j}]| = {abs(der):.3e} below {NEWTON_DERIVATIVE_FLOOR:.0e}"
            )
        step = val / der
        here = complex(tau.entries[i, j])
        for _ in range(12):
            try:
                tau = tau.with_entry(i, j, here - step)
                break
            except NotPositiveDefinite:
                step /= 2.0
        else:
            raise LeftSiegelSpace("Newton step left the Siegel upper half-space")
    raise NoConvergence(f"no |theta| < {vanish_target:.3e} within {NEWTON_MAX_ITER} iterations")
