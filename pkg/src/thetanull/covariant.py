"""Covariant matrices of theta-constant pairs, their minors, and the scalar form.

The building block is the matrix operator that applies tau-partials entrywise
with the diagonal un-halved and the off-diagonal halved; through the heat
equation that is ``hess_z / (4 pi i)`` uniformly in every entry, and at g = 1
it reduces to the plain dtheta/dtau.  The covariant matrix of an ordered pair
(other, base) is

    cm[i][j] = theta_other * (D theta_base)[i][j] - theta_base * (D theta_other)[i][j]

which is antisymmetric under swapping the pair and, where the base constant
vanishes, collapses to a scalar multiple of the base's Hessian.  Its h x h
minors, indexed by lexicographic h-subsets, form the minor matrix; its full
determinant is a scalar of weight g + 2, computed division-free.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .engine import (
    DEFAULT_TARGET_EPS,
    CertifiedArray,
    CertifiedValue,
    theta_jet_many,
)
from .errors import BadCharacteristic, BadOrder
from .siegel import Characteristic, SiegelPoint

__all__ = [
    "CovariantMatrix",
    "MinorMatrix",
    "tau_derivative_matrix",
    "covariant_matrix",
    "minor_matrix",
    "covariant_determinant",
    "certified_det",
]


@dataclass(frozen=True, eq=False)
class CovariantMatrix:
    """Symmetric g x g matrix of the pair (other, base) with per-entry bounds."""

    char_pair: tuple  # (other, base)
    values: np.ndarray
    errs: np.ndarray

    @property
    def genus(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, idx) -> CertifiedValue:
        return CertifiedValue(complex(self.values[idx]), float(self.errs[idx]))

    def scaled(self, s: complex) -> "CovariantMatrix":
        return CovariantMatrix(self.char_pair, self.values * s, self.errs * abs(s))


@dataclass(frozen=True, eq=False)
class MinorMatrix:
    """All h x h minors of a covariant matrix, lexicographic subset order."""

    h: int
    subsets: tuple  # C(g,h) index subsets, each a tuple, lexicographic
    values: np.ndarray  # C(g,h) x C(g,h) complex
    errs: np.ndarray

    def __getitem__(self, idx) -> CertifiedValue:
        return CertifiedValue(complex(self.values[idx]), float(self.errs[idx]))


def _jet_to_dmatrix(jet) -> CertifiedArray:
    # heat equation: hess = 2 pi i (1 + delta_ij) d/dtau_ij (symmetric-variable
    # convention); halving the off-diagonal makes the conversion uniform.
    return CertifiedArray(
        jet.hess.values / (4j * math.pi),
        jet.hess.errs / (4.0 * math.pi),
        jet.hess.roundoff / (4.0 * math.pi),
    )


def tau_derivative_matrix(
    tau: SiegelPoint, ch: Characteristic, target_eps: float = DEFAULT_TARGET_EPS
) -> CertifiedArray:
    """The matrix derivative operator applied to one theta constant.

    Diagonal entries are d/dtau_ii, off-diagonal entries half of the symmetric
    d/dtau_ij, i.e. ``hess_z[i][j] / (4 pi i)`` for every entry; the rank
    equals the rank of the z-Hessian by construction.
    """
    jets = theta_jet_many(tau, None, [ch], target_eps)
    return _jet_to_dmatrix(jets[0])


def _check_pair(other: Characteristic, base: Characteristic):
    if not other.is_even or not base.is_even:
        raise BadCharacteristic("both characteristics must be even")
    if other == base:
        raise BadCharacteristic("the two characteristics must differ")


def covariant_matrix(
    tau: SiegelPoint,
    ch: Characteristic,
    target_eps: float = DEFAULT_TARGET_EPS,
    base: Characteristic | None = None,
) -> CovariantMatrix:
    """theta_ch * D theta_base - theta_base * D theta_ch with error bounds.

    ``base`` defaults to the all-zero characteristic.  Both jets come from one
    batched evaluation, so the two Hessians share a lattice enumeration.
    """
    if base is None:
        base = Characteristic.zero(tau.genus)
    _check_pair(ch, base)
    jet_ch, jet_base = theta_jet_many(tau, None, [ch, base], target_eps)
    v_ch, e_ch = jet_ch.value.value, jet_ch.value.err
    v_base, e_base = jet_base.value.value, jet_base.value.err
    d_ch = _jet_to_dmatrix(jet_ch)
    d_base = _jet_to_dmatrix(jet_base)
    values = v_ch * d_base.values - v_base * d_ch.values
    errs = (
        abs(v_ch) * d_base.errs + e_ch * np.abs(d_base.values) + e_ch * d_base.errs
        + abs(v_base) * d_ch.errs + e_base * np.abs(d_ch.values) + e_base * d_ch.errs
    )
    return CovariantMatrix(char_pair=(ch, base), values=values, errs=errs)


def certified_det(values: np.ndarray, errs: np.ndarray):
    """Determinant with a rigorous first-order perturbation bound.

    The value comes from fraction-free elimination with partial pivoting (the
    divisions are by previous pivots, so intermediates stay polynomial in the
    inputs); the error bound is the Hadamard-style
    prod_i (|row_i| + |err_row_i|) - prod_i |row_i| over row 2-norms, which
    dominates |det(A + E) - det(A)| for any |E| <= errs entrywise.
    """
    a = np.array(values, dtype=np.complex128)
    n = a.shape[0]
    row_norms = np.linalg.norm(a, axis=1)
    err_norms = np.linalg.norm(np.asarray(errs, dtype=np.float64), axis=1)
    bound = float(np.prod(row_norms + err_norms) - np.prod(row_norms))
    bound = max(bound, 0.0)
    if n == 1:
        return complex(a[0, 0]), bound
    sign = 1.0
    denom = 1.0 + 0.0j
    for k in range(n - 1):
        pivot_row = k + int(np.argmax(np.abs(a[k:, k])))
        if a[pivot_row, k] == 0:
            return 0.0 + 0.0j, bound
        if pivot_row != k:
            a[[k, pivot_row]] = a[[pivot_row, k]]
            sign = -sign
        a[k + 1 :, k + 1 :] = (
            a[k + 1 :, k + 1 :] * a[k, k] - np.outer(a[k + 1 :, k], a[k, k + 1 :])
        ) / denom
        denom = a[k, k]
    return complex(sign * a[n - 1, n - 1]), bound


def minor_matrix(cm: CovariantMatrix, h: int) -> MinorMatrix:
    """The C(g,h) x C(g,h) matrix of h x h minors of ``cm``.

    Row subset I and column subset J run over h-element subsets of {0..g-1}
    in lexicographic order; entry (I, J) is det cm[I, J].
    """
    g = cm.genus
    if not 1 <= h <= g:
        raise BadOrder(f"minor order {h} outside 1..{g}")
    subsets = tuple(itertools.combinations(range(g), h))
    size = len(subsets)
    values = np.zeros((size, size), dtype=np.complex128)
    errs = np.zeros((size, size), dtype=np.float64)
    for a, rows in enumerate(subsets):
        for b, cols in enumerate(subsets):
            sub_v = cm.values[np.ix_(rows, cols)]
            sub_e = cm.errs[np.ix_(rows, cols)]
            values[a, b], errs[a, b] = certified_det(sub_v, sub_e)
    return MinorMatrix(h=h, subsets=subsets, values=values, errs=errs)


def covariant_determinant(
    tau: SiegelPoint,
    ch: Characteristic,
    target_eps: float = DEFAULT_TARGET_EPS,
    base: Characteristic | None = None,
) -> CertifiedValue:
    """det of the covariant matrix: the scalar form of weight g + 2.

    Division-free, hence finite (and meaningful) on the locus where either
    theta constant vanishes.
    """
    cm = covariant_matrix(tau, ch, target_eps, base=base)
    value, err = certified_det(cm.values, cm.errs)
    return CertifiedValue(value, err)
