"""Certified lattice-sum evaluation of theta functions and their jets.

Everything here reduces to one batched evaluator: for a fixed period matrix
tau and argument z it sums

    theta[eps, delta](tau, z) = sum_m exp(pi i (t(m + eps/2) tau (m + eps/2)
                                          + 2 t(m + eps/2) (z + delta/2)))

over a finite lattice region together with a *rigorous* bound on the dropped
tail.  The truncation certificate has two parts:

* an outside-box bound: with q = m + eps/2 + (Im tau)^{-1} Im z the term
  modulus is exp(pi*gamma) * exp(-pi tq Y q), so the tail over the complement
  of the box |m|_inf <= N is bounded by a product of one-dimensional Gaussian
  tails at rate pi*lambda_min(Y) (rate halved for jets, whose polynomial
  prefactors are absorbed into a closed-form envelope);
* an in-box cut: points whose individually computed exponent exceeds a
  threshold E_cut are dropped, and the drop is covered by counting times the
  threshold value; E_cut is chosen so this stays under the budget.

The kept set is further pre-trimmed by the exact coordinate ranges of the
ellipsoid tq Y q <= E_cut + gamma (Cauchy-Schwarz in the Y-norm), which keeps
the enumeration small even when the box radius N is forced high by an
ill-conditioned Y.

Summation order is fixed (lexicographic lattice slabs, per-slab numpy sums,
slab partials combined by math.fsum), so results are bit-identical across
runs and thread counts.  Round-off is reported as a separate heuristic field,
not a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TargetUnreachable
from .siegel import Characteristic, SiegelPoint

DEFAULT_TARGET_EPS = 1e-13
LATTICE_CAP = 60  # hard cap on the infinity-norm box radius
_SLAB_POINTS = 1 << 21  # max lattice points materialized at once
_MACH_EPS = float(np.finfo(np.float64).eps)
_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)  # exact powers of i

__all__ = [
    "CertifiedValue",
    "CertifiedArray",
    "ThetaJet",
    "truncation_radius",
    "theta",
    "theta_many",
    "theta_jet",
    "theta_jet_many",
    "dtheta_dtau",
    "shift_identity_residual",
    "DEFAULT_TARGET_EPS",
    "LATTICE_CAP",
]


@dataclass(frozen=True)
class CertifiedValue:
    """A complex value with a rigorous truncation bound.

    ``err`` bounds |true - value| coming from the dropped series tail.
    ``roundoff`` is a heuristic float-noise estimate and is *not* rigorous.
    """

    value: complex
    err: float
    roundoff: float = 0.0

    def __post_init__(self):
        if not (self.err >= 0.0 and math.isfinite(self.err)):
            raise ValueError("err must be nonnegative and finite")

    def __abs__(self) -> float:
        return abs(self.value)


@dataclass(frozen=True, eq=False)
class CertifiedArray:
    """An ndarray of values sharing a common per-entry tail bound structure."""

    values: np.ndarray
    errs: np.ndarray
    roundoff: float = 0.0

    @property
    def shape(self):
        return self.values.shape

    def __getitem__(self, idx) -> CertifiedValue:
        return CertifiedValue(complex(self.values[idx]), float(self.errs[idx]), self.roundoff)


@dataclass(frozen=True, eq=False)
class ThetaJet:
    """Value, z-gradient and z-Hessian of one theta function at one point."""

    characteristic: Characteristic
    value: CertifiedValue
    grad: CertifiedArray  # length g
    hess: CertifiedArray  # g x g, exactly symmetric

    @property
    def genus(self) -> int:
        return self.grad.values.shape[0]


# ---------------------------------------------------------------------------
# tail-bound machinery


def _gauss_tail(v: float, s: float) -> float:
    """Upper bound for sum_{j>=0} exp(-s (v+j)^2), any real v, s > 0.

    Terms with v+j < 1 are bounded by 1 each; from the first index with
    v+j >= 1 the geometric majorant exp(-s w^2)/(1 - exp(-2 s w)) applies
    because (w+j)^2 >= w^2 + 2 w j.
    """
    extra = 0.0
    while v < 1.0:
        extra += math.exp(-s * v * v) if v > 0.0 else 1.0
        v += 1.0
    r = math.exp(-2.0 * s * v)
    return extra + math.exp(-s * v * v) / (1.0 - r)


def _line_sum(s: float) -> float:
    """Upper bound for sum over all integers n of exp(-s (n+a)^2), any a."""
    # reduce to |a| <= 1/2: the n-th term is at most exp(-s (|n|-1/2)^2)
    return 1.0 + 2.0 * _gauss_tail(0.5, s)


def _poly_envelope(k: int, s: float, c0: float) -> float:
    """sup over t >= 0 of (t + c0)^k exp(-s t^2)  (k = 0, 1, 2)."""
    if k == 0:
        return 1.0
    t = (-c0 + math.sqrt(c0 * c0 + 2.0 * k / s)) / 2.0
    return (t + c0) ** k * math.exp(-s * t * t)


def _box_tail(g: int, n: int, k: int, lam: float, sigma: np.ndarray, cz: float, cinf: float) -> float:
    """Bound on the order-k weighted tail outside the box |m|_inf <= n.

    Degree-k prefactors |2 pi p_i| are controlled by splitting the Gaussian
    rate in half: (|q|_inf + cinf)^k exp(-(pi lam / 2)|q|_inf^2) is bounded by
    a closed-form envelope and the remaining rate pi lam / 2 pays for the
    lattice sums.
    """
    if k == 0:
        s = math.pi * lam
        pref = 1.0
    else:
        s = math.pi * lam / 2.0
        pref = (2.0 * math.pi) ** k * _poly_envelope(k, s, cinf)
    line = _line_sum(s)
    total = 0.0
    for sj in sigma:
        total += _gauss_tail(n + 1.0 - sj, s) + _gauss_tail(n + 1.0 + sj, s)
    return cz * pref * total * line ** (g - 1)


def _choose_radius(g, lam, sigma, cz, cinf, budget, kmax):
    """Smallest box radius N with every order-k outside tail <= budget."""
    for n in range(1, LATTICE_CAP + 1):
        bounds = [_box_tail(g, n, k, lam, sigma, cz, cinf) for k in range(kmax + 1)]
        if all(b <= budget for b in bounds):
            return n, bounds
    raise TargetUnreachable(
        f"no box radius up to {LATTICE_CAP} certifies tail <= {budget:.3e} "
        f"(lambda_min = {lam:.3e})"
    )


def truncation_radius(tau: SiegelPoint, z, target_eps: float):
    """Certified box radius for a plain theta evaluation.

    Returns ``(R, bound)`` where the sum of term moduli over lattice points
    with |m|_inf > R is provably at most ``bound <= target_eps``.
    """
    if not target_eps > 0.0:
        raise ValueError("target_eps must be positive")
    g = tau.genus
    zv = _as_zvec(z, g)
    y = zv.imag
    yim = tau.entries.imag
    lam = tau.lambda_min()
    c = np.linalg.solve(yim, y)
    gamma = float(y @ c)
    cz = math.exp(math.pi * gamma)
    sigma = 0.5 + np.abs(c)
    n, bounds = _choose_radius(g, lam, sigma, cz, float(np.max(np.abs(c))), target_eps, 0)
    return float(n), bounds[0]


# ---------------------------------------------------------------------------
# batched evaluation core


def _as_zvec(z, g: int) -> np.ndarray:
    if z is None:
        return np.zeros(g, dtype=np.complex128)
    zv = np.asarray(z, dtype=np.complex128).reshape(-1)
    if zv.shape != (g,):
        raise ValueError(f"z must have length {g}")
    return zv


def _lattice_slabs(ranges):
    """Yield int64 arrays of lattice points, lexicographic, bounded size.

    ``ranges`` is a list of (lo, hi) inclusive integer bounds per coordinate.
    The leading coordinate is split so no slab exceeds _SLAB_POINTS points.
    """
    counts = [hi - lo + 1 for lo, hi in ranges]
    if any(c <= 0 for c in counts):
        return
    per_lead = 1
    for c in counts[1:]:
        per_lead *= c
    lead_chunk = max(1, _SLAB_POINTS // max(1, per_lead))
    axes_rest = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in ranges[1:]]
    lo0, hi0 = ranges[0]
    start = lo0
    while start <= hi0:
        stop = min(start + lead_chunk - 1, hi0)
        lead = np.arange(start, stop + 1, dtype=np.int64)
        grids = np.meshgrid(lead, *axes_rest, indexing="ij")
        yield np.stack([grid.reshape(-1) for grid in grids], axis=1)
        start = stop + 1


class _Accumulator:
    """Order-stable accumulation of per-slab partial sums."""

    def __init__(self, g: int, order: int):
        self.order = order
        self.t0 = []
        self.t1 = [] if order >= 2 else None
        self.t2 = [] if order >= 2 else None
        self.g = g

    def add(self, t0, t1=None, t2=None):
        self.t0.append(t0)
        if self.order >= 2:
            self.t1.append(t1)
            self.t2.append(t2)

    @staticmethod
    def _fsum_complex(parts) -> complex:
        return complex(
            math.fsum(p.real for p in parts),
            math.fsum(p.imag for p in parts),
        )

    def value(self) -> complex:
        return self._fsum_complex(self.t0)

    def grad(self) -> np.ndarray:
        out = np.zeros(self.g, dtype=np.complex128)
        for i in range(self.g):
            out[i] = self._fsum_complex([p[i] for p in self.t1])
        return out

    def hess_upper(self) -> np.ndarray:
        out = np.zeros((self.g, self.g), dtype=np.complex128)
        for i in range(self.g):
            for j in range(i, self.g):
                out[i, j] = self._fsum_complex([p[i][j - i] for p in self.t2])
        return out


def _eval_batch(tau: SiegelPoint, z, chars, target_eps: float, order: int):
    """Evaluate several characteristics at one (tau, z); order 0 or 2.

    Returns a list aligned with ``chars`` holding CertifiedValue (order 0) or
    ThetaJet (order 2).  Characteristics sharing an eps half share one lattice
    enumeration; the delta half only contributes the exact phase
    i^(eps.delta) (-1)^(m.delta) applied per point.
    """
    if not target_eps > 0.0:
        raise ValueError("target_eps must be positive")
    g = tau.genus
    for ch in chars:
        if ch.genus != g:
            raise ValueError("characteristic genus mismatch")
    zv = _as_zvec(z, g)
    xmat, ymat = tau.entries.real, tau.entries.imag
    xvec, yvec = zv.real, zv.imag
    lam = tau.lambda_min()
    if lam <= 0.0:
        raise TargetUnreachable("imaginary part lost positive definiteness")
    yinv = np.linalg.inv(ymat)
    cvec = yinv @ yvec
    gamma = float(yvec @ cvec)
    cz = math.exp(math.pi * gamma)
    cinf = float(np.max(np.abs(cvec)))
    sigma = 0.5 + np.abs(cvec)

    kmax = 2 if order == 2 else 0
    n_box, bounds_out = _choose_radius(g, lam, sigma, cz, cinf, target_eps / 2.0, kmax)
    count_box = float(2 * n_box + 1) ** g
    rmax = 2.0 * math.pi * (n_box + 0.5)
    e_cut = math.log(2.0 * count_box * max(1.0, rmax) ** kmax / target_eps) / math.pi
    errs = [bounds_out[k] + count_box * rmax**k * math.exp(-math.pi * e_cut) for k in range(kmax + 1)]
    rho = math.sqrt(e_cut + gamma)
    urad = rho * np.sqrt(np.maximum(np.diag(yinv), 0.0))

    # group characteristics by their eps half
    groups = {}
    for idx, ch in enumerate(chars):
        groups.setdefault(ch.eps, []).append(idx)

    results = [None] * len(chars)
    for eps, members in groups.items():
        half = np.array(eps, dtype=np.float64) / 2.0
        offset = half + cvec  # lattice offset in the q coordinates
        ranges = []
        for k in range(g):
            lo = max(-n_box, math.ceil(-urad[k] - offset[k]))
            hi = min(n_box, math.floor(urad[k] - offset[k]))
            ranges.append((lo, hi))

        accs = {idx: _Accumulator(g, order) for idx in members}
        absum = 0.0
        for mint in _lattice_slabs(ranges):
            pts = mint.astype(np.float64) + half
            expo = np.einsum("ki,ij,kj->k", pts, ymat, pts) + 2.0 * (pts @ yvec)
            keep = expo <= e_cut
            if not np.any(keep):
                continue
            pts = pts[keep]
            mint_k = mint[keep]
            expo = expo[keep]
            phase = np.einsum("ki,ij,kj->k", pts, xmat, pts) + 2.0 * (pts @ xvec)
            weight = np.exp(-math.pi * expo + 1j * math.pi * phase)
            absum += float(np.sum(np.exp(-math.pi * expo)))
            for idx in members:
                ch = chars[idx]
                dvec = np.array(ch.delta, dtype=np.int64)
                signs = 1.0 - 2.0 * ((mint_k @ dvec) & 1)
                w = signs * weight
                t0 = complex(np.sum(w))
                if order >= 2:
                    t1 = [complex(np.sum(pts[:, i] * w)) for i in range(g)]
                    t2 = [
                        [complex(np.sum(pts[:, i] * pts[:, j] * w)) for j in range(i, g)]
                        for i in range(g)
                    ]
                    accs[idx].add(t0, t1, t2)
                else:
                    accs[idx].add(t0)

        for idx in members:
            ch = chars[idx]
            unit = _I_POWERS[sum(e * d for e, d in zip(ch.eps, ch.delta)) % 4]
            acc = accs[idx]
            round0 = 64.0 * _MACH_EPS * absum
            val = CertifiedValue(unit * acc.value(), errs[0], round0)
            if order < 2:
                results[idx] = val
                continue
            gvals = (2j * math.pi) * unit * acc.grad()
            grad = CertifiedArray(gvals, np.full(g, errs[1]), round0 * rmax)
            upper = acc.hess_upper()
            hvals = np.zeros((g, g), dtype=np.complex128)
            for i in range(g):
                for j in range(i, g):
                    entry = (-4.0 * math.pi**2) * unit * upper[i, j]
                    hvals[i, j] = entry
                    hvals[j, i] = entry
            hess = CertifiedArray(hvals, np.full((g, g), errs[2]), round0 * rmax**2)
            results[idx] = ThetaJet(characteristic=ch, value=val, grad=grad, hess=hess)
    return results


# ---------------------------------------------------------------------------
# public evaluation API


def theta(tau: SiegelPoint, z, ch: Characteristic, target_eps: float = DEFAULT_TARGET_EPS) -> CertifiedValue:
    """Certified theta value at (tau, z) for one characteristic."""
    return _eval_batch(tau, z, [ch], target_eps, 0)[0]


def theta_many(tau: SiegelPoint, z, chars, target_eps: float = DEFAULT_TARGET_EPS):
    """Certified theta values for many characteristics at one (tau, z).

    Shares the lattice enumeration between characteristics with a common eps
    half; results are identical to per-characteristic :func:`theta` calls.
    """
    return _eval_batch(tau, z, list(chars), target_eps, 0)


def theta_jet(tau: SiegelPoint, z, ch: Characteristic, target_eps: float = DEFAULT_TARGET_EPS) -> ThetaJet:
    """Value, z-gradient and z-Hessian with per-order tail bounds."""
    return _eval_batch(tau, z, [ch], target_eps, 2)[0]


def theta_jet_many(tau: SiegelPoint, z, chars, target_eps: float = DEFAULT_TARGET_EPS):
    return _eval_batch(tau, z, list(chars), target_eps, 2)


def dtheta_dtau(tau: SiegelPoint, ch: Characteristic, target_eps: float = DEFAULT_TARGET_EPS) -> CertifiedArray:
    """Matrix of tau-partials of the theta constant, via the heat equation.

    Entries are derivatives in the symmetric-matrix convention (tau_ij and
    tau_ji denote one variable), so central differences that move the (i, j)
    and (j, i) entries together reproduce them.  The conversion constant is
    hess[i][j] == 2 pi i (1 + delta_ij) * dtheta/dtau_ij, which is what the
    differentiated series gives; at g = 1 it reduces to the classical
    d^2 theta / dz^2 == 4 pi i dtheta/dtau.
    """
    jet = theta_jet(tau, None, ch, target_eps)
    g = tau.genus
    div = 2.0 * math.pi * (1.0 + np.eye(g))
    values = jet.hess.values / (1j * div)
    errs = jet.hess.errs / div
    return CertifiedArray(values, errs, jet.hess.roundoff / (2.0 * math.pi))


def shift_identity_residual(
    tau: SiegelPoint, z, ch: Characteristic, target_eps: float = DEFAULT_TARGET_EPS
) -> float:
    """Half-period consistency check: |theta00(tau, z + tau e + d) - f * theta[ch](tau, z)|.

    Here e = eps/2, d = delta/2 and the factor is
    f = exp(-pi i (te tau e + t(eps) (z + d))), which follows from completing
    the square in the series.  The right-hand evaluation target is tightened
    by |f| so the residual certificate is meaningful when |f| is large.
    """
    g = tau.genus
    zv = _as_zvec(z, g)
    e = np.array(ch.eps, dtype=np.float64) / 2.0
    d = np.array(ch.delta, dtype=np.float64) / 2.0
    shifted = zv + tau.entries @ e + d
    quad = complex(e @ tau.entries @ e)
    lin = complex(np.array(ch.eps, dtype=np.float64) @ (zv + d))
    factor = np.exp(-1j * math.pi * (quad + lin))
    lhs = theta(tau, shifted, Characteristic.zero(g), target_eps)
    rhs_target = min(target_eps, target_eps / max(1.0, abs(factor)))
    rhs = theta(tau, zv, ch, rhs_target)
    return abs(lhs.value - factor * rhs.value)
