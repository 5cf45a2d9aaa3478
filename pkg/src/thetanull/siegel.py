"""Domain types for the Siegel upper half-space and the symplectic group.

The three load-bearing types are :class:`SiegelPoint` (a symmetric complex
period matrix with positive-definite imaginary part), :class:`Characteristic`
(a pair of mod-2 bit vectors with a parity), and :class:`SymplecticMatrix`
(an exact-integer 2g x 2g matrix satisfying the symplectic relations).
Symplectic matrices are kept in exact integers so that group-law tests never
depend on a float tolerance; all half-integer arithmetic happens inside the
series evaluator, never here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    NotPositiveDefinite,
    NotSymmetric,
    NotSymplectic,
    SingularCocycle,
)

# Relative asymmetry allowed before a raw matrix is rejected outright.
ASYMMETRY_RTOL = 1e-12
# Condition-number ceiling for the cocycle c*tau + d in symplectic_action.
COCYCLE_COND_CAP = 1e14


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class SiegelPoint:
    """A point of the Siegel upper half-space: tau symmetric, Im tau > 0.

    Construct through :func:`validate_siegel`; the constructor itself does not
    re-check the invariants.
    """

    genus: int
    entries: np.ndarray  # (g, g) complex128, exactly symmetric, read-only

    @property
    def imag(self) -> np.ndarray:
        return self.entries.imag

    @property
    def real(self) -> np.ndarray:
        return self.entries.real

    def lambda_min(self) -> float:
        """Smallest eigenvalue of Im tau (sets the Gaussian decay rate)."""
        return float(np.linalg.eigvalsh(self.entries.imag)[0])

    def with_entry(self, i: int, j: int, value: complex) -> "SiegelPoint":
        """Copy with the symmetric pair (i,j),(j,i) replaced by ``value``."""
        m = np.array(self.entries)
        m[i, j] = value
        m[j, i] = value
        return validate_siegel(self.genus, m)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"SiegelPoint(genus={self.genus}, entries={self.entries!r})"


def validate_siegel(g: int, raw) -> SiegelPoint:
    """Check and wrap a raw g x g complex matrix as a SiegelPoint.

    The input is rejected if it is visibly asymmetric (beyond 1e-12 relative)
    or if its imaginary part is not positive definite; tiny float asymmetry is
    symmetrized away so the stored matrix satisfies tau[i,j] == tau[j,i]
    exactly.  Positive definiteness is established constructively by a
    Cholesky factorization, not by an eigenvalue threshold.
    """
    m = np.asarray(raw, dtype=np.complex128)
    if m.shape != (g, g):
        raise NotSymmetric(f"expected a {g}x{g} matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
    asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asym > ASYMMETRY_RTOL * scale:
        raise NotSymmetric(f"asymmetry {asym:.3e} exceeds {ASYMMETRY_RTOL:.0e} relative")
    m = (m + m.T) / 2.0
    try:
        np.linalg.cholesky(m.imag)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite("imaginary part is not positive definite") from None
    return SiegelPoint(genus=g, entries=_readonly(m))


@dataclass(frozen=True, order=True)
class Characteristic:
    """A half-integer characteristic: two length-g bit vectors (eps, delta)."""

    eps: tuple
    delta: tuple

    def __post_init__(self):
        if len(self.eps) != len(self.delta) or not self.eps:
            raise ValueError("eps and delta must be nonempty and equal length")
        if any(b not in (0, 1) for b in self.eps + self.delta):
            raise ValueError("characteristic entries must be bits 0/1")

    @property
    def genus(self) -> int:
        return len(self.eps)

    @property
    def is_even(self) -> bool:
        return sum(e * d for e, d in zip(self.eps, self.delta)) % 2 == 0

    @property
    def parity(self) -> str:
        return "even" if self.is_even else "odd"

    @property
    def is_zero(self) -> bool:
        return not any(self.eps) and not any(self.delta)

    def label(self) -> str:
        """Bit-string form ``"1100/1100"`` used in reports."""
        return "".join(map(str, self.eps)) + "/" + "".join(map(str, self.delta))

    @classmethod
    def from_label(cls, text: str) -> "Characteristic":
        eps_s, _, delta_s = text.partition("/")
        return cls(tuple(int(b) for b in eps_s), tuple(int(b) for b in delta_s))

    @classmethod
    def zero(cls, g: int) -> "Characteristic":
        return cls((0,) * g, (0,) * g)

    @classmethod
    def concat(cls, first: "Characteristic", second: "Characteristic") -> "Characteristic":
        return cls(first.eps + second.eps, first.delta + second.delta)

    def split(self, g1: int):
        """Split into the (g1, g-g1) halves matching a block-diagonal tau."""
        return (
            Characteristic(self.eps[:g1], self.delta[:g1]),
            Characteristic(self.eps[g1:], self.delta[g1:]),
        )

    def __str__(self) -> str:
        return self.label()


def _bit_tuples(g: int):
    # big-endian lexicographic: (0,...,0) first, last bit fastest
    return itertools.product((0, 1), repeat=g)


def enumerate_even_chars(g: int) -> list:
    """All even characteristics, lexicographic by (eps, delta) big-endian.

    The count is 2^(g-1) (2^g + 1).  The ordering is load-bearing: minor
    matrices and reports index characteristics in exactly this order.
    """
    if not 1 <= g <= 8:
        raise ValueError("genus out of the supported range 1..8")
    out = []
    for eps in _bit_tuples(g):
        for delta in _bit_tuples(g):
            ch = Characteristic(eps, delta)
            if ch.is_even:
                out.append(ch)
    return out


def enumerate_odd_chars(g: int) -> list:
    """All odd characteristics, same ordering convention as the even ones."""
    if not 1 <= g <= 8:
        raise ValueError("genus out of the supported range 1..8")
    return [
        Characteristic(eps, delta)
        for eps in _bit_tuples(g)
        for delta in _bit_tuples(g)
        if not Characteristic(eps, delta).is_even
    ]


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    """Exact-integer element of Sp(2g, Z) in block form ((a, b), (c, d))."""

    m: np.ndarray  # (2g, 2g) int64, read-only

    def __post_init__(self):
        m = np.asarray(self.m)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise NotSymplectic(f"bad shape {m.shape}")
        if not np.issubdtype(m.dtype, np.integer):
            raise NotSymplectic("entries must be integers")
        m = m.astype(np.int64)
        g = m.shape[0] // 2
        a, b, c, d = m[:g, :g], m[:g, g:], m[g:, :g], m[g:, g:]
        ident = np.eye(g, dtype=np.int64)
        # a td - b tc = I together with symmetry of a tb and c td
        if (
            not np.array_equal(a @ d.T - b @ c.T, ident)
            or not np.array_equal(a @ b.T, b @ a.T)
            or not np.array_equal(c @ d.T, d @ c.T)
        ):
            raise NotSymplectic("symplectic relations fail")
        object.__setattr__(self, "m", _readonly(m))

    @property
    def genus(self) -> int:
        return self.m.shape[0] // 2

    @property
    def a(self) -> np.ndarray:
        g = self.genus
        return self.m[:g, :g]

    @property
    def b(self) -> np.ndarray:
        g = self.genus
        return self.m[:g, g:]

    @property
    def c(self) -> np.ndarray:
        g = self.genus
        return self.m[g:, :g]

    @property
    def d(self) -> np.ndarray:
        g = self.genus
        return self.m[g:, g:]

    @classmethod
    def from_blocks(cls, a, b, c, d) -> "SymplecticMatrix":
        top = np.hstack([np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)])
        bot = np.hstack([np.asarray(c, dtype=np.int64), np.asarray(d, dtype=np.int64)])
        return cls(np.vstack([top, bot]))

    @classmethod
    def identity(cls, g: int) -> "SymplecticMatrix":
        return cls(np.eye(2 * g, dtype=np.int64))

    @classmethod
    def inversion(cls, g: int) -> "SymplecticMatrix":
        """The involution tau -> -tau^{-1}: blocks (0, I; -I, 0)."""
        z = np.zeros((g, g), dtype=np.int64)
        i = np.eye(g, dtype=np.int64)
        return cls.from_blocks(z, i, -i, z)

    @classmethod
    def translation(cls, bmat) -> "SymplecticMatrix":
        """tau -> tau + B for an integer symmetric B: blocks (I, B; 0, I)."""
        b = np.asarray(bmat, dtype=np.int64)
        g = b.shape[0]
        if not np.array_equal(b, b.T):
            raise NotSymplectic("translation block must be symmetric")
        z = np.zeros((g, g), dtype=np.int64)
        i = np.eye(g, dtype=np.int64)
        return cls.from_blocks(i, b, z, i)

    @classmethod
    def dilation(cls, umat) -> "SymplecticMatrix":
        """tau -> U tau tU for unimodular integer U: blocks (U, 0; 0, tU^{-1})."""
        u = np.asarray(umat, dtype=np.int64)
        g = u.shape[0]
        det = round(float(np.linalg.det(u.astype(float))))
        if det not in (1, -1):
            raise NotSymplectic("dilation block must be unimodular")
        uinv = np.rint(np.linalg.inv(u.astype(float))).astype(np.int64)
        if not np.array_equal(u @ uinv, np.eye(g, dtype=np.int64)):
            raise NotSymplectic("failed to invert dilation block exactly")
        z = np.zeros((g, g), dtype=np.int64)
        return cls.from_blocks(u, z, z, uinv.T)

    @classmethod
    def lower_translation(cls, cmat) -> "SymplecticMatrix":
        """Blocks (I, 0; C, I) for integer symmetric C."""
        c = np.asarray(cmat, dtype=np.int64)
        g = c.shape[0]
        if not np.array_equal(c, c.T):
            raise NotSymplectic("lower translation block must be symmetric")
        z = np.zeros((g, g), dtype=np.int64)
        i = np.eye(g, dtype=np.int64)
        return cls.from_blocks(i, z, c, i)

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return SymplecticMatrix(self.m @ other.m)

    def inverse(self) -> "SymplecticMatrix":
        """Exact inverse (td, -tb; -tc, ta) from the symplectic relations."""
        return SymplecticMatrix.from_blocks(self.d.T, -self.b.T, -self.c.T, self.a.T)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"SymplecticMatrix({self.m.tolist()})"


def symplectic_action(mat: SymplecticMatrix, tau: SiegelPoint) -> SiegelPoint:
    """Fractional transformation (a tau + b)(c tau + d)^{-1}, re-validated."""
    if mat.genus != tau.genus:
        raise NotSymplectic("genus mismatch between matrix and point")
    den = mat.c @ tau.entries + mat.d
    if np.linalg.cond(den) > COCYCLE_COND_CAP:
        raise SingularCocycle("c*tau + d is numerically singular")
    num = mat.a @ tau.entries + mat.b
    # tau' = num @ den^{-1}, computed as a solve against den^T
    out = np.linalg.solve(den.T, num.T).T
    out = (out + out.T) / 2.0  # kill float asymmetry; exact result is symmetric
    return validate_siegel(tau.genus, out)


def char_action(mat: SymplecticMatrix, ch: Characteristic) -> Characteristic:
    """Affine mod-2 action of a symplectic matrix on a characteristic.

    eps' = d eps - c delta + diag(c td),  delta' = -b eps + a delta + diag(a tb),
    both reduced mod 2.
    """
    eps = np.array(ch.eps, dtype=np.int64)
    delta = np.array(ch.delta, dtype=np.int64)
    a, b, c, d = mat.a, mat.b, mat.c, mat.d
    new_eps = (d @ eps - c @ delta + np.diag(c @ d.T)) % 2
    new_delta = (-b @ eps + a @ delta + np.diag(a @ b.T)) % 2
    return Characteristic(tuple(int(v) for v in new_eps), tuple(int(v) for v in new_delta))


def in_level_subgroup(mat: SymplecticMatrix, n: int, tight: bool = False) -> bool:
    """Membership test for the principal level group mod n.

    With ``tight`` the two diagonal conditions diag(a tb) == diag(c td) == 0
    mod 2n are checked on top of M == I mod n.
    """
    ident = np.eye(2 * mat.genus, dtype=np.int64)
    if np.any((mat.m - ident) % n != 0):
        return False
    if not tight:
        return True
    two_n = 2 * n
    return bool(
        np.all(np.diag(mat.a @ mat.b.T) % two_n == 0)
        and np.all(np.diag(mat.c @ mat.d.T) % two_n == 0)
    )


def block_diag(t1: SiegelPoint, t2: SiegelPoint) -> SiegelPoint:
    """Direct sum of two period matrices (a reducible point)."""
    g1, g2 = t1.genus, t2.genus
    out = np.zeros((g1 + g2, g1 + g2), dtype=np.complex128)
    out[:g1, :g1] = t1.entries
    out[g1:, g1:] = t2.entries
    return validate_siegel(g1 + g2, out)


@dataclass(frozen=True, eq=False)
class HalfPeriod:
    """A point of order two: coords = tau (eps/2) + delta/2."""

    characteristic: Characteristic
    coords: np.ndarray  # length-g complex, read-only


def point_of_order_two(tau: SiegelPoint, ch: Characteristic) -> HalfPeriod:
    if tau.genus != ch.genus:
        raise ValueError("genus mismatch between point and characteristic")
    eps = np.array(ch.eps, dtype=np.float64) / 2.0
    delta = np.array(ch.delta, dtype=np.float64) / 2.0
    coords = tau.entries @ eps + delta
    return HalfPeriod(characteristic=ch, coords=_readonly(coords))
