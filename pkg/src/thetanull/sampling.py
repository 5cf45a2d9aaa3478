"""Seeded random inputs for self-tests: period matrices and group elements.

The period-matrix draw A + i (B tB + g I) guarantees lambda_min(Im tau) >= g,
so every evaluation stays far from the truncation cap while still exercising
dense coupling between coordinates.
"""

from __future__ import annotations

import numpy as np

from .siegel import SiegelPoint, SymplecticMatrix, block_diag, validate_siegel


def random_tau(rng: np.random.Generator, g: int) -> SiegelPoint:
    """A + i(B tB + g I) with A symmetric and A, B entries uniform in [-1, 1]."""
    a = rng.uniform(-1.0, 1.0, size=(g, g))
    a = (a + a.T) / 2.0
    b = rng.uniform(-1.0, 1.0, size=(g, g))
    return validate_siegel(g, a + 1j * (b @ b.T + g * np.eye(g)))


def random_block_tau(rng: np.random.Generator, g1: int, g2: int) -> SiegelPoint:
    return block_diag(random_tau(rng, g1), random_tau(rng, g2))


def random_z(rng: np.random.Generator, g: int, scale: float = 0.5) -> np.ndarray:
    return scale * (rng.uniform(-1.0, 1.0, size=g) + 1j * rng.uniform(-1.0, 1.0, size=g))


def random_omega(rng: np.random.Generator, min_imag: float = 0.5) -> complex:
    """Upper half-plane scalar with Im >= min_imag (for the g=1 checks)."""
    return complex(rng.uniform(-1.0, 1.0), min_imag + rng.uniform(0.0, 1.5))


def _random_symmetric_int(rng: np.random.Generator, g: int, lo: int, hi: int) -> np.ndarray:
    m = rng.integers(lo, hi + 1, size=(g, g))
    return np.triu(m) + np.triu(m, 1).T


def random_level_generator(rng: np.random.Generator, g: int) -> SymplecticMatrix:
    """One generator (I, 4B; 0, I) or (I, 0; 4C, I) with even diagonal block.

    Both families lie in the level group Gamma_g(4, 8); products of them stay
    inside it.
    """
    m = _random_symmetric_int(rng, g, -1, 1)
    np.fill_diagonal(m, 2 * rng.integers(-1, 2, size=g))
    if rng.integers(0, 2) == 0:
        return SymplecticMatrix.translation(4 * m)
    return SymplecticMatrix.lower_translation(4 * m)


def random_level_word(rng: np.random.Generator, g: int, length: int = 2) -> SymplecticMatrix:
    word = random_level_generator(rng, g)
    for _ in range(length - 1):
        word = word @ random_level_generator(rng, g)
    return word


def _random_unimodular(rng: np.random.Generator, g: int) -> np.ndarray:
    """Signed permutation, optionally sheared by one elementary transvection."""
    perm = rng.permutation(g)
    u = np.zeros((g, g), dtype=np.int64)
    for row, col in enumerate(perm):
        u[row, col] = int(rng.choice((-1, 1)))
    if g > 1 and rng.integers(0, 2) == 0:
        i, j = rng.choice(g, size=2, replace=False)
        shear = np.eye(g, dtype=np.int64)
        shear[i, j] = int(rng.integers(1, 3))
        u = shear @ u
    return u


def random_generator(rng: np.random.Generator, g: int) -> SymplecticMatrix:
    """One full-group generator: inversion, integer translation, or dilation."""
    kind = rng.integers(0, 3)
    if kind == 0:
        return SymplecticMatrix.inversion(g)
    if kind == 1:
        return SymplecticMatrix.translation(_random_symmetric_int(rng, g, -2, 2))
    return SymplecticMatrix.dilation(_random_unimodular(rng, g))


def random_word(rng: np.random.Generator, g: int, length: int = 3) -> SymplecticMatrix:
    word = random_generator(rng, g)
    for _ in range(length - 1):
        word = word @ random_generator(rng, g)
    return word
