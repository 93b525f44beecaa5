"""Dense double-precision linear-algebra kernels and seeded Gaussian sampling.

Every kernel is a deterministic function of its inputs; randomness enters
only through an explicit :class:`RngStream`. Matrices are plain float64
numpy arrays in row-major order, validated at the public entry points.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class RankDeficientError(Exception):
    """A QR factor has a diagonal entry below the rank gate."""


class NotSymmetricError(Exception):
    """Input to the symmetric eigensolver failed the symmetry test."""


class SingularMatrixError(Exception):
    """A linear-system matrix is singular at the pivot gate."""


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a 2-D float64 C-contiguous array with finite entries."""
    m = np.ascontiguousarray(np.asarray(a, dtype=np.float64))
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    if m.size and not np.isfinite(m).all():
        raise ValueError(f"{name} contains NaN or Inf entries")
    return m


@dataclass
class RngStream:
    """Deterministic Gaussian sample stream keyed by (seed, stream_id).

    The same pair always reproduces the same sequence; distinct stream ids
    give statistically independent streams. A stream is single-owner:
    concurrent tasks must derive their own streams with distinct ids.
    """

    seed: int
    stream_id: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def standard_normal(self, rows: int, cols: int) -> np.ndarray:
        return self._gen.standard_normal((rows, cols))

    def uniform(self, low: float, high: float, count: int) -> np.ndarray:
        return self._gen.uniform(low, high, count)


def gaussian_matrix(rows: int, cols: int, rng: RngStream) -> np.ndarray:
    """Draw a rows-by-cols matrix of i.i.d. standard normal entries from rng."""
    if rows < 1 or cols < 1:
        raise ValueError("gaussian_matrix requires rows, cols >= 1")
    return rng.standard_normal(rows, cols)


def qr_factor(m) -> tuple[np.ndarray, np.ndarray]:
    """Thin QR factorization with nonnegative R diagonal.

    Raises :class:`RankDeficientError` when any diagonal entry of R falls
    below ``1e-12 * ||M||``; callers decide whether to deflate or abort.
    """
    m = as_matrix(m)
    rows, cols = m.shape
    if rows < cols:
        raise ValueError("qr_factor requires rows >= cols")
    q, r = np.linalg.qr(m)
    signs = np.where(np.diag(r) < 0.0, -1.0, 1.0)
    q = q * signs
    r = signs[:, None] * r
    # ||M|| equals ||R|| since Q has orthonormal columns; R is cols x cols.
    scale = float(np.linalg.svd(r, compute_uv=False)[0]) if cols else 0.0
    diag = np.abs(np.diag(r))
    if scale == 0.0 or diag.min() < 1e-12 * scale:
        raise RankDeficientError(
            f"diagonal of R below 1e-12 * ||M|| (min {diag.min():.3e}, scale {scale:.3e})"
        )
    return q, r


def sym_eig(s) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix: ascending values, orthonormal vectors."""
    s = as_matrix(s)
    if s.shape[0] != s.shape[1]:
        raise ValueError("sym_eig requires a square matrix")
    scale = spectral_norm(s)
    defect = spectral_norm(s - s.T)
    if defect > 1e-12 * scale:
        raise NotSymmetricError(f"asymmetry {defect:.3e} exceeds 1e-12 * ||S||")
    values, vectors = np.linalg.eigh(0.5 * (s + s.T))
    return values, vectors


def spectral_norm(m) -> float:
    """Largest singular value of m."""
    m = as_matrix(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def smallest_singular(m) -> float:
    """Smallest singular value of m (over min(rows, cols))."""
    m = as_matrix(m)
    return float(np.linalg.svd(m, compute_uv=False)[-1])


def solve_linear(m, b) -> tuple[np.ndarray, float]:
    """Solve ``M X = B`` for square M; returns (X, 1-norm condition estimate).

    Raises :class:`SingularMatrixError` when M is singular at the
    ``1e-14 * ||M||`` gate.
    """
    m = as_matrix(m, "M")
    b = as_matrix(b, "B")
    if m.shape[0] != m.shape[1]:
        raise ValueError("solve_linear requires a square matrix")
    if b.shape[0] != m.shape[0]:
        raise ValueError("right-hand side has incompatible row count")
    svals = np.linalg.svd(m, compute_uv=False)
    if svals[0] == 0.0 or svals[-1] < 1e-14 * svals[0]:
        raise SingularMatrixError(
            f"singular value {svals[-1]:.3e} below 1e-14 * ||M|| ({svals[0]:.3e})"
        )
    x = np.linalg.solve(m, b)
    m_inv = np.linalg.inv(m)
    cond = float(np.linalg.norm(m, 1) * np.linalg.norm(m_inv, 1))
    return x, cond
