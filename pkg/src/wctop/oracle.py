"""Dense complex linear algebra used as an independent verifier.

Everything here works on plain matrices in orthonormal coordinates, where the
Hilbert-space adjoint is the conjugate transpose. The closed-form operator
code never calls into this module; tests compare the two.

The factorizations are LAPACK's (via numpy/scipy). The functions below add
the contract checks: size guardrail, deterministic ordering, residual bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    InputError,
    NotPositiveDefinite,
    OracleSizeError,
)

MAX_DIM = 4096


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """A matrix acting on orthonormal coordinates."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InputError("matrix entries must be finite")

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def H(self) -> "DenseOperator":
        return DenseOperator(self.entries.conj().T)

    def __matmul__(self, other):
        if isinstance(other, DenseOperator):
            return DenseOperator(self.entries @ other.entries)
        return self.entries @ other


class SVD(NamedTuple):
    s: np.ndarray
    U: np.ndarray
    V: np.ndarray


def check_size(rows: int, cols: int) -> None:
    if max(rows, cols) > MAX_DIM:
        raise OracleSizeError(
            f"{rows}x{cols} exceeds the {MAX_DIM}x{MAX_DIM} guardrail")


def _matrix(A) -> np.ndarray:
    a = A.entries if isinstance(A, DenseOperator) else np.asarray(A)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    check_size(*a.shape)
    return a


def to_coords(weights, f) -> np.ndarray:
    """Coordinates of f in the orthonormal basis ``e_i / sqrt(mu_i)``."""
    return np.sqrt(weights) * np.asarray(f)


def from_coords(weights, c) -> np.ndarray:
    return np.asarray(c) / np.sqrt(weights)


def svd(A) -> SVD:
    """Thin SVD ``A = U diag(s) V^*`` with ``s`` descending."""
    a = _matrix(A)
    try:
        U, s, Vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"SVD did not converge: {exc}") from None
    return SVD(s, U, Vh.conj().T)


def singular_values(A) -> np.ndarray:
    a = _matrix(A)
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"SVD did not converge: {exc}") from None


def pinv_svd(A, cutoff: float | None = None) -> DenseOperator:
    """Moore-Penrose inverse ``V diag(1/s) U^*`` dropping ``s <= cutoff``.

    The default cutoff is ``1e-10 * s_max``.
    """
    s, U, V = svd(A)
    if cutoff is None:
        cutoff = 1e-10 * (s[0] if s.size else 0.0)
    if cutoff < 0:
        raise InputError("cutoff must be >= 0")
    keep = s > cutoff
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return DenseOperator((V * inv) @ U.conj().T)


def rank(A, rtol: float = 1e-10) -> int:
    s = singular_values(A)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def null_space(A, rtol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (as columns) of the null space of A."""
    a = _matrix(A)
    try:
        _, s, Vh = np.linalg.svd(a, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"SVD did not converge: {exc}") from None
    r = int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0
    return Vh[r:].conj().T


def range_basis(A, rtol: float = 1e-10) -> np.ndarray:
    s, U, _ = svd(A)
    r = int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0
    return U[:, :r]


def _sort_complex(z: np.ndarray) -> np.ndarray:
    return z[np.lexsort((z.imag, z.real))]


def eigenvalues(A) -> np.ndarray:
    """Eigenvalues sorted by (real, imaginary) part."""
    a = _matrix(A)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"eigenvalues need a square matrix, got {a.shape}")
    try:
        z = scipy.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigenvalue iteration failed: {exc}") from None
    return _sort_complex(np.asarray(z, dtype=complex))


def hpd_solve(A, b) -> np.ndarray:
    """Solve ``A x = b`` for Hermitian positive definite ``A`` (Cholesky)."""
    a = _matrix(A)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"need a square matrix, got {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    if np.max(np.abs(a - a.conj().T), initial=0.0) > 1e-12 * scale:
        raise NotPositiveDefinite("matrix is not Hermitian")
    try:
        c = scipy.linalg.cho_factor(a, lower=True, check_finite=True)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite("matrix is not positive definite") from None
    return scipy.linalg.cho_solve(c, np.asarray(b))


def hausdorff_distance(a, b) -> float:
    """Hausdorff distance between two finite point sets in the plane."""
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if a.size == 0 and b.size == 0:
        return 0.0
    if a.size == 0 or b.size == 0:
        return float("inf")
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def op_norm(A) -> float:
    """Spectral norm (largest singular value)."""
    s = singular_values(A)
    return float(s[0]) if s.size else 0.0
