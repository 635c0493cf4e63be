"""Dense complex linear-algebra kernels used by the Prony and recovery code."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import InvalidInputError, RankDeficiencyError, SingularDiagonalError

#: Pivots below this modulus are treated as zero in back substitution.
PIVOT_TOL = 1e-14


def _as_matrix(A):
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.size == 0:
        raise InvalidInputError(f"expected a non-empty 2-d matrix, got shape {A.shape}")
    return A


def numerical_rank(A, singular_values=None) -> int:
    """Number of singular values above ``sigma_max * max(rows, cols) * eps``."""
    A = _as_matrix(A)
    s = scipy.linalg.svdvals(A) if singular_values is None else singular_values
    if s.size == 0 or s[0] == 0:
        return 0
    tol = s[0] * max(A.shape) * np.finfo(float).eps
    return int(np.sum(s > tol))


def least_squares_solve(A, b, strict=True):
    """Least-squares solution of ``A x = b``.

    Parameters
    ----------
    A : (m, n) array_like, m >= n
    b : (m,) array_like
    strict : bool
        If True (default) a numerically rank-deficient ``A`` raises
        :class:`RankDeficiencyError` carrying the computed rank.  If False
        the minimum-norm solution is returned regardless.

    Returns
    -------
    x : ndarray
    residual : float
        ``||A x - b||_2``.
    """
    A = _as_matrix(A)
    b = np.asarray(b, dtype=complex).ravel()
    rows, cols = A.shape
    if b.size != rows:
        raise InvalidInputError(f"rhs has {b.size} entries, matrix has {rows} rows")
    if strict and rows < cols:
        raise InvalidInputError(f"need rows >= cols, got {rows}x{cols}")
    x, _, rank, s = np.linalg.lstsq(A, b, rcond=None)
    if strict:
        rank = numerical_rank(A, s)
        if rank < cols:
            raise RankDeficiencyError(
                f"matrix is numerically rank deficient (rank {rank} < {cols})",
                rank=rank,
                expected=cols,
            )
    residual = float(np.linalg.norm(A @ x - b))
    return x, residual


def companion_matrix(monic_coeffs) -> np.ndarray:
    """Frobenius companion of ``z^M + p_{M-1} z^{M-1} + ... + p_0``."""
    p = np.asarray(monic_coeffs, dtype=complex).ravel()
    M = p.size
    if M == 0:
        raise InvalidInputError("polynomial degree must be at least 1")
    C = np.zeros((M, M), dtype=complex)
    C[1:, :-1] = np.eye(M - 1)
    C[:, -1] = -p
    return C


def companion_eigenvalues(monic_coeffs) -> np.ndarray:
    """Roots of the monic polynomial with low-order coefficients ``p_0..p_{M-1}``."""
    return np.linalg.eigvals(companion_matrix(monic_coeffs))


def condition_number_spectral(A) -> float:
    """``sigma_max / sigma_min``; ``inf`` when ``sigma_min`` underflows to zero."""
    A = _as_matrix(A)
    s = scipy.linalg.svdvals(A)
    k = min(A.shape)
    if k == 0 or s[k - 1] == 0.0:
        return float("inf")
    with np.errstate(over="ignore"):
        cond = s[0] / s[k - 1]
    return float(cond)


def back_substitute_upper(U, b) -> np.ndarray:
    """Solve ``U x = b`` for square upper-triangular ``U``.

    Raises :class:`SingularDiagonalError` with the offending index if a
    diagonal entry has modulus below 1e-14.  Entries below the diagonal are
    ignored.
    """
    U = _as_matrix(U)
    b = np.asarray(b, dtype=complex).ravel()
    n = U.shape[0]
    if U.shape != (n, n):
        raise InvalidInputError(f"expected a square matrix, got shape {U.shape}")
    if b.size != n:
        raise InvalidInputError(f"rhs has {b.size} entries, matrix is {n}x{n}")
    diag = np.abs(np.diag(U))
    small = np.flatnonzero(diag < PIVOT_TOL)
    if small.size:
        i = int(small[0])
        raise SingularDiagonalError(
            f"diagonal entry {i} has modulus {diag[i]:.3g} < {PIVOT_TOL:g}", index=i
        )
    return scipy.linalg.solve_triangular(U, b, lower=False, check_finite=True)
