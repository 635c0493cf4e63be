"""Linear-parameter recovery once the poles are known.

Two routes are provided for ``H = sum_k c_k r_{lam_k}``:

* :func:`tm_triangular_recover` expands ``H`` in the TM system generated by
  the poles themselves.  Because ``Phi_n`` carries the factor
  ``prod_{j<n} B_{lam_j}``, ``Phi_n(lam_k) = 0`` for ``n > k`` and the
  coefficient system is upper triangular.
* :func:`vandermonde_matrix` builds the classical transposed Vandermonde
  matrix in ``conj(lam_k)``; the solve itself lives in
  :func:`ratprony.prony.vandermonde_recover`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .hardy import (
    CircleSampling,
    GeneratingSequence,
    as_points,
    check_disk_point,
    tm_basis,
)
from .numerics import back_substitute_upper, condition_number_spectral

#: Poles closer than this are treated as duplicates.
DUPLICATE_TOL = 1e-12


def _check_distinct(poles):
    if poles.size > 1:
        gaps = np.abs(poles[:, None] - poles[None, :])
        gaps[np.diag_indices(poles.size)] = np.inf
        i, j = np.unravel_index(np.argmin(gaps), gaps.shape)
        if gaps[i, j] < DUPLICATE_TOL:
            raise InvalidInputError(
                f"poles {i} and {j} coincide (distance {gaps[i, j]:.3g}); "
                "the triangular system would be singular"
            )


def order_poles(poles, order="dominance"):
    """Permutation used to place poles in the generating sequence.

    ``"dominance"`` sorts by descending modulus (stable), ``"given"`` keeps
    the caller's order.
    """
    poles = as_points(poles)
    if order == "dominance":
        return np.argsort(-np.abs(poles), kind="stable")
    if order == "given":
        return np.arange(poles.size)
    raise InvalidInputError(f"unknown pole order {order!r}")


def vandermonde_matrix(poles, rows=None) -> np.ndarray:
    """``V[n, k] = conj(lam_k)**n`` for ``n < rows`` (default: square)."""
    poles = as_points(poles)
    rows = poles.size if rows is None else int(rows)
    return np.conj(poles)[None, :] ** np.arange(rows)[:, None]


def tm_triangular_matrix(poles) -> np.ndarray:
    """Upper-triangular matrix ``T[n, k] = conj(Phi_n(lam_k))``, ``a = poles``.

    The caller's order is used as-is.  Entries below the diagonal are set to
    exact zeros rather than evaluated.
    """
    poles = check_disk_point(as_points(poles), "pole")
    _check_distinct(poles)
    M = poles.size
    gen = GeneratingSequence(poles)
    # column k only needs Phi_0..Phi_k evaluated at lam_k
    values = tm_basis(gen, M - 1, poles)
    return np.triu(np.conj(values))


@dataclass(frozen=True, eq=False)
class TMTriangularSystem:
    """The triangular coefficient system for a fixed pole ordering.

    ``poles`` are stored in generating-sequence order; ``permutation`` maps
    them back, i.e. ``poles == caller_poles[permutation]``.
    """

    poles: np.ndarray
    matrix: np.ndarray
    rhs: np.ndarray
    permutation: np.ndarray

    @property
    def generating_sequence(self) -> GeneratingSequence:
        return GeneratingSequence(self.poles)

    def condition(self) -> float:
        return condition_number_spectral(self.matrix)

    def solve(self) -> np.ndarray:
        """Coefficients in the caller's original pole order."""
        c_sorted = back_substitute_upper(self.matrix, self.rhs)
        out = np.empty_like(c_sorted)
        out[self.permutation] = c_sorted
        return out


def build_tm_triangular(poles, H: CircleSampling, order="dominance") -> TMTriangularSystem:
    """Assemble the TM triangular system for ``H`` with the given poles.

    The right-hand side ``<H, Phi_n>`` is computed with the grid quadrature
    of ``H``.
    """
    poles = check_disk_point(as_points(poles), "pole")
    _check_distinct(poles)
    perm = order_poles(poles, order)
    ordered = poles[perm]
    T = tm_triangular_matrix(ordered)
    basis = tm_basis(GeneratingSequence(ordered), ordered.size - 1, H.nodes)
    rhs = basis.conj() @ H.values / H.n_grid
    return TMTriangularSystem(ordered, T, rhs, perm)


def tm_triangular_recover(poles, H: CircleSampling, order="dominance") -> np.ndarray:
    """Coefficients ``c_k`` of ``H = sum c_k r_{lam_k}`` via the TM triangular system."""
    return build_tm_triangular(poles, H, order).solve()


def compare_conditioning(poles, order="dominance") -> dict:
    """Spectral condition numbers of the Vandermonde and TM triangular matrices."""
    poles = as_points(poles)
    perm = order_poles(poles, order)
    v = condition_number_spectral(vandermonde_matrix(poles))
    t = condition_number_spectral(tm_triangular_matrix(poles[perm]))
    return {"M": int(poles.size), "vandermonde_condition": v, "tm_condition": t,
            "ratio": v / t}
