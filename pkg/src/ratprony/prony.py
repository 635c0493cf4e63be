"""Operator-based Prony method in its rational (Hardy-space) realisation.

For ``H = sum_k c_k r_{lam_k}`` the moments

    g_m = mean over the circle of (S*)^m H = sum_k c_k conj(lam_k)^m

are produced by repeatedly applying the backward shift and averaging.  The
Hankel system built from ``g`` yields the monic polynomial whose roots are
``conj(lam_k)``; the poles are their conjugates.  The circle mean is
normalised so that a single atom ``r_lam`` has mean 1, which makes the
Vandermonde solve return the ``c_k`` themselves.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import InsufficientDataError, InvalidInputError
from .hardy import CircleSampling, adjoint_shift_apply, as_points
from .numerics import (
    companion_eigenvalues,
    condition_number_spectral,
    least_squares_solve,
    numerical_rank,
)

#: Recovered roots closer than this are reported as a multiplicity violation.
MULTIPLICITY_TOL = 1e-8

PROVENANCES = ("grop-quadrature", "dual-scheme", "delay-demo", "rkhs-demo", "file")


@dataclass(frozen=True, eq=False)
class MomentSequence:
    """Realised evaluation-scheme outputs ``g_0, ..., g_{K-1}``."""

    values: np.ndarray
    provenance: str = "file"

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex).ravel()
        if vals.size < 1:
            raise InvalidInputError("a moment sequence needs at least one value")
        if self.provenance not in PROVENANCES:
            raise InvalidInputError(f"unknown provenance {self.provenance!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.size

    def __getitem__(self, item):
        return self.values[item]


@dataclass(frozen=True, eq=False)
class PronyPolynomial:
    """Monic polynomial ``z^M + p_{M-1} z^{M-1} + ... + p_0``.

    ``coeffs`` holds ``p_0..p_{M-1}``; the leading 1 is implicit.
    """

    coeffs: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.array(self.coeffs, dtype=complex).ravel())

    @property
    def order(self) -> int:
        return self.coeffs.size

    @property
    def full_coeffs(self) -> np.ndarray:
        """``p_0..p_M`` including the leading 1."""
        return np.append(self.coeffs, 1.0)

    def __call__(self, z):
        return np.polyval(self.full_coeffs[::-1], z)


@dataclass(eq=False)
class RecoveryResult:
    """Recovered poles, optional coefficients and solver diagnostics."""

    poles: np.ndarray
    coefficients: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.poles = as_points(self.poles) if len(np.atleast_1d(self.poles)) else np.zeros(0, complex)
        if self.coefficients is not None:
            self.coefficients = as_points(self.coefficients)


def grop_moments(H: CircleSampling, count: int, provenance="grop-quadrature") -> MomentSequence:
    """Moments ``g_m = mean((S*)^m H)`` for ``m < count``.

    Warns when ``count`` exceeds half the grid size, past which the
    rectangle rule is no longer exact for the shifted polynomial parts.
    """
    count = int(count)
    if count < 1:
        raise InvalidInputError("moment count must be positive")
    if count > H.n_grid // 2:
        warnings.warn(
            f"{count} moments requested from a {H.n_grid}-point grid; "
            "quadrature is only exact up to n_grid/2",
            RuntimeWarning,
            stacklevel=2,
        )
    g = np.empty(count, dtype=complex)
    f = H
    for m in range(count):
        g[m] = f.mean()
        if m + 1 < count:
            f = adjoint_shift_apply(f)
    return MomentSequence(g, provenance)


def build_hankel(g: MomentSequence, M: int, N: int):
    """Hankel matrix ``[g_{m+j}]`` (``(N+1) x M``) and rhs ``[-g_{m+M}]``."""
    M, N = int(M), int(N)
    if M < 1:
        raise InvalidInputError("order M must be at least 1")
    if N < M - 1:
        raise InvalidInputError(f"need N >= M-1, got N={N}, M={M}")
    need = N + M + 1
    vals = np.asarray(g.values if isinstance(g, MomentSequence) else g, dtype=complex)
    if vals.size < need:
        raise InsufficientDataError(
            f"insufficient moments: order {M} with {N + 1} rows needs {need}, got {vals.size}"
        )
    A = scipy.linalg.hankel(vals[: N + 1], vals[N : N + M])
    rhs = -vals[M : M + N + 1]
    return A, rhs


def default_rows(M: int, available: int) -> int:
    """Default ``N``: ``2M-1`` when enough moments exist, else the largest feasible."""
    N = min(2 * M - 1, available - M - 1)
    if N < M - 1:
        raise InsufficientDataError(
            f"order {M} needs at least {2 * M} moments, got {available}"
        )
    return N


def solve_prony(g: MomentSequence, M: int, N: int | None = None, strict=True) -> PronyPolynomial:
    """Solve the Hankel system for the Prony polynomial of order ``M``.

    With ``strict`` (default) a numerically rank-deficient Hankel matrix
    raises :class:`~ratprony.errors.RankDeficiencyError`.  ``strict=False``
    returns the minimum-norm solution and records the rank, which is what
    the ill-conditioned demonstrations need.
    """
    N = default_rows(M, len(g)) if N is None else int(N)
    A, rhs = build_hankel(g, M, N)
    s = scipy.linalg.svdvals(A)
    rank = numerical_rank(A, s)
    p, residual = least_squares_solve(A, rhs, strict=strict)
    cond = float(s[0] / s[-1]) if s[-1] > 0 else float("inf")
    return PronyPolynomial(
        p, {"hankel_condition": cond, "residual": residual, "rank": rank, "rows": N + 1}
    )


def prony_roots(poly: PronyPolynomial) -> np.ndarray:
    return companion_eigenvalues(poly.coeffs)


def min_separation(points) -> float:
    points = as_points(points)
    if points.size < 2:
        return float("inf")
    gaps = np.abs(points[:, None] - points[None, :])
    gaps[np.diag_indices(points.size)] = np.inf
    return float(gaps.min())


def annihilation_residual(poly: PronyPolynomial, g) -> float:
    """``max_m |sum_k p_k g_{m+k}|`` over all windows that fit in ``g``."""
    vals = np.asarray(g.values if isinstance(g, MomentSequence) else g, dtype=complex)
    p = poly.full_coeffs
    if vals.size < p.size:
        raise InsufficientDataError("sequence shorter than the polynomial")
    # correlate: r_m = sum_k p_k g_{m+k}
    windows = np.lib.stride_tricks.sliding_window_view(vals, p.size)
    return float(np.max(np.abs(windows @ p)))


def vandermonde_recover(poles, g, rows: int | None = None) -> np.ndarray:
    """Coefficients from ``sum_k c_k conj(lam_k)^m = g_m``, ``m < rows``.

    ``rows`` defaults to the number of poles (square system).  The solve is
    least squares without a rank check so that badly conditioned node sets
    still return an answer; inspect the condition number separately.
    """
    poles = as_points(poles)
    vals = np.asarray(g.values if isinstance(g, MomentSequence) else g, dtype=complex)
    rows = poles.size if rows is None else int(rows)
    if vals.size < rows or rows < poles.size:
        raise InsufficientDataError(
            f"need at least {poles.size} moments for {poles.size} poles, got {vals.size}"
        )
    if min_separation(np.conj(poles)) < MULTIPLICITY_TOL:
        raise InvalidInputError("duplicate Vandermonde nodes")
    V = np.conj(poles)[None, :] ** np.arange(rows)[:, None]
    x, _ = least_squares_solve(V, vals[:rows], strict=False)
    return x


def check_admissibility(E, M: int):
    """Whether the atom-evaluation matrix ``E[m, k] = F_m(v_k)`` has rank ``M``.

    Returns ``(admissible, rank)``.
    """
    E = np.asarray(E, dtype=complex)
    if E.ndim != 2 or E.shape[0] < M or E.shape[1] != M:
        raise InvalidInputError(f"expected an (N+1) x {M} matrix with N+1 >= {M}, got {E.shape}")
    rank = numerical_rank(E)
    return rank == M, rank


def dual_scheme_matrix(phi_values, coefficients, rows: int) -> np.ndarray:
    """``E[m, k] = c_k phi_k^m`` for an exponential dual scheme."""
    phi = as_points(phi_values)
    c = as_points(coefficients)
    return (phi[None, :] ** np.arange(rows)[:, None]) * c[None, :]


def _recovery(roots, poly, method, g=None, conj=True):
    poles = np.conj(roots) if conj else roots
    diag = dict(poly.diagnostics)
    diag["method"] = method
    diag["multiplicity_violation"] = bool(min_separation(roots) < MULTIPLICITY_TOL)
    if g is not None:
        diag["annihilation_residual"] = annihilation_residual(poly, g)
    return RecoveryResult(poles, None, diag)


def classical_prony(g, M: int, N: int | None = None, strict=True) -> RecoveryResult:
    """Classical Prony on a raw sum of geometric sequences ``g_m = sum c_k z_k^m``.

    Returns the bases ``z_k`` as ``poles`` and the weights ``c_k``.  No
    quadrature, lifting or conjugation is involved.
    """
    if not isinstance(g, MomentSequence):
        g = MomentSequence(g, "file")
    poly = solve_prony(g, M, N, strict=strict)
    roots = prony_roots(poly)
    res = _recovery(roots, poly, "classical", g, conj=False)
    # nodes conj(conj(z)) = z: reuse the rational Vandermonde solve
    res.coefficients = vandermonde_recover(np.conj(roots), g)
    return res


def grop_recover(H: CircleSampling, M: int, N: int | None = None, count: int | None = None,
                 coefficients="tm", strict=True) -> RecoveryResult:
    """Full rational Prony pipeline on circle samples of a model-space function.

    Parameters
    ----------
    H : CircleSampling
    M : int
        Number of atoms.
    N : int, optional
        Hankel rows minus one; defaults to ``2M - 1``.
    count : int, optional
        Number of moments to form; defaults to exactly what the Hankel needs.
    coefficients : {"tm", "vandermonde", None}
        How to recover the linear parameters.
    """
    from .linear import build_tm_triangular, vandermonde_matrix

    N = 2 * M - 1 if N is None else int(N)
    count = N + M + 1 if count is None else int(count)
    g = grop_moments(H, count)
    poly = solve_prony(g, M, N, strict=strict)
    roots = prony_roots(poly)
    res = _recovery(roots, poly, "grop", g)
    if coefficients == "tm":
        system = build_tm_triangular(res.poles, H)
        res.coefficients = system.solve()
        res.diagnostics["tm_condition"] = system.condition()
    elif coefficients == "vandermonde":
        res.coefficients = vandermonde_recover(res.poles, g)
        res.diagnostics["vandermonde_condition"] = condition_number_spectral(
            vandermonde_matrix(res.poles)
        )
    elif coefficients is not None:
        raise InvalidInputError(f"unknown coefficient route {coefficients!r}")
    return res


def match_poles(estimated, truth):
    """Greedy nearest-neighbour matching on ``|est - true|``.

    Returns ``(pairs, errors)`` where ``pairs`` is a list of
    ``(estimate_index, truth_index)`` and ``errors`` the matched distances
    in the same order.  Matching proceeds from the globally closest pair.
    """
    est = as_points(estimated)
    tru = as_points(truth)
    dist = np.abs(est[:, None] - tru[None, :])
    pairs, errors = [], []
    used_e, used_t = set(), set()
    for flat in np.argsort(dist, axis=None, kind="stable"):
        i, j = np.unravel_index(flat, dist.shape)
        if i in used_e or j in used_t:
            continue
        pairs.append((int(i), int(j)))
        errors.append(float(dist[i, j]))
        used_e.add(i)
        used_t.add(j)
        if len(pairs) == min(est.size, tru.size):
            break
    return pairs, np.array(errors)
