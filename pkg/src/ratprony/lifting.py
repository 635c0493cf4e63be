"""Turning exponential moment sequences into rational pole-finding problems.

If ``g_m = sum_k mu_k phi_k^m`` with ``|phi_k| < w``, the weighted
Z-transform

    G(z) = sum_n g_n (z / w)^n = sum_k mu_k / (1 - (phi_k / w) z)

lies in a finite-dimensional model space of H2 with disk poles
``rho_k = conj(phi_k / w)``.  Any rational solver (GROP or GB) then finds
``rho_k``; the original parameters come back through
``phi_k = w * conj(rho_k)`` followed by the scheme-specific inverse of
``phi``.

Only the mixed weights ``mu_k = c_k * F(v_k)`` are identifiable from the
moments; separating ``c_k`` needs the atom evaluations ``F(v_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError, InvalidInputError
from .hardy import DEFAULT_GRID, CircleSampling, as_points, circle_grid
from .prony import MomentSequence

WEIGHT_SAFETY = 1.25
WEIGHT_WINDOW = 10
CONTRACTIVE_RATIO = 0.8

INVERSE_MAPS = ("identity", "conj-scale-by-w", "exp-log", "scale-by-C")


def _values(g):
    return np.asarray(g.values if isinstance(g, MomentSequence) else g, dtype=complex).ravel()


def _scaled_terms(vals, w):
    n = np.arange(vals.size)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        return np.abs(vals) * np.exp(-n * np.log(w))


def check_convergent(g, w, window=WEIGHT_WINDOW):
    """Raise if ``|g_n| / w^n`` is non-decreasing (and nonzero) over the last ``window`` terms."""
    if w <= 0:
        raise InvalidInputError(f"weight must be positive, got {w}")
    terms = _scaled_terms(_values(g), w)
    if terms.size < window:
        return
    tail = terms[-window:]
    if np.all(tail > 0) and np.all(np.diff(tail) >= 0):
        raise InvalidInputError(
            f"w too small: |g_n|/w^n does not decay over the last {window} terms (w={w:g})"
        )


def observed_decay(g, w, window=WEIGHT_WINDOW) -> float:
    """Largest ``|g_{n+1}| / (w |g_n|)`` over the trailing window (nonzero pairs only)."""
    vals = _values(g)
    tail = vals[-(window + 1):]
    num, den = np.abs(tail[1:]), np.abs(tail[:-1])
    ok = den > 0
    if not np.any(ok):
        return 0.0
    return float(np.max(num[ok] / den[ok]) / w)


def truncation_tail_bound(g, w, window=WEIGHT_WINDOW) -> float:
    """Geometric estimate of ``sum_{n >= K} |g_n| / w^n`` from the observed decay."""
    vals = _values(g)
    rho = observed_decay(vals, w, window)
    if rho >= 1.0:
        return float("inf")
    last = _scaled_terms(vals, w)[-1]
    return float(last * rho / (1.0 - rho))


def weighted_z_transform_sampling(g, w: float, n_grid: int = DEFAULT_GRID) -> CircleSampling:
    """Samples of ``sum_{n<K} g_n (z/w)^n`` on the circle grid (Horner's rule)."""
    w = float(w)
    check_convergent(g, w)
    vals = _values(g)
    u = circle_grid(n_grid) / w
    acc = np.zeros(u.size, dtype=complex)
    for coef in vals[::-1]:
        acc = acc * u + coef
    return CircleSampling(acc)


def estimate_weight(g) -> float:
    """Ratio-test weight: ``1.25 * max |g_{n+1}/g_n|`` over the last 10 ratios.

    Returns 1.0 when that maximum is already below 0.8 (the sequence is
    summable without rescaling).
    """
    vals = _values(g)
    if vals.size < 8:
        raise InsufficientDataError(f"need at least 8 moments to estimate a weight, got {vals.size}")
    if not np.any(vals):
        raise InvalidInputError("cannot estimate a weight for an all-zero sequence")
    ratio = observed_decay(vals, 1.0)
    if ratio < CONTRACTIVE_RATIO:
        return 1.0
    return WEIGHT_SAFETY * ratio


@dataclass(frozen=True, eq=False)
class LiftedProblem:
    """Moment sequence plus everything needed to map disk poles back.

    ``inverse_map`` names the inverse of the evaluation-scheme map ``phi``:

    ``identity``
        the parameters are ``phi`` themselves (classical geometric sequences);
    ``conj-scale-by-w``
        rational moments ``g_m = sum c conj(lam)^m``: ``lam = conj(phi) = w*rho``;
    ``exp-log``
        ``phi = exp(m0 * lam)``: ``lam = log(phi) / m0`` (principal branch);
    ``scale-by-C``
        ``phi = lam / C``: ``lam = C * phi``.
    """

    moments: MomentSequence
    w: float
    K: int
    inverse_map: str = "identity"
    m0: float | None = None
    scale: float | None = None
    tail_bound: float = field(default=0.0)

    def __post_init__(self):
        if not self.w > 0:
            raise InvalidInputError(f"weight must be positive, got {self.w}")
        if self.inverse_map not in INVERSE_MAPS:
            raise InvalidInputError(f"unknown inverse map {self.inverse_map!r}")
        if self.inverse_map == "exp-log" and not self.m0:
            raise InvalidInputError("exp-log inverse map needs the step m0")
        if self.inverse_map == "scale-by-C" and not self.scale:
            raise InvalidInputError("scale-by-C inverse map needs the scale C")

    def sampling(self, n_grid: int = DEFAULT_GRID) -> CircleSampling:
        return weighted_z_transform_sampling(self.moments.values[: self.K], self.w, n_grid)

    def disk_from_phi(self, phi):
        return np.conj(as_points(phi) / self.w)

    def phi_from_disk(self, rho):
        return self.w * np.conj(as_points(rho))

    def parameters_from_disk(self, rho):
        phi = self.phi_from_disk(rho)
        if self.inverse_map == "identity":
            return phi
        if self.inverse_map == "conj-scale-by-w":
            return np.conj(phi)
        if self.inverse_map == "exp-log":
            return np.log(phi) / self.m0
        return self.scale * phi

    def sidecar(self) -> dict:
        out = {"w": self.w, "K": self.K, "tail_bound": self.tail_bound,
               "inverse_map": self.inverse_map}
        if self.m0 is not None:
            out["m0"] = self.m0
        if self.scale is not None:
            out["C"] = self.scale
        return out


def lift(g, w: float | None = None, inverse_map="identity", K: int | None = None,
         m0=None, scale=None) -> LiftedProblem:
    """Package ``g`` for rational recovery, estimating ``w`` when not given."""
    if not isinstance(g, MomentSequence):
        g = MomentSequence(g, "file")
    w = estimate_weight(g) if w is None else float(w)
    K = len(g) if K is None else int(K)
    if not 1 <= K <= len(g):
        raise InvalidInputError(f"truncation K={K} outside 1..{len(g)}")
    tail = truncation_tail_bound(g.values[:K], w)
    return LiftedProblem(g, w, K, inverse_map, m0, scale, tail)
