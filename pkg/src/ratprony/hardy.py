"""Hardy-space primitives on the unit disk.

Everything here works on a uniform grid of the unit circle,
``t_j = 2*pi*j/N`` for ``j = 0..N-1``.  A function in H2 is represented by
its samples on that grid (:class:`CircleSampling`), and inner products are
computed with the rectangle rule, which is exact for trigonometric
polynomials of degree below ``N/2`` and spectrally accurate for rational
functions whose poles stay away from the circle.

Conventions
-----------
The elementary rational ("atom") attached to a disk point ``lam`` is

    r_lam(z) = 1 / (1 - conj(lam) * z)

so that ``<f, r_lam> = f(lam)`` and ``<r_lam, f> = conj(f(lam))`` for every
``f`` in H2.  The Blaschke factor is ``B_a(z) = (z - a) / (1 - conj(a) z)``
and the Takenaka-Malmquist (TM) functions generated by ``a`` are

    Phi_n(z) = sqrt(1 - |a_n|^2) / (1 - conj(a_n) z) * prod_{j<n} B_{a_j}(z).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DiskPointError, InvalidInputError

#: Points with modulus at or above this value count as "on the boundary".
BOUNDARY_TOL = 1e-12
#: Default number of quadrature nodes on the unit circle.
DEFAULT_GRID = 4096


def check_disk_point(a, name="point"):
    """Return ``a`` as a complex array, raising if any entry has |a| >= 1 - 1e-12."""
    arr = np.asarray(a, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DiskPointError(f"{name} must be finite, got {a!r}")
    bad = np.abs(arr) >= 1.0 - BOUNDARY_TOL
    if np.any(bad):
        worst = np.max(np.abs(arr))
        raise DiskPointError(
            f"{name} must lie strictly inside the unit disk (|{name}| < 1 - {BOUNDARY_TOL:g}); "
            f"got modulus {worst:.17g}"
        )
    return arr


def circle_grid(n_grid: int, dtype=complex) -> np.ndarray:
    """Uniform grid ``exp(2j*pi*k/n_grid)``, ``k = 0..n_grid-1``.

    ``dtype=np.clongdouble`` builds the nodes from an extended-precision pi.
    """
    if int(n_grid) != n_grid or n_grid < 2:
        raise InvalidInputError(f"grid size must be an integer >= 2, got {n_grid!r}")
    real = np.finfo(np.dtype(dtype)).dtype
    pi = np.arccos(real.type(-1))
    t = 2 * pi * np.arange(int(n_grid), dtype=real) / int(n_grid)
    return np.exp(1j * t).astype(dtype)


@dataclass(frozen=True)
class GeneratingSequence:
    """One period ``(a_0, ..., a_{p-1})`` of a periodic TM generating sequence.

    Indices beyond the period wrap: ``a_n = a_{n mod p}``.  Any periodic
    sequence of disk points satisfies the Szasz condition, so the generated
    TM system is complete in H2.
    """

    entries: tuple

    def __init__(self, entries):
        arr = np.atleast_1d(np.asarray(entries, dtype=complex)).ravel()
        if arr.size < 1:
            raise InvalidInputError("a generating sequence needs at least one entry")
        check_disk_point(arr, "generating entry")
        object.__setattr__(self, "entries", tuple(complex(v) for v in arr))

    @property
    def period(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, n):
        return self.entries[n % len(self.entries)]

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=complex)

    def appended(self, point) -> "GeneratingSequence":
        """Sequence with one more entry at the end of the period."""
        return GeneratingSequence(self.entries + (complex(point),))

    def szasz_partial_sum(self, periods: int) -> float:
        """``sum (1 - |a_n|)`` over the first ``periods`` periods; grows linearly."""
        return periods * float(np.sum(1.0 - np.abs(self.as_array())))


@dataclass(frozen=True, eq=False)
class CircleSampling:
    """Samples ``f(exp(i t_j))`` of a function on the uniform circle grid."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex).ravel()
        if vals.size < 2:
            raise InvalidInputError(f"a circle sampling needs at least 2 points, got {vals.size}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, func: Callable, n_grid: int = DEFAULT_GRID) -> "CircleSampling":
        """Sample a vectorised callable ``func(z)`` on the grid."""
        z = circle_grid(n_grid)
        return cls(np.broadcast_to(np.asarray(func(z), dtype=complex), z.shape))

    @property
    def n_grid(self) -> int:
        return self.values.size

    @property
    def nodes(self) -> np.ndarray:
        return circle_grid(self.n_grid)

    def mean(self) -> complex:
        """Rectangle-rule value of ``(1/2pi) int f(e^{it}) dt``."""
        return complex(np.mean(self.values))

    def norm(self) -> float:
        """Quadrature H2 norm."""
        return float(np.sqrt(np.mean(np.abs(self.values) ** 2)))

    def __add__(self, other):
        _check_same_grid(self, other)
        return CircleSampling(self.values + other.values)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return CircleSampling(self.values - other.values)

    def __mul__(self, scalar):
        return CircleSampling(self.values * complex(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        return f"CircleSampling(n_grid={self.n_grid})"


def _check_same_grid(f, g):
    if f.n_grid != g.n_grid:
        raise InvalidInputError(f"grid sizes differ: {f.n_grid} vs {g.n_grid}")


@dataclass(frozen=True, eq=False)
class RationalAtomSet:
    """Pairwise distinct disk poles, optionally with (nonzero) coefficients.

    With coefficients present this describes the model-space function
    ``H = sum_k c_k r_{lam_k}``.
    """

    poles: np.ndarray
    coefficients: np.ndarray | None = None

    def __post_init__(self):
        poles = check_disk_point(np.atleast_1d(self.poles).ravel(), "pole")
        if poles.size == 0:
            raise InvalidInputError("at least one pole is required")
        if poles.size > 1:
            gaps = np.abs(poles[:, None] - poles[None, :]) + np.eye(poles.size)
            if np.min(gaps) == 0.0:
                raise InvalidInputError("poles must be pairwise distinct")
        object.__setattr__(self, "poles", poles)
        if self.coefficients is not None:
            coef = np.atleast_1d(np.asarray(self.coefficients, dtype=complex)).ravel()
            if coef.shape != poles.shape:
                raise InvalidInputError(
                    f"{coef.size} coefficients given for {poles.size} poles"
                )
            if np.any(coef == 0):
                raise InvalidInputError("coefficients must be nonzero")
            object.__setattr__(self, "coefficients", coef)

    def __len__(self):
        return self.poles.size

    def __call__(self, z):
        """Evaluate ``sum_k c_k / (1 - conj(lam_k) z)``."""
        if self.coefficients is None:
            raise InvalidInputError("cannot evaluate an atom set without coefficients")
        z = np.asarray(z, dtype=complex)
        terms = 1.0 / (1.0 - np.conj(self.poles) * z[..., None])
        return terms @ self.coefficients

    def sampling(self, n_grid: int = DEFAULT_GRID) -> CircleSampling:
        """Grid samples, evaluated in extended precision and rounded once.

        Evaluating at double-rounded nodes would perturb each sample by
        about ``eps * |H'|``, which near-boundary poles make large.
        """
        if self.coefficients is None:
            raise InvalidInputError("cannot sample an atom set without coefficients")
        z = circle_grid(n_grid, np.clongdouble)
        conj_poles = np.conj(self.poles).astype(np.clongdouble)
        terms = 1 / (1 - conj_poles * z[:, None])
        vals = terms @ self.coefficients.astype(np.clongdouble)
        return CircleSampling(vals.astype(complex))

    def taylor_coefficients(self, count: int) -> np.ndarray:
        """``h_m = sum_k c_k conj(lam_k)^m`` for ``m < count`` (closed form)."""
        m = np.arange(count)
        return (np.conj(self.poles)[None, :] ** m[:, None]) @ self.coefficients


def blaschke_eval(a, z):
    """Blaschke factor ``(z - a) / (1 - conj(a) z)``.

    Vectorised over ``z``.  Unimodular on the circle, zero at ``a``.
    """
    a = complex(check_disk_point(a, "a"))
    z = np.asarray(z, dtype=complex)
    out = (z - a) / (1.0 - np.conj(a) * z)
    return out[()] if out.ndim == 0 else out


def blaschke_product_eval(gen: GeneratingSequence, z):
    """Product of the Blaschke factors over one period of ``gen``."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for a in gen.entries:
        out = out * (z - a) / (1.0 - np.conj(a) * z)
    return out[()] if out.ndim == 0 else out


def tm_eval(gen: GeneratingSequence, n: int, z):
    """Evaluate the TM function ``Phi_n`` of the periodic sequence ``gen`` at ``z``."""
    if int(n) != n or n < 0:
        raise InvalidInputError(f"TM index must be a non-negative integer, got {n!r}")
    z = np.asarray(z, dtype=complex)
    prod = np.ones_like(z)
    for j in range(int(n)):
        a = gen[j]
        prod = prod * (z - a) / (1.0 - np.conj(a) * z)
    a = gen[n]
    out = np.sqrt(1.0 - abs(a) ** 2) / (1.0 - np.conj(a) * z) * prod
    return out[()] if out.ndim == 0 else out


def tm_basis(gen: GeneratingSequence, n_max: int, z, dtype=complex) -> np.ndarray:
    """Rows ``Phi_0(z), ..., Phi_{n_max}(z)`` as a ``(n_max+1, len(z))`` array.

    Uses the running Blaschke product, so cost is linear in ``n_max``.
    Rounding in that product grows with ``n``; pass ``dtype=np.clongdouble``
    to carry it in extended precision.
    """
    z = np.atleast_1d(np.asarray(z, dtype=dtype))
    out = np.empty((n_max + 1, z.size), dtype=dtype)
    prod = np.ones(z.size, dtype=dtype)
    one = np.finfo(np.dtype(dtype)).dtype.type(1)
    for n in range(n_max + 1):
        a = np.asarray(gen[n], dtype=dtype)
        denom = 1 - np.conj(a) * z
        out[n] = np.sqrt(one - abs(a) ** 2) / denom * prod
        prod = prod * (z - a) / denom
    return out


def tm_sampling(gen: GeneratingSequence, n: int, n_grid: int = DEFAULT_GRID) -> CircleSampling:
    return CircleSampling(tm_eval(gen, n, circle_grid(n_grid)))


def h2_inner(f: CircleSampling, g: CircleSampling) -> complex:
    """Rectangle-rule H2 inner product ``(1/N) sum_j f_j conj(g_j)``."""
    _check_same_grid(f, g)
    return complex(np.vdot(g.values, f.values) / f.n_grid)


def rational_atom_sampling(pole, n_grid: int = DEFAULT_GRID) -> CircleSampling:
    """Samples of ``r_pole(z) = 1 / (1 - conj(pole) z)``."""
    pole = complex(check_disk_point(pole, "pole"))
    return CircleSampling(1.0 / (1.0 - np.conj(pole) * circle_grid(n_grid)))


def adjoint_shift_apply(f: CircleSampling) -> CircleSampling:
    """Backward shift ``(f(z) - f(0)) / z`` on the grid.

    ``f(0)`` is taken as the grid mean (the zeroth Fourier coefficient under
    the same quadrature) and division by ``z`` on the circle is
    multiplication by ``conj(z)``.  For every atom ``S* r_lam = conj(lam) r_lam``.
    """
    z = f.nodes
    return CircleSampling((f.values - np.mean(f.values)) * np.conj(z))


def as_points(values: Sequence) -> np.ndarray:
    """Flatten to a 1-d complex array (helper for user input)."""
    return np.atleast_1d(np.asarray(values, dtype=complex)).ravel()
