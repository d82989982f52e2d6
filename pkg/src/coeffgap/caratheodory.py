"""The Caratheodory class: functions ``P = 1 + p_1 z + ...`` with Re P > 0.

Membership of a finite prefix is decided through the Hermitian Toeplitz
determinants ``D_k``; extreme points are atomic Herglotz measures.  The
(p, x, y) chart parametrizes every admissible triple ``(p_1, p_2, p_3)``
with real ``p_1 = p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    ChartDegenerateError,
    DomainError,
    FeasibilityError,
    LengthError,
    MeasureError,
)
from .series import TruncatedSeries

MAX_ATOMS = 6


def wrap_angle(phi):
    """Map angles into (-pi, pi]."""
    out = np.pi - np.mod(np.pi - np.asarray(phi, dtype=float), 2 * np.pi)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class HerglotzMeasure:
    """Finite convex combination of point masses on the unit circle.

    ``gammas[j]`` is the weight of the atom at ``exp(i phis[j])``.
    """

    gammas: np.ndarray
    phis: np.ndarray

    def __post_init__(self):
        g = np.array(self.gammas, dtype=float).reshape(-1)
        phi = wrap_angle(np.array(self.phis, dtype=float).reshape(-1))
        phi = np.atleast_1d(phi)
        if g.size == 0 or g.size != phi.size:
            raise MeasureError("need one angle per weight and at least one atom")
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(phi))):
            raise MeasureError("weights and angles must be finite")
        if np.any(g < 0):
            raise MeasureError("atom weights must be non-negative")
        if abs(g.sum() - 1.0) > 1e-12:
            raise MeasureError(f"atom weights sum to {g.sum()!r}, not 1")
        srt = np.sort(phi)
        if srt.size > 1 and np.min(np.diff(srt)) <= 1e-12:
            raise MeasureError("atom angles must be pairwise distinct")
        g.setflags(write=False)
        phi.setflags(write=False)
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "phis", phi)

    @classmethod
    def from_atoms(cls, atoms: Sequence[tuple[float, float]]) -> "HerglotzMeasure":
        atoms = list(atoms)
        return cls([a[0] for a in atoms], [a[1] for a in atoms])

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.gammas.tolist(), self.phis.tolist()))


def herglotz_prefix(gammas, phis, order: int) -> np.ndarray:
    """Coefficients ``1, p_1 .. p_order`` with ``p_n = 2 sum_j gamma_j e^{i n phi_j}``.

    ``gammas`` and ``phis`` carry the atoms on their last axis; leading axes
    are batch axes.
    """
    gammas = np.asarray(gammas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    n = np.arange(order + 1)
    waves = np.exp(1j * phis[..., None, :] * n[:, None])
    out = 2.0 * np.sum(gammas[..., None, :] * waves, axis=-1)
    out[..., 0] = 1.0
    return out


def herglotz_coefficients(m: HerglotzMeasure, order: int) -> TruncatedSeries:
    if order < 1:
        raise LengthError("order must be at least 1")
    return TruncatedSeries(herglotz_prefix(m.gammas, m.phis, order))


def sample_measure_arrays(rng: np.random.Generator, count: int,
                          max_atoms: int = MAX_ATOMS) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``count`` random atomic measures, zero-padded to ``max_atoms`` atoms.

    Atom count is uniform on ``1..max_atoms``, angles uniform on (-pi, pi],
    and weights uniform on the simplex of the active atoms.
    """
    k = rng.integers(1, max_atoms + 1, size=count)
    phis = wrap_angle(rng.uniform(-np.pi, np.pi, size=(count, max_atoms)))
    expo = rng.exponential(size=(count, max_atoms))
    expo[np.arange(max_atoms)[None, :] >= k[:, None]] = 0.0
    gammas = expo / expo.sum(axis=1, keepdims=True)
    return gammas, phis


def random_measure(rng: np.random.Generator, atoms: int | None = None) -> HerglotzMeasure:
    if atoms is None:
        atoms = int(rng.integers(1, MAX_ATOMS + 1))
    phis = wrap_angle(rng.uniform(-np.pi, np.pi, size=atoms))
    return HerglotzMeasure(rng.dirichlet(np.ones(atoms)), phis)


# -- Toeplitz determinants ----------------------------------------------------

def toeplitz_matrix(prefix, n: int) -> np.ndarray:
    """The (n+1) x (n+1) Hermitian Toeplitz matrix of ``2, p_1 .. p_n``.

    Batch axes of ``prefix`` (all but the last) are carried through.
    """
    p = np.asarray(prefix, dtype=np.complex128)
    if p.shape[-1] < n:
        raise LengthError(f"D_{n} needs {n} coefficients, got {p.shape[-1]}")
    c = np.concatenate([np.full(p.shape[:-1] + (1,), 2.0 + 0j), p[..., :n]], axis=-1)
    idx = np.arange(n + 1)
    lag = idx[None, :] - idx[:, None]
    upper = c[..., np.abs(lag)]
    return np.where(lag >= 0, upper, np.conj(upper))


def toeplitz_minors(prefix) -> np.ndarray:
    """``D_1 .. D_m`` for a prefix ``p_1 .. p_m`` (batched over leading axes)."""
    p = np.asarray(prefix, dtype=np.complex128)
    m = p.shape[-1]
    full = toeplitz_matrix(p, m)
    out = np.empty(p.shape[:-1] + (m,), dtype=float)
    for k in range(1, m + 1):
        out[..., k - 1] = np.linalg.det(full[..., : k + 1, : k + 1]).real
    return out


def toeplitz_determinant(prefix: Sequence[complex], n: int) -> float:
    """Determinant ``D_n`` of the Toeplitz matrix built from ``p_1 .. p_n``."""
    if n < 1:
        raise LengthError("n must be at least 1")
    d = np.linalg.det(toeplitz_matrix(prefix, n))
    scale = 2.0 ** (n + 1)
    if abs(d.imag) > 1e-9 * max(scale, abs(d.real)):
        raise FeasibilityError(f"determinant has imaginary residue {d.imag!r}")
    return float(d.real)


def feasibility_margins(prefix) -> np.ndarray:
    """``D_k / 2^(k+1)`` for k = 1..m; feasible prefixes have all entries >= 0."""
    d = toeplitz_minors(prefix)
    scale = 2.0 ** (np.arange(d.shape[-1]) + 2)
    return d / scale


def is_caratheodory_prefix(prefix: Sequence[complex], tol: float = 1e-9) -> bool:
    if tol < 0:
        raise DomainError("tol must be non-negative")
    p = np.asarray(prefix, dtype=np.complex128).reshape(-1)
    if p.size == 0:
        return True
    return bool(np.all(feasibility_margins(p) >= -tol))


# -- two-atom boundary kernel ------------------------------------------------

def d2_extremal_kernel(p1: float, order: int = 32) -> TruncatedSeries:
    """Kernel ``(1 - z^2) / (1 - p1 z + z^2)``: ``p_n = 2 cos(n arccos(p1/2))``."""
    if not -2.0 <= p1 <= 2.0:
        raise DomainError(f"p1 = {p1!r} outside [-2, 2]")
    phi = math.acos(p1 / 2.0)
    c = 2.0 * np.cos(np.arange(order + 1) * phi)
    c[0] = 1.0
    return TruncatedSeries(c)


# -- (p, x, y) chart ----------------------------------------------------------

@dataclass(frozen=True)
class LZParams:
    """Chart coordinates of ``(p_1, p_2, p_3)``.

    ``degenerate_y`` marks ``|x| = 1``, where ``y`` has no effect and is
    stored as 0.
    """

    p: float
    x: complex
    y: complex = 0j
    degenerate_y: bool = False

    def __post_init__(self):
        tol = 1e-12
        if not -2.0 - tol <= self.p <= 2.0 + tol:
            raise DomainError(f"p = {self.p!r} outside [-2, 2]")
        if abs(self.x) > 1 + tol or abs(self.y) > 1 + tol:
            raise DomainError("chart parameters need |x| <= 1 and |y| <= 1")


def lz_coefficients(p, x, y):
    """Vectorized chart map returning ``(p_1, p_2, p_3)`` as broadcast arrays."""
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    q = 4.0 - p * p
    p2 = (p * p + x * q) / 2.0
    p3 = (p ** 3 + 2.0 * q * p * x - p * q * x * x
          + 2.0 * q * (1.0 - (x * x.conj()).real) * y) / 4.0
    return np.broadcast_arrays(p + 0j, p2, p3)


def lz_expand(params: LZParams) -> np.ndarray:
    p1, p2, p3 = lz_coefficients(params.p, params.x, params.y)
    return np.array([complex(p1), complex(p2), complex(p3)])


def lz_recover(prefix: Sequence[complex]) -> LZParams:
    """Invert :func:`lz_expand` on a feasible prefix with real ``p_1``."""
    p1, p2, p3 = (complex(v) for v in np.asarray(prefix, dtype=np.complex128)[:3])
    if abs(p1.imag) > 1e-12:
        raise DomainError("the chart needs a real p_1")
    p = p1.real
    if abs(p) > 2.0 + 1e-12:
        raise FeasibilityError(f"|p_1| = {abs(p)!r} exceeds 2")
    if abs(abs(p) - 2.0) <= 1e-12:
        raise ChartDegenerateError("x and y are immaterial when |p_1| = 2")
    if not is_caratheodory_prefix([p1, p2, p3], 1e-9):
        raise FeasibilityError("prefix is not the start of a Caratheodory function")
    q = 4.0 - p * p
    x = (2.0 * p2 - p * p) / q
    if abs(x) < 1.0 - 1e-12:
        y = (4.0 * p3 - p ** 3 - 2.0 * q * p * x + p * q * x * x) / (2.0 * q * (1.0 - abs(x) ** 2))
        if abs(y) > 1.0:
            y /= abs(y)
        return LZParams(p, x, y, False)
    if abs(x) > 1.0:
        x /= abs(x)
    return LZParams(p, x, 0j, True)
