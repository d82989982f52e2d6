"""Scalar functionals of coefficient sequences and their closed-form bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.optimize import bisect

from .errors import CoefficientIndexError, DomainError, LengthError
from .families import coeff_L
from .series import TruncatedSeries

GAP_KINDS = ("up", "down", "diff")
PSI_SPLIT = 8.0 / 7.0


@dataclass(frozen=True)
class GapKind:
    """Which successive-coefficient functional to evaluate at index ``n``.

    * ``up``   -- ``|a_{n+1}| - |a_n|``
    * ``down`` -- ``|a_n| - |a_{n+1}|``
    * ``diff`` -- ``|a_{n+1} - a_n|``
    """

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in GAP_KINDS:
            raise DomainError(f"unknown gap kind {self.kind!r}; expected one of {GAP_KINDS}")
        if self.n < 2:
            raise CoefficientIndexError("gap index n must be >= 2")


def gap_values(a, kind: GapKind) -> np.ndarray:
    """Vectorized gap over coefficient arrays with ``a[..., n] == a_n``."""
    a = np.asarray(a)
    n = kind.n
    if a.shape[-1] < n + 2:
        raise LengthError(f"gap at n={n} needs a_{n + 1}")
    lo, hi = a[..., n], a[..., n + 1]
    if kind.kind == "up":
        return np.abs(hi) - np.abs(lo)
    if kind.kind == "down":
        return np.abs(lo) - np.abs(hi)
    return np.abs(hi - lo)


def gap(f: TruncatedSeries, kind: GapKind) -> float:
    return float(gap_values(f.coeffs, kind))


def theorem_a_gap(f: TruncatedSeries, n: int) -> float:
    """``(n+1)|a_{n+1}| - n|a_n|``; lies in [-1, 1] for every convex ``f``."""
    if f.order < n + 1:
        raise LengthError(f"need a_{n + 1}, series has order {f.order}")
    return float((n + 1) * abs(f.coeffs[n + 1]) - n * abs(f.coeffs[n]))


# -- Y(a, b, c) = max over the closed disk of |a + b z + c z^2| + 1 - |z|^2 --

def y_closed(a: float, b: float, c: float) -> float:
    if a < 0 or c < 0:
        raise DomainError("y_closed needs a >= 0 and c >= 0")
    if abs(b) >= 2.0 * (1.0 - c):
        return a + abs(b) + c
    return 1.0 + a + b * b / (4.0 * (1.0 - c))


@lru_cache(maxsize=8)
def _polar_grid(radial: int, angular: int):
    r = np.linspace(0.0, 1.0, radial)
    theta = 2.0 * np.pi * np.arange(angular) / angular
    z = r[:, None] * np.exp(1j * theta)[None, :]
    z.setflags(write=False)
    lift = 1.0 - r * r
    return z, z * z, lift[:, None]


def y_bruteforce(a: float, b: float, c: float, radial: int = 512, angular: int = 1024) -> float:
    """Grid maximum of ``|a + b z + c z^2| + 1 - |z|^2`` over a polar grid.

    The grid includes the centre and the boundary circle.
    """
    if radial < 64 or angular < 64:
        raise DomainError("polar grid needs at least 64 points per axis")
    z, z2, lift = _polar_grid(radial, angular)
    return float(np.max(np.abs(a + b * z + c * z2) + lift))


# -- bounds over K(p) ---------------------------------------------------------

def _check_p(p: float):
    if not 0.0 <= p <= 2.0:
        raise DomainError(f"p = {p!r} outside [0, 2]")


def a3_a2_bound(p: float) -> float:
    """Sharp bound of ``|a_3 - a_2|`` over convex ``f`` with ``f''(0) = p``."""
    _check_p(p)
    return (2.0 * p + 1.0) * (2.0 - p) / 6.0


def psi_bound(p: float) -> float:
    """Sharp bound of ``|a_4 - a_3|`` over convex ``f`` with ``f''(0) = p``."""
    _check_p(p)
    if p < PSI_SPLIT:
        return (p ** 3 + 50.0 * p * p - 64.0 * p + 64.0) / 192.0
    return (2.0 - p) * (3.0 * p * p + 2.0 * p - 2.0) / 12.0


def psi_n(n: int, phi):
    """``|a_n(L_phi)| - |a_{n+1}(L_phi)|``; equals ``1/n`` at ``phi = pi/(n+1)``."""
    if n < 2:
        raise CoefficientIndexError("psi_n needs n >= 2")
    return np.abs(coeff_L(phi, n)) - np.abs(coeff_L(phi, n + 1))


def robertson_ratio(phi: float, n: int) -> float:
    """``(a_{n+1} - a_n) / (a_2 - 1)`` for ``L_phi``; tends to (2n+1)/3 as phi -> 0."""
    if n < 2:
        raise CoefficientIndexError("robertson_ratio needs n >= 2")
    den = coeff_L(phi, 2) - 1.0
    if abs(den) < 1e-12:
        raise DomainError("ratio is 0/0 when a_2(L_phi) = 1")
    return (coeff_L(phi, n + 1) - coeff_L(phi, n)) / den


# -- disk margin F(-|z|) - F(z) ---------------------------------------------

P_F_LO = 4.0 / 3.0
P_F_HI = math.sqrt(2.0)


def _lemma_f(p, z):
    q = 4.0 - p * p
    u = 6.0 * p * p / q
    a = 3.0 * p ** 3 / q
    b = 2.5 * p
    c = 0.5 * p
    return np.abs(u + 2.0 * z) - np.abs(a + b * z - c * z * z)


def lemma_f_margin(p, z):
    """``F(-|z|) - F(z)`` for ``F(z) = |u + 2z| - |a + bz - cz^2|``.

    The coefficients depend on ``p`` in ``[4/3, sqrt 2]``; the margin is
    non-negative on the closed disk.  Accepts arrays.
    """
    p_arr = np.asarray(p, dtype=float)
    z_arr = np.asarray(z, dtype=np.complex128)
    if np.any(p_arr < P_F_LO - 1e-12) or np.any(p_arr > P_F_HI + 1e-12):
        raise DomainError("lemma_f_margin needs 4/3 <= p <= sqrt(2)")
    if np.any(np.abs(z_arr) > 1.0 + 1e-12):
        raise DomainError("lemma_f_margin needs |z| <= 1")
    out = _lemma_f(p_arr, -np.abs(z_arr) + 0j) - _lemma_f(p_arr, z_arr)
    return float(out) if np.ndim(out) == 0 else out


def h_poly(x):
    return 1.0 - x - np.cos(np.pi * x)


class HaymanConstants(NamedTuple):
    lambda0: float
    s_bound: float


def hayman_constants() -> HaymanConstants:
    """Root of ``4 l e^{-l} = 1`` in (0, 1) and the sharp ``|a_3| - |a_2|`` bound."""
    lam = bisect(lambda t: 4.0 * t * math.exp(-t) - 1.0, 0.0, 1.0, xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=200)
    e = math.exp(-lam)
    return HaymanConstants(lam, 0.75 + e * (2.0 * e - 1.0))
