"""Normalized convex and starlike functions generated from Caratheodory kernels.

For a kernel ``P = 1 + p_1 z + ...`` the convex function ``f`` solves
``f' + z f'' = P f'`` and the starlike function solves ``z f' = P f``.
Matching coefficients of ``z^(n-1)`` (resp. ``z^n``) gives

    a_n = sum_{k<n} k a_k p_{n-k} / (n^2 - n)      (convex)
    a_n = sum_{k<n}   a_k p_{n-k} / (n - 1)        (starlike)

with ``a_1 = 1``.  The closed families ``L_phi`` and ``K_phi = z L_phi'`` are
the images of the two-atom kernel with atoms at ``exp(+-i phi)``.
"""

from __future__ import annotations

import numpy as np

from .errors import CoefficientIndexError, NormalizationError
from .series import TruncatedSeries

SIN_CUTOFF = 1e-9


class SchlichtCoefficients(TruncatedSeries):
    """Series of ``f = z + a_2 z^2 + ... + a_N z^N``; ``self[n]`` is ``a_n``."""

    def __post_init__(self):
        super().__post_init__()
        c = self.coeffs
        if c.size < 2 or abs(c[0]) > 1e-12 or abs(c[1] - 1) > 1e-12:
            raise NormalizationError("expected c_0 = 0 and c_1 = 1")

    @classmethod
    def from_a(cls, a) -> "SchlichtCoefficients":
        """Build from ``a_1 .. a_N`` (``a_1`` must be 1)."""
        return cls(np.concatenate([[0.0], np.asarray(a, dtype=np.complex128)]))

    @property
    def a(self) -> np.ndarray:
        """``a_1 .. a_N``."""
        return self.coeffs[1:]


def _check_kernel(p: np.ndarray):
    if np.any(np.abs(p[..., 0] - 1) > 1e-12):
        raise NormalizationError("kernel must satisfy P(0) = 1")


def convex_coefficients(p) -> np.ndarray:
    """Batched convex recursion along the last axis (``p[..., 0] == 1``)."""
    p = np.asarray(p, dtype=np.complex128)
    _check_kernel(p)
    a = np.zeros_like(p)
    if p.shape[-1] < 2:
        return a
    a[..., 1] = 1.0
    for n in range(2, p.shape[-1]):
        k = np.arange(1, n)
        a[..., n] = np.sum(k * a[..., 1:n] * p[..., n - 1:0:-1], axis=-1) / (n * n - n)
    return a


def starlike_coefficients(p) -> np.ndarray:
    """Batched starlike recursion along the last axis."""
    p = np.asarray(p, dtype=np.complex128)
    _check_kernel(p)
    a = np.zeros_like(p)
    if p.shape[-1] < 2:
        return a
    a[..., 1] = 1.0
    for n in range(2, p.shape[-1]):
        a[..., n] = np.sum(a[..., 1:n] * p[..., n - 1:0:-1], axis=-1) / (n - 1)
    return a


def _kernel_prefix(P: TruncatedSeries, order: int | None) -> np.ndarray:
    if order is None:
        return P.coeffs
    return P.coeffs[: min(order, P.order) + 1]


def convex_from_kernel(P: TruncatedSeries, order: int | None = None) -> SchlichtCoefficients:
    p = _kernel_prefix(P, order)
    if p.size < 2:
        raise NormalizationError("kernel must have order >= 1")
    return SchlichtCoefficients(convex_coefficients(p))


def starlike_from_kernel(P: TruncatedSeries, order: int | None = None) -> SchlichtCoefficients:
    p = _kernel_prefix(P, order)
    if p.size < 2:
        raise NormalizationError("kernel must have order >= 1")
    return SchlichtCoefficients(starlike_coefficients(p))


def _family(phi, n, scale_by_n: bool):
    if np.any(np.asarray(n) <= 0):
        raise CoefficientIndexError("coefficient index must be >= 1")
    phi = np.asarray(phi, dtype=float)
    n = np.asarray(n)
    s = np.sin(phi)
    small = np.abs(s) < SIN_CUTOFF
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sin(n * phi) / np.where(small, 1.0, s)
    # limits at phi = 0 and phi = pi (mod 2 pi)
    limit = np.where(np.cos(phi) > 0, 1.0, np.where(n % 2 == 1, 1.0, -1.0)) * n
    out = np.where(small, limit, ratio)
    if not scale_by_n:
        out = out / n
    return float(out) if out.ndim == 0 else out


def coeff_L(phi, n):
    """``a_n(L_phi) = sin(n phi) / (n sin phi)``, with limits at sin phi = 0."""
    return _family(phi, n, scale_by_n=False)


def coeff_K(phi, n):
    """``a_n(K_phi) = sin(n phi) / sin phi``, with limits at sin phi = 0."""
    return _family(phi, n, scale_by_n=True)


def family_L(phi: float, order: int = 32) -> SchlichtCoefficients:
    n = np.arange(1, order + 1)
    return SchlichtCoefficients.from_a(coeff_L(phi, n))


def family_K(phi: float, order: int = 32) -> SchlichtCoefficients:
    n = np.arange(1, order + 1)
    return SchlichtCoefficients.from_a(coeff_K(phi, n))
