"""Truncated power series with complex coefficients.

A :class:`TruncatedSeries` of order ``N`` holds ``c_0 .. c_N``; higher
coefficients are unknown rather than zero, so binary operations truncate to
the shorter operand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import CoeffGapError, DegenerateOrderError, NormalizationError

DEFAULT_ORDER = 32


def _as_coeffs(values) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128).reshape(-1)
    if arr.size == 0:
        raise DegenerateOrderError("a series needs at least one coefficient")
    if not np.all(np.isfinite(arr)):
        raise CoeffGapError("series coefficients must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Coefficients ``c_0 .. c_N`` of an analytic germ at the origin."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    @classmethod
    def from_coeffs(cls, values: Iterable[complex], order: int | None = None):
        """Build a series, zero-padding or truncating to ``order`` if given."""
        arr = np.array(list(values), dtype=np.complex128)
        if order is not None:
            out = np.zeros(order + 1, dtype=np.complex128)
            k = min(order + 1, arr.size)
            out[:k] = arr[:k]
            arr = out
        return cls(arr)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise DegenerateOrderError(
                f"cannot extend order {self.order} series to order {order}")
        return TruncatedSeries(self.coeffs[: order + 1])

    def allclose(self, other: "TruncatedSeries", atol: float = 1e-12) -> bool:
        n = min(self.order, other.order) + 1
        return bool(np.allclose(self.coeffs[:n], other.coeffs[:n], rtol=0, atol=atol))

    def __add__(self, other):
        return series_add(self, other)

    def __mul__(self, other):
        return series_mul(self, other)

    def __repr__(self):
        return f"TruncatedSeries(order={self.order}, coeffs={self.coeffs.tolist()!r})"


def series_add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    n = min(f.order, g.order) + 1
    return TruncatedSeries(f.coeffs[:n] + g.coeffs[:n])


def cauchy_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cauchy product along the last axis, truncated to the shorter input.

    Broadcasts over leading axes, which the optimizers rely on.
    """
    n = min(a.shape[-1], b.shape[-1])
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (n,)
    out = np.zeros(shape, dtype=np.result_type(a, b))
    for k in range(n):
        out[..., k:] += a[..., k : k + 1] * b[..., : n - k]
    return out


def series_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(cauchy_product(f.coeffs, g.coeffs))


def series_derivative(f: TruncatedSeries) -> TruncatedSeries:
    """Termwise derivative; the result has order ``N - 1``."""
    if f.order < 1:
        raise DegenerateOrderError("derivative needs a series of order >= 1")
    n = np.arange(1, f.order + 1)
    return TruncatedSeries(n * f.coeffs[1:])


def alexander_transform(f: TruncatedSeries, tol: float = 1e-12) -> TruncatedSeries:
    """Map ``f = z + a_2 z^2 + ...`` to ``z f'(z) = z + 2 a_2 z^2 + ...``."""
    if f.order < 1 or abs(f.coeffs[0]) > tol or abs(f.coeffs[1] - 1) > tol:
        raise NormalizationError("alexander_transform needs f(0) = 0 and f'(0) = 1")
    return TruncatedSeries(np.arange(f.order + 1) * f.coeffs)
