import math

import numpy as np
import pytest

from coeffgap.caratheodory import d2_extremal_kernel, herglotz_prefix, sample_measure_arrays
from coeffgap.errors import CoefficientIndexError, NormalizationError
from coeffgap.families import (
    SchlichtCoefficients,
    coeff_K,
    coeff_L,
    convex_coefficients,
    convex_from_kernel,
    family_K,
    family_L,
    starlike_coefficients,
    starlike_from_kernel,
)
from coeffgap.series import TruncatedSeries, alexander_transform, series_derivative, series_mul

P0 = TruncatedSeries([1.0] + [2.0] * 12)
ONE = TruncatedSeries([1.0] + [0.0] * 12)


def kernels(rng, count, order):
    g, ph = sample_measure_arrays(rng, count)
    return herglotz_prefix(g, ph, order)


def test_convex_examples():
    assert np.allclose(convex_from_kernel(P0).a, 1.0)
    a = convex_from_kernel(ONE).a
    assert a[0] == 1 and np.all(a[1:] == 0)
    a = convex_from_kernel(d2_extremal_kernel(1.0, 6)).a
    assert np.allclose(a[:4], [1, 0.5, 0, -0.25], atol=1e-15)


def test_starlike_examples():
    assert np.allclose(starlike_from_kernel(P0).a, np.arange(1, 13))
    a = starlike_from_kernel(ONE).a
    assert a[0] == 1 and np.all(a[1:] == 0)
    a = starlike_from_kernel(d2_extremal_kernel(math.sqrt(2), 10)).a
    n = np.arange(1, 11)
    assert np.allclose(a, np.sin(n * math.pi / 4) / math.sin(math.pi / 4), atol=1e-13)


def test_kernel_normalization_enforced():
    with pytest.raises(NormalizationError):
        convex_from_kernel(TruncatedSeries([2.0, 1.0]))
    with pytest.raises(NormalizationError):
        starlike_from_kernel(TruncatedSeries([0.0, 1.0]))


def test_schlicht_normalization_enforced():
    with pytest.raises(NormalizationError):
        SchlichtCoefficients.from_a([2.0, 1.0])
    assert np.array_equal(SchlichtCoefficients.from_a([1.0, 0.5]).coeffs, [0, 1, 0.5])


def test_low_order_closed_forms(rng):
    p = kernels(rng, 100, 4)
    a = convex_coefficients(p)
    p1, p2, p3 = p[:, 1], p[:, 2], p[:, 3]
    assert np.allclose(a[:, 2], p1 / 2, atol=1e-12, rtol=0)
    assert np.allclose(a[:, 3], (p1 ** 2 + p2) / 6, atol=1e-12, rtol=0)
    assert np.allclose(a[:, 4], (p1 ** 3 + 3 * p1 * p2 + 2 * p3) / 24, atol=1e-12, rtol=0)


def test_convex_satisfies_its_differential_equation(rng):
    # f' + z f'' = P f', checked with independent series arithmetic
    for p in kernels(rng, 20, 16):
        f = convex_from_kernel(TruncatedSeries(p))
        d1 = series_derivative(f)
        zd2 = TruncatedSeries(np.concatenate([[0], series_derivative(d1).coeffs]))
        lhs = d1 + zd2
        rhs = series_mul(TruncatedSeries(p), d1)
        assert lhs.truncate(14).allclose(rhs.truncate(14), atol=1e-11)


def test_starlike_satisfies_its_defining_relation(rng):
    # z f' = P f
    for p in kernels(rng, 20, 16):
        f = starlike_from_kernel(TruncatedSeries(p))
        zf1 = alexander_transform(f)
        assert zf1.allclose(series_mul(TruncatedSeries(p), f), atol=1e-10)


def test_d2_kernels_generate_closed_families(rng):
    for phi in rng.uniform(0, math.pi, 100):
        k = d2_extremal_kernel(2 * math.cos(phi), 20)
        assert convex_from_kernel(k).allclose(family_L(phi, 20), atol=1e-10)
        assert starlike_from_kernel(k).allclose(family_K(phi, 20), atol=1e-10)


def test_alexander_commutes_with_generation(rng):
    p = kernels(rng, 1000, 32)
    conv = convex_coefficients(p)
    star = starlike_coefficients(p)
    assert np.abs(np.arange(33) * conv - star).max() <= 1e-10
    f = convex_from_kernel(TruncatedSeries(p[0]))
    assert alexander_transform(f).allclose(starlike_from_kernel(TruncatedSeries(p[0])), atol=1e-10)


def test_convex_coefficients_bounded_and_theorem_a(rng):
    p = kernels(rng, 2000, 32)
    conv = np.abs(convex_coefficients(p))
    assert conv.max() <= 1 + 1e-9
    n = np.arange(33)
    t = n[2:] * conv[:, 2:] - n[1:-1] * conv[:, 1:-1]
    assert t.max() <= 1 + 1e-9 and t.min() >= -1 - 1e-9
    star = np.abs(starlike_coefficients(p))
    s = star[:, 2:] - star[:, 1:-1]
    assert s.max() <= 1 + 1e-9 and s.min() >= -1 - 1e-9


def test_coeff_L_examples():
    for n in range(1, 12):
        assert coeff_L(0.0, n) == 1.0
    assert coeff_L(math.pi / 3, 2) == pytest.approx(0.5, abs=1e-15)
    assert coeff_L(math.pi / 3, 3) == pytest.approx(0.0, abs=1e-15)
    assert coeff_L(math.pi / 3, 4) == pytest.approx(-0.25, abs=1e-15)
    assert coeff_L(math.pi / 4, 3) == pytest.approx(1 / 3, abs=1e-15)
    assert coeff_L(math.pi / 4, 4) == pytest.approx(0.0, abs=1e-15)


def test_coeff_K_examples():
    for n in range(1, 12):
        assert coeff_K(0.0, n) == n
    expected = [1, 0, -1, 0, 1, 0, -1, 0]
    assert np.allclose([coeff_K(math.pi / 2, n) for n in range(1, 9)], expected, atol=1e-15)


def test_limits_at_pi():
    for n in range(1, 10):
        assert coeff_L(math.pi, n) == (-1) ** (n + 1)
        assert coeff_K(math.pi, n) == n * (-1) ** (n + 1)
    # continuity of the limit branch at the cutoff
    assert coeff_L(2e-9, 7) == pytest.approx(coeff_L(0.0, 7), abs=1e-12)


def test_K_is_n_times_L(rng):
    for phi in rng.uniform(-10, 10, 50):
        for n in range(1, 21):
            assert coeff_K(phi, n) == pytest.approx(n * coeff_L(phi, n), abs=1e-12)


@pytest.mark.parametrize("fn", [coeff_L, coeff_K])
def test_index_error(fn):
    with pytest.raises(CoefficientIndexError):
        fn(0.3, 0)
    with pytest.raises(IndexError):
        fn(0.3, -2)
