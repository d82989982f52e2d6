"""Successive coefficients of convex univalent functions, computed and checked.

Modules: :mod:`series` (truncated power series), :mod:`caratheodory`
(kernels with positive real part), :mod:`families` (convex and starlike
generators, ``L_phi`` and ``K_phi``), :mod:`functionals` (gaps and their
bounds), :mod:`optimize` (grid and random searches), :mod:`cli`.
"""

from .caratheodory import (
    HerglotzMeasure,
    LZParams,
    d2_extremal_kernel,
    herglotz_coefficients,
    is_caratheodory_prefix,
    lz_expand,
    lz_recover,
    toeplitz_determinant,
)
from .families import (
    SchlichtCoefficients,
    coeff_K,
    coeff_L,
    convex_from_kernel,
    starlike_from_kernel,
)
from .functionals import (
    GapKind,
    a3_a2_bound,
    gap,
    h_poly,
    hayman_constants,
    lemma_f_margin,
    psi_bound,
    psi_n,
    robertson_ratio,
    theorem_a_gap,
    y_bruteforce,
    y_closed,
)
from .optimize import (
    OptimumReport,
    estimate_vn,
    maximize_1d,
    maximize_gap_herglotz,
    maximize_gap_kp,
    maximize_gap_sweep,
)
from .series import (
    TruncatedSeries,
    alexander_transform,
    series_add,
    series_derivative,
    series_mul,
)

__version__ = "0.1.0"
