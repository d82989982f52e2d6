"""Deterministic grid-with-refinement maximizers for the coefficient gaps.

Every search evaluates a uniform grid, keeps the best point, and re-grids a
window ten times narrower around it.  Ties are broken towards the smallest
parameter tuple, which is what ``np.argmax`` on ascending axes already does.

Searches over convex functions with ``f''(0) = p`` use the (p, x, y) chart
of the first three kernel coefficients.  For index ``n >= 4`` the chart no
longer reaches the coefficients involved, and :func:`maximize_gap_herglotz`
falls back to a seeded random search over atomic Herglotz measures; its
results are lower bounds only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .caratheodory import herglotz_prefix, lz_coefficients, wrap_angle
from .errors import DomainError, EvaluationError
from .families import convex_coefficients
from .functionals import GapKind, gap_values, psi_n

TWO_PI = 2.0 * math.pi

# defaults for the chart searches
P_GRID = 401
R_GRID = 101
THETA_GRID = 256
REFINEMENTS = 3
# relative spread below which grid values count as equal
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class OptimumReport:
    value: float
    argument: dict
    grid_points_evaluated: int
    refinement_levels: int
    lower_bound_only: bool = False
    method: str = ""
    bracket: tuple | None = None
    ties: tuple = ()
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "value": self.value,
            "argument": dict(self.argument),
            "grid_points_evaluated": self.grid_points_evaluated,
            "refinement_levels": self.refinement_levels,
            "lower_bound_only": self.lower_bound_only,
            "method": self.method,
        }
        if self.bracket is not None:
            out["bracket"] = list(self.bracket)
        if self.ties:
            out["ties"] = [dict(t) for t in self.ties]
        if self.details:
            out["details"] = dict(self.details)
        return out


@dataclass(frozen=True)
class _Axis:
    name: str
    lo: float
    hi: float
    points: int
    periodic: bool = False


def _grid_search(evaluate, axes: Sequence[_Axis], refinements: int, start=None,
                 spans=None, shrink=10.0, tie_rtol=TIE_RTOL):
    """Core refinement loop.  ``evaluate(*meshes)`` returns an array of values.

    With ``start`` (a point and its value) the coarse level is skipped and
    refinement begins around that point at level 1.  Refinement level ``k``
    spans ``spans[i] / shrink**k`` on axis ``i`` (default: the axis length).
    On the coarse level, values within ``tie_rtol`` of the grid maximum count
    as ties and the first of them in grid order wins; this picks the basin.
    Refinement levels take the exact maximum.
    """
    if spans is None:
        spans = [ax.hi - ax.lo for ax in axes]
    best_val, best_arg = -math.inf, None
    first = 0
    if start is not None:
        best_arg, best_val = list(start[0]), float(start[1])
        first = 1
    count = 0
    for level in range(first, refinements + 1):
        grids = []
        for i, ax in enumerate(axes):
            if level == 0:
                if ax.periodic:
                    g = ax.lo + (ax.hi - ax.lo) * np.arange(ax.points) / ax.points
                else:
                    g = np.linspace(ax.lo, ax.hi, ax.points)
            else:
                half = 0.5 * spans[i] / shrink ** level
                a, b = best_arg[i] - half, best_arg[i] + half
                if not ax.periodic:
                    a, b = max(a, ax.lo), min(b, ax.hi)
                g = np.linspace(a, b, ax.points)
            grids.append(g)
        meshes = np.meshgrid(*grids, indexing="ij")
        vals = np.asarray(evaluate(*meshes), dtype=float)
        count += vals.size
        bad = ~np.isfinite(vals)
        if bad.any():
            idx = np.unravel_index(int(np.argmax(bad)), vals.shape)
            arg = {ax.name: float(grids[i][idx[i]]) for i, ax in enumerate(axes)}
            raise EvaluationError(f"objective is not finite at {arg}", argument=arg)
        top = vals.max()
        rtol = tie_rtol if level == 0 else 0.0
        near = vals >= top - rtol * max(1.0, abs(top))
        idx = np.unravel_index(int(np.argmax(near)), vals.shape)
        if vals[idx] > best_val:
            best_val = float(vals[idx])
            best_arg = [float(grids[i][idx[i]]) for i in range(len(axes))]
    return best_val, best_arg, count


def maximize_1d(f: Callable, lo: float, hi: float, grid: int = 10_000,
                refinements: int = 4, vectorized: bool = False) -> OptimumReport:
    """Maximize a real function of one variable on ``[lo, hi]``.

    ``vectorized=True`` passes whole grids to ``f`` at once.
    """
    if not lo < hi:
        raise DomainError("need lo < hi")
    if grid < 16 or refinements < 0:
        raise DomainError("need grid >= 16 and refinements >= 0")

    def evaluate(x):
        if vectorized:
            return f(x)
        return np.array([f(float(t)) for t in x])

    value, arg, count = _grid_search(evaluate, [_Axis("x", lo, hi, grid)], refinements)
    return OptimumReport(
        value=float(f(arg[0]) if not vectorized else np.asarray(f(np.array([arg[0]])))[0]),
        argument={"x": arg[0]},
        grid_points_evaluated=count,
        refinement_levels=refinements,
        method="grid-1d",
    )


# -- (p, x, y) chart pipeline -------------------------------------------------

def _chart_convex(p, x, y):
    p1, p2, p3 = lz_coefficients(p, x, y)
    # a_4 needs p_1..p_3 only; the trailing slot is a placeholder for p_4
    prefix = np.stack([np.ones_like(p1), p1, p2, p3, np.zeros_like(p1)], axis=-1)
    return convex_coefficients(prefix)


def evaluate_kp(kind: GapKind, p, r, theta, s=0.0, tau=0.0):
    """Gap of the convex function whose kernel has chart point
    ``(p, r e^{i theta}, s e^{i tau})``.  Vectorized over all arguments."""
    x = np.asarray(r) * np.exp(1j * np.asarray(theta))
    y = np.asarray(s) * np.exp(1j * np.asarray(tau))
    return gap_values(_chart_convex(p, x, y), kind)


def _unit(w):
    mag = np.abs(w)
    return np.where(mag > 0, w / np.where(mag > 0, mag, 1.0), 1.0 + 0j)


def _best_y(kind: GapKind, p, x):
    """Optimal ``y`` for ``n = 3`` and the resulting coefficient array.

    ``a_4`` is affine in ``y`` while ``a_2, a_3`` do not depend on it, so the
    maximum over the closed disk is attained in closed form.
    """
    base = _chart_convex(p, x, 0.0)
    slope = _chart_convex(p, x, 1.0)[..., 4] - base[..., 4]
    w = base[..., 4] - base[..., 3] if kind.kind == "diff" else base[..., 4]
    mag = np.abs(slope)
    live = mag > 0
    align = _unit(w) * _unit(np.conj(slope))
    if kind.kind == "down":
        cancel = np.abs(w) <= mag
        y = np.where(cancel & live, -w / np.where(live, slope, 1.0), -align)
    else:
        y = align
    y = np.where(live, y, 0.0)
    y = np.where(np.abs(y) > 1.0, _unit(y), y)
    base[..., 4] = base[..., 4] + slope * y
    return y, base


def _check_kind_p(kind: GapKind, p: float):
    if kind.n not in (2, 3):
        raise DomainError("chart searches cover n = 2 and n = 3 only")
    if not 0.0 <= p <= 2.0:
        raise DomainError(f"p = {p!r} outside [0, 2]")


def maximize_gap_kp(kind: GapKind, p: float, r_grid: int = R_GRID,
                    theta_grid: int = THETA_GRID, refinements: int = REFINEMENTS,
                    inner: str = "exact", s_grid: int = 21, tau_grid: int = 64) -> OptimumReport:
    """Maximize ``kind`` over convex functions with ``f''(0) = p``.

    ``x = r e^{i theta}`` is always gridded.  For ``n = 3`` the ``y`` disk is
    either maximized exactly (``inner="exact"``) or gridded as
    ``s e^{i tau}`` (``inner="grid"``).
    """
    _check_kind_p(kind, p)
    axes = [_Axis("r", 0.0, 1.0, r_grid), _Axis("theta", 0.0, TWO_PI, theta_grid, periodic=True)]
    if kind.n == 2:
        def evaluate(r, th):
            return evaluate_kp(kind, p, r, th)
    elif inner == "exact":
        def evaluate(r, th):
            return gap_values(_best_y(kind, p, r * np.exp(1j * th))[1], kind)
    elif inner == "grid":
        axes += [_Axis("s", 0.0, 1.0, s_grid), _Axis("tau", 0.0, TWO_PI, tau_grid, periodic=True)]

        def evaluate(r, th, s, tau):
            return evaluate_kp(kind, p, r, th, s, tau)
    else:
        raise DomainError(f"unknown inner mode {inner!r}")

    _, arg, count = _grid_search(evaluate, axes, refinements)
    argument = {"p": float(p), "r": arg[0], "theta": float(np.mod(arg[1], TWO_PI))}
    if kind.n == 3:
        if inner == "exact":
            y = complex(_best_y(kind, p, arg[0] * np.exp(1j * arg[1]))[0])
            s, tau = abs(y), (float(np.mod(np.angle(y), TWO_PI)) if y != 0 else 0.0)
        else:
            s, tau = arg[2], float(np.mod(arg[3], TWO_PI))
        argument.update(s=s, tau=tau)
    value = float(evaluate_kp(kind, **argument))
    return OptimumReport(value, argument, count, refinements, method=f"lz-chart/{inner}")


def _local_maxima(vals: np.ndarray) -> list[int]:
    """Indices of local maxima (plateaus collapse to their first index),
    ordered by decreasing value then increasing index."""
    n = vals.size
    peaks = []
    i = 0
    while i < n:
        j = i
        while j + 1 < n and vals[j + 1] == vals[i]:
            j += 1
        left_ok = i == 0 or vals[i - 1] < vals[i]
        right_ok = j == n - 1 or vals[j + 1] < vals[i]
        if left_ok and right_ok:
            peaks.append(i)
        i = j + 1
    return sorted(peaks, key=lambda k: (-vals[k], k))


def maximize_gap_sweep(kind: GapKind, p_grid: int = P_GRID, r_grid: int = R_GRID,
                       theta_grid: int = THETA_GRID, refinements: int = REFINEMENTS,
                       p_refine_grid: int = 11, p_refinements: int = 5,
                       coarse_refinements: int = 0, candidates: int = 3,
                       tie_tol: float = 1e-6) -> OptimumReport:
    """Maximize ``kind`` over all ``p`` in [0, 2] and the chart at each ``p``.

    A coarse profile over ``p_grid`` values of ``p`` is computed first; the
    best ``candidates`` local maxima of that profile are then refined.
    Refined maxima within ``tie_tol`` of the winner but at a different ``p``
    are reported in ``ties``.
    """
    _check_kind_p(kind, 0.0)
    ps = np.linspace(0.0, 2.0, p_grid)
    coarse_step = 2.0 / (p_grid - 1)
    count = 0
    coarse = []
    for p in ps:
        rep = maximize_gap_kp(kind, float(p), r_grid, theta_grid, coarse_refinements)
        coarse.append(rep.value)
        count += rep.grid_points_evaluated
    coarse = np.array(coarse)

    inner = {}

    def profile(pv):
        out = []
        for p in np.ravel(pv):
            p = float(p)
            if p not in inner:
                inner[p] = maximize_gap_kp(kind, p, r_grid, theta_grid, refinements)
            out.append(inner[p].value)
        return np.array(out).reshape(np.shape(pv))

    refined = []
    for i in _local_maxima(coarse)[:candidates]:
        start = ([float(ps[i])], float(profile(np.array([ps[i]]))[0]))
        value, arg, _ = _grid_search(
            profile, [_Axis("p", 0.0, 2.0, p_refine_grid)], p_refinements, start=start,
            spans=[40.0 * coarse_step])
        refined.append(inner[arg[0]])
    count += sum(rep.grid_points_evaluated for rep in inner.values())

    refined.sort(key=lambda rep: (-rep.value, rep.argument["p"]))
    best = refined[0]
    sep = 4.0 * coarse_step
    ties = tuple(
        {"value": rep.value, "argument": dict(rep.argument)}
        for rep in refined[1:]
        if rep.value >= best.value - tie_tol and abs(rep.argument["p"] - best.argument["p"]) > sep
    )
    return OptimumReport(
        value=best.value,
        argument=dict(best.argument),
        grid_points_evaluated=count,
        refinement_levels=p_refinements,
        method="lz-sweep",
        ties=ties,
    )


# -- random search over atomic Herglotz measures --------------------------------

def _rng(seed: int, stream: int) -> np.random.Generator:
    # counter-based generator; one independent stream per restart
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row of ``v`` onto the probability simplex."""
    v = np.asarray(v, dtype=float)
    k = v.shape[-1]
    u = -np.sort(-v, axis=-1)
    css = np.cumsum(u, axis=-1) - 1.0
    idx = np.arange(1, k + 1)
    cond = u - css / idx > 0
    rho = k - 1 - np.argmax(cond[..., ::-1], axis=-1)
    tau = np.take_along_axis(css, rho[..., None], axis=-1) / (rho[..., None] + 1.0)
    w = np.maximum(v - tau, 0.0)
    return w / w.sum(axis=-1, keepdims=True)


def evaluate_herglotz(kind: GapKind, gammas, phis):
    """Gap of the convex function generated by the given atomic measure(s)."""
    a = convex_coefficients(herglotz_prefix(gammas, phis, kind.n + 1))
    return gap_values(a, kind)


def maximize_gap_herglotz(kind: GapKind, atoms: int | None = None, restarts: int = 64,
                          local_steps: int = 40, seed: int = 0,
                          step: float = 0.25) -> OptimumReport:
    """Seeded random search with coordinatewise hill climbing.

    Each restart draws its starting measure from its own counter-based
    stream, so results do not depend on how restarts are batched.
    """
    atoms = kind.n if atoms is None else atoms
    if atoms < 1 or restarts < 1:
        raise DomainError("need atoms >= 1 and restarts >= 1")
    g = np.empty((restarts, atoms))
    ph = np.empty((restarts, atoms))
    for i in range(restarts):
        rng = _rng(seed, i)
        g[i] = rng.dirichlet(np.ones(atoms))
        ph[i] = rng.uniform(-np.pi, np.pi, size=atoms)
    val = evaluate_herglotz(kind, g, ph)
    count = val.size
    dg = np.full(restarts, step)
    dphi = np.full(restarts, step)
    for _ in range(local_steps):
        moved = np.zeros(restarts, dtype=bool)
        for j in range(2 * atoms):
            for sign in (1.0, -1.0):
                g2, ph2 = g.copy(), ph.copy()
                if j < atoms:
                    g2[:, j] += sign * dg
                    g2 = project_simplex(g2)
                else:
                    ph2[:, j - atoms] += sign * dphi
                v2 = evaluate_herglotz(kind, g2, ph2)
                count += v2.size
                better = v2 > val
                g[better], ph[better], val[better] = g2[better], ph2[better], v2[better]
                moved |= better
        dg = np.where(moved, dg, dg / 2)
        dphi = np.where(moved, dphi, dphi / 2)

    ph = np.atleast_2d(wrap_angle(ph))
    val = evaluate_herglotz(kind, g, ph)
    top = val == val.max()
    order = np.lexsort(tuple(np.concatenate([g, ph], axis=1).T[::-1]))
    winner = next(i for i in order if top[i])
    argument = {f"gamma_{j}": float(g[winner, j]) for j in range(atoms)}
    argument.update({f"phi_{j}": float(ph[winner, j]) for j in range(atoms)})
    return OptimumReport(
        value=float(val[winner]),
        argument=argument,
        grid_points_evaluated=int(count),
        refinement_levels=local_steps,
        lower_bound_only=True,
        method="herglotz",
        details={"restarts": restarts, "atoms": atoms, "seed": seed},
    )


def herglotz_argument_arrays(argument: dict) -> tuple[np.ndarray, np.ndarray]:
    k = sum(1 for key in argument if key.startswith("gamma_"))
    g = np.array([argument[f"gamma_{j}"] for j in range(k)])
    ph = np.array([argument[f"phi_{j}"] for j in range(k)])
    return g, ph


def estimate_vn(n: int, scan_grid: int = 10_000, atoms: int | None = None,
                restarts: int = 64, seed: int = 0, local_steps: int = 40,
                scan_refinements: int = 4) -> OptimumReport:
    """Best known value of ``max |a_n| - |a_{n+1}|`` over convex functions.

    Combines the closed-family scan ``max Psi_n`` with the Herglotz search.
    The value is exact for ``n <= 3``; for ``n >= 4`` it is a lower bound and
    the report carries the proven bracket ``(1/n, 2/(n+1))``.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    kind = GapKind("down", n)
    scan = maximize_1d(lambda phi: psi_n(n, phi), 0.0, math.pi, scan_grid,
                       scan_refinements, vectorized=True)
    search = maximize_gap_herglotz(kind, atoms, restarts, local_steps, seed)
    details = {"psi_scan": scan.value, "psi_scan_phi": scan.argument["x"],
               "herglotz": search.value}
    if search.value > scan.value:
        best, argument = search, dict(search.argument)
    else:
        best, argument = scan, {"phi": scan.argument["x"]}
    return OptimumReport(
        value=best.value,
        argument=argument,
        grid_points_evaluated=scan.grid_points_evaluated + search.grid_points_evaluated,
        refinement_levels=scan_refinements,
        lower_bound_only=n >= 4,
        method=best.method,
        bracket=(1.0 / n, 2.0 / (n + 1)) if n >= 4 else None,
        details=details,
    )
