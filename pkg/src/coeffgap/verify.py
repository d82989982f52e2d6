"""Numerical verification suites behind ``coeffgap verify``.

Each suite returns a :class:`VerificationReport`.  ``samples`` scales the
randomized parts; ``seed`` makes them reproducible.
"""

from __future__ import annotations

import math

import numpy as np

from .caratheodory import (
    LZParams,
    d2_extremal_kernel,
    feasibility_margins,
    herglotz_prefix,
    lz_expand,
    lz_recover,
    sample_measure_arrays,
    toeplitz_determinant,
)
from .families import coeff_L, convex_coefficients, family_L, starlike_coefficients
from .functionals import (
    GapKind,
    a3_a2_bound,
    gap,
    h_poly,
    hayman_constants,
    lemma_f_margin,
    psi_bound,
    robertson_ratio,
    y_bruteforce,
    y_closed,
)
from .optimize import maximize_gap_herglotz, maximize_gap_kp, maximize_gap_sweep
from .report import VerificationReport

TARGETS = ("thm1", "thm2", "thmA", "thmB", "lemY", "lemF", "lemLZ", "constants")

SQRT2 = math.sqrt(2.0)
PSI_PEAK_P = (4.0 + math.sqrt(70.0)) / 9.0
PSI_PEAK = (35.0 * math.sqrt(70.0) - 49.0) / 729.0


def _sampled_functions(samples, seed, order):
    rng = np.random.default_rng(seed)
    g, ph = sample_measure_arrays(rng, samples)
    p = herglotz_prefix(g, ph, order)
    return convex_coefficients(p), starlike_coefficients(p)


def _sweep_checks(rep, kind, expected, p_star, p_grid, label):
    sweep = maximize_gap_sweep(kind, p_grid=p_grid)
    rep.close(f"{label} value", expected, sweep.value, 1e-6)
    rep.at_most(f"{label} value not above the sharp bound", expected, sweep.value, 1e-9)
    maximizers = [sweep.argument] + [t["argument"] for t in sweep.ties]
    hit = min(maximizers, key=lambda a: abs(a["p"] - p_star))
    rep.close(f"{label} maximizing p", p_star, hit["p"], 1e-4)
    return sweep, hit


def suite_thm1(samples=200, seed=0, p_grid=401):
    rep = VerificationReport("verify", {"target": "thm1", "samples": samples, "seed": seed})
    for n in range(2, 11):
        f = family_L(math.pi / n, n + 2)
        rep.close(f"gap(L_pi/{n}, up, {n}) = 1/{n + 1}", 1.0 / (n + 1), gap(f, GapKind("up", n)), 1e-12)
        best = maximize_gap_herglotz(GapKind("up", n), restarts=samples, local_steps=10, seed=seed)
        rep.at_most(f"Herglotz search up n={n} below 1/{n + 1}", 1.0 / (n + 1), best.value, 1e-9)

    _, hit = _sweep_checks(rep, GapKind("down", 2), 0.5, 1.0, p_grid, "V_2")
    rep.close("V_2 maximizing x = -1", 0.0, abs(hit["r"] * np.exp(1j * hit["theta"]) + 1), 1e-4)
    _, hit = _sweep_checks(rep, GapKind("down", 3), 1.0 / 3.0, SQRT2, p_grid, "V_3")
    rep.close("V_3 maximizing x = -1", 0.0, abs(hit["r"] * np.exp(1j * hit["theta"]) + 1), 1e-4)
    return rep


def suite_thm2(samples=21, seed=0, p_grid=401):
    rep = VerificationReport("verify", {"target": "thm2", "samples": samples, "seed": seed})
    _sweep_checks(rep, GapKind("diff", 2), 25.0 / 48.0, 0.75, p_grid, "sup |a3 - a2|")
    _sweep_checks(rep, GapKind("diff", 3), PSI_PEAK, PSI_PEAK_P, p_grid, "sup |a4 - a3|")
    for p in np.linspace(0.0, 2.0, max(2, samples)):
        p = float(p)
        rep.close(f"max |a3 - a2| at p={p:.4f}", a3_a2_bound(p),
                  maximize_gap_kp(GapKind("diff", 2), p).value, 1e-6)
        rep.close(f"max |a4 - a3| at p={p:.4f}", psi_bound(p),
                  maximize_gap_kp(GapKind("diff", 3), p).value, 1e-6)
    return rep


def suite_thmA(samples=1000, seed=0, order=32):
    rep = VerificationReport("verify", {"target": "thmA", "samples": samples, "seed": seed})
    conv, star = _sampled_functions(samples, seed, order)
    n = np.arange(order + 1)
    absc = np.abs(conv)
    tg = (n[2:] * absc[:, 2:]) - (n[1:-1] * absc[:, 1:-1])
    abss = np.abs(star)
    ts = abss[:, 2:] - abss[:, 1:-1]
    rep.at_most("max (n+1)|a_{n+1}| - n|a_n| (convex)", 1.0, float(tg.max()), 1e-9)
    rep.at_least("min (n+1)|a_{n+1}| - n|a_n| (convex)", -1.0, float(tg.min()), 1e-9)
    rep.at_most("max |b_{n+1}| - |b_n| (starlike)", 1.0, float(ts.max()), 1e-9)
    rep.at_least("min |b_{n+1}| - |b_n| (starlike)", -1.0, float(ts.min()), 1e-9)
    rep.at_most("max |a_n| (convex)", 1.0, float(absc.max()), 1e-9)
    star_from_conv = n * conv
    rep.at_most("Alexander transform of convex = starlike", 0.0,
                float(np.abs(star_from_conv - star).max()), 1e-10)
    return rep


def suite_thmB(samples=1000, seed=0):
    rep = VerificationReport("verify", {"target": "thmB", "samples": samples, "seed": seed})
    conv, _ = _sampled_functions(samples, seed, 12)
    worst = -math.inf
    for n in range(2, 11):
        lhs = np.abs(conv[:, n + 1] - conv[:, n])
        rhs = (2 * n + 1) / 3.0 * np.abs(conv[:, 2] - 1.0)
        worst = max(worst, float((lhs - rhs).max()))
    rep.at_most("max |a_{n+1} - a_n| - (2n+1)/3 |a_2 - 1|, n <= 10", 0.0, worst, 1e-9)
    for n in range(2, 11):
        rep.close(f"ratio (a_{n+1} - a_n)/(a_2 - 1) n={n} at phi=1e-3", (2 * n + 1) / 3.0,
                  robertson_ratio(1e-3, n), 1e-3)
    return rep


def suite_lemY(samples=200, seed=0, radial=512, angular=1024):
    rep = VerificationReport("verify", {"target": "lemY", "samples": samples, "seed": seed})
    rng = np.random.default_rng(seed)
    a = rng.uniform(0, 3, samples)
    b = rng.uniform(-3, 3, samples)
    c = rng.uniform(0, 1, samples)
    diffs = np.array([y_closed(*t) - y_bruteforce(*t, radial, angular) for t in zip(a, b, c)])
    rep.at_least("min Y_closed - Y_grid", 0.0, float(diffs.min()), 1e-12)
    rep.at_most("max Y_closed - Y_grid", 0.0, float(diffs.max()), 5e-3)
    rep.close("Y(1, 2, 0)", 3.0, y_closed(1, 2, 0), 1e-15)
    rep.close("Y(1, 1, 0)", 2.25, y_closed(1, 1, 0), 1e-15)
    cont = [abs(a_ + 2 - c_ - (1 + a_ + (2 * (1 - c_)) ** 2 / (4 * (1 - c_)))) for a_, c_ in zip(a[:100], c[:100])]
    rep.at_most("branch continuity at |b| = 2(1 - c)", 0.0, float(max(cont)), 1e-12)
    return rep


def suite_lemF(samples=256, seed=0):
    rep = VerificationReport("verify", {"target": "lemF", "samples": samples, "seed": seed})
    p = 4.0 / 3.0 + np.arange(51) * (SQRT2 - 4.0 / 3.0) / 50.0
    r = 0.02 * np.arange(1, 51)
    theta = 2.0 * np.pi * np.arange(samples) / samples
    z = r[:, None] * np.exp(1j * theta)[None, :]
    margin = lemma_f_margin(np.clip(p, 4.0 / 3.0, SQRT2)[:, None, None], z[None])
    rep.at_least("min F(-|z|) - F(z) on grid", 0.0, float(margin.min()), 1e-9)
    rep.close("margin at p=4/3, z=0.5", 4.0 / 3.0, lemma_f_margin(4.0 / 3.0, 0.5), 1e-12)
    return rep


def suite_lemLZ(samples=1000, seed=0):
    rep = VerificationReport("verify", {"target": "lemLZ", "samples": samples, "seed": seed})
    rng = np.random.default_rng(seed)
    g, ph = sample_measure_arrays(rng, samples)
    pre = herglotz_prefix(g, ph, 8)[:, 1:]
    rep.at_most("max |p_n| (Caratheodory)", 2.0, float(np.abs(pre).max()), 1e-12)
    rep.at_least("min D_k / 2^(k+1), k <= 8", 0.0, float(feasibility_margins(pre).min()), 1e-9)

    worst = 0.0
    for _ in range(samples):
        p = rng.uniform(-2 + 1e-6, 2 - 1e-6)
        x = rng.uniform(0, 1 - 1e-6) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        y = np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        back = lz_recover(lz_expand(LZParams(p, x, y)))
        worst = max(worst, abs(back.p - p), abs(back.x - x), abs(back.y - y))
    rep.at_most("chart round trip", 0.0, worst, 1e-10)

    worst = 0.0
    for p1 in rng.uniform(-2, 2, 100):
        k = d2_extremal_kernel(float(p1), 3)
        worst = max(worst, abs(toeplitz_determinant(k.coeffs[1:], 2)) / 8.0)
        p2 = complex(lz_expand(LZParams(float(p1), -1.0))[1])
        worst = max(worst, abs(p2 - (p1 * p1 - 2)))
    rep.at_most("D_2 = 0 and p_2 = p_1^2 - 2 on the x = -1 slice", 0.0, worst, 1e-10)
    return rep


def suite_constants(samples=0, seed=0):
    rep = VerificationReport("verify", {"target": "constants", "samples": samples, "seed": seed})
    lam, s_bound = hayman_constants()
    rep.close("lambda_0", 0.3574, lam, 5e-5)
    rep.close("4 lambda_0 exp(-lambda_0) = 1", 1.0, 4 * lam * math.exp(-lam), 1e-11)
    rep.close("sharp |a3| - |a2| bound", 1.02908, s_bound, 5e-6)
    rep.close("H(1/5)", (11 - 5 * math.sqrt(5)) / 20, float(h_poly(0.2)), 1e-15)
    rep.close("psi(0)", 1.0 / 3.0, psi_bound(0.0), 1e-15)
    rep.close("psi(8/7)", 103.0 / 343.0, psi_bound(8.0 / 7.0), 1e-14)
    rep.close("psi((4 + sqrt 70)/9)", PSI_PEAK, psi_bound(PSI_PEAK_P), 1e-14)
    rep.close("25/48 bound at p = 3/4", 25.0 / 48.0, a3_a2_bound(0.75), 1e-15)
    rep.close("a_2(L_pi/3) - a_3(L_pi/3)", 0.5, coeff_L(math.pi / 3, 2) - abs(coeff_L(math.pi / 3, 3)), 1e-12)
    return rep


SUITES = {
    "thm1": suite_thm1,
    "thm2": suite_thm2,
    "thmA": suite_thmA,
    "thmB": suite_thmB,
    "lemY": suite_lemY,
    "lemF": suite_lemF,
    "lemLZ": suite_lemLZ,
    "constants": suite_constants,
}


def run(target: str, samples: int | None = None, seed: int = 0) -> VerificationReport:
    if target not in SUITES:
        raise KeyError(target)
    if samples is None:
        return SUITES[target](seed=seed)
    return SUITES[target](samples=samples, seed=seed)
