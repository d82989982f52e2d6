"""``coeffgap`` command-line interface.

Exit codes: 0 success / all checks pass, 1 a verification check failed,
2 usage or input errors.
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import operator
import re
import sys
from pathlib import Path

import numpy as np

from . import verify
from .caratheodory import HerglotzMeasure, herglotz_coefficients, toeplitz_minors
from .errors import CoeffGapError
from .families import convex_from_kernel, family_K, family_L, starlike_from_kernel
from .functionals import GapKind, psi_n
from .optimize import (
    P_GRID,
    R_GRID,
    REFINEMENTS,
    THETA_GRID,
    maximize_1d,
    maximize_gap_herglotz,
    maximize_gap_kp,
    maximize_gap_sweep,
)
from .report import VerificationReport, dumps, format_number, utc_timestamp
from .series import DEFAULT_ORDER

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_FUNCS = {"sqrt": math.sqrt}
_NAMES = {"pi": math.pi}


class UsageError(Exception):
    pass


def parse_real(text: str) -> float:
    """Evaluate a small arithmetic expression such as ``3/8`` or ``(4+sqrt(70))/18``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(text)

    try:
        # a bare radical binds to the number or name right after it: √2, √pi
        expr = re.sub(r"√\s*([0-9.]+|[A-Za-z_]\w*)", r"sqrt(\1)", text).replace("√", "sqrt")
        value = ev(ast.parse(expr, mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a real number or expression: {text!r}") from exc
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def _write(out: str, text: str):
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(v) if isinstance(v, (int, np.integer)) else format_number(v) for v in row))
    return "\n".join(lines) + "\n"


# -- subcommands ----------------------------------------------------------------

def cmd_verify(args) -> int:
    rep = verify.run(args.target, args.samples, args.seed)
    _write(args.out, dumps(rep.to_dict()) + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_scan_psi(args) -> int:
    n, points = args.n, args.points
    if n < 2 or points < 100:
        raise UsageError("scan-psi needs --n >= 2 and --points >= 100")
    k = np.arange(1, points + 1)
    t = k / (points + 1)
    values = psi_n(n, np.pi * t)
    _write(args.out, _csv(["phi_over_pi", "psi_n"], zip(t, values)))

    peak = maximize_1d(lambda phi: psi_n(n, phi), 0.0, math.pi, 10_000, 4, vectorized=True)
    theta_n = math.pi / (n + 1)
    sidecar = {
        "command": "scan-psi",
        "parameters": {"n": n, "points": points},
        "maximum": {"phi_over_pi": peak.argument["x"] / math.pi, "value": peak.value},
        "theta_n_over_pi": 1.0 / (n + 1),
        "psi_at_theta_n": float(psi_n(n, theta_n)),
        "timestamp": utc_timestamp(),
    }
    target = args.sidecar
    if target is None and args.out != "-":
        target = str(Path(args.out).with_suffix(".json"))
    if target is not None:
        Path(target).write_text(dumps(sidecar) + "\n", encoding="utf-8", newline="\n")
    return EXIT_OK


def cmd_optimize(args) -> int:
    try:
        kind = GapKind(args.kind, args.n)
    except CoeffGapError as exc:
        raise UsageError(str(exc)) from exc
    params = {"kind": args.kind, "n": args.n}
    note = None
    if args.n <= 3:
        if args.p is not None:
            params.update(p=args.p, r_grid=args.r_grid, theta_grid=args.theta_grid,
                          refinements=args.refinements)
            rep = maximize_gap_kp(kind, args.p, args.r_grid, args.theta_grid, args.refinements)
            mode = "lz-chart"
        else:
            params.update(p_grid=args.p_grid, r_grid=args.r_grid, theta_grid=args.theta_grid,
                          refinements=args.refinements)
            rep = maximize_gap_sweep(kind, args.p_grid, args.r_grid, args.theta_grid, args.refinements)
            mode = "lz-sweep"
    else:
        if args.p is not None:
            raise UsageError("--p needs n <= 3; the chart does not reach a_5 and beyond")
        params.update(atoms=args.atoms or args.n, restarts=args.restarts,
                      local_steps=args.local_steps, seed=args.seed)
        rep = maximize_gap_herglotz(kind, args.atoms, args.restarts, args.local_steps, args.seed)
        mode = "herglotz"
        note = (f"n = {args.n} > 3: random search over atomic Herglotz measures; "
                "the value is a lower bound for the supremum")
    out = {
        "command": "optimize",
        "lower_bound_only": rep.lower_bound_only,
        "mode": mode,
        "parameters": params,
        "report": rep.to_dict(),
    }
    if note:
        out["note"] = note
    out["timestamp"] = utc_timestamp()
    _write(args.out, dumps(out) + "\n")
    return EXIT_OK


def load_measure(path: str) -> HerglotzMeasure:
    """Read ``{"atoms": [{"gamma": .., "phi_over_pi": ..}, ...]}``."""
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("atoms"), list):
        raise UsageError(f"{path}: expected an object with an 'atoms' list")
    gammas, phis = [], []
    for i, atom in enumerate(data["atoms"]):
        try:
            gammas.append(float(atom["gamma"]))
            phis.append(math.pi * float(atom["phi_over_pi"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{path}: atom {i} needs numeric 'gamma' and 'phi_over_pi'") from exc
    try:
        return HerglotzMeasure(gammas, phis)
    except CoeffGapError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _angle(args) -> float:
    if (args.phi_over_pi is None) == (args.arccos is None):
        raise UsageError("give exactly one of --phi-over-pi and --arccos")
    if args.arccos is not None:
        if not -1.0 <= args.arccos <= 1.0:
            raise UsageError("--arccos needs a cosine in [-1, 1]")
        return math.acos(args.arccos)
    return math.pi * args.phi_over_pi


def cmd_coeffs(args) -> int:
    order = args.order
    if order < 1:
        raise UsageError("--order must be >= 1")
    if args.family in ("L", "K"):
        phi = _angle(args)
        f = family_L(phi, order) if args.family == "L" else family_K(phi, order)
        rows = [(n, float(f[n].real)) for n in range(1, order + 1)]
        _write(args.out, _csv(["n", "coefficient"], rows))
        return EXIT_OK
    if args.kernel is None:
        raise UsageError("--family kernel-file needs --kernel PATH")
    kernel = herglotz_coefficients(load_measure(args.kernel), order)
    gen = convex_from_kernel if args.generate == "convex" else starlike_from_kernel
    f = gen(kernel, order)
    rows = [(n, float(f[n].real), float(f[n].imag)) for n in range(1, order + 1)]
    _write(args.out, _csv(["n", "coefficient", "coefficient_imag"], rows))
    return EXIT_OK


def _parse_entry(v, i):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, dict) and "re" in v:
        return complex(float(v["re"]), float(v.get("im", 0.0)))
    raise UsageError(f"prefix entry {i} must be a number, [re, im] or {{\"re\", \"im\"}}")


def cmd_toeplitz(args) -> int:
    text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.input}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if isinstance(data, dict):
        data = data.get("prefix")
    if not isinstance(data, list) or not data:
        raise UsageError(f"{args.input}: expected a non-empty list of prefix entries")
    prefix = np.array([_parse_entry(v, i) for i, v in enumerate(data)])

    rep = VerificationReport("toeplitz", {"length": len(prefix), "tol": args.tol})
    bad = np.flatnonzero(np.abs(prefix) > 2.0 + 1e-12)
    if bad.size:
        k = int(bad[0]) + 1
        rep.at_most(f"|p_{k}| <= 2", 2.0, float(abs(prefix[k - 1])), 1e-12)
    else:
        d = toeplitz_minors(prefix)
        for k, dk in enumerate(d, start=1):
            rep.at_least(f"D_{k} >= 0", 0.0, float(dk), args.tol * 2.0 ** (k + 1))
    _write(args.out, dumps(rep.to_dict()) + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coeffgap", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--target", required=True, choices=verify.TARGETS)
    v.add_argument("--samples", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", default="-")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan-psi", help="tabulate Psi_n on (0, pi)")
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--points", type=int, default=1000)
    s.add_argument("--out", default="-")
    s.add_argument("--sidecar", default=None, help="JSON file for the located maximum")
    s.set_defaults(func=cmd_scan_psi)

    o = sub.add_parser("optimize", help="maximize a coefficient gap")
    o.add_argument("--kind", required=True, choices=("up", "down", "diff"))
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--p", type=parse_real, default=None)
    o.add_argument("--p-grid", type=int, default=P_GRID)
    o.add_argument("--r-grid", type=int, default=R_GRID)
    o.add_argument("--theta-grid", type=int, default=THETA_GRID)
    o.add_argument("--refinements", type=int, default=REFINEMENTS)
    o.add_argument("--atoms", type=int, default=None)
    o.add_argument("--restarts", type=int, default=64)
    o.add_argument("--local-steps", type=int, default=40)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--out", default="-")
    o.set_defaults(func=cmd_optimize)

    c = sub.add_parser("coeffs", help="write coefficients as CSV")
    c.add_argument("--family", required=True, choices=("L", "K", "kernel-file"))
    c.add_argument("--phi-over-pi", type=parse_real, default=None)
    c.add_argument("--arccos", type=parse_real, default=None)
    c.add_argument("--kernel", default=None, help="Herglotz measure JSON")
    c.add_argument("--generate", choices=("convex", "starlike"), default="convex")
    c.add_argument("--order", type=int, default=DEFAULT_ORDER)
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_coeffs)

    t = sub.add_parser("toeplitz", help="Toeplitz feasibility of a coefficient prefix")
    t.add_argument("--in", dest="input", required=True)
    t.add_argument("--tol", type=float, default=1e-9)
    t.add_argument("--out", default="-")
    t.set_defaults(func=cmd_toeplitz)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CoeffGapError) as exc:
        print(f"coeffgap {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"coeffgap {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
