"""Command-line front end.

Problem files are JSON. A WCT problem looks like::

    {
      "space": {"weights": [0.25, 0.25, 0.25, 0.25], "coords": [...]},
      "wct": {"partition": ["A", "A", "B", "B"],
              "u": [1, 1, 2, 2], "w": [2, 0, 1, 1],
              "rhs": [2, 0, 2, 2], "tau": 1e-12}
    }

and a kernel (Fredholm) problem::

    {
      "kernel": {"t_grid": {"nodes": [...], "weights": [...]},
                 "s_grid": {"nodes": [...], "weights": [...]},
                 "w": [...], "kernel": [[...], ...], "rhs": [...]}
    }

Exactly one of ``wct`` and ``kernel`` must be present. Complex numbers are
written ``[re, im]``; a bare number is read as ``[x, 0]``.

Exit codes: 0 success, 1 malformed input, 2 numerical failure, 3 equation not
solvable within ``--tol`` (``solve`` only).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fredholm, oracle
from .errors import InputError, NumericalError, ParseError, SchemaError
from .measure import (
    MeasureSpace,
    build_partition,
    build_space,
    product_space,
    symmetric_grid,
    symmetric_partition,
)
from .pinv import materialize_pinv, mp_axiom_residuals, solve_min_norm
from .regularization import RegularizationPath, regularization_path
from .resolvent import characteristic_entries
from .wct import WctOperator, apply, build_wct, materialize, norms, spectrum

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_UNSOLVABLE = 0, 1, 2, 3

CSV_HEADER = ["lambda", "objective", "residual_norm", "solution_norm",
              "dist_to_pinv"]


@dataclass(frozen=True, eq=False)
class ProblemFile:
    space: MeasureSpace | None = None
    labels: list | None = None
    u: np.ndarray | None = None
    w: np.ndarray | None = None
    rhs: np.ndarray | None = None
    tau: float | None = None
    kernel: fredholm.KernelProblem | None = None

    @property
    def is_kernel(self) -> bool:
        return self.kernel is not None

    def operator(self) -> WctOperator:
        if self.is_kernel:
            return fredholm.embed_as_wct(self.kernel, self.tau)
        partition = build_partition(self.space, self.labels)
        return build_wct(self.space, partition, self.u, self.w, tau=self.tau)


# ---------------------------------------------------------------- parsing

def _number(x, field: str) -> complex:
    if isinstance(x, bool):
        raise SchemaError(f"{field} must be a number or [re, im]")
    if isinstance(x, (int, float)):
        return complex(x, 0.0)
    if (isinstance(x, list) and len(x) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool)
                    for v in x)):
        return complex(x[0], x[1])
    raise SchemaError(f"{field} must be a number or [re, im]")


def _vector(obj, field: str, length: int | None = None) -> np.ndarray:
    if not isinstance(obj, list):
        raise SchemaError(f"{field} must be a list")
    v = np.array([_number(x, f"{field}[{k}]") for k, x in enumerate(obj)],
                 dtype=complex)
    if length is not None and v.size != length:
        raise SchemaError(f"{field} has {v.size} values, expected {length}")
    if not np.all(np.isfinite(v)):
        raise SchemaError(f"{field} values must be finite")
    return v


def _reals(obj, field: str, length: int | None = None) -> np.ndarray:
    v = _vector(obj, field, length)
    bad = np.flatnonzero(v.imag != 0)
    if bad.size:
        raise SchemaError(f"{field}[{bad[0]}] must be real")
    return v.real


def _positive(obj, field: str, length: int | None = None) -> np.ndarray:
    v = _reals(obj, field, length)
    bad = np.flatnonzero(~(v > 0))
    if bad.size:
        raise SchemaError(f"{field}[{bad[0]}] must be > 0")
    return v


def _require(block: dict, key: str, prefix: str):
    if key not in block:
        raise SchemaError(f"{prefix}.{key} is required")
    return block[key]


def _dict(obj, field: str) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError(f"{field} must be an object")
    return obj


def parse_problem(doc) -> ProblemFile:
    doc = _dict(doc, "problem")
    has_wct, has_kernel = "wct" in doc, "kernel" in doc
    if has_wct == has_kernel:
        raise SchemaError("exactly one of 'wct' and 'kernel' must be present")
    if has_kernel:
        k = _dict(doc["kernel"], "kernel")
        grids = []
        for name in ("t_grid", "s_grid"):
            g = _dict(_require(k, name, "kernel"), f"kernel.{name}")
            nodes = _reals(_require(g, "nodes", f"kernel.{name}"),
                           f"kernel.{name}.nodes")
            weights = _positive(_require(g, "weights", f"kernel.{name}"),
                                f"kernel.{name}.weights", nodes.size)
            grids.append(fredholm.Grid(nodes, weights))
        nt, ns = grids[0].nodes.size, grids[1].nodes.size
        rows = _require(k, "kernel", "kernel")
        if not isinstance(rows, list) or len(rows) != nt:
            raise SchemaError(f"kernel.kernel must be a list of {nt} rows")
        kern = np.array([_vector(r, f"kernel.kernel[{i}]", ns)
                         for i, r in enumerate(rows)])
        w = _vector(_require(k, "w", "kernel"), "kernel.w", nt)
        rhs = _vector(_require(k, "rhs", "kernel"), "kernel.rhs", nt)
        tau = _tau(k.get("tau"), "kernel.tau")
        problem = fredholm.build_kernel_problem(grids[0], grids[1], w, kern, rhs)
        return ProblemFile(kernel=problem, tau=tau)

    sp = _dict(_require(doc, "space", "problem"), "space")
    weights = _positive(_require(sp, "weights", "space"), "space.weights")
    if weights.size == 0:
        raise SchemaError("space.weights must not be empty")
    n = weights.size
    coords = None
    if sp.get("coords") is not None:
        coords = sp["coords"]
        if not isinstance(coords, list) or len(coords) != n:
            raise SchemaError(f"space.coords must have {n} entries")
        try:
            coords = np.array(coords, dtype=float)
        except (TypeError, ValueError):
            raise SchemaError("space.coords must be numeric") from None
    space = build_space(weights, coords)
    b = _dict(doc["wct"], "wct")
    labels = _require(b, "partition", "wct")
    if not isinstance(labels, list) or len(labels) != n:
        raise SchemaError(f"wct.partition must be a list of {n} labels")
    for k, lab in enumerate(labels):
        if not isinstance(lab, (str, int)) or isinstance(lab, bool):
            raise SchemaError(f"wct.partition[{k}] must be a string or integer")
    u = _vector(_require(b, "u", "wct"), "wct.u", n)
    w = _vector(_require(b, "w", "wct"), "wct.w", n)
    rhs = _vector(b["rhs"], "wct.rhs", n) if b.get("rhs") is not None else None
    return ProblemFile(space, labels, u, w, rhs, _tau(b.get("tau"), "wct.tau"))


def _tau(x, field: str):
    if x is None:
        return None
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not x > 0:
        raise SchemaError(f"{field} must be a number > 0")
    return float(x)


def load_problem(path) -> ProblemFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return parse_problem(doc)


# --------------------------------------------------------------- emitting

def fmt(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return format(z.real + 0.0, ".17g")
    return f"{z.real + 0.0:.17g}{z.imag + 0.0:+.17g}j"


def fmt_vector(v) -> str:
    return "[" + ", ".join(fmt(x) for x in np.asarray(v).reshape(-1)) + "]"


def encode(v):
    """JSON encoding: reals stay bare, complex numbers become [re, im]."""
    if isinstance(v, dict):
        return {k: encode(x) for k, x in v.items()}
    if isinstance(v, np.ndarray):
        return [encode(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [encode(x) for x in v]
    if isinstance(v, complex):
        return v.real if v.imag == 0 else [v.real, v.imag]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def write_path_csv(path, p: RegularizationPath) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(CSV_HEADER)
        for e in p.entries:
            out.writerow([format(x, ".17g") for x in (
                e.lam, e.objective, e.residual_norm, e.solution_norm,
                e.dist_to_pinv)])


def _report(pairs: list[tuple[str, str]]) -> None:
    for k, v in pairs:
        print(f"{k} = {v}")


def _write_json(path, obj) -> None:
    if path:
        Path(path).write_text(json.dumps(encode(obj), indent=1) + "\n")


def _rhs(pf: ProblemFile) -> np.ndarray:
    if pf.is_kernel:
        return fredholm.lift_t(pf.kernel, pf.kernel.rhs)
    if pf.rhs is None:
        raise SchemaError("wct.rhs is required for this command")
    return pf.rhs


# --------------------------------------------------------------- commands

def cmd_solve(args) -> int:
    pf = load_problem(args.input)
    T = _with_tau(pf, args)
    f = _rhs(pf)
    sol = solve_min_norm(T, f, tol=args.tol)
    _report([("solution", fmt_vector(sol.solution)),
             ("residual_norm", fmt(sol.residual_norm)),
             ("solvable", str(sol.solvable).lower())])
    _write_json(args.output, {"solution": sol.solution,
                              "residual_norm": sol.residual_norm,
                              "solvable": sol.solvable})
    return EXIT_OK if sol.solvable else EXIT_UNSOLVABLE


def cmd_pinv_check(args) -> int:
    pf = load_problem(args.input)
    T = _with_tau(pf, args)
    A = materialize(T)
    res = mp_axiom_residuals(T)
    closed = materialize_pinv(T).entries
    dense = oracle.pinv_svd(A).entries
    scale = max(np.linalg.norm(dense), np.finfo(float).tiny)
    nr = norms(T)
    s = oracle.singular_values(A)
    nz = s[s > 1e-10 * s[0]] if s.size and s[0] > 0 else s[:0]
    out = {
        "mp_tpt": res.tpt, "mp_ptp": res.ptp,
        "mp_ptsym": res.ptsym, "mp_tpsym": res.tpsym,
        "oracle_rel_diff": float(np.linalg.norm(closed - dense) / scale),
        "op_norm": nr.op_norm,
        "gamma": nr.gamma,
        "pinv_norm": nr.pinv_norm,
        "dense_sigma_min": float(nz[-1]) if nz.size else None,
    }
    _report([(k, "absent" if v is None else fmt(v)) for k, v in out.items()])
    _write_json(args.output, out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    pf = load_problem(args.input)
    T = _with_tau(pf, args)
    sp = spectrum(T)
    _report([("spectrum", "{" + ", ".join(fmt(z) for z in sp.values) + "}"),
             ("zero_is_eigenvalue", str(sp.zero_is_eigenvalue).lower())])
    _write_json(args.output, {"spectrum": sp.values,
                              "zero_is_eigenvalue": sp.zero_is_eigenvalue})
    return EXIT_OK


def cmd_regularize(args) -> int:
    pf = load_problem(args.input)
    T = _with_tau(pf, args)
    path = regularization_path(T, _rhs(pf), args.lambda0, args.decay, args.steps)
    last = path.entries[-1]
    _report([("steps", str(len(path.entries))),
             ("fitted_order", fmt(path.fitted_order)),
             ("final_lambda", fmt(last.lam)),
             ("final_dist_to_pinv", fmt(last.dist_to_pinv))])
    if args.output:
        write_path_csv(args.output, path)
    return EXIT_OK


def cmd_charmatrix(args) -> int:
    pf = load_problem(args.input)
    T = _with_tau(pf, args)
    cm = characteristic_entries(T)
    pairs = [("h", fmt_vector(cm.h)), ("h1", fmt_vector(cm.h1)),
             ("h2", fmt_vector(cm.h2))]
    out = {"h": cm.h, "h1": cm.h1, "h2": cm.h2}
    if T.n <= oracle.MAX_DIM // 2:
        P = cm.assemble()
        out["idempotence_residual"] = oracle.op_norm(P @ P - P)
        out["selfadjoint_residual"] = oracle.op_norm(P - P.conj().T)
        pairs += [(k, fmt(out[k])) for k in
                  ("idempotence_residual", "selfadjoint_residual")]
    _report(pairs)
    _write_json(args.output, out)
    return EXIT_OK


def cmd_fredholm(args) -> int:
    if args.builtin:
        problem = fredholm.manufactured_problem(args.builtin, args.n)
        tau = args.tau
    else:
        if not args.input:
            raise SchemaError("fredholm needs --input or --builtin")
        pf = load_problem(args.input)
        if not pf.is_kernel:
            raise SchemaError("fredholm needs a 'kernel' problem block")
        problem, tau = pf.kernel, args.tau if args.tau else pf.tau
    sol = fredholm.solve_fredholm(problem, tol=args.tol, tau=tau)
    pairs = [("rows", str(problem.shape[0])),
             ("rows_in_support", str(int(sol.rows_in_support.sum()))),
             ("unsolvable_rows", str(int((~sol.row_solvable).sum()))),
             ("max_row_residual", fmt(sol.row_residuals.max())),
             ("t_dependence", fmt(sol.t_dependence))]
    out = {"F_hat": sol.F_hat, "row_residuals": sol.row_residuals,
           "t_dependence": sol.t_dependence, "collapsed": sol.collapsed}
    if sol.collapsed is not None:
        ref = fredholm.dense_min_norm_solution(problem)
        diff = np.linalg.norm(sol.collapsed - ref) / max(np.linalg.norm(ref),
                                                         np.finfo(float).tiny)
        pairs += [("collapsed", fmt_vector(sol.collapsed)),
                  ("dense_oracle_rel_diff", fmt(diff))]
        out["dense_oracle_rel_diff"] = float(diff)
    _report(pairs)
    _write_json(args.output, out)
    return EXIT_OK


def _with_tau(pf: ProblemFile, args) -> WctOperator:
    if args.tau is not None:
        pf = ProblemFile(pf.space, pf.labels, pf.u, pf.w, pf.rhs, args.tau,
                         pf.kernel)
    return pf.operator()


# --------------------------------------------------------------- examples

def example_problem(name: str, n: int | None = None) -> dict:
    """JSON document for a built-in example problem."""
    if name == "symmetric":
        n = n or 200
        t = symmetric_grid(n)
        space, part = symmetric_partition(t)
        u, w = np.exp(t), np.sin(t) + np.cos(t)
        T = build_wct(space, part, u, w)
        rhs = apply(T, 1.0 + t)
        return {"space": {"weights": space.weights, "coords": t},
                "wct": {"partition": part.block_of, "u": u, "w": w,
                        "rhs": rhs.real if not rhs.imag.any() else rhs}}
    if name == "product":
        n = n or 16
        g = fredholm.midpoint_grid(0.0, 1.0, n)
        s1 = build_space(g.weights, g.nodes)
        space, part = product_space(s1, s1)
        t, s = space.coords[:, 0], space.coords[:, 1]
        u, w = np.exp(-t * s), 1.0 + t * s
        T = build_wct(space, part, u, w)
        rhs = apply(T, np.sin(np.pi * s) + t).real
        return {"space": {"weights": space.weights, "coords": space.coords},
                "wct": {"partition": part.block_of, "u": u, "w": w,
                        "rhs": rhs}}
    if name == "separable-kernel":
        p = fredholm.manufactured_problem("separable", n or 64)
        return {"kernel": {
            "t_grid": {"nodes": p.t.nodes, "weights": p.t.weights},
            "s_grid": {"nodes": p.s.nodes, "weights": p.s.weights},
            "w": p.w.real, "kernel": p.kernel.real, "rhs": p.rhs.real}}
    raise SchemaError(f"unknown example {name!r}")


def cmd_example(args) -> int:
    doc = encode(example_problem(args.name, args.n))
    text = json.dumps(doc, indent=1) + "\n"
    if args.emit:
        Path(args.emit).write_text(text)
        print(f"wrote = {args.emit}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ------------------------------------------------------------------ main

class _Parser(argparse.ArgumentParser):
    # usage errors are malformed input: exit 1 with a one-line message
    def error(self, message):
        self.exit(EXIT_INPUT, f"error: UsageError: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="wctop",
        description="Closed-form pseudoinverses, spectra and Tikhonov paths "
                    "for weighted conditional type operators.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, needs_input=True):
        sp = sub.add_parser(name, help=help,
                            formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        if needs_input:
            sp.add_argument("--input", required=True, help="problem JSON file")
        sp.add_argument("--tau", type=float, default=None,
                        help="support threshold (default 1e-12*(1+max pe))")
        sp.add_argument("--output", help="machine-readable output file")
        sp.set_defaults(func=fn)
        return sp

    s = add("solve", cmd_solve, "minimal-norm solution of T u = rhs")
    s.add_argument("--tol", type=float, default=1e-8,
                   help="solvable if residual <= tol*(1+||rhs||)")
    add("pinv-check", cmd_pinv_check,
        "Moore-Penrose residuals and SVD oracle comparison")
    add("spectrum", cmd_spectrum, "spectrum {E(uw)} U {0}")
    r = add("regularize", cmd_regularize,
            "Tikhonov path toward T^+ rhs (CSV via --output)")
    r.add_argument("--lambda0", type=float, default=1.0)
    r.add_argument("--decay", type=float, default=0.5)
    r.add_argument("--steps", type=int, default=20)
    add("charmatrix", cmd_charmatrix, "characteristic matrix fields h, h1, h2")
    f = add("fredholm", cmd_fredholm, "first-kind kernel equation",
            needs_input=False)
    f.add_argument("--input", help="kernel problem JSON file")
    f.add_argument("--builtin", choices=["separable", "gauss", "constant"],
                   help="use a built-in kernel with manufactured rhs")
    f.add_argument("--n", type=int, default=64, help="grid size for --builtin")
    f.add_argument("--tol", type=float, default=1e-8,
                   help="collapse tolerance on t-dependence")
    e = sub.add_parser("example", help="emit a built-in example problem")
    e.add_argument("--name", required=True,
                   choices=["symmetric", "product", "separable-kernel"])
    e.add_argument("--n", type=int, default=None, help="grid size")
    e.add_argument("--emit", help="write JSON here instead of stdout")
    e.set_defaults(func=cmd_example)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: IoError: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None) -> None:
    sys.exit(run(argv))
