"""First-kind weighted kernel equations as WCT operators.

The equation ``w(t) * int u(t, s) f(s) dmu2(s) = g(t)`` is lifted to the
product space ``X1 x X2`` with the partition into rows ``{t} x X2``. There
``E`` averages over ``s`` with weights ``mu2_j / M2`` (``M2`` the total
``s``-mass), so the embedding multiplies ``u`` by ``M2`` to turn the average
back into the integral. Lifting ``f`` to ``f'(t, s) = f(s)`` then gives
``T f' = w(t) int u(t, s) f(s) dmu2(s)`` on every row.

The minimal-norm solution on the product space is::

    F(t, s) = conj(u(t, s)) g(t) / (w(t) int |u(t, .)|^2 dmu2)

on rows where both ``w(t)`` and the row integral are nonzero, and 0 on the
rest. It solves the original one-variable equation only when it does not
depend on ``t`` (separable kernels, for example); :func:`solve_fredholm`
measures that dependence instead of assuming it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import oracle
from .errors import DimensionMismatch, InputError, NonPositiveWeight
from .measure import build_space, product_space
from .pinv import pinv_apply
from .wct import WctOperator, build_wct


class Grid(NamedTuple):
    nodes: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True, eq=False)
class KernelProblem:
    t: Grid
    s: Grid
    w: np.ndarray
    kernel: np.ndarray
    rhs: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.kernel.shape


class FredholmSolution(NamedTuple):
    F_hat: np.ndarray
    row_residuals: np.ndarray
    rows_in_support: np.ndarray
    row_solvable: np.ndarray
    t_dependence: float
    collapsed: np.ndarray | None


def midpoint_grid(a: float, b: float, n: int) -> Grid:
    """Midpoint rule on [a, b]: ``n`` nodes, each with weight ``(b - a)/n``."""
    if n < 1:
        raise InputError("grid needs at least one node")
    if not b > a:
        raise InputError(f"empty interval [{a}, {b}]")
    h = (b - a) / n
    return Grid(a + h * (np.arange(n) + 0.5), np.full(n, h))


def _grid(g, name: str) -> Grid:
    nodes, weights = g
    nodes = np.asarray(nodes, float).reshape(-1)
    weights = np.asarray(weights, float).reshape(-1)
    if nodes.size == 0:
        raise DimensionMismatch(f"{name} grid is empty")
    if weights.shape != nodes.shape:
        raise DimensionMismatch(
            f"{name} grid has {nodes.size} nodes but {weights.size} weights")
    if np.any(~np.isfinite(weights)) or np.any(weights <= 0):
        k = int(np.flatnonzero(~(weights > 0))[0])
        raise NonPositiveWeight(f"{name}.weights[{k}] must be > 0")
    return Grid(nodes, weights)


def build_kernel_problem(t_grid, s_grid, w_values, kernel_u, rhs_g
                         ) -> KernelProblem:
    t = _grid(t_grid, "t_grid")
    s = _grid(s_grid, "s_grid")
    nt, ns = t.nodes.size, s.nodes.size
    kernel = np.asarray(kernel_u, dtype=complex)
    if kernel.shape != (nt, ns):
        raise DimensionMismatch(
            f"kernel has shape {kernel.shape}, expected ({nt}, {ns})")
    w = np.asarray(w_values, dtype=complex).reshape(-1)
    g = np.asarray(rhs_g, dtype=complex).reshape(-1)
    if w.size != nt:
        raise DimensionMismatch(f"w has {w.size} values for {nt} t-nodes")
    if g.size != nt:
        raise DimensionMismatch(f"rhs has {g.size} values for {nt} t-nodes")
    for name, a in (("kernel", kernel), ("w", w), ("rhs", g)):
        if not np.all(np.isfinite(a)):
            raise InputError(f"{name} values must be finite")
    return KernelProblem(t, s, w, kernel, g)


def builtin_kernel(name: str, t, s, **params) -> np.ndarray:
    """Named kernels on node vectors ``t`` and ``s``.

    ``separable``: ``(1 + a t) cos(b s)`` (``a=1``, ``b=pi/2``);
    ``gauss``: ``exp(-(t - s)^2 / (2 sigma^2))`` (``sigma=0.1``);
    ``constant``: ``c`` (``c=1``).
    """
    t = np.asarray(t, float)[:, None]
    s = np.asarray(s, float)[None, :]
    if name == "separable":
        a, b = params.get("a", 1.0), params.get("b", np.pi / 2)
        return (1.0 + a * t) * np.cos(b * s)
    if name == "gauss":
        sigma = params.get("sigma", 0.1)
        return np.exp(-((t - s) ** 2) / (2.0 * sigma**2))
    if name == "constant":
        return np.full((t.shape[0], s.shape[1]), params.get("c", 1.0))
    raise InputError(f"unknown kernel {name!r}; use separable, gauss or constant")


def apply_kernel(problem: KernelProblem, f) -> np.ndarray:
    """``w(t) * sum_j mu2_j u(t, s_j) f(s_j)`` by direct quadrature."""
    return problem.w * (problem.kernel @ (problem.s.weights * np.asarray(f)))


def manufactured_problem(name: str, n: int, f_true=None, w=None,
                         interval=(0.0, 1.0), **params) -> KernelProblem:
    """An ``n x n`` midpoint problem with a built-in kernel and ``g = T f_true``.

    ``f_true`` defaults to ``sin(pi s) + s``; ``w`` to 1.
    """
    t = midpoint_grid(*interval, n)
    s = midpoint_grid(*interval, n)
    kernel = builtin_kernel(name, t.nodes, s.nodes, **params)
    fs = (np.sin(np.pi * s.nodes) + s.nodes) if f_true is None else f_true(s.nodes)
    wv = np.ones(n) if w is None else w(t.nodes)
    g = np.asarray(wv, complex) * (kernel @ (s.weights * fs))
    return build_kernel_problem(t, s, wv, kernel, g)


def embed_as_wct(problem: KernelProblem, tau: float | None = None) -> WctOperator:
    s1 = build_space(problem.t.weights, problem.t.nodes)
    s2 = build_space(problem.s.weights, problem.s.nodes)
    space, partition = product_space(s1, s2)
    ns = problem.s.nodes.size
    mass2 = s2.total_mass
    u = mass2 * problem.kernel.reshape(-1)
    w = np.repeat(problem.w, ns)
    return build_wct(space, partition, u, w, tau=tau)


def lift_s(problem: KernelProblem, f) -> np.ndarray:
    """``f'(t, s) = f(s)`` on the product atoms."""
    return np.tile(np.asarray(f), problem.t.nodes.size)


def lift_t(problem: KernelProblem, g) -> np.ndarray:
    """``g'(t, s) = g(t)`` on the product atoms."""
    return np.repeat(np.asarray(g), problem.s.nodes.size)


def t_dependence(F: np.ndarray, rows: np.ndarray) -> float:
    """Largest spread of a column of ``F`` across the given rows, relative to
    ``max |F|``. The spread is ``hypot(ptp(re), ptp(im))``, which is
    ``max - min`` for real data.
    """
    top = float(np.max(np.abs(F), initial=0.0))
    sub = F[rows]
    if sub.shape[0] < 2 or top == 0.0:
        return 0.0
    spread = np.hypot(np.ptp(sub.real, axis=0), np.ptp(sub.imag, axis=0))
    return float(spread.max() / top)


def solve_fredholm(problem: KernelProblem, tol: float = 1e-8,
                   tau: float | None = None) -> FredholmSolution:
    """Minimal-norm solution of the lifted equation plus diagnostics.

    ``collapsed`` (the ``mu1``-weighted mean of the supported rows) is only
    returned when ``t_dependence <= tol``.
    """
    T = embed_as_wct(problem, tau)
    nt, ns = problem.shape
    F = pinv_apply(T, lift_t(problem, problem.rhs)).reshape(nt, ns)
    rows = T.moments.support
    approx = problem.w * np.sum(problem.kernel * F * problem.s.weights, axis=1)
    res = np.abs(approx - problem.rhs)
    solvable = res <= tol * (1.0 + np.abs(problem.rhs))
    dep = t_dependence(F, rows)
    collapsed = None
    if rows.any() and dep <= tol:
        mu1 = problem.t.weights[rows]
        collapsed = (mu1 @ F[rows]) / mu1.sum()
    return FredholmSolution(F, res, rows.copy(), solvable, dep, collapsed)


def dense_kernel_operator(problem: KernelProblem) -> oracle.DenseOperator:
    """The one-variable operator ``L2(mu2) -> L2(mu1)`` in orthonormal
    coordinates: ``A_ij = sqrt(mu1_i) w_i u_ij sqrt(mu2_j)``."""
    a = np.sqrt(problem.t.weights) * problem.w
    b = np.sqrt(problem.s.weights)
    return oracle.DenseOperator(a[:, None] * problem.kernel * b[None, :])


def dense_min_norm_solution(problem: KernelProblem) -> np.ndarray:
    """Minimal-norm solution of the one-variable equation via the SVD oracle."""
    A = dense_kernel_operator(problem)
    c = oracle.pinv_svd(A) @ oracle.to_coords(problem.t.weights, problem.rhs)
    return oracle.from_coords(problem.s.weights, c)
