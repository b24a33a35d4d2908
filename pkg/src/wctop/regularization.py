"""Tikhonov regularization and regularization paths.

For a WCT operator the minimizer of ``||T v - f||^2 + lam ||v||^2`` has the
closed form ``t_lam * T^* f`` with ``t_lam = 1 / (pe + lam)`` per block. As
``lam -> 0`` it tends to ``T^+ f``, and for ``f`` in the range the error
behaves like ``lam / pe`` on every block, so the path converges with order 1.

The dense routines do the same for an arbitrary matrix in orthonormal
coordinates, through a Cholesky solve of the shifted Gram system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import oracle
from .errors import BadSchedule, NonPositiveLambda, SolveFailure
from .measure import as_function, norm
from .pinv import pinv_apply
from .resolvent import t_lambda
from .wct import WctOperator, adjoint_apply, apply

DIST_FLOOR = 1e-13


class PathEntry(NamedTuple):
    lam: float
    minimizer: np.ndarray
    objective: float
    residual_norm: float
    solution_norm: float
    dist_to_pinv: float


@dataclass(frozen=True, eq=False)
class RegularizationPath:
    entries: tuple
    fitted_order: float

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([e.lam for e in self.entries])

    @property
    def distances(self) -> np.ndarray:
        return np.array([e.dist_to_pinv for e in self.entries])


def _check_lambda(lam) -> float:
    lam = float(lam)
    if not lam > 0:
        raise NonPositiveLambda(f"lambda must be > 0, got {lam!r}")
    return lam


def tikhonov_value(T: WctOperator, f, lam: float, v) -> float:
    lam = _check_lambda(lam)
    r = norm(T.space, apply(T, v) - as_function(T.space, f))
    return r * r + lam * norm(T.space, v) ** 2


def tikhonov_minimizer(T: WctOperator, f, lam: float) -> np.ndarray:
    lam = _check_lambda(lam)
    return t_lambda(T, lam)[T.partition.block_of] * adjoint_apply(T, f)


def schedule(lambda0: float, decay: float, steps: int) -> np.ndarray:
    """``lambda0 * decay**k`` for ``k = 0 .. steps-1``."""
    lambda0 = _check_lambda(lambda0)
    if not 0 < decay < 1:
        raise BadSchedule(f"decay must lie in (0, 1), got {decay!r}")
    if int(steps) != steps or steps < 2:
        raise BadSchedule(f"steps must be an integer >= 2, got {steps!r}")
    return lambda0 * decay ** np.arange(int(steps), dtype=float)


def fit_order(lams, dists, tail: int, floor: float = DIST_FLOOR) -> float:
    """Least-squares slope of log(dist) against log(lam) over the last ``tail``
    entries, ignoring distances below ``floor``. NaN if fewer than two remain.
    """
    lams = np.asarray(lams, float)[-tail:]
    dists = np.asarray(dists, float)[-tail:]
    keep = dists >= floor
    if keep.sum() < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(lams[keep]), np.log(dists[keep]), 1)
    return float(slope)


def _trace(lams, minimize: Callable, forward: Callable, nrm: Callable,
           f, target, floor) -> RegularizationPath:
    entries = []
    for lam in lams:
        u = minimize(lam)
        r = nrm(forward(u) - f)
        s = nrm(u)
        entries.append(PathEntry(float(lam), u, r * r + lam * s * s, r, s,
                                 nrm(u - target)))
    tail = max(3, len(entries) // 2)
    order = fit_order(lams, [e.dist_to_pinv for e in entries], tail, floor)
    return RegularizationPath(tuple(entries), order)


def regularization_path(T: WctOperator, f, lambda0: float = 1.0,
                        decay: float = 0.5, steps: int = 20,
                        floor: float = DIST_FLOOR) -> RegularizationPath:
    """Tikhonov minimizers along ``lam_k = lambda0 * decay**k``.

    Each entry records the distance to ``T^+ f``; ``fitted_order`` is the
    log-log slope of that distance over the last ``max(3, steps // 2)``
    entries, skipping distances below ``floor``.
    """
    lams = schedule(lambda0, decay, steps)
    f = as_function(T.space, f)
    target = pinv_apply(T, f)
    return _trace(lams, lambda lam: tikhonov_minimizer(T, f, lam),
                  lambda u: apply(T, u), lambda v: norm(T.space, v),
                  f, target, floor)


def generic_regularized_solve(A, f, lam: float) -> np.ndarray:
    """``A^* (A A^* + lam I)^{-1} f`` for a dense matrix ``A``.

    The smaller of the two Gram matrices is factored; both routes give the
    same vector.
    """
    lam = _check_lambda(lam)
    a = A.entries if isinstance(A, oracle.DenseOperator) else np.asarray(A)
    f = np.asarray(f)
    ah = a.conj().T
    m, n = a.shape
    if m <= n:
        G = a @ ah + lam * np.eye(m)
        y = oracle.hpd_solve(G, f)
        rhs, res = f, G @ y - f
        x = ah @ y
    else:
        G = ah @ a + lam * np.eye(n)
        rhs = ah @ f
        x = oracle.hpd_solve(G, rhs)
        res = G @ x - rhs
    if np.linalg.norm(res) > 1e-10 * max(np.linalg.norm(rhs), np.finfo(float).tiny):
        raise SolveFailure(
            f"shifted Gram solve residual {np.linalg.norm(res):.3e} too large")
    return x


def dense_regularization_path(A, f, lambda0: float = 1.0, decay: float = 0.5,
                              steps: int = 20, floor: float = DIST_FLOOR
                              ) -> RegularizationPath:
    """Same as :func:`regularization_path` for a dense matrix, with the SVD
    pseudoinverse as the limit."""
    lams = schedule(lambda0, decay, steps)
    a = A.entries if isinstance(A, oracle.DenseOperator) else np.asarray(A)
    f = np.asarray(f)
    target = oracle.pinv_svd(a) @ f
    return _trace(lams, lambda lam: generic_regularized_solve(a, f, lam),
                  lambda u: a @ u, lambda v: float(np.linalg.norm(v)),
                  f, target, floor)
