"""Closed-form Moore-Penrose inverse of WCT operators.

For ``T = M_w E M_u`` the pseudoinverse is again a WCT operator::

    T^+ f = (chi_S / pe) conj(u) E(conj(w) f)

with ``pe = E(|u|^2) E(|w|^2)`` and S the blocks where ``pe`` is nonzero.
This is the general complex form. A variant known for nonnegative ``u, w``
uses the support of ``E(u) E(w)`` instead of S; it is not implemented here.
"""

from __future__ import annotations

from typing import Literal, NamedTuple

import numpy as np

from . import oracle
from .errors import InputError
from .measure import as_function, norm
from .wct import (
    WctOperator,
    adjoint_apply,
    apply,
    build_wct,
    materialize,
    sandwich_matrix,
)


class MpResiduals(NamedTuple):
    """Operator-norm residuals of the four Moore-Penrose identities."""

    tpt: float     # ||T T+ T - T||
    ptp: float     # ||T+ T T+ - T+||
    ptsym: float   # ||(T+ T)^* - T+ T||
    tpsym: float   # ||(T T+)^* - T T+||

    def max(self) -> float:
        return max(self)


class MinNormSolution(NamedTuple):
    solution: np.ndarray
    residual_norm: float
    solvable: bool


def pinv_factor(T: WctOperator) -> np.ndarray:
    """Per-block ``chi_S / pe``."""
    m = T.moments
    out = np.zeros_like(m.pe)
    out[m.support] = 1.0 / m.pe[m.support]
    return out


def pinv_apply(T: WctOperator, f) -> np.ndarray:
    scale = pinv_factor(T)[T.partition.block_of]
    return scale * adjoint_apply(T, f)


def pinv_operator(T: WctOperator) -> WctOperator:
    """``T^+`` as a WCT operator with weights ``(chi_S conj(u) / pe, conj(w))``.

    Its product moment is ``1/pe`` on S and 0 elsewhere, so it has the same
    support as ``T``.
    """
    left = pinv_factor(T)[T.partition.block_of] * np.conj(T.u)
    # pe of T+ is chi_S / pe on each block
    top = float(np.max(pinv_factor(T), initial=0.0))
    tau = 1e-12 * (1.0 + top)
    return build_wct(T.space, T.partition, np.conj(T.w), left, tau=tau)


def mp_axiom_residuals(T: WctOperator) -> MpResiduals:
    """Measure the four Moore-Penrose identities on materialized matrices."""
    A = materialize(T).entries
    P = _pinv_matrix(T)
    AP = A @ P
    PA = P @ A
    return MpResiduals(
        oracle.op_norm(AP @ A - A),
        oracle.op_norm(PA @ P - P),
        oracle.op_norm(PA.conj().T - PA),
        oracle.op_norm(AP.conj().T - AP),
    )


def _pinv_matrix(T: WctOperator) -> np.ndarray:
    left = pinv_factor(T)[T.partition.block_of] * np.conj(T.u)
    return sandwich_matrix(T.space, T.partition, left, np.conj(T.w))


def materialize_pinv(T: WctOperator) -> oracle.DenseOperator:
    return oracle.DenseOperator(_pinv_matrix(T))


def projection_apply(T: WctOperator, x,
                     which: Literal["range", "null_complement"] = "range"
                     ) -> np.ndarray:
    """Orthogonal projection onto R(T) (``T T^+``) or onto N(T)^perp (``T^+ T``)."""
    if which == "range":
        return apply(T, pinv_apply(T, x))
    if which == "null_complement":
        return pinv_apply(T, apply(T, x))
    raise InputError(f"unknown projection {which!r}")


def solve_min_norm(T: WctOperator, f, tol: float = 1e-8) -> MinNormSolution:
    """Minimal-norm least-squares solution of ``T u = f``.

    ``solvable`` is true when ``||T u - f|| <= tol * (1 + ||f||)``. An
    unsolvable right-hand side still yields the least-squares minimizer.
    """
    if not tol > 0:
        raise InputError("tol must be > 0")
    f = as_function(T.space, f)
    sol = pinv_apply(T, f)
    res = norm(T.space, apply(T, sol) - f)
    return MinNormSolution(sol, res, bool(res <= tol * (1.0 + norm(T.space, f))))
