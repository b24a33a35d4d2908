"""Resolvents, Tikhonov inverses and the characteristic matrix.

Every operator here has the shape ``c I + M_left E M_right``: a scalar
multiple of the identity plus a WCT part. :class:`ShiftedWct` stores that
form directly, so nothing is ever inverted numerically; the dense matrices
exist only for verification.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InputError, LengthMismatch, NonPositiveLambda, SpectrumHit
from .measure import MeasureSpace, Partition, as_function
from .wct import WctOperator, build_wct, sandwich_apply, sandwich_matrix


@dataclass(frozen=True, eq=False)
class ShiftedWct:
    """The operator ``x -> identity * x + left * E(right * x)``."""

    space: MeasureSpace
    partition: Partition
    identity: complex
    left: np.ndarray
    right: np.ndarray

    def apply(self, x) -> np.ndarray:
        x = as_function(self.space, x)
        return self.identity * x + sandwich_apply(
            self.space, self.partition, self.left, self.right, x)

    def materialize(self) -> np.ndarray:
        m = sandwich_matrix(self.space, self.partition, self.left, self.right)
        return m + self.identity * np.eye(self.space.atom_count)

    def wct_part(self) -> WctOperator:
        return build_wct(self.space, self.partition, self.right, self.left)


@dataclass(frozen=True, eq=False)
class CharacteristicMatrix:
    """Entries of the orthogonal projection of H + H onto the graph of T.

    ``h``, ``h1``, ``h2`` are per-block::

        h  = 1 / (1 + pe)
        h1 = E|w|^2 / (1 + pe)
        h2 = E|u|^2 / (1 + pe)
    """

    p11: ShiftedWct
    p12: ShiftedWct
    p21: ShiftedWct
    p22: ShiftedWct
    h: np.ndarray
    h1: np.ndarray
    h2: np.ndarray

    def apply(self, x, y) -> tuple[np.ndarray, np.ndarray]:
        return (self.p11.apply(x) + self.p12.apply(y),
                self.p21.apply(x) + self.p22.apply(y))

    def assemble(self) -> np.ndarray:
        """The 2N x 2N block matrix in orthonormal coordinates."""
        return np.block([[self.p11.materialize(), self.p12.materialize()],
                         [self.p21.materialize(), self.p22.materialize()]])


def _real_positive(lam) -> float:
    if np.iscomplexobj(lam) and np.imag(lam) != 0:
        raise NonPositiveLambda(f"lambda must be real and > 0, got {lam!r}")
    lam = float(np.real(lam))
    if not lam > 0:
        raise NonPositiveLambda(f"lambda must be > 0, got {lam!r}")
    return lam


def resolvent_operator(T: WctOperator, lam: complex,
                       eps: float | None = None) -> ShiftedWct:
    """``(lam I - T)^{-1} = (1/lam) I + M_{w / (lam (lam - E(uw)))} E M_u``.

    Raises :class:`SpectrumHit` when ``lam`` is within ``eps`` of 0 or of
    a block value of ``E(uw)``; ``eps`` defaults to ``1e-10 (1 + |lam|)``.
    """
    lam = complex(lam)
    if eps is None:
        eps = 1e-10 * (1.0 + abs(lam))
    if abs(lam) <= eps:
        raise SpectrumHit("lambda = 0 is always in the spectrum here")
    gap = np.abs(lam - T.moments.euw)
    if np.any(gap <= eps):
        b = int(np.argmin(gap))
        raise SpectrumHit(
            f"lambda = {lam} lies within {eps:.3e} of E(uw) = {T.moments.euw[b]}")
    coef = 1.0 / (lam * (lam - T.moments.euw))
    return ShiftedWct(T.space, T.partition, 1.0 / lam,
                      coef[T.partition.block_of] * T.w, T.u)


def resolvent_apply(T: WctOperator, lam: complex, g,
                    eps: float | None = None) -> np.ndarray:
    return resolvent_operator(T, lam, eps).apply(g)


def t_lambda(T: WctOperator, lam: float) -> np.ndarray:
    """Per-block ``1 / (pe + lam)``."""
    return 1.0 / (T.moments.pe + _real_positive(lam))


def p_lambda(T: WctOperator, lam: float) -> ShiftedWct:
    """``(lam I + T^*T)^{-1} = (1/lam) I - M_{E|w|^2 conj(u) / (lam (pe + lam))} E M_u``."""
    lam = _real_positive(lam)
    m = T.moments
    c = (m.ew2 / (lam * (m.pe + lam)))[T.partition.block_of]
    return ShiftedWct(T.space, T.partition, 1.0 / lam, -c * np.conj(T.u), T.u)


def q_lambda(T: WctOperator, lam: float) -> ShiftedWct:
    """``(lam I + T T^*)^{-1} = (1/lam) I - M_{E|u|^2 w / (lam (pe + lam))} E M_conj(w)``."""
    lam = _real_positive(lam)
    m = T.moments
    c = (m.eu2 / (lam * (m.pe + lam)))[T.partition.block_of]
    return ShiftedWct(T.space, T.partition, 1.0 / lam, -c * T.w, np.conj(T.w))


def tikhonov_resolvent_apply(T: WctOperator, lam: float, x,
                             side: Literal["primal", "dual"] = "primal"
                             ) -> np.ndarray:
    """Apply ``P_lam = (lam I + T^*T)^{-1}`` (primal) or ``Q_lam`` (dual)."""
    if side == "primal":
        return p_lambda(T, lam).apply(x)
    if side == "dual":
        return q_lambda(T, lam).apply(x)
    raise InputError(f"side must be 'primal' or 'dual', got {side!r}")


def characteristic_entries(T: WctOperator) -> CharacteristicMatrix:
    m = T.moments
    b = T.partition.block_of
    h = 1.0 / (1.0 + m.pe)
    h1 = m.ew2 * h
    h2 = m.eu2 * h
    ub, wb = np.conj(T.u), np.conj(T.w)
    sp, pt = T.space, T.partition
    return CharacteristicMatrix(
        p11=ShiftedWct(sp, pt, 1.0, -h1[b] * ub, T.u),
        p12=ShiftedWct(sp, pt, 0.0, h[b] * ub, wb),
        p21=ShiftedWct(sp, pt, 0.0, h[b] * T.w, T.u),
        p22=ShiftedWct(sp, pt, 0.0, h2[b] * T.w, wb),
        h=h, h1=h1, h2=h2,
    )


def graph_projection_apply(T: WctOperator, pair) -> tuple[np.ndarray, np.ndarray]:
    """Project ``(x, y)`` onto the graph ``{(f, T f)}``."""
    try:
        x, y = pair
    except (TypeError, ValueError):
        raise LengthMismatch("expected a pair (x, y)") from None
    return characteristic_entries(T).apply(x, y)
