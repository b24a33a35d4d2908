"""Weighted conditional type operators ``T f = w E(u f)``.

A :class:`WctOperator` caches the conditional moments it needs, all of them
constant on blocks and stored per block:

=========  ================================================
``eu2``    E(|u|^2)
``ew2``    E(|w|^2)
``euw``    E(u w)
``pe``     E(|u|^2) E(|w|^2)
``support`` blocks where ``pe > tau`` (the set S)
=========  ================================================

``tau`` is the floating-point stand-in for "nonzero". Its default is
``1e-12 * (1 + max pe)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InputError
from .measure import (
    MeasureSpace,
    Partition,
    as_function,
    block_average,
)
from .oracle import DenseOperator, check_size


@dataclass(frozen=True, eq=False)
class ConditionalMoments:
    eu2: np.ndarray
    ew2: np.ndarray
    euw: np.ndarray
    pe: np.ndarray
    support: np.ndarray


@dataclass(frozen=True, eq=False)
class WctOperator:
    space: MeasureSpace
    partition: Partition
    u: np.ndarray
    w: np.ndarray
    moments: ConditionalMoments
    tau: float

    @property
    def n(self) -> int:
        return self.space.atom_count

    @property
    def support_atoms(self) -> np.ndarray:
        """Boolean mask of the atoms lying in a block of S."""
        return self.moments.support[self.partition.block_of]


class OperatorNorms(NamedTuple):
    op_norm: float
    gamma: float | None
    pinv_norm: float
    closed_range_gap: float | None


@dataclass(frozen=True, eq=False)
class Spectrum:
    """``values`` is the set {E(uw) on blocks} plus 0, sorted.

    ``zero_is_eigenvalue`` says whether 0 really belongs to the spectrum,
    which the block values alone cannot decide.
    """

    values: np.ndarray
    zero_is_eigenvalue: bool


def _readonly(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


def compute_moments(space, partition, u, w, tau=None):
    eu2 = block_average(space, partition, np.abs(u) ** 2)
    ew2 = block_average(space, partition, np.abs(w) ** 2)
    euw = block_average(space, partition, np.asarray(u, complex) * w)
    pe = eu2 * ew2
    if tau is None:
        tau = 1e-12 * (1.0 + float(np.max(pe)))
    moments = ConditionalMoments(*map(_readonly, (eu2, ew2, euw, pe, pe > tau)))
    return moments, float(tau)


def build_wct(space: MeasureSpace, partition: Partition, u, w,
              tau: float | None = None) -> WctOperator:
    u = _readonly(as_function(space, u).astype(complex))
    w = _readonly(as_function(space, w).astype(complex))
    if tau is not None and not tau > 0:
        raise InputError("tau must be > 0")
    moments, tau = compute_moments(space, partition, u, w, tau)
    return WctOperator(space, partition, u, w, moments, tau)


def sandwich_apply(space, partition, left, right, f) -> np.ndarray:
    """``left * E(right * f)``, the action of ``M_left E M_right``."""
    f = as_function(space, f)
    return left * block_average(space, partition, right * f)[partition.block_of]


def sandwich_matrix(space, partition, left, right) -> np.ndarray:
    """Matrix of ``M_left E M_right`` in orthonormal coordinates.

    Entry (i, j) is ``sqrt(mu_i) left_i sqrt(mu_j) right_j / mu(B)`` when
    i and j share the block B, else 0.
    """
    check_size(space.atom_count, space.atom_count)
    sq = np.sqrt(space.weights)
    b = partition.block_of
    a = sq * left
    c = sq * right / partition.block_measure[b]
    return np.outer(a, c) * (b[:, None] == b[None, :])


def apply(T: WctOperator, f) -> np.ndarray:
    return sandwich_apply(T.space, T.partition, T.w, T.u, f)


def adjoint_apply(T: WctOperator, g) -> np.ndarray:
    return sandwich_apply(T.space, T.partition, np.conj(T.u), np.conj(T.w), g)


def modulus_weight(T: WctOperator) -> np.ndarray:
    """Per-block ``sqrt(E|w|^2 / E|u|^2)`` on S, zero elsewhere."""
    m = T.moments
    g = np.zeros_like(m.pe)
    ok = m.support & (m.eu2 > T.tau)
    g[ok] = np.sqrt(m.ew2[ok] / m.eu2[ok])
    return g


def modulus_apply(T: WctOperator, f) -> np.ndarray:
    """``|T| f = g conj(u) E(u f)``."""
    g = modulus_weight(T)[T.partition.block_of]
    return sandwich_apply(T.space, T.partition, g * np.conj(T.u), T.u, f)


def spectrum(T: WctOperator) -> Spectrum:
    vals = np.concatenate([T.moments.euw, [0.0]]).astype(complex)
    vals = np.unique(vals)
    vals = vals[np.lexsort((vals.imag, vals.real))]
    sizes = T.partition.block_sizes
    # a block of size > 1 carries a rank-one piece, hence a kernel
    zero = bool(np.any(sizes > 1) or np.any(~T.moments.support))
    return Spectrum(vals, zero)


def norms(T: WctOperator) -> OperatorNorms:
    """Operator norm, reduced minimum modulus and ``||T^+||``.

    ``gamma`` is the minimum of ``sqrt(pe)`` over S, i.e. the smallest nonzero
    singular value; it is ``None`` when S is empty (then ``T = 0`` and
    ``T^+ = 0``).
    """
    root = np.sqrt(T.moments.pe)
    top = float(root.max())
    s = T.moments.support
    if not s.any():
        return OperatorNorms(top, None, 0.0, None)
    gamma = float(root[s].min())
    return OperatorNorms(top, gamma, 1.0 / gamma, float(T.moments.pe[s].min()))


def singular_values(T: WctOperator) -> np.ndarray:
    """Nonzero singular values, one per block of S, descending."""
    root = np.sqrt(T.moments.pe[T.moments.support])
    return np.sort(root)[::-1]


def materialize(T: WctOperator) -> DenseOperator:
    return DenseOperator(sandwich_matrix(T.space, T.partition, T.w, T.u))


def materialize_adjoint(T: WctOperator) -> DenseOperator:
    return DenseOperator(
        sandwich_matrix(T.space, T.partition, np.conj(T.u), np.conj(T.w)))
