"""Finite atomic measure spaces, partitions and conditional expectation.

On a finite atomic space every sub-sigma-algebra is generated by a partition
of the atoms, so a :class:`Partition` is all that is needed to describe one.
Atoms carry strictly positive mass, hence there are no null sets and every
"almost everywhere" statement becomes an exact per-atom statement.

Functions on a space are plain 1-d numpy arrays with one entry per atom.
The weighted inner product conjugates its *second* argument::

    <f, g> = sum_i mu_i f_i conj(g_i)

and this convention is used throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, NamedTuple, Sequence

import numpy as np

from .errors import (
    AsymmetricGrid,
    EmptySpace,
    InputError,
    LengthMismatch,
    NonPositiveWeight,
    NotBlockConstant,
)

#: absolute tolerance used to pair t with -t on symmetric grids
MIRROR_ATOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MeasureSpace:
    """Atoms ``0..n-1`` with masses ``weights`` (all > 0).

    ``coords`` is optional and only used by generators and for reporting.
    """

    weights: np.ndarray
    coords: np.ndarray | None = None

    @property
    def atom_count(self) -> int:
        return self.weights.shape[0]

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))


@dataclass(frozen=True, eq=False)
class Partition:
    """A partition of the atoms into nonempty blocks.

    Attributes
    ----------
    block_of : ndarray of int
        Block index of every atom.
    blocks : tuple of ndarray
        Atom indices of every block, in increasing order.
    block_measure : ndarray
        Total mass of every block.
    labels : tuple
        The user-facing label of every block, in block-index order.
    """

    block_of: np.ndarray
    blocks: tuple
    block_measure: np.ndarray
    labels: tuple = ()

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def block_sizes(self) -> np.ndarray:
        return np.bincount(self.block_of, minlength=self.block_count)


class EssBounds(NamedTuple):
    ess_inf: float | None
    ess_sup: float | None
    ess_range: np.ndarray


def build_space(weights, coords=None) -> MeasureSpace:
    """Validate weights (and optional coordinates) into a MeasureSpace."""
    w = np.array(weights, dtype=float).reshape(-1)
    if w.size == 0:
        raise EmptySpace("measure space needs at least one atom")
    if not np.all(np.isfinite(w)):
        raise NonPositiveWeight("weights must be finite")
    bad = np.flatnonzero(w <= 0)
    if bad.size:
        raise NonPositiveWeight(f"weights[{bad[0]}] = {w[bad[0]]!r} must be > 0")
    if not np.isfinite(np.sum(w)):
        raise NonPositiveWeight("total mass is not finite")
    c = None
    if coords is not None:
        c = np.array(coords, dtype=float)
        if c.shape[0] != w.size:
            raise LengthMismatch(
                f"coords has {c.shape[0]} entries, expected {w.size}")
        c = _frozen(c)
    return MeasureSpace(_frozen(w), c)


def build_partition(space: MeasureSpace, labels: Sequence[Hashable]) -> Partition:
    """Group atoms with equal labels into blocks.

    Block indices follow the order in which labels first appear.
    """
    labels = list(labels)
    if len(labels) != space.atom_count:
        raise LengthMismatch(
            f"got {len(labels)} labels for {space.atom_count} atoms")
    index: dict = {}
    block_of = np.empty(len(labels), dtype=np.intp)
    for i, lab in enumerate(labels):
        block_of[i] = index.setdefault(lab, len(index))
    k = len(index)
    blocks = tuple(_frozen(np.flatnonzero(block_of == b)) for b in range(k))
    measure = np.bincount(block_of, weights=space.weights, minlength=k)
    return Partition(_frozen(block_of), blocks, _frozen(measure), tuple(index))


def trivial_partition(space: MeasureSpace) -> Partition:
    return build_partition(space, [0] * space.atom_count)


def finest_partition(space: MeasureSpace) -> Partition:
    return build_partition(space, range(space.atom_count))


def symmetric_grid(n: int) -> np.ndarray:
    """Midpoints of ``n`` equal cells of [-1, 1], exactly mirror-symmetric."""
    k = np.arange(n)
    return (2.0 * k + 1.0 - n) / n


def symmetric_partition(grid, weights=None) -> tuple[MeasureSpace, Partition]:
    """Space on a grid in [-1, 1] with blocks ``{t, -t}``.

    ``weights`` are quadrature weights for ``dx``; the measure is ``dx/2`` so
    they are halved. The default is the midpoint rule, ``2/N`` per node,
    giving every atom mass ``1/N``.
    """
    t = np.array(grid, dtype=float).reshape(-1)
    n = t.size
    if n == 0:
        raise EmptySpace("grid is empty")
    dx = np.full(n, 2.0 / n) if weights is None else np.asarray(weights, float)
    order = np.argsort(t, kind="stable")
    ts = t[order]
    pos = np.searchsorted(ts, -t)
    labels = np.empty(n, dtype=np.intp)
    for i in range(n):
        cands = [p for p in (pos[i] - 1, pos[i]) if 0 <= p < n]
        hit = [order[p] for p in cands if abs(ts[p] + t[i]) <= MIRROR_ATOL]
        if not hit:
            raise AsymmetricGrid(f"no mirror point for grid[{i}] = {t[i]!r}")
        labels[i] = min(i, hit[0])
    space = build_space(dx / 2.0, coords=t)
    return space, build_partition(space, labels)


def product_space(space1: MeasureSpace, space2: MeasureSpace
                  ) -> tuple[MeasureSpace, Partition]:
    """Product measure with the partition into rows ``{i} x X2``.

    Atoms are ordered ``(i, j)`` row-major, i.e. atom ``i*n2 + j``.
    """
    n1, n2 = space1.atom_count, space2.atom_count
    weights = np.outer(space1.weights, space2.weights).reshape(-1)
    coords = None
    if space1.coords is not None and space2.coords is not None:
        c1 = np.asarray(space1.coords).reshape(n1, -1)
        c2 = np.asarray(space2.coords).reshape(n2, -1)
        coords = np.hstack([np.repeat(c1, n2, axis=0), np.tile(c2, (n1, 1))])
    space = build_space(weights, coords)
    return space, build_partition(space, np.repeat(np.arange(n1), n2))


def as_function(space: MeasureSpace, f) -> np.ndarray:
    """Validate ``f`` as a finite function on ``space``; returns an ndarray."""
    a = np.asarray(f)
    if a.dtype.kind not in "biufc":
        raise InputError(f"function values must be numeric, got {a.dtype}")
    if a.ndim != 1 or a.shape[0] != space.atom_count:
        raise LengthMismatch(
            f"function has shape {a.shape}, expected ({space.atom_count},)")
    if not np.all(np.isfinite(a)):
        raise InputError("function values must be finite")
    return a


def block_average(space: MeasureSpace, partition: Partition, f) -> np.ndarray:
    """Per-block weighted means ``sum_B mu_i f_i / mu(B)``."""
    f = as_function(space, f)
    k = partition.block_count
    mf = space.weights * f
    sums = np.bincount(partition.block_of, weights=mf.real, minlength=k)
    if np.iscomplexobj(mf):
        sums = sums + 1j * np.bincount(partition.block_of, weights=mf.imag,
                                       minlength=k)
    return sums / partition.block_measure


def conditional_expectation(space: MeasureSpace, partition: Partition, f
                            ) -> np.ndarray:
    """E(f): replace f on each block by its weighted mean."""
    return block_average(space, partition, f)[partition.block_of]


def weighted_inner_product(space: MeasureSpace, f, g) -> complex:
    f = as_function(space, f)
    g = as_function(space, g)
    return complex(np.sum(space.weights * f * np.conj(g)))


def norm(space: MeasureSpace, f) -> float:
    f = as_function(space, f)
    return float(np.sqrt(np.sum(space.weights * np.abs(f) ** 2)))


def ess_bounds(space: MeasureSpace, partition: Partition, h) -> EssBounds:
    """Essential inf, sup and range of a block-constant function.

    Every block has positive mass, so the essential range is just the set of
    block values. ``ess_inf``/``ess_sup`` are ``None`` when ``h`` takes
    non-real values.
    """
    h = as_function(space, h)
    first = np.array([b[0] for b in partition.blocks])
    vals = h[first]
    scale = 1.0 + (float(np.max(np.abs(h))) if h.size else 0.0)
    dev = np.max(np.abs(h - vals[partition.block_of]))
    if dev > 1e-10 * scale:
        raise NotBlockConstant(
            f"in-block deviation {dev:.3e} exceeds {1e-10 * scale:.3e}")
    rng = np.unique(vals)
    if np.iscomplexobj(vals) and np.any(vals.imag != 0):
        return EssBounds(None, None, rng)
    real = np.real(vals)
    return EssBounds(float(real.min()), float(real.max()), np.unique(real))
