"""Instance generators shared by the test modules."""

import numpy as np

import wctop as W
from wctop import oracle


def f1():
    """4 atoms of mass 1/4, blocks {0,1} and {2,3}, u=(1,1,2,2), w=(2,0,1,1)."""
    sp = W.build_space([0.25] * 4)
    part = W.build_partition(sp, ["B1", "B1", "B2", "B2"])
    return W.build_wct(sp, part, [1, 1, 2, 2], [2, 0, 1, 1])


def crandn(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def random_wct(rng, n=None, kill=True):
    """Random complex WCT operator on at most 64 atoms.

    Atom masses are random, the partition has a random number of blocks, and
    with ``kill`` some blocks get ``u = 0`` or ``w = 0`` outright (so S is a
    proper subset) and a few single atoms get ``w = 0``.
    """
    n = int(rng.integers(2, 65)) if n is None else n
    weights = rng.uniform(0.1, 1.0, n)
    k = int(rng.integers(1, n + 1))
    labels = rng.integers(0, k, n)
    sp = W.build_space(weights)
    part = W.build_partition(sp, labels)
    u, w = crandn(rng, n), crandn(rng, n)
    if kill:
        nb = part.block_count
        for b in range(nb):
            r = rng.random()
            if r < 0.1:
                u[part.blocks[b]] = 0
            elif r < 0.2:
                w[part.blocks[b]] = 0
        w[rng.random(n) < 0.1] = 0
    return W.build_wct(sp, part, u, w)


def coords(T, f):
    return oracle.to_coords(T.space.weights, f)


def rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    scale = max(np.linalg.norm(b), np.finfo(float).tiny)
    return float(np.linalg.norm(a - b) / scale)


def symmetric_example(n=200):
    """u = e^t, w = sin t + cos t on the midpoint grid of [-1, 1], dmu = dx/2."""
    t = W.symmetric_grid(n)
    sp, part = W.symmetric_partition(t)
    return t, W.build_wct(sp, part, np.exp(t), np.sin(t) + np.cos(t))
