import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import wctop as W
from wctop.errors import (
    AsymmetricGrid,
    EmptySpace,
    LengthMismatch,
    NonPositiveWeight,
    NotBlockConstant,
)


def brute_expectation(weights, labels, f):
    """Per-atom block averages by explicit loops."""
    out = np.empty(len(f), dtype=complex)
    for i, li in enumerate(labels):
        num = den = 0.0
        for j, lj in enumerate(labels):
            if lj == li:
                num += weights[j] * f[j]
                den += weights[j]
        out[i] = num / den
    return out


@st.composite
def instances(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    weights = draw(st.lists(st.floats(1e-3, 10.0), min_size=n, max_size=n))
    labels = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    reals = st.floats(-1e3, 1e3)
    f = draw(st.lists(st.tuples(reals, reals), min_size=n, max_size=n))
    g = draw(st.lists(st.tuples(reals, reals), min_size=n, max_size=n))
    f = np.array([complex(*z) for z in f])
    g = np.array([complex(*z) for z in g])
    sp = W.build_space(weights)
    return sp, W.build_partition(sp, labels), labels, f, g


# -- construction ------------------------------------------------------------

def test_build_space_uniform():
    sp = W.build_space([0.25] * 4)
    assert sp.atom_count == 4
    assert sp.total_mass == 1.0


@pytest.mark.parametrize("weights, exc", [
    ([1, 0, 1], NonPositiveWeight),
    ([1, -2], NonPositiveWeight),
    ([], EmptySpace),
])
def test_build_space_rejects(weights, exc):
    with pytest.raises(exc):
        W.build_space(weights)


def test_coords_length_checked():
    with pytest.raises(LengthMismatch):
        W.build_space([1, 1], coords=[0.0])


def test_partition_two_blocks():
    sp = W.build_space([0.25] * 4)
    p = W.build_partition(sp, "AABB")
    assert p.block_count == 2
    np.testing.assert_array_equal(p.block_measure, [0.5, 0.5])
    assert [list(b) for b in p.blocks] == [[0, 1], [2, 3]]


def test_partition_trivial_and_finest():
    sp = W.build_space([0.1, 0.2, 0.3])
    assert W.trivial_partition(sp).block_count == 1
    fine = W.finest_partition(sp)
    f = np.array([1.0, -2.0, 5.0])
    np.testing.assert_array_equal(W.conditional_expectation(sp, fine, f), f)


def test_partition_length_mismatch():
    sp = W.build_space([1, 1, 1])
    with pytest.raises(LengthMismatch):
        W.build_partition(sp, [0, 1])


def test_symmetric_partition_pairs():
    sp, p = W.symmetric_partition([-1, -0.5, 0.5, 1])
    blocks = sorted(sorted(b.tolist()) for b in p.blocks)
    assert blocks == [[0, 3], [1, 2]]
    f = np.array([3.0, 1.0, 5.0, 7.0])
    # (f(t) + f(-t)) / 2
    np.testing.assert_allclose(W.conditional_expectation(sp, p, f),
                               [5.0, 3.0, 3.0, 5.0], rtol=1e-15)


def test_symmetric_partition_fixed_point():
    _, p = W.symmetric_partition([-1, 0, 1])
    assert sorted(sorted(b.tolist()) for b in p.blocks) == [[0, 2], [1]]


def test_symmetric_partition_asymmetric():
    with pytest.raises(AsymmetricGrid):
        W.symmetric_partition([-1, 0.3, 1])


def test_symmetric_grid_is_exactly_mirrored():
    t = W.symmetric_grid(200)
    np.testing.assert_array_equal(t, -t[::-1])
    sp, p = W.symmetric_partition(t)
    assert p.block_count == 100
    np.testing.assert_allclose(sp.weights, 1 / 200, rtol=1e-15)


def test_symmetric_odd_function_averages_to_zero():
    t = W.symmetric_grid(51)
    sp, p = W.symmetric_partition(t)
    assert np.max(np.abs(W.conditional_expectation(sp, p, t))) < 1e-15


def test_product_space():
    s1 = W.build_space([0.5, 0.5])
    s2 = W.build_space([1 / 3] * 3)
    sp, p = W.product_space(s1, s2)
    assert sp.atom_count == 6
    assert p.block_count == 2
    assert all(len(b) == 3 for b in p.blocks)
    np.testing.assert_allclose(sp.weights, 1 / 6, rtol=1e-15)


def test_product_block_measure_is_mu1_times_mass2():
    s1 = W.build_space([0.2, 0.7])
    s2 = W.build_space([0.5, 1.5, 1.0])
    _, p = W.product_space(s1, s2)
    np.testing.assert_allclose(p.block_measure, [0.2 * 3.0, 0.7 * 3.0],
                               rtol=1e-15)


# -- conditional expectation ---------------------------------------------------

def test_expectation_hand_example():
    sp = W.build_space([0.25] * 4)
    p = W.build_partition(sp, "AABB")
    np.testing.assert_allclose(
        W.conditional_expectation(sp, p, [1, 3, 2, 6]), [2, 2, 4, 4])


def test_expectation_of_constant():
    sp = W.build_space([0.3, 0.1, 0.9, 0.2])
    p = W.build_partition(sp, [0, 1, 0, 1])
    np.testing.assert_allclose(
        W.conditional_expectation(sp, p, np.full(4, 2.5)), 2.5, rtol=1e-15)


def test_expectation_length_mismatch():
    sp = W.build_space([1, 1])
    with pytest.raises(LengthMismatch):
        W.conditional_expectation(sp, W.trivial_partition(sp), [1, 2, 3])


@settings(max_examples=60, deadline=None)
@given(instances())
def test_expectation_matches_brute_force(inst):
    sp, p, labels, f, _ = inst
    np.testing.assert_allclose(
        W.conditional_expectation(sp, p, f),
        brute_expectation(sp.weights, labels, f), rtol=1e-12, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(instances())
def test_averaging_identity(inst):
    sp, p, _, f, _ = inst
    ef = W.conditional_expectation(sp, p, f)
    for blk in p.blocks:
        lhs = np.sum(sp.weights[blk] * ef[blk])
        rhs = np.sum(sp.weights[blk] * f[blk])
        scale = np.sum(sp.weights[blk] * np.abs(f[blk])) + 1e-300
        assert abs(lhs - rhs) <= 1e-13 * scale


@settings(max_examples=60, deadline=None)
@given(instances())
def test_idempotent(inst):
    sp, p, _, f, _ = inst
    ef = W.conditional_expectation(sp, p, f)
    eef = W.conditional_expectation(sp, p, ef)
    # a weighted mean of equal values can differ from them by a few ulps
    np.testing.assert_allclose(eef, ef, rtol=1e-14, atol=1e-300)


@settings(max_examples=60, deadline=None)
@given(instances())
def test_self_adjoint(inst):
    sp, p, _, f, g = inst
    E = lambda h: W.conditional_expectation(sp, p, h)
    lhs = W.weighted_inner_product(sp, E(f), g)
    rhs = W.weighted_inner_product(sp, f, E(g))
    assert abs(lhs - rhs) <= 1e-12 * W.norm(sp, f) * W.norm(sp, g) + 1e-300


@settings(max_examples=60, deadline=None)
@given(instances())
def test_contraction(inst):
    sp, p, _, f, _ = inst
    assert W.norm(sp, W.conditional_expectation(sp, p, f)) <= \
        W.norm(sp, f) * (1 + 1e-14)


@settings(max_examples=60, deadline=None)
@given(instances())
def test_conditional_holder(inst):
    sp, p, _, f, g = inst
    E = lambda h: W.conditional_expectation(sp, p, h)
    lhs = np.abs(E(f * g)) ** 2
    rhs = np.real(E(np.abs(f) ** 2) * E(np.abs(g) ** 2))
    assert np.all(lhs <= rhs * (1 + 1e-12) + 1e-12)


@settings(max_examples=60, deadline=None)
@given(instances())
def test_positivity(inst):
    sp, p, _, f, _ = inst
    assert np.all(W.conditional_expectation(sp, p, np.abs(f)) >= 0)


def test_inner_product_basics(rng):
    sp = W.build_space([0.25] * 4)
    assert W.weighted_inner_product(sp, np.ones(4), np.ones(4)) == 1.0
    assert W.weighted_inner_product(sp, [1, 2, 0, 0], [0, 0, 3, 4]) == 0.0
    # conjugate-linear in the second slot
    f, g = rng.standard_normal(4), rng.standard_normal(4)
    assert np.isclose(W.weighted_inner_product(sp, f, 1j * g),
                      -1j * W.weighted_inner_product(sp, f, g))


def test_inner_product_self_adjoint_on_random_8_atoms(rng):
    for _ in range(20):
        sp = W.build_space(rng.uniform(0.1, 1, 8))
        p = W.build_partition(sp, rng.integers(0, 3, 8))
        f = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        g = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        E = lambda h: W.conditional_expectation(sp, p, h)
        d = W.weighted_inner_product(sp, E(f), g) - W.weighted_inner_product(sp, f, E(g))
        assert abs(d) <= 1e-12 * W.norm(sp, f) * W.norm(sp, g)


# -- essential bounds -------------------------------------------------------

def test_ess_bounds_two_values():
    sp = W.build_space([0.25] * 4)
    p = W.build_partition(sp, "AABB")
    lo, hi, rng_ = W.ess_bounds(sp, p, [1, 1, 2, 2])
    assert (lo, hi) == (1.0, 2.0)
    np.testing.assert_array_equal(rng_, [1.0, 2.0])


def test_ess_bounds_constant():
    sp = W.build_space([0.25] * 4)
    p = W.build_partition(sp, "AABB")
    assert W.ess_bounds(sp, p, [3.0] * 4)[:2] == (3.0, 3.0)


def test_ess_bounds_not_block_constant():
    sp = W.build_space([0.25] * 4)
    p = W.build_partition(sp, "AABB")
    with pytest.raises(NotBlockConstant):
        W.ess_bounds(sp, p, [1, 2, 3, 3])


def test_ess_bounds_tolerates_rounding():
    sp = W.build_space([0.25] * 4)
    p = W.build_partition(sp, "AABB")
    lo, hi, _ = W.ess_bounds(sp, p, [1, 1 + 1e-13, 2, 2])
    assert lo == 1.0 and hi == 2.0
