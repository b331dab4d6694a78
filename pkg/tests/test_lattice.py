"""Spaces, vectors, and sequences: geometry, duality, lattice operations."""

import math

import numpy as np
import pytest

from latsum import (
    LatticeSpace,
    LatticeVector,
    SpaceMismatchError,
    UnsupportedExponentError,
    VectorSequence,
    conjugate_exponent,
    dual_pairing,
    positive_ball_extreme_points,
    sample_positive_sphere,
)

INF = math.inf


def test_conjugate_exponent_table():
    assert conjugate_exponent(1.0) == INF
    assert conjugate_exponent(INF) == 1.0
    assert conjugate_exponent(2.0) == 2.0
    assert conjugate_exponent(1.5) == pytest.approx(3.0)
    assert conjugate_exponent(4.0) == pytest.approx(4.0 / 3.0)


@pytest.mark.parametrize("bad", [0, -1, 2.5])
def test_space_rejects_bad_dim(bad):
    with pytest.raises(ValueError):
        LatticeSpace(bad)


def test_space_rejects_bad_exponent_and_weights():
    with pytest.raises(ValueError):
        LatticeSpace(2, 0.5)
    with pytest.raises(ValueError):
        LatticeSpace(2, 2.0, [1.0, 0.0])
    with pytest.raises(ValueError):
        LatticeSpace(2, 2.0, [1.0, -1.0, 2.0])


def test_norm_hand_values():
    s1 = LatticeSpace(3, 1.0, [1.0, 2.0, 3.0])
    s2 = LatticeSpace(3, 2.0)
    si = LatticeSpace(3, INF, [1.0, 0.5, 2.0])
    x = np.array([1.0, -1.0, 2.0])
    assert s1.norm_of(x) == pytest.approx(1 + 2 + 6)
    assert s2.norm_of(x) == pytest.approx(math.sqrt(6))
    assert si.norm_of(x) == pytest.approx(4.0)


def test_norm_batches_over_leading_axes():
    space = LatticeSpace(2, 2.0, [4.0, 1.0])
    batch = np.array([[[1.0, 0.0], [0.0, 1.0]], [[1.0, 1.0], [3.0, 4.0]]])
    out = space.norm_of(batch)
    assert out.shape == (2, 2)
    assert out[0, 0] == pytest.approx(2.0)
    assert out[1, 1] == pytest.approx(math.sqrt(4 * 9 + 16))


def test_norm_rejects_wrong_length():
    with pytest.raises(SpaceMismatchError):
        LatticeSpace(3).norm_of([1.0, 2.0])


def test_dual_weights_and_roundtrip_identity():
    space = LatticeSpace(2, 1.5, [2.0, 5.0])
    dual = space.dual
    assert dual.exponent == pytest.approx(3.0)
    np.testing.assert_allclose(dual.weights, np.array([2.0, 5.0]) ** (-3.0 / 1.5))
    assert dual.dual is space
    assert space.dual.dual.dual is dual


@pytest.mark.parametrize("r", [1.0, INF])
def test_dual_weights_polyhedral(r):
    space = LatticeSpace(3, r, [0.5, 2.0, 4.0])
    np.testing.assert_allclose(space.dual.weights, [2.0, 0.5, 0.25])
    assert space.dual.exponent == conjugate_exponent(r)


def test_dual_norm_is_pairing_sup():
    # check norm(a, dual) == sup over unit ball of <a, x> on a dense sample
    rng = np.random.default_rng(7)
    space = LatticeSpace(3, 1.5, [1.0, 2.0, 0.5])
    a = rng.standard_normal(3)
    sample = rng.standard_normal((4000, 3))
    sample /= np.asarray(space.norm_of(sample))[:, None]
    sup = np.max(sample @ a)
    assert sup <= space.dual.norm_of(a) + 1e-9
    assert sup == pytest.approx(space.dual.norm_of(a), rel=1e-2)


def test_vector_lattice_operations():
    space = LatticeSpace(3, 2.0)
    x = space.vector([1.0, -2.0, 3.0])
    y = space.vector([2.0, 1.0, -1.0])
    assert x.abs() == space.vector([1.0, 2.0, 3.0])
    assert x.pos_part() + (-x).pos_part() == x.abs()
    assert x.sup(y) == space.vector([2.0, 1.0, 3.0])
    assert x.inf(y) == space.vector([1.0, -2.0, -1.0])
    assert x.sup(y) + x.inf(y) == x + y
    assert (2.0 * x).norm() == pytest.approx(2.0 * x.norm())


def test_vector_space_mismatch_raises():
    x = LatticeSpace(2).vector([1.0, 0.0])
    y = LatticeSpace(2, 1.0).vector([1.0, 0.0])
    with pytest.raises(SpaceMismatchError):
        x.sup(y)


def test_pairing_matches_dot():
    space = LatticeSpace(2, 2.0, [3.0, 0.5])
    x = space.vector([1.0, 2.0])
    a = space.dual.vector([4.0, -1.0])
    assert dual_pairing(x, a) == pytest.approx(2.0)
    assert x.pairing(a) == pytest.approx(2.0)


def test_vector_coords_frozen():
    v = LatticeSpace(2).vector([1.0, 2.0])
    with pytest.raises(ValueError):
        v.coords[0] = 5.0


def test_sequence_shape_checks_and_helpers():
    space = LatticeSpace(2)
    seq = VectorSequence(space, [[1.0, -1.0], [0.0, 2.0]])
    assert len(seq) == 2
    assert seq.abs().is_nonnegative()
    assert not seq.is_nonnegative()
    assert len(seq.tail(1)) == 1
    assert len(VectorSequence.empty(space)) == 0
    with pytest.raises(SpaceMismatchError):
        VectorSequence(space, [[1.0, 2.0, 3.0]])


def test_sequence_from_vectors():
    space = LatticeSpace(2)
    seq = VectorSequence.from_vectors([space.vector([1.0, 0.0]), space.vector([0.0, 1.0])])
    np.testing.assert_array_equal(seq.array, np.eye(2))
    other = LatticeSpace(2, 1.0)
    with pytest.raises(SpaceMismatchError):
        VectorSequence.from_vectors([space.vector([1.0, 0.0]), other.vector([0.0, 1.0])])


def test_positive_extreme_points_l1():
    space = LatticeSpace(3, 1.0, [1.0, 2.0, 4.0])
    pts = positive_ball_extreme_points(space)
    assert len(pts) == 3
    for p in pts:
        assert p.norm() == pytest.approx(1.0)
    np.testing.assert_allclose(pts[2].coords, [0.0, 0.0, 0.25])


def test_positive_extreme_points_linf():
    space = LatticeSpace(2, INF, [1.0, 2.0])
    pts = positive_ball_extreme_points(space)
    assert len(pts) == 3
    coords = sorted(tuple(p.coords) for p in pts)
    assert coords == [(0.0, 0.5), (1.0, 0.0), (1.0, 0.5)]


def test_positive_extreme_points_needs_polyhedral():
    with pytest.raises(UnsupportedExponentError):
        positive_ball_extreme_points(LatticeSpace(2, 2.0))


def test_sample_positive_sphere_deterministic_unit():
    space = LatticeSpace(3, 2.0, [1.0, 3.0, 0.5])
    a = sample_positive_sphere(space, 5, seed=11)
    b = sample_positive_sphere(space, 5, seed=11)
    for u, v in zip(a, b):
        assert u == v
        assert u.norm() == pytest.approx(1.0)
        assert np.all(u.coords >= 0)
    assert sample_positive_sphere(space, 0, seed=1) == []


@pytest.mark.parametrize("r", [1.0, 1.5, 2.0, 3.0, INF])
def test_norm_axioms_random(r):
    rng = np.random.default_rng(int(r * 10) if r != INF else 99)
    space = LatticeSpace(4, r, rng.uniform(0.5, 2.0, 4))
    for _ in range(25):
        x = rng.standard_normal(4)
        y = rng.standard_normal(4)
        c = rng.uniform(-3, 3)
        nx, ny = space.norm_of(x), space.norm_of(y)
        assert space.norm_of(x + y) <= nx + ny + 1e-12
        assert space.norm_of(c * x) == pytest.approx(abs(c) * nx)
        # solidity: smaller modulus, smaller norm
        shrink = x * rng.uniform(0.0, 1.0, 4)
        assert space.norm_of(shrink) <= nx + 1e-12
        assert space.norm_of(np.abs(x)) == pytest.approx(nx)
