"""Sequence norms: frozen values, closed-form branches, inequality chains."""

import math

import numpy as np
import pytest

from latsum import (
    LatticeSpace,
    SearchConfig,
    SeqNormKind,
    SpaceMismatchError,
    VectorSequence,
    cohen_norm,
    duality_pairing,
    positive_strong_norm,
    positive_weak_norm,
    seq_norm,
    strong_norm,
    tail_profile,
    weak_norm,
)

INF = math.inf
PHI = (1.0 + math.sqrt(5.0)) / 2.0


def _seq(rows, r=2.0, weights=None):
    rows = np.asarray(rows, dtype=float)
    return VectorSequence(LatticeSpace(rows.shape[1], r, weights), rows)


def test_kind_validation():
    SeqNormKind("weak", INF)
    SeqNormKind("cohen", 1.0)
    with pytest.raises(ValueError):
        SeqNormKind("medium", 2.0)
    with pytest.raises(ValueError):
        SeqNormKind("strong", 0.5)
    with pytest.raises(ValueError):
        SeqNormKind("cohen", INF)
    with pytest.raises(ValueError):
        SeqNormKind("pos_strong", INF)


def test_scalar_weak_norm_sqrt14():
    seq = _seq([[1.0], [-2.0], [3.0]])
    est = weak_norm(seq, 2.0)
    assert est.exact
    assert est.value == pytest.approx(math.sqrt(14.0), abs=1e-12)


def test_scalar_cohen_norm_sqrt3():
    seq = _seq([[1.0], [1.0], [1.0]])
    est = cohen_norm(seq, 2.0)
    assert est.value == pytest.approx(math.sqrt(3.0), rel=1e-9)


def test_strong_norm_hand_values():
    seq = _seq([[3.0, 4.0], [0.0, 1.0]])
    assert strong_norm(seq, 1.0) == pytest.approx(6.0)
    assert strong_norm(seq, 2.0) == pytest.approx(math.sqrt(26.0))
    assert strong_norm(seq, INF) == pytest.approx(5.0)
    assert strong_norm(VectorSequence.empty(seq.space), 2.0) == 0.0


def test_weak_norm_l1_space_hand_value():
    seq = VectorSequence(LatticeSpace(2, 1.0), np.eye(2))
    est = weak_norm(seq, 1.0)
    assert est.exact
    assert est.value == pytest.approx(2.0, abs=1e-12)


def test_positive_weak_golden_ratio():
    # top singular value of ((1,0),(1,1)) is the golden ratio and its
    # singular vector is positive, so weak and positive weak agree
    seq = _seq([[1.0, 0.0], [1.0, 1.0]])
    pw = positive_weak_norm(seq, 2.0)
    wk = weak_norm(seq, 2.0)
    assert pw.exact and wk.exact
    assert wk.value == pytest.approx(PHI, abs=1e-12)
    assert pw.value == pytest.approx(PHI, abs=1e-12)
    assert pw.value >= wk.value - 1e-12


def test_euclidean_cohen_sqrt5_and_positive_strong_2():
    seq = _seq([[1.0, 1.0], [1.0, 0.0]])
    cn = cohen_norm(seq, 2.0)
    ps = positive_strong_norm(seq, 2.0)
    # nuclear norm: singular values phi and 1/phi sum to sqrt 5
    assert cn.exact
    assert cn.value == pytest.approx(math.sqrt(5.0), abs=1e-12)
    assert ps.exact
    assert ps.value == pytest.approx(2.0, abs=1e-9)
    assert ps.method == "convex_splitting"
    assert ps.value <= cn.value + 1e-9


def test_sup_norm_space_positive_strong_gap():
    # same rows over the sup-norm square: the positive strong norm drops
    # to sqrt 2 while the signed value stays at the golden ratio, so the
    # two families genuinely differ away from exponent one
    seq = VectorSequence(LatticeSpace(2, INF), [[1.0, 1.0], [1.0, 0.0]])
    cn = cohen_norm(seq, 2.0)
    ps = positive_strong_norm(seq, 2.0)
    assert cn.value == pytest.approx(PHI, abs=1e-3)
    assert cn.value <= PHI + 1e-9
    assert ps.value == pytest.approx(math.sqrt(2.0), abs=1e-3)
    assert ps.value <= math.sqrt(2.0) + 1e-9
    assert ps.value < cn.value - 0.1


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
def test_l1_space_closed_form(p):
    rng = np.random.default_rng(int(p * 7))
    w = rng.uniform(0.5, 2.0, 3)
    seq = _seq(rng.standard_normal((4, 3)), r=1.0, weights=w)
    cn = cohen_norm(seq, p)
    ps = positive_strong_norm(seq, p)
    assert cn.exact and ps.exact
    # per-column decoupling over the exponent-one ball
    cols = np.abs(seq.array)
    ref = float(np.sum(w * np.linalg.norm(cols, ord=(p if p != INF else np.inf), axis=0)))
    assert cn.value == pytest.approx(ref, rel=1e-12)
    assert ps.value == pytest.approx(ref, rel=1e-12)


def test_l1_space_witness_feasible_and_attaining():
    rng = np.random.default_rng(5)
    seq = _seq(np.abs(rng.standard_normal((3, 2))), r=1.0, weights=[1.0, 2.0])
    p = 1.5
    est = positive_strong_norm(seq, p)
    wit = VectorSequence(seq.space.dual, est.certificate)
    assert positive_weak_norm(wit, 3.0).value <= 1.0 + 1e-9
    assert float(np.sum(est.certificate * seq.array)) == pytest.approx(est.value, rel=1e-12)


def test_euclidean_cohen_is_weighted_nuclear_norm():
    rng = np.random.default_rng(6)
    w = np.array([1.0, 4.0, 0.5])
    seq = _seq(rng.standard_normal((4, 3)), r=2.0, weights=w)
    est = cohen_norm(seq, 2.0)
    assert est.exact
    ref = float(np.sum(np.linalg.svd(seq.array * np.sqrt(w), compute_uv=False)))
    assert est.value == pytest.approx(ref, rel=1e-12)
    wit = VectorSequence(seq.space.dual, est.certificate)
    assert weak_norm(wit, 2.0).value <= 1.0 + 1e-9
    assert float(np.sum(est.certificate * seq.array)) == pytest.approx(est.value, rel=1e-12)


def test_euclidean_positive_strong_witness():
    rng = np.random.default_rng(7)
    seq = _seq(rng.standard_normal((3, 3)), r=2.0, weights=[1.0, 2.0, 0.5])
    est = positive_strong_norm(seq, 2.0)
    assert est.exact
    wit = VectorSequence(seq.space.dual, est.certificate)
    assert np.all(est.certificate >= 0)
    assert positive_weak_norm(wit, 2.0).value <= 1.0 + 1e-8
    assert float(np.sum(est.certificate * np.abs(seq.array))) == pytest.approx(
        est.value, rel=1e-9
    )


@pytest.mark.parametrize("r", [1.0, 1.5, 2.0, INF])
def test_p1_collapse(r):
    rng = np.random.default_rng(int(r) if r != INF else 71)
    seq = _seq(rng.standard_normal((3, 2)), r=r, weights=rng.uniform(0.5, 2.0, 2))
    cn = cohen_norm(seq, 1.0)
    ps = positive_strong_norm(seq, 1.0)
    ref = strong_norm(seq, 1.0)
    assert cn.exact and ps.exact
    assert cn.value == pytest.approx(ref, abs=1e-12)
    assert ps.value == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("r,q", [(1.0, 1.5), (2.0, 2.0), (INF, 1.0), (1.5, 2.0)])
def test_weak_le_positive_weak_le_strong(r, q):
    rng = np.random.default_rng(int(3 * (r if r != INF else 5) + q))
    seq = _seq(rng.standard_normal((3, 3)), r=r, weights=rng.uniform(0.5, 2.0, 3))
    wk = weak_norm(seq, q).value
    pw = positive_weak_norm(seq, q).value
    st = strong_norm(seq, q)
    assert wk <= pw + 1e-9
    assert pw <= st + 1e-9


@pytest.mark.parametrize("r,p", [(1.0, 2.0), (2.0, 2.0), (2.0, 1.5), (INF, 1.5)])
def test_positive_strong_le_cohen_on_nonnegative(r, p):
    rng = np.random.default_rng(int(5 * (r if r != INF else 4) + p))
    seq = _seq(np.abs(rng.standard_normal((3, 3))), r=r, weights=rng.uniform(0.5, 2.0, 3))
    ps = positive_strong_norm(seq, p).value
    cn = cohen_norm(seq, p).value
    scale = max(ps, cn, 1e-12)
    assert ps <= cn + 2e-2 * scale


def test_positive_families_are_sign_invariant():
    rng = np.random.default_rng(9)
    rows = rng.standard_normal((3, 2))
    for r in (1.0, 2.0):
        a = _seq(rows, r=r)
        b = _seq(-np.abs(rows), r=r)
        assert positive_weak_norm(a, 2.0).value == positive_weak_norm(b, 2.0).value
        assert positive_strong_norm(a, 2.0).value == positive_strong_norm(b, 2.0).value


def test_nonnegative_rows_weak_equals_positive_weak():
    rng = np.random.default_rng(10)
    rows = np.abs(rng.standard_normal((2, 2)))
    for r in (1.0, INF, 2.0):
        seq = _seq(rows, r=r)
        wk = weak_norm(seq, 2.0)
        pw = positive_weak_norm(seq, 2.0)
        assert wk.exact and pw.exact
        assert pw.value == pytest.approx(wk.value, rel=1e-12)


def test_seq_norm_dispatcher_matches_direct_calls():
    seq = _seq([[1.0, 2.0], [0.5, -1.0]], r=1.0)
    cfg = SearchConfig(seed=3)
    assert seq_norm(seq, SeqNormKind("strong", 2.0), cfg).value == strong_norm(seq, 2.0)
    assert seq_norm(seq, SeqNormKind("strong", 2.0), cfg).certificate is None
    assert seq_norm(seq, SeqNormKind("weak", 2.0), cfg).value == weak_norm(seq, 2.0, cfg).value
    assert (
        seq_norm(seq, SeqNormKind("pos_weak", 1.5), cfg).value
        == positive_weak_norm(seq, 1.5, cfg).value
    )
    assert seq_norm(seq, SeqNormKind("cohen", 2.0), cfg).value == cohen_norm(seq, 2.0, cfg).value
    assert (
        seq_norm(seq, SeqNormKind("pos_strong", 2.0), cfg).value
        == positive_strong_norm(seq, 2.0, cfg).value
    )


def test_tail_profile_nonincreasing():
    rng = np.random.default_rng(11)
    seq = _seq(rng.standard_normal((4, 2)), r=1.0)
    for kind in (SeqNormKind("strong", 2.0), SeqNormKind("weak", 2.0), SeqNormKind("cohen", 1.5)):
        prof = tail_profile(seq, kind)
        assert prof.shape == (4,)
        assert np.all(np.diff(prof) <= 1e-9)


def test_duality_pairing_and_mismatch():
    space = LatticeSpace(2, 1.5, [1.0, 2.0])
    seq = VectorSequence(space, [[1.0, 2.0], [3.0, 4.0]])
    dual_seq = VectorSequence(space.dual, [[1.0, 0.0], [0.0, 1.0]])
    assert duality_pairing(seq, dual_seq) == pytest.approx(5.0)
    with pytest.raises(SpaceMismatchError):
        duality_pairing(seq, VectorSequence(space, [[1.0, 0.0], [0.0, 1.0]]))
    with pytest.raises(SpaceMismatchError):
        duality_pairing(seq, VectorSequence(space.dual, [[1.0, 0.0]]))


@pytest.mark.parametrize("scale", [0.25, 3.0])
def test_homogeneity(scale):
    rng = np.random.default_rng(12)
    rows = rng.standard_normal((3, 2))
    seq = _seq(rows, r=1.5)
    big = _seq(scale * rows, r=1.5)
    cfg = SearchConfig(starts=16, max_iters=120)
    assert weak_norm(big, 2.0, cfg).value == pytest.approx(
        scale * weak_norm(seq, 2.0, cfg).value, rel=1e-9
    )
    assert cohen_norm(big, 1.5, cfg).value == pytest.approx(
        scale * cohen_norm(seq, 1.5, cfg).value, rel=1e-9
    )
    assert positive_strong_norm(big, 1.5, cfg).value == pytest.approx(
        scale * positive_strong_norm(seq, 1.5, cfg).value, rel=1e-9
    )
