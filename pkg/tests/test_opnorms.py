"""Operator ideal constants: validation, hand values, dualities, dispatch."""

import math

import numpy as np
import pytest

from latsum import (
    IdealKind,
    LatticeSpace,
    LinearOperator,
    NormParams,
    SearchConfig,
    SeqNormKind,
    UnsupportedPairError,
    cohen_nuclear_norm,
    dplus_norm,
    ideal_norm,
    induced_map_constant,
    lambda_norm,
    majorizing_norm,
    operator_norm,
)

INF = math.inf
FAST = SearchConfig(starts=24, max_iters=120)


def _op(mat, dom, cod):
    return LinearOperator(np.asarray(mat, dtype=float), dom, cod)


def test_norm_params_validation():
    pr = NormParams(2.0, 1.5)
    assert pr.p_conj == pytest.approx(2.0)
    assert pr.q_conj == pytest.approx(3.0)
    NormParams(INF, 1.0)
    with pytest.raises(ValueError):
        NormParams(1.5, 2.0)
    with pytest.raises(ValueError):
        NormParams(2.0, 0.5)


def test_operator_shape_validation_and_apply():
    dom = LatticeSpace(2, 1.0)
    cod = LatticeSpace(3, INF)
    T = _op([[1.0, 0.0], [0.0, 2.0], [1.0, 1.0]], dom, cod)
    with pytest.raises(ValueError):
        _op(np.eye(2), dom, cod)
    y = T.apply([1.0, 1.0])
    assert y.space is cod
    np.testing.assert_allclose(y.coords, [1.0, 2.0, 2.0])
    rows = T.apply_rows(np.eye(2))
    np.testing.assert_allclose(rows, [[1.0, 0.0, 1.0], [0.0, 2.0, 1.0]])
    assert T.is_nonnegative()
    assert not _op(-np.ones((3, 2)), dom, cod).is_nonnegative()


def test_adjoint_spaces_and_bidual_identity():
    dom = LatticeSpace(2, 1.5, [1.0, 2.0])
    cod = LatticeSpace(2, 2.0, [0.5, 1.0])
    T = _op([[1.0, 2.0], [3.0, 4.0]], dom, cod)
    adj = T.adjoint
    np.testing.assert_array_equal(adj.matrix, T.matrix.T)
    assert adj.domain == cod.dual
    assert adj.codomain == dom.dual
    assert adj.adjoint is T
    assert T.adjoint.adjoint.adjoint is adj


def test_ideal_kind_validation():
    IdealKind("lambda", NormParams(2.0, 2.0))
    IdealKind("induced", source=SeqNormKind("weak", 2.0), target=SeqNormKind("pos_strong", 2.0))
    with pytest.raises(ValueError):
        IdealKind("mystery", NormParams(2.0, 2.0))
    with pytest.raises(ValueError):
        IdealKind("induced", source=SeqNormKind("weak", 2.0))
    with pytest.raises(ValueError):
        IdealKind("lambda")
    with pytest.raises(ValueError):
        IdealKind("cn_left", NormParams(INF, 2.0))


def test_operator_norm_hand_values():
    l1 = LatticeSpace(2, 1.0)
    linf = LatticeSpace(2, INF)
    l2 = LatticeSpace(2, 2.0)
    M = np.array([[1.0, -2.0], [3.0, 4.0]])
    est = operator_norm(_op(M, l1, l1))
    assert est.exact
    assert est.value == pytest.approx(6.0)  # max column sum
    est = operator_norm(_op(M, linf, linf))
    assert est.exact
    assert est.value == pytest.approx(7.0)  # max row sum
    est = operator_norm(_op(M, l2, l2))
    assert est.exact
    assert est.value == pytest.approx(float(np.linalg.svd(M, compute_uv=False)[0]))
    diag = operator_norm(_op(np.diag([2.0, 3.0]), l2, l2))
    assert diag.value == pytest.approx(3.0)


def test_operator_norm_weighted_codomain():
    dom = LatticeSpace(2, 2.0)
    cod = LatticeSpace(2, 2.0, [4.0, 1.0])
    M = np.eye(2)
    # weighting the first output coordinate by 4 doubles its norm
    assert operator_norm(_op(M, dom, cod)).value == pytest.approx(2.0)


def test_lambda_norm_p_inf_collapses_to_operator_norm():
    dom = LatticeSpace(2, 1.5)
    cod = LatticeSpace(2, 2.0)
    T = _op([[1.0, 2.0], [0.0, 1.0]], dom, cod)
    lam = lambda_norm(T, NormParams(INF, 2.0), m=3, cfg=FAST)
    assert lam.value == operator_norm(T, FAST).value
    assert isinstance(lam.certificate, tuple) and len(lam.certificate) == 1


def test_lambda_norm_scalar_identity_is_one():
    # on scalars the strong and positive weak norms coincide entrywise,
    # so the summing constant of the identity is exactly 1
    sp = LatticeSpace(1, 2.0)
    T = _op([[1.0]], sp, sp)
    est = lambda_norm(T, NormParams(2.0, 1.5), m=3, cfg=FAST)
    assert est.value == pytest.approx(1.0, rel=1e-7)
    assert est.value <= 1.0 + 1e-9


def test_ideal_norms_scale_linearly():
    rng = np.random.default_rng(2)
    dom = LatticeSpace(2, 1.5, [1.0, 2.0])
    cod = LatticeSpace(2, 2.0, [0.5, 1.0])
    M = rng.standard_normal((2, 2))
    pr = NormParams(2.0, 1.5)
    for fn in (
        lambda T: lambda_norm(T, pr, m=2, cfg=FAST),
        lambda T: dplus_norm(T, pr, m=2, cfg=FAST),
        lambda T: majorizing_norm(T, pr, m=2, cfg=FAST),
        lambda T: cohen_nuclear_norm(T, "both", pr, m=2, cfg=FAST),
    ):
        base = fn(_op(M, dom, cod)).value
        scaled = fn(_op(2.5 * M, dom, cod)).value
        assert scaled == pytest.approx(2.5 * base, rel=1e-9)


def test_lambda_norm_monotone_in_length():
    rng = np.random.default_rng(3)
    dom = LatticeSpace(3, 1.0)
    cod = LatticeSpace(2, 2.0)
    T = _op(np.abs(rng.standard_normal((2, 3))), dom, cod)
    vals = [lambda_norm(T, NormParams(2.0, 2.0), m=m, cfg=FAST).value for m in (1, 2, 4)]
    assert vals[0] <= vals[1] + 1e-12
    assert vals[1] <= vals[2] + 1e-12


def test_dplus_paths_and_both_dominates():
    rng = np.random.default_rng(4)
    dom = LatticeSpace(2, 2.0)
    cod = LatticeSpace(2, 1.5, [1.0, 0.5])
    T = _op(rng.standard_normal((2, 2)), dom, cod)
    pr = NormParams(2.0, 1.5)
    both = dplus_norm(T, pr, m=2, cfg=FAST, path="both")
    bil = dplus_norm(T, pr, m=2, cfg=FAST, path="bilinear")
    seq = dplus_norm(T, pr, m=2, cfg=FAST, path="sequence")
    assert both.value >= bil.value - 1e-12
    assert both.value >= seq.value - 1e-12
    assert len(bil.certificate) == 1
    assert len(seq.certificate) == 2
    with pytest.raises(ValueError):
        dplus_norm(T, pr, path="fast")


def test_dplus_p_inf_has_only_bilinear_route():
    T = _op(np.eye(2), LatticeSpace(2), LatticeSpace(2))
    pr = NormParams(INF, 2.0)
    est = dplus_norm(T, pr, m=2, cfg=FAST)
    assert est.value > 0
    with pytest.raises(UnsupportedPairError):
        dplus_norm(T, pr, m=2, cfg=FAST, path="sequence")


def test_induced_constant_delegates_bitwise():
    rng = np.random.default_rng(5)
    dom = LatticeSpace(2, 1.5)
    cod = LatticeSpace(2, 2.0, [1.0, 2.0])
    T = _op(rng.standard_normal((2, 2)), dom, cod)
    cases = [
        (("pos_weak", 1.5), ("strong", 2.0), lambda: lambda_norm(T, NormParams(2.0, 1.5), 2, FAST)),
        (
            ("strong", 1.5),
            ("pos_strong", 2.0),
            lambda: dplus_norm(T, NormParams(2.0, 1.5), 2, FAST, path="sequence"),
        ),
        (
            ("pos_weak", 1.5),
            ("cohen", 2.0),
            lambda: cohen_nuclear_norm(T, "left", NormParams(2.0, 1.5), 2, FAST),
        ),
        (
            ("weak", 1.5),
            ("pos_strong", 2.0),
            lambda: cohen_nuclear_norm(T, "right", NormParams(2.0, 1.5), 2, FAST),
        ),
        (
            ("pos_weak", 1.5),
            ("pos_strong", 2.0),
            lambda: cohen_nuclear_norm(T, "both", NormParams(2.0, 1.5), 2, FAST),
        ),
    ]
    for (stag, spar), (ttag, tpar), direct in cases:
        got = induced_map_constant(T, SeqNormKind(stag, spar), SeqNormKind(ttag, tpar), 2, FAST)
        want = direct()
        assert got.value == want.value


def test_induced_same_kind_pairs():
    rng = np.random.default_rng(6)
    dom = LatticeSpace(2, 1.0)
    cod = LatticeSpace(2, INF)
    T = _op(np.abs(rng.standard_normal((2, 2))), dom, cod)
    for tag in ("strong", "weak", "pos_weak"):
        est = induced_map_constant(T, SeqNormKind(tag, 2.0), SeqNormKind(tag, 2.0), 2, FAST)
        assert est.value > 0
    with pytest.raises(UnsupportedPairError):
        induced_map_constant(T, SeqNormKind("strong", 2.0), SeqNormKind("strong", 1.5), 2, FAST)
    with pytest.raises(UnsupportedPairError):
        induced_map_constant(T, SeqNormKind("strong", 2.0), SeqNormKind("weak", 2.0), 2, FAST)
    with pytest.raises(UnsupportedPairError):
        induced_map_constant(T, SeqNormKind("cohen", 2.0), SeqNormKind("cohen", 2.0), 2, FAST)


def test_ideal_norm_dispatch_matches_direct():
    rng = np.random.default_rng(7)
    dom = LatticeSpace(2, 2.0)
    cod = LatticeSpace(2, 1.5)
    T = _op(rng.standard_normal((2, 2)), dom, cod)
    pr = NormParams(2.0, 1.5)
    assert ideal_norm(T, IdealKind("lambda", pr), 2, FAST).value == lambda_norm(T, pr, 2, FAST).value
    assert ideal_norm(T, IdealKind("dplus", pr), 2, FAST).value == dplus_norm(T, pr, 2, FAST).value
    assert (
        ideal_norm(T, IdealKind("majorizing", pr), 2, FAST).value
        == majorizing_norm(T, pr, 2, FAST).value
    )
    assert (
        ideal_norm(T, IdealKind("cn_right", pr), 2, FAST).value
        == cohen_nuclear_norm(T, "right", pr, 2, FAST).value
    )
    kind = IdealKind("induced", source=SeqNormKind("pos_weak", 1.5), target=SeqNormKind("strong", 2.0))
    assert ideal_norm(T, kind, 2, FAST).value == lambda_norm(T, pr, 2, FAST).value


def test_majorizing_close_to_dplus_of_adjoint():
    rng = np.random.default_rng(8)
    dom = LatticeSpace(2, 2.0)
    cod = LatticeSpace(2, 1.5, [1.0, 2.0])
    T = _op(rng.standard_normal((2, 2)), dom, cod)
    cfg = SearchConfig(starts=96, max_iters=200)
    pr = NormParams(2.0, 2.0)
    maj = majorizing_norm(T, pr, m=3, cfg=cfg).value
    dp = dplus_norm(T.adjoint, NormParams(2.0, 2.0), m=3, cfg=cfg).value
    assert abs(maj - dp) / max(maj, dp) < 0.1


def test_ideal_norm_deterministic():
    rng = np.random.default_rng(9)
    T = _op(rng.standard_normal((2, 2)), LatticeSpace(2, 1.5), LatticeSpace(2, 2.0))
    pr = NormParams(2.0, 1.5)
    a = dplus_norm(T, pr, m=2, cfg=FAST)
    b = dplus_norm(T, pr, m=2, cfg=FAST)
    assert a.value == b.value
    for ca, cb in zip(a.certificate, b.certificate):
        np.testing.assert_array_equal(ca, cb)
