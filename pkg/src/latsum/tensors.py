"""Positive and classical tensor norms on the left-sequence model.

A tensor here lives in the product of an unweighted length-m sequence
space with exponent p and a lattice space X, stored through the row
identification: row i of an m x n array is the X-part paired with the
i-th left basis vector.  Under that identification the injective cone is
the set of entrywise nonnegative arrays, and each tensor norm restricts
to a sequence norm of the rows:

    wittstock  <-> pos_weak      fremlin    <-> pos_strong
    groth-eps  <-> weak          groth-pi   <-> cohen
    delta      <-> strong

Wittstock runs a convex maximization over the positive conjugate ball of
the left factor; Fremlin a linear maximization over nonnegative bilinear
forms of unit norm.  Both sides of each identification are independent
code paths, compared by the verification suites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels as K
from .lattice import LatticeSpace, VectorSequence, conjugate_exponent
from .search import (
    NormEstimate,
    SearchConfig,
    maximize_convex_over_positive_ball,
    maximize_linear_over_norm_body,
)
from .seqnorms import (
    SeqNormKind,
    _euclidean_positive_linear,
    _l1_exact_linear,
    _structured_candidates,
    cohen_norm,
    strong_norm,
    weak_norm,
)
from .opnorms import LinearOperator, _holder_row_weights, induced_map_constant

__all__ = [
    "TensorElement",
    "PositiveBilinearForm",
    "GrothendieckNorms",
    "injective_cone_member",
    "wittstock_norm",
    "fremlin_norm",
    "grothendieck_norms",
    "induced_tensor_constant",
    "TENSOR_TO_SEQUENCE_TAG",
]

_INF = math.inf

TENSOR_TO_SEQUENCE_TAG = {
    "wittstock": "pos_weak",
    "fremlin": "pos_strong",
    "groth-eps": "weak",
    "groth-pi": "cohen",
    "delta": "strong",
}


@dataclass(frozen=True, eq=False)
class TensorElement:
    """A left-sequence tensor: rows in X paired with the e_i basis."""

    rows: VectorSequence
    left_exponent: float = 2.0

    def __post_init__(self):
        ex = float(self.left_exponent)
        if not (ex >= 1.0):
            raise ValueError("left exponent must satisfy p >= 1")
        if len(self.rows) < 1:
            raise ValueError("a tensor needs at least one row")
        object.__setattr__(self, "left_exponent", ex)

    @classmethod
    def from_array(cls, array, space: LatticeSpace, left_exponent: float = 2.0):
        return cls(VectorSequence(space, np.asarray(array, dtype=float)), left_exponent)

    @property
    def array(self) -> np.ndarray:
        return self.rows.array

    @property
    def space(self) -> LatticeSpace:
        return self.rows.space

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def left_space(self) -> LatticeSpace:
        """The unweighted left factor as a lattice space."""
        return LatticeSpace(len(self.rows), self.left_exponent)

    def contract_left(self, w) -> np.ndarray:
        """The associated operator on left functionals: w maps to rows^T w."""
        return self.array.T @ np.asarray(w, dtype=float)


@dataclass(frozen=True, eq=False)
class PositiveBilinearForm:
    """An entrywise nonnegative array acting as a form on ball x ball."""

    array: np.ndarray
    space: LatticeSpace
    left_exponent: float = 2.0

    def __post_init__(self):
        arr = np.array(self.array, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != self.space.dim:
            raise ValueError("form array must be m x dim(space)")
        if np.any(arr < 0):
            raise ValueError("form entries must be nonnegative")
        arr.setflags(write=False)
        object.__setattr__(self, "array", arr)
        object.__setattr__(self, "left_exponent", float(self.left_exponent))

    def apply(self, left, right) -> float:
        left = np.asarray(left, dtype=float)
        right = np.asarray(right, dtype=float)
        return float(left @ self.array @ right)

    def norm(self) -> float:
        """Sup of the form over the two unit balls."""
        return float(K.ball_sup(self.array, conjugate_exponent(self.left_exponent), self.space))


def injective_cone_member(u: TensorElement) -> bool:
    """True iff the associated operator maps nonnegative left functionals
    to nonnegative lattice vectors, i.e. all entries are >= 0."""
    return bool(np.all(u.array >= 0))


def wittstock_norm(
    u: TensorElement,
    cfg: Optional[SearchConfig] = None,
    extra_inits=None,
    force_search: bool = False,
) -> NormEstimate:
    """Injective-type positive tensor norm.

    The dominating-array infimum collapses to the entrywise absolute
    value, leaving sup of the X-norm of |rows|^T w over nonnegative w in
    the conjugate left ball.  Exact by vertex enumeration when that ball
    is polyhedral; otherwise multistart ascent with norming-functional
    gradients.
    """
    cfg = cfg or SearchConfig()
    A = np.abs(u.array)
    m = A.shape[0]
    space = u.space
    ball = LatticeSpace(m, conjugate_exponent(u.left_exponent))

    def f(batch: np.ndarray):
        images = batch @ A
        vals = np.asarray(space.norm_of(images))
        norming = K.dual_attainer(space.dual, images)
        return vals, norming @ A.T

    inits = [_holder_row_weights(np.asarray(space.norm_of(A)), ball.exponent)]
    if extra_inits is not None:
        inits.extend(np.asarray(e, dtype=float).ravel() for e in extra_inits)
    force = force_search or (ball.exponent == _INF and m > 16)
    return maximize_convex_over_positive_ball(
        f, ball, cfg, extra_inits=inits, force_search=force
    )


def fremlin_norm(
    u: TensorElement,
    cfg: Optional[SearchConfig] = None,
    extra_inits=None,
) -> NormEstimate:
    """Projective-type positive tensor norm.

    Maximizes the Frobenius pairing of the tensor against nonnegative
    bilinear forms of norm at most 1, in both sign orientations; the
    certificate is the best form array.
    """
    cfg = cfg or SearchConfig()
    U = u.array
    space = u.space
    ps = conjugate_exponent(u.left_exponent)
    if space.exponent == 1.0 and u.left_exponent < _INF:
        est = _l1_exact_linear(space, U, u.left_exponent, True, cfg)
        if np.any(U < 0):
            flipped = _l1_exact_linear(space, -U, u.left_exponent, True, cfg)
            if flipped.value > est.value:
                est = flipped
        return est
    if space.exponent == 2.0 and u.left_exponent == 2.0:
        est = _euclidean_positive_linear(space, U, cfg)
        if np.any(U < 0):
            flipped = _euclidean_positive_linear(space, -U, cfg)
            if flipped.value > est.value:
                est = flipped
        return est

    def constraint(B):
        return K.ball_sup_batch(np.maximum(B, 0.0), ps, space)

    inits = [np.abs(c) for c in _structured_candidates(space, np.abs(U), u.left_exponent)]
    if extra_inits is not None:
        inits += [np.abs(np.asarray(e, dtype=float)) for e in extra_inits]
    est = maximize_linear_over_norm_body(
        U, constraint, cfg, nonneg=True, sign_align=False, extra_inits=inits
    )
    if np.any(U < 0):
        flipped = maximize_linear_over_norm_body(
            -U, constraint, cfg, nonneg=True, sign_align=False, extra_inits=inits
        )
        if flipped.value > est.value:
            est = flipped
    return est


@dataclass(frozen=True)
class GrothendieckNorms:
    """Classical tensor norms of one element: injective, projective, delta."""

    eps: NormEstimate
    pi: Optional[NormEstimate]
    delta: float


def grothendieck_norms(u: TensorElement, cfg: Optional[SearchConfig] = None) -> GrothendieckNorms:
    """Classical injective and projective norms plus the diagonal delta.

    eps is the weak row norm and delta the strong row norm; pi is the
    Cohen row norm and is None when the left exponent is infinite.
    """
    cfg = cfg or SearchConfig()
    p = u.left_exponent
    eps = weak_norm(u.rows, p, cfg)
    pi = cohen_norm(u.rows, p, cfg) if p < _INF else None
    return GrothendieckNorms(eps=eps, pi=pi, delta=strong_norm(u.rows, p))


def induced_tensor_constant(
    T: LinearOperator,
    source_norm: str,
    target_norm: str,
    m: int = 4,
    cfg: Optional[SearchConfig] = None,
    *,
    source_exponent: float = 2.0,
    target_exponent: float = 2.0,
) -> NormEstimate:
    """Norm of the operator induced on tensors, source tag to target tag.

    Under the row identification every tabulated tensor-norm pair reduces
    to the matching sequence-norm pair, so this delegates to the ideal
    estimator for that pair and agrees with it bit-for-bit.
    """
    for tag in (source_norm, target_norm):
        if tag not in TENSOR_TO_SEQUENCE_TAG:
            raise ValueError(f"unknown tensor norm tag {tag!r}")
    source = SeqNormKind(TENSOR_TO_SEQUENCE_TAG[source_norm], source_exponent)
    target = SeqNormKind(TENSOR_TO_SEQUENCE_TAG[target_norm], target_exponent)
    return induced_map_constant(T, source, target, m, cfg)
