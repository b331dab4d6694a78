"""Norms of finite vector sequences in a weighted coordinate lattice.

For a sequence S = (x_1, ..., x_m) in a space X and exponents q, p:

* strong:      ell_q norm of the vector of norms (||x_i||)_i.
* weak:        sup over functionals a in the dual unit ball of the ell_q
               norm of (<a, x_i>)_i.
* pos_weak:    the same sup restricted to a >= 0, applied to (|x_i|)_i.
* cohen:       sup of sum_i <v_i, x_i> over dual sequences V with
               weak_{p*}(V) <= 1.
* pos_strong:  sup of sum_i <v_i, |x_i|> over nonnegative dual sequences
               V with pos_weak_{p*}(V) <= 1.

At p = 1 both cohen and pos_strong collapse to the strong norm with q = 1
and are computed exactly.  Certificates always verify: evaluating the
returned functional or dual sequence reproduces the value up to roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels as K
from .lattice import SpaceMismatchError, VectorSequence, conjugate_exponent
from .search import NormEstimate, SearchConfig, maximize_linear_over_norm_body

__all__ = [
    "SeqNormKind",
    "strong_norm",
    "weak_norm",
    "positive_weak_norm",
    "cohen_norm",
    "positive_strong_norm",
    "seq_norm",
    "tail_profile",
    "duality_pairing",
]

_INF = math.inf
_TAGS = ("strong", "weak", "pos_weak", "cohen", "pos_strong")


@dataclass(frozen=True)
class SeqNormKind:
    """A sequence norm family tag plus its exponent."""

    tag: str
    parameter: float

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown sequence norm tag {self.tag!r}")
        p = float(self.parameter)
        if not (p >= 1.0):
            raise ValueError("parameter must lie in [1, inf]")
        if self.tag in ("cohen", "pos_strong") and p == _INF:
            raise ValueError(f"{self.tag} norm needs a finite parameter")
        object.__setattr__(self, "parameter", p)


def strong_norm(seq: VectorSequence, q: float) -> float:
    """ell_q norm of the norms of the entries."""
    norms = np.asarray(seq.space.norm_of(seq.array)) if len(seq) else np.zeros(0)
    return float(K.pnorm(norms, q))


def _wrap(
    value: float, certificate, exact: bool, cfg: SearchConfig, method: Optional[str] = None
) -> NormEstimate:
    cert = np.array(certificate, dtype=float)
    cert.setflags(write=False)
    return NormEstimate(
        value=float(value),
        certificate=cert,
        exact=exact,
        method=method or ("vertex_enum" if exact else "multistart_ascent"),
        starts_used=0,
        iterations=0,
        seed=cfg.seed,
    )


def weak_norm(seq: VectorSequence, q: float, cfg: Optional[SearchConfig] = None) -> NormEstimate:
    """Weak sequence norm; the certificate is a dual unit functional."""
    cfg = cfg or SearchConfig()
    val, arg, exact = K.ball_sup(seq.array, q, seq.space.dual, return_arg=True)
    return _wrap(val, arg, exact, cfg)


def positive_weak_norm(
    seq: VectorSequence,
    q: float,
    cfg: Optional[SearchConfig] = None,
    extra_starts=None,
) -> NormEstimate:
    """Positive weak sequence norm; certificate is a nonnegative functional.

    The weak-norm certificate is recycled as a warm start, which keeps the
    estimate at or above the weak norm even on the inexact branch; callers
    may inject further nonnegative functional starts via extra_starts.
    """
    cfg = cfg or SearchConfig()
    dual = seq.space.dual
    _, weak_arg, _ = K.ball_sup(seq.array, q, dual, return_arg=True)
    starts = [np.abs(weak_arg)[None, :]]
    if extra_starts is not None:
        starts.append(np.abs(np.atleast_2d(np.asarray(extra_starts, dtype=float))))
    val, arg, exact = K.pos_ball_sup(
        np.abs(seq.array), q, dual, return_arg=True, extra_starts=np.concatenate(starts)
    )
    return _wrap(val, arg, exact, cfg)


def _row_attainers(space, rows: np.ndarray) -> np.ndarray:
    """Unit dual functionals pairing each row to its norm."""
    return K.dual_attainer(space.dual, rows)


def _holder_candidate(space, rows: np.ndarray, p: float) -> np.ndarray:
    """Dual sequence witnessing strong_p from below: rows a_i^(p-1) u_i."""
    norms = np.asarray(space.norm_of(rows))
    att = _row_attainers(space, rows)
    return att * (norms ** (p - 1.0))[:, None]


def _structured_candidates(space, rows: np.ndarray, p: float):
    """Cheap structured dual sequences used as warm starts."""
    cands = [_holder_candidate(space, rows, p)]
    m, n = rows.shape
    peak = np.argmax(np.abs(rows), axis=1)
    basis = np.zeros((m, n))
    basis[np.arange(m), peak] = 1.0
    cands.append(_row_attainers(space, basis))
    cands.append(np.abs(rows))
    for j in range(n):
        col = np.zeros((m, n))
        col[:, j] = np.abs(rows[:, j]) ** (p - 1.0)
        cands.append(col)
    # orthogonal-factor candidates seed the spectral geometry that rules
    # Euclidean-exponent constraints; scaling the columns by sqrt(w) maps
    # the weighted ball onto the spectral ball where the polar factor of
    # the objective is the unconstrained optimum
    root_w = np.sqrt(space.weights)[None, :]
    try:
        U, _, Vt = np.linalg.svd(rows * root_w, full_matrices=False)
    except np.linalg.LinAlgError:
        return cands
    cands.append((U @ Vt) * root_w)
    cands.append(np.outer(U[:, 0], Vt[0]) * root_w)
    return cands


def _collapse_certified(seq: VectorSequence, positive: bool, cfg: SearchConfig) -> NormEstimate:
    rows = np.abs(seq.array) if positive else seq.array
    att = _row_attainers(seq.space, rows)
    value = float(np.sum(rows * att))
    cert = att
    return _wrap(value, cert, True, cfg)


def _l1_exact_linear(space, target: np.ndarray, p: float, positive: bool, cfg) -> NormEstimate:
    """Exact nuclear-type value over exponent-one spaces.

    The ball of an exponent-one space has vertices e_j / w_j, so the
    (positive) weak constraint on dual sequences decouples into one
    ell_{p*} ball of radius w_j per coordinate and the supremum splits
    column-wise into w_j times the ell_p norm of the (positive part of)
    the column.
    """
    cols = np.maximum(target, 0.0) if positive else target
    witness = space.weights[None, :] * K._psi(cols.T, p).T
    value = float(np.sum(space.weights * K.pnorm(cols, p, axis=0)))
    return _wrap(value, witness, True, cfg)


def _euclidean_signed_linear(space, target: np.ndarray, cfg) -> NormEstimate:
    """Exact nuclear-type value over exponent-two spaces at p = 2.

    Scaling the columns by sqrt(w) turns the weak constraint on dual
    sequences into the spectral unit ball, so the supremum is the nuclear
    norm of the scaled array, attained at the polar factor scaled back.
    """
    root_w = np.sqrt(space.weights)[None, :]
    M = target * root_w
    U, sv, Vt = np.linalg.svd(M, full_matrices=False)
    return _wrap(float(np.sum(sv)), (U @ Vt) * root_w, True, cfg)


def _euclidean_positive_linear(space, target: np.ndarray, cfg) -> NormEstimate:
    """Positive nuclear-type value over exponent-two spaces at p = 2.

    After the sqrt(w) column scaling the program maximizes a linear
    functional over nonnegative contractions, which the splitting kernel
    solves with certified two-sided bounds; the lower value is returned
    and marked exact once the gap has closed.
    """
    root_w = np.sqrt(space.weights)[None, :]
    lo, _, W, closed = K.spectral_cone_sup(target * root_w)
    return _wrap(lo, W * root_w, closed, cfg, method="convex_splitting")


def cohen_norm(
    seq: VectorSequence,
    p: float,
    cfg: Optional[SearchConfig] = None,
    extra_inits=None,
) -> NormEstimate:
    """Cohen-type nuclear sequence norm with exponent p in [1, inf).

    p = 1 collapses exactly to strong_1; for p > 1 a normalize-and-ascend
    search runs over dual sequences constrained by their weak p* norm.
    The certificate is the optimizing dual sequence.
    """
    cfg = cfg or SearchConfig()
    if p == 1.0:
        return _collapse_certified(seq, positive=False, cfg=cfg)
    if not (1.0 < p < _INF):
        raise ValueError("cohen norm needs p in [1, inf)")
    if len(seq) == 0:
        return _wrap(0.0, np.zeros((0, seq.space.dim)), True, cfg)
    ps = conjugate_exponent(p)
    space = seq.space
    if space.exponent == 1.0:
        return _l1_exact_linear(space, seq.array, p, False, cfg)
    if space.exponent == 2.0 and p == 2.0:
        return _euclidean_signed_linear(space, seq.array, cfg)

    def constraint(V):
        return K.ball_sup_batch(V, ps, space)

    inits = _structured_candidates(space, seq.array, p)
    inits += _structured_candidates(space, np.abs(seq.array), p)
    if extra_inits is not None:
        inits += [np.asarray(e, dtype=float) for e in extra_inits]
    est = maximize_linear_over_norm_body(
        seq.array, constraint, cfg, nonneg=False, sign_align=True, extra_inits=inits
    )
    return est


def positive_strong_norm(
    seq: VectorSequence,
    p: float,
    cfg: Optional[SearchConfig] = None,
    extra_inits=None,
) -> NormEstimate:
    """Positive nuclear-type sequence norm with exponent p in [1, inf).

    p = 1 collapses exactly to strong_1; for p > 1 the search runs over
    nonnegative dual sequences constrained by their positive weak p* norm.
    """
    cfg = cfg or SearchConfig()
    if p == 1.0:
        return _collapse_certified(seq, positive=True, cfg=cfg)
    if not (1.0 < p < _INF):
        raise ValueError("pos_strong norm needs p in [1, inf)")
    if len(seq) == 0:
        return _wrap(0.0, np.zeros((0, seq.space.dim)), True, cfg)
    ps = conjugate_exponent(p)
    space = seq.space
    rows = np.abs(seq.array)
    if space.exponent == 1.0:
        return _l1_exact_linear(space, rows, p, True, cfg)
    if space.exponent == 2.0 and p == 2.0:
        return _euclidean_positive_linear(space, rows, cfg)

    def constraint(V):
        return K.ball_sup_batch(np.maximum(V, 0.0), ps, space)

    inits = [np.abs(c) for c in _structured_candidates(space, rows, p)]
    if extra_inits is not None:
        inits += [np.abs(np.asarray(e, dtype=float)) for e in extra_inits]
    est = maximize_linear_over_norm_body(
        rows, constraint, cfg, nonneg=True, sign_align=False, extra_inits=inits
    )
    return est


def seq_norm(seq: VectorSequence, kind: SeqNormKind, cfg: Optional[SearchConfig] = None) -> NormEstimate:
    """Uniform dispatcher; strong norms are wrapped as exact estimates."""
    cfg = cfg or SearchConfig()
    if kind.tag == "strong":
        return NormEstimate(
            value=strong_norm(seq, kind.parameter),
            certificate=None,
            exact=True,
            method="vertex_enum",
            starts_used=0,
            iterations=0,
            seed=cfg.seed,
        )
    if kind.tag == "weak":
        return weak_norm(seq, kind.parameter, cfg)
    if kind.tag == "pos_weak":
        return positive_weak_norm(seq, kind.parameter, cfg)
    if kind.tag == "cohen":
        return cohen_norm(seq, kind.parameter, cfg)
    return positive_strong_norm(seq, kind.parameter, cfg)


def tail_profile(seq: VectorSequence, kind: SeqNormKind, cfg: Optional[SearchConfig] = None) -> np.ndarray:
    """Norms of the tails (x_k, ..., x_m) for k = 1..m.

    The true tail norms never increase with k; estimates track that up to
    search accuracy.
    """
    vals = [seq_norm(seq.tail(k), kind, cfg).value for k in range(len(seq))]
    return np.array(vals)


def duality_pairing(seq: VectorSequence, dual_seq: VectorSequence) -> float:
    """sum_i <v_i, x_i> for a sequence and a dual sequence of equal length."""
    if dual_seq.space != seq.space.dual:
        raise SpaceMismatchError("dual sequence must live in the dual space")
    if len(seq) != len(dual_seq):
        raise SpaceMismatchError("sequences must have equal length")
    return float(np.sum(seq.array * dual_seq.array))
