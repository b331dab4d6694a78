"""Brute-force reference evaluators used only by tests.

Everything here re-derives norm values from the defining suprema by
integer-direction grids and finite enumerations, independently of the
multistart search engines.  Norm formulas are re-implemented locally on
purpose; only the space bookkeeping (dual weights, exponents) is shared.

Certification rule: every grid candidate fed into a ratio or constrained
sup is made truly feasible by dividing with an upper bound of its
constraint norm: the exact value when the constraint ball is polyhedral
(finite extreme enumeration), otherwise an inner grid value plus its
Lipschitz slack.  Oracle values are therefore always lower bounds of the
true suprema, so a correct search estimator can match but never fall
below them once the oracle witness is handed to it as a warm start.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import LatticeSpace
from .search import NormEstimate
from .seqnorms import SeqNormKind, VectorSequence
from .opnorms import IdealKind, LinearOperator

__all__ = [
    "GridSpec",
    "DimensionTooLargeError",
    "grid_max",
    "bruteforce_seq_norm",
    "bruteforce_ideal_norm",
]

_INF = math.inf
_CHUNK = 65536


class DimensionTooLargeError(ValueError):
    """The instance exceeds the hard caps of the brute-force oracles."""


@dataclass(frozen=True)
class GridSpec:
    """Mesh step and size cap for the integer-direction grids."""

    step: float = 0.05
    max_points: int = 2_000_000

    def __post_init__(self):
        if not (0.0 < self.step <= 0.25):
            raise ValueError("step must lie in (0, 0.25]")
        if self.max_points < 1:
            raise ValueError("max_points must be positive")

    @property
    def resolution(self) -> int:
        return int(math.ceil(1.0 / self.step))


def _lp(vals: np.ndarray, q: float, axis: int = -1) -> np.ndarray:
    vals = np.abs(np.asarray(vals, dtype=float))
    if q == _INF:
        return np.max(vals, axis=axis)
    return np.sum(vals**q, axis=axis) ** (1.0 / q)


def _vnorm(space: LatticeSpace, arr: np.ndarray, axis: int = -1) -> np.ndarray:
    """Weighted lattice norm by the direct formula."""
    a = np.abs(np.asarray(arr, dtype=float))
    if space.exponent == _INF:
        return np.max(space.weights * a, axis=axis)
    return np.sum(space.weights * a**space.exponent, axis=axis) ** (1.0 / space.exponent)


def _int_grid(dims: int, spec: GridSpec, signed: bool) -> np.ndarray:
    """All nonzero integer directions with coordinates up to the resolution."""
    K = spec.resolution
    side = 2 * K + 1 if signed else K + 1
    total = side**dims
    if total > spec.max_points:
        raise DimensionTooLargeError(
            f"grid of {total} points exceeds max_points={spec.max_points}"
        )
    axis = np.arange(-K, K + 1) if signed else np.arange(K + 1)
    pts = np.stack(np.meshgrid(*([axis] * dims), indexing="ij"), axis=-1).reshape(-1, dims)
    keep = np.any(pts != 0, axis=1)
    return pts[keep].astype(float)


def _pos_extremes_local(space: LatticeSpace) -> np.ndarray:
    n, w = space.dim, space.weights
    if space.exponent == 1.0:
        return np.diag(1.0 / w)
    masks = np.arange(1, 2**n)
    bits = (masks[:, None] >> np.arange(n)[None, :]) & 1
    return bits / w


def _signed_extremes_local(space: LatticeSpace) -> np.ndarray:
    n, w = space.dim, space.weights
    if space.exponent == 1.0:
        eye = np.diag(1.0 / w)
        return np.concatenate([eye, -eye])
    masks = np.arange(2**n)
    signs = 1.0 - 2.0 * ((masks[:, None] >> np.arange(n)[None, :]) & 1)
    return signs / w


def _ball_directions(space: LatticeSpace, spec: GridSpec, positive: bool) -> np.ndarray:
    """Grid points on the (positive part of the) unit sphere of the space."""
    dirs = _int_grid(space.dim, spec, signed=not positive)
    return dirs / _vnorm(space, dirs)[:, None]


def _sup_over_ball(
    arrs: np.ndarray, q: float, space: LatticeSpace, spec: GridSpec, positive: bool, upper: bool
) -> np.ndarray:
    """sup over x in the (positive) unit ball of space of ell_q(arrs @ x).

    Exact by extreme enumeration when the ball is polyhedral; otherwise a
    grid value, plus its Lipschitz slack when an upper bound is required.
    """
    arrs = np.asarray(arrs, dtype=float)
    exact = space.exponent in (1.0, _INF)
    if exact:
        pts = _pos_extremes_local(space) if positive else _signed_extremes_local(space)
    else:
        pts = _ball_directions(space, spec, positive)
    # block both axes so the (batch, m, points) temporary stays near 64 MB
    ecap = min(pts.shape[0], _CHUNK)
    bsz = max(1, 8_000_000 // max(1, arrs.shape[1] * ecap))
    best = np.empty(arrs.shape[0])
    for lo in range(0, arrs.shape[0], bsz):
        sub = arrs[lo : lo + bsz]
        sub_best = np.zeros(sub.shape[0])
        for elo in range(0, pts.shape[0], _CHUNK):
            chunk = pts[elo : elo + _CHUNK]
            vals = _lp(np.einsum("bmn,en->bme", sub, chunk), q, axis=-2)
            sub_best = np.maximum(sub_best, np.max(vals, axis=-1))
        best[lo : lo + bsz] = sub_best
    if upper and not exact:
        best = best + spec.step * _lp(np.sum(np.abs(arrs), axis=-1), q, axis=-1)
    return best


def _oracle_estimate(value: float, certificate) -> NormEstimate:
    return NormEstimate(
        value=float(value),
        certificate=certificate,
        exact=False,
        method="grid_oracle",
        starts_used=0,
        iterations=0,
        seed=0,
    )


def grid_max(f, space: LatticeSpace, spec: GridSpec) -> NormEstimate:
    """Max of f over normalized nonnegative grid directions of the ball.

    A certified lower bound of the true positive-ball supremum; for an
    L-Lipschitz objective the gap is at most L * step * sqrt(dim).
    """
    if space.dim > 4:
        raise DimensionTooLargeError("grid_max supports dimension at most 4")
    pts = _ball_directions(space, spec, positive=True)
    best_val = -_INF
    best_pt = pts[0]
    for lo in range(0, pts.shape[0], _CHUNK):
        chunk = pts[lo : lo + _CHUNK]
        out = f(chunk)
        vals = np.asarray(out[0] if isinstance(out, tuple) else out, dtype=float)
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val = float(vals[k])
            best_pt = chunk[k]
    cert = np.array(best_pt)
    cert.setflags(write=False)
    return _oracle_estimate(best_val, cert)


def _array_ratio_max(cands: np.ndarray, den: np.ndarray, num: np.ndarray):
    ok = den > 1e-300
    ratios = np.where(ok, num / np.where(ok, den, 1.0), 0.0)
    k = int(np.argmax(ratios))
    return float(ratios[k]), cands[k]


def bruteforce_seq_norm(seq: VectorSequence, kind: SeqNormKind, spec: GridSpec) -> NormEstimate:
    """Sequence norms re-evaluated from their defining suprema.

    strong is the direct formula; weak and pos_weak grid over the dual
    ball; cohen and pos_strong grid over the m x n dual array with the
    constraint norm bounded from above, so the value is a certified
    lower bound.
    """
    space = seq.space
    m, n = len(seq), space.dim
    if n > 3 or m > 4:
        raise DimensionTooLargeError("bruteforce_seq_norm needs dim <= 3 and length <= 4")
    if m == 0:
        return _oracle_estimate(0.0, None)
    S = seq.array
    tag, par = kind.tag, kind.parameter

    if tag == "strong":
        val = _lp(_vnorm(space, S), par) if m else 0.0
        return _oracle_estimate(val, None)

    if tag in ("weak", "pos_weak"):
        base = np.abs(S) if tag == "pos_weak" else S
        dirs = _ball_directions(space.dual, spec, positive=(tag == "pos_weak"))
        best_val, best_dir = -_INF, dirs[0]
        for lo in range(0, dirs.shape[0], _CHUNK):
            chunk = dirs[lo : lo + _CHUNK]
            vals = _lp(chunk @ base.T, par, axis=-1)
            k = int(np.argmax(vals))
            if vals[k] > best_val:
                best_val, best_dir = float(vals[k]), chunk[k]
        cert = np.array(best_dir)
        cert.setflags(write=False)
        return _oracle_estimate(best_val, cert)

    if tag in ("cohen", "pos_strong"):
        positive = tag == "pos_strong"
        ps = 1.0 if par == _INF else (_INF if par == 1.0 else par / (par - 1.0))
        cands = _int_grid(m * n, spec, signed=not positive).reshape(-1, m, n)
        den = _sup_over_ball(cands, ps, space, spec, positive=positive, upper=True)
        target = np.abs(S) if positive else S
        num = cands.reshape(cands.shape[0], -1) @ target.ravel()
        val, best = _array_ratio_max(cands, den, num)
        cert = np.array(best)
        cert.setflags(write=False)
        return _oracle_estimate(val, cert)

    raise ValueError(f"unknown sequence norm tag {tag!r}")


def bruteforce_ideal_norm(
    T: LinearOperator, kind: IdealKind, m: int, spec: GridSpec
) -> NormEstimate:
    """Ideal norms re-evaluated by witness grids at lengths 1..m.

    lambda grids over the domain-sequence block; dplus and majorizing
    over the nonnegative dual block (their inner maximizations coincide
    in closed form, which is exactly the identity the search suites
    re-check); the nuclear kinds grid jointly over both blocks.
    Certificates use the same block tuples as the search estimators so
    they can be injected back as warm starts.
    """
    E, F = T.domain, T.codomain
    if E.dim > 2 or F.dim > 2:
        raise DimensionTooLargeError("bruteforce_ideal_norm needs dims <= 2")
    if m > 2:
        raise DimensionTooLargeError("bruteforce_ideal_norm needs m <= 2")
    if kind.tag == "induced" or kind.params is None:
        raise ValueError("oracle supports only the exponent-parameterized kinds")
    p, q = kind.params.p, kind.params.q
    ps, qs = kind.params.p_conj, kind.params.q_conj
    M = T.matrix

    best_val = 0.0
    best_cert = None
    for mm in range(1, m + 1):
        if kind.tag == "lambda":
            cands = _int_grid(mm * E.dim, spec, signed=True).reshape(-1, mm, E.dim)
            den = _sup_over_ball(np.abs(cands), q, E.dual, spec, positive=True, upper=True)
            num = _lp(_vnorm(F, cands @ M.T), p, axis=-1)
            val, block = _array_ratio_max(cands, den, num)
            cert = (block,)
        elif kind.tag in ("dplus", "majorizing"):
            cands = _int_grid(mm * F.dim, spec, signed=False).reshape(-1, mm, F.dim)
            den = _sup_over_ball(cands, ps, F, spec, positive=False, upper=True)
            num = _lp(_vnorm(E.dual, cands @ M), qs, axis=-1)
            val, block = _array_ratio_max(cands, den, num)
            cert = (block,)
        elif kind.tag in ("cn_left", "cn_right", "cn_both"):
            s_pos = kind.tag in ("cn_left", "cn_both")
            w_pos = kind.tag in ("cn_right", "cn_both")
            scand = _int_grid(mm * E.dim, spec, signed=True).reshape(-1, mm, E.dim)
            s_base = np.abs(scand) if s_pos else scand
            sden = _sup_over_ball(s_base, q, E.dual, spec, positive=s_pos, upper=True)
            wcand = _int_grid(mm * F.dim, spec, signed=not w_pos).reshape(-1, mm, F.dim)
            if scand.shape[0] * wcand.shape[0] > spec.max_points:
                raise DimensionTooLargeError("joint nuclear grid exceeds max_points")
            wden = _sup_over_ball(wcand, ps, F, spec, positive=False, upper=True)
            images = scand @ M.T
            if kind.tag != "cn_left":
                images = np.abs(images)
            pair = images.reshape(images.shape[0], -1) @ wcand.reshape(wcand.shape[0], -1).T
            dens = sden[:, None] * wden[None, :]
            ok = dens > 1e-300
            ratios = np.where(ok, pair / np.where(ok, dens, 1.0), 0.0)
            i, j = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
            val = float(ratios[i, j])
            cert = (scand[i], wcand[j])
        else:
            raise ValueError(f"unknown ideal tag {kind.tag!r}")
        if val > best_val:
            best_val = val
            best_cert = tuple(np.array(c) for c in cert)
    if best_cert is not None:
        for c in best_cert:
            c.setflags(write=False)
    return _oracle_estimate(best_val, best_cert)
