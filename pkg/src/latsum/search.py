"""Deterministic multistart search engines and the estimate container.

Two maximization engines cover every non-closed-form norm in the package:

* maximize_convex_over_positive_ball: a convex objective over the positive
  part of a unit ball.  Polyhedral balls are solved exactly by extreme
  point enumeration; otherwise a projected multistart ascent runs on the
  positive part of the unit sphere.
* maximize_linear_over_norm_body: a linear objective over the unit body of
  an abstract positively homogeneous constraint, by normalize-and-ascend.

Determinism contract: results depend only on the inputs and the config.
Random start j draws from numpy's default_rng seeded with (seed, j), so
enlarging cfg.starts keeps all earlier starts bit-identical and the
returned value never decreases.  Acceptance inside the ascent is strict,
ties in the final argmax resolve to the lowest start index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .lattice import LatticeSpace, _positive_extreme_array, _signed_extreme_array

__all__ = [
    "SearchConfig",
    "NormEstimate",
    "DegenerateConstraintError",
    "maximize_convex_over_positive_ball",
    "maximize_linear_over_norm_body",
]

_INIT_STEP = 0.5
_BASIS_LIMIT = 32


class DegenerateConstraintError(ValueError):
    """The constraint vanished on every start, so nothing can be normalized."""


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the multistart engines; defaults suit the test suites.

    presample > 0 turns on an annealed preselection stage in the
    normalize-and-ascend engine: that many pooled candidates are ranked
    by the projected objective and the leaders join the start list.
    """

    starts: int = 64
    max_iters: int = 500
    step_shrink: float = 0.5
    tol: float = 1e-9
    seed: int = 0
    presample: int = 0

    def __post_init__(self):
        if self.starts < 0 or self.max_iters < 1:
            raise ValueError("starts must be >= 0 and max_iters >= 1")
        if not (0.0 < self.step_shrink < 1.0):
            raise ValueError("step_shrink must lie in (0, 1)")
        if not (self.tol > 0.0):
            raise ValueError("tol must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative for stream derivation")
        if self.presample < 0:
            raise ValueError("presample must be nonnegative")


@dataclass(frozen=True)
class NormEstimate:
    """A norm value plus the evidence for it.

    value is always attained (up to roundoff) at `certificate`, so it is a
    certified lower bound; `exact` marks branches that are provably the
    supremum.  method is one of vertex_enum, multistart_ascent,
    normalize_ascend, convex_splitting, grid_oracle.
    """

    value: float
    certificate: Optional[np.ndarray]
    exact: bool
    method: str
    starts_used: int
    iterations: int
    seed: int

    def __float__(self) -> float:
        return self.value


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


def _rng_directions(cfg: SearchConfig, count: int, shape) -> np.ndarray:
    """Pre-drawn ascent directions, one stream per random start."""
    dim = int(np.prod(shape))
    out = np.empty((count, cfg.max_iters + 1, dim))
    for j in range(count):
        rng = np.random.default_rng((cfg.seed, j))
        out[j] = rng.standard_normal((cfg.max_iters + 1, dim))
    return out


def _fro(a: np.ndarray) -> np.ndarray:
    flat = a.reshape(a.shape[0], -1)
    return np.sqrt(np.sum(flat * flat, axis=-1))


def _safe_unit(a: np.ndarray) -> np.ndarray:
    norms = _fro(a)
    safe = np.where(norms > 0, norms, 1.0)
    return a / safe.reshape((-1,) + (1,) * (a.ndim - 1))


def _ascend(evaluate, project, starts, rand_dirs, cfg: SearchConfig, upper_bound=None):
    """Shared multistart loop; returns (best value, best point, iterations).

    evaluate(batch, need_grad) maps a (K,) + shape batch to (vals (K,),
    grads or None); project maps arbitrary points back onto the feasible
    surface.  Each start keeps its own step size, acceptance is strictly
    improving, gradients are refreshed only for moved starts, and a start
    whose step drops below cfg.tol is frozen.
    """
    U = project(np.array(starts, dtype=float))
    vals, grads = evaluate(U, True)
    steps = np.full(U.shape[0], _INIT_STEP)
    expand = (slice(None),) + (None,) * (U.ndim - 1)
    iters = 0
    for t in range(cfg.max_iters):
        live = steps >= cfg.tol
        if not np.any(live):
            break
        iters = t + 1
        g = _safe_unit(grads)
        r = _safe_unit(rand_dirs[:, t, :].reshape(U.shape))
        step = steps[expand]
        K = U.shape[0]
        # additive moves explore freely; the multiplicative move tracks the
        # curved unit surface of non-polyhedral constraints without overshoot
        cands = project(
            np.concatenate([U + step * g, U + step * r, U * np.exp(step * r)], axis=0)
        )
        cvals, _ = evaluate(cands, False)
        tri_vals = np.stack([cvals[:K], cvals[K : 2 * K], cvals[2 * K :]])
        tri_cands = np.stack([cands[:K], cands[K : 2 * K], cands[2 * K :]])
        choice = np.argmax(tri_vals, axis=0)
        cv = tri_vals[choice, np.arange(K)]
        cU = tri_cands[choice, np.arange(K)]
        accept = live & (cv > vals)
        if np.any(accept):
            U[accept] = cU[accept]
            vals[accept] = cv[accept]
            _, moved_grads = evaluate(U[accept], True)
            grads[accept] = moved_grads
        steps[live & ~accept] *= cfg.step_shrink
        if upper_bound is not None and np.max(vals) >= upper_bound * (1.0 - 1e-12):
            break
    k = int(np.argmax(vals))
    return float(vals[k]), U[k], iters


def _positive_sphere_project(space: LatticeSpace):
    fallback = np.zeros(space.dim)
    if space.exponent == math.inf:
        fallback[:] = 1.0 / space.weights
    else:
        fallback[0] = space.weights[0] ** (-1.0 / space.exponent)

    def project(U: np.ndarray) -> np.ndarray:
        U = np.maximum(U, 0.0)
        norms = np.asarray(space.norm_of(U))
        dead = ~(norms > 0)
        safe = np.where(dead, 1.0, norms)
        U = U / safe[..., None]
        if np.any(dead):
            U = np.where(dead[..., None], fallback, U)
        return U

    return project


def _positive_sphere_starts(space: LatticeSpace, cfg: SearchConfig, extra_inits):
    rows = [np.ones(space.dim)]
    if space.dim <= _BASIS_LIMIT:
        rows.extend(np.eye(space.dim))
    for e in extra_inits or []:
        rows.append(np.maximum(np.asarray(e, dtype=float).ravel(), 0.0))
    fixed = len(rows)
    for j in range(cfg.starts):
        rng = np.random.default_rng((cfg.seed, j))
        rows.append(np.abs(rng.standard_normal(space.dim)))
    return np.stack(rows), fixed


def maximize_convex_over_positive_ball(
    f: Callable,
    space: LatticeSpace,
    cfg: Optional[SearchConfig] = None,
    extra_inits=None,
    force_search: bool = False,
    upper_bound: Optional[float] = None,
) -> NormEstimate:
    """Maximize a convex objective over the positive part of a unit ball.

    f maps a batch of points of shape (K, dim) to (values (K,), gradients
    (K, dim)).  For exponent 1 or inf the maximum is found exactly on the
    extreme points of the positive ball; otherwise (or with force_search)
    a projected multistart ascent runs on the positive unit sphere, which
    carries every extreme point of a strictly convex positive ball.
    """
    cfg = cfg or SearchConfig()
    extra_inits = list(extra_inits) if extra_inits is not None else []
    if space.is_polyhedral and not force_search:
        pts = _positive_extreme_array(space)
        if extra_inits:
            proj = _positive_sphere_project(space)
            extra = proj(np.stack([np.asarray(e, dtype=float).ravel() for e in extra_inits]))
            pts = np.concatenate([pts, extra])
        vals, _ = f(pts)
        k = int(np.argmax(vals))
        return NormEstimate(
            value=float(vals[k]),
            certificate=_frozen(pts[k]),
            exact=True,
            method="vertex_enum",
            starts_used=pts.shape[0],
            iterations=0,
            seed=cfg.seed,
        )
    starts, _ = _positive_sphere_starts(space, cfg, extra_inits)
    dirs = _rng_directions(cfg, starts.shape[0], (space.dim,))
    project = _positive_sphere_project(space)

    def evaluate(U, need_grad):
        vals, grads = f(U)
        return vals, (grads if need_grad else None)

    val, point, iters = _ascend(evaluate, project, starts, dirs, cfg, upper_bound)
    return NormEstimate(
        value=val,
        certificate=_frozen(point),
        exact=False,
        method="multistart_ascent",
        starts_used=starts.shape[0],
        iterations=iters,
        seed=cfg.seed,
    )


def _signed_sphere_project(space: LatticeSpace):
    fallback = np.zeros(space.dim)
    if space.exponent == math.inf:
        fallback[:] = 1.0 / space.weights
    else:
        fallback[0] = space.weights[0] ** (-1.0 / space.exponent)

    def project(U: np.ndarray) -> np.ndarray:
        norms = np.asarray(space.norm_of(U))
        dead = ~(norms > 0)
        safe = np.where(dead, 1.0, norms)
        U = U / safe[..., None]
        if np.any(dead):
            U = np.where(dead[..., None], fallback, U)
        return U

    return project


def _maximize_convex_over_sphere(
    f: Callable,
    space: LatticeSpace,
    cfg: Optional[SearchConfig] = None,
    extra_inits=None,
    force_search: bool = False,
    upper_bound: Optional[float] = None,
) -> NormEstimate:
    """Signed twin of maximize_convex_over_positive_ball (full unit ball)."""
    cfg = cfg or SearchConfig()
    if space.is_polyhedral and not force_search:
        pts = _signed_extreme_array(space)
        vals, _ = f(pts)
        k = int(np.argmax(vals))
        return NormEstimate(
            value=float(vals[k]),
            certificate=_frozen(pts[k]),
            exact=True,
            method="vertex_enum",
            starts_used=pts.shape[0],
            iterations=0,
            seed=cfg.seed,
        )
    rows = [np.ones(space.dim)]
    if space.dim <= _BASIS_LIMIT:
        rows.extend(np.eye(space.dim))
    if extra_inits is not None:
        rows.extend(np.asarray(e, dtype=float).ravel() for e in extra_inits)
    for j in range(cfg.starts):
        rng = np.random.default_rng((cfg.seed, j))
        rows.append(rng.standard_normal(space.dim))
    starts = np.stack(rows)
    dirs = _rng_directions(cfg, starts.shape[0], (space.dim,))
    project = _signed_sphere_project(space)

    def evaluate(U, need_grad):
        vals, grads = f(U)
        return vals, (grads if need_grad else None)

    val, point, iters = _ascend(evaluate, project, starts, dirs, cfg, upper_bound)
    return NormEstimate(
        value=val,
        certificate=_frozen(point),
        exact=False,
        method="multistart_ascent",
        starts_used=starts.shape[0],
        iterations=iters,
        seed=cfg.seed,
    )


def _preselect(C: np.ndarray, project, cfg: SearchConfig, nonneg: bool):
    """Annealed preselection for the normalize-and-ascend engine.

    Ranks a fixed mixed candidate pool of size about cfg.presample by the
    projected objective, then resamples around the leaders with
    shrinking lognormal jitter.  The pool streams are fixed constants,
    like the kernel warm grids, so the stage gives every seed the same
    coverage; the leaders feed in as extra starts without touching the
    monotone-in-starts contract.
    """
    shape = C.shape
    k = cfg.presample // 3 + 1
    base = np.abs(C) if nonneg else C
    r0 = np.random.default_rng((86243, 0))
    r1 = np.random.default_rng((86243, 1))
    r2 = np.random.default_rng((86243, 2))
    pool = np.concatenate(
        [
            r0.standard_normal((k,) + shape),
            base[None] * np.exp(0.5 * r1.standard_normal((k,) + shape)),
            r2.standard_normal((k,) + shape) * (r2.random((k,) + shape) < 0.4),
        ]
    )
    keep = min(16, pool.shape[0])
    leaders = None
    for stage, sigma in enumerate((0.0, 0.4, 0.15)):
        if stage:
            rng = np.random.default_rng((104729, stage))
            per = max(cfg.presample // (2 * keep), 4)
            jit = leaders[:, None] * np.exp(
                sigma * rng.standard_normal((keep, per) + shape)
            )
            pool = np.concatenate([leaders, jit.reshape((-1,) + shape)])
        proj = project(pool)
        vals = np.tensordot(proj, C, axes=C.ndim)
        order = np.argsort(vals)[::-1][:keep]
        leaders = proj[order]
    return [leaders[i] for i in range(min(4, leaders.shape[0]))]


def maximize_linear_over_norm_body(
    objective: np.ndarray,
    constraint: Callable,
    cfg: Optional[SearchConfig] = None,
    *,
    nonneg: bool = False,
    sign_align: bool = False,
    extra_inits=None,
    upper_bound: Optional[float] = None,
) -> NormEstimate:
    """Maximize <objective, V> over {V : constraint(V) <= 1}.

    constraint maps a batch (K,) + objective.shape to (K,) and must be
    positively homogeneous, so candidates are normalized onto the unit
    surface before evaluation.  nonneg clips candidates into the positive
    cone first; sign_align flips whole rows of V to make each row's inner
    product with the objective nonnegative, which is valid whenever the
    constraint is insensitive to row signs.  The result is always a
    certified lower bound, never marked exact.
    """
    cfg = cfg or SearchConfig()
    C = np.asarray(objective, dtype=float)
    shape = C.shape
    expand = (slice(None),) + (None,) * C.ndim

    def project(V: np.ndarray) -> np.ndarray:
        if nonneg:
            V = np.maximum(V, 0.0)
        if sign_align:
            dots = np.sum(V * C, axis=-1, keepdims=True)
            V = V * np.where(dots < 0, -1.0, 1.0)
        norms = np.asarray(constraint(V))
        dead = ~(norms > 1e-300)
        safe = np.where(dead, 1.0, norms)
        V = V / safe.reshape((-1,) + (1,) * C.ndim)
        if np.any(dead):
            V = V.copy()
            V[dead] = 0.0
        return V

    def evaluate(V: np.ndarray, need_grad: bool):
        vals = np.tensordot(V, C, axes=C.ndim)
        grads = np.broadcast_to(C, V.shape).copy() if need_grad else None
        return vals, grads

    rows = [C.copy()]
    rows.append(np.ones(shape))
    if extra_inits is not None:
        rows.extend(np.asarray(e, dtype=float).reshape(shape) for e in extra_inits)
    if cfg.presample:
        rows.extend(_preselect(C, project, cfg, nonneg))
    # start mix: diffuse Gaussians, objective-modulated lognormals, and
    # sparse patterns; each start has its own stream, so growing cfg.starts
    # leaves earlier starts bit-identical
    for j in range(cfg.starts):
        rng = np.random.default_rng((cfg.seed, j))
        draw = rng.standard_normal(shape)
        if j % 3 == 1:
            cand = (np.abs(C) if nonneg else C) * np.exp(0.5 * draw)
        elif j % 3 == 2:
            cand = draw * (rng.random(shape) < 0.4)
        else:
            cand = draw
        rows.append(np.abs(cand) if nonneg else cand)
    starts = project(np.stack(rows))
    if not np.any(np.asarray(constraint(starts)) > 0):
        raise DegenerateConstraintError("constraint vanished on every start")
    dirs = _rng_directions(cfg, starts.shape[0], shape)
    val, point, iters = _ascend(evaluate, project, starts, dirs, cfg, upper_bound)
    return NormEstimate(
        value=val,
        certificate=_frozen(point),
        exact=False,
        method="normalize_ascend",
        starts_used=starts.shape[0],
        iterations=iters,
        seed=cfg.seed,
    )
