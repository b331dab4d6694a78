"""Closed-form and fixed-point kernels shared by the norm estimators.

Everything here is pure numpy and batch-friendly.  The central quantity is

    ball_sup(M, q, ball)  =  sup { ||M x||_q : x in unit ball of `ball` }

together with its restriction to the positive part of the ball.  Exact
branches cover polyhedral balls, q in {1, inf}, single rows, and the
Euclidean/Euclidean case; everything else falls back to a deterministic
monotone fixed-point ascent that returns a certified lower bound.
"""

from __future__ import annotations

import math

import numpy as np

from .lattice import LatticeSpace

_INF = math.inf
_SIGN_LIMIT = 16
_FP_STARTS = 16
_FP_ITERS = 80
_FP_BATCH_ITERS = 5
_FP_SEED = 20240915
_DIR_CACHE: dict = {}


def pnorm(values, q: float, axis: int = -1):
    """Unweighted ell_q norm along an axis, q in [1, inf]."""
    a = np.abs(np.asarray(values, dtype=float))
    if a.shape[axis] == 0:
        return np.zeros(a.sum(axis=axis).shape)
    if q == _INF:
        return np.max(a, axis=axis)
    if q == 1.0:
        return np.sum(a, axis=axis)
    peak = np.max(a, axis=axis, keepdims=True)
    safe = np.where(peak > 0, peak, 1.0)
    out = np.sum((a / safe) ** q, axis=axis) ** (1.0 / q) * np.squeeze(peak, axis=axis)
    return out


def _psi(u, q: float):
    """Unit-ell_{q*} witness with <psi(u), u> = ||u||_q, for q in (1, inf)."""
    a = np.abs(u)
    nq = pnorm(u, q, axis=-1)[..., None]
    safe = np.where(nq > 0, nq, 1.0)
    return np.sign(u) * (a / safe) ** (q - 1.0)


def _signs(k: int) -> np.ndarray:
    """All sign vectors in {+1, -1}^k with first component +1."""
    if k > _SIGN_LIMIT:
        raise ValueError(f"sign enumeration over {k} rows is too large")
    masks = np.arange(2 ** max(k - 1, 0))
    bits = (masks[:, None] >> np.arange(k)[None, :]) & 1
    return 1.0 - 2.0 * bits


def _subset_indicators(k: int) -> np.ndarray:
    masks = np.arange(1, 2**k)
    return ((masks[:, None] >> np.arange(k)[None, :]) & 1).astype(float)


def dual_attainer(space: LatticeSpace, z) -> np.ndarray:
    """Unit vector x of `space` maximizing <z, x>; batches over leading axes.

    For z = 0 a fixed canonical unit vector is returned.
    """
    z = np.asarray(z, dtype=float)
    w = space.weights
    r = space.exponent
    if r == 1.0:
        ratio = np.abs(z) / w
        j = np.argmax(ratio, axis=-1)
        top = np.take_along_axis(z, j[..., None], axis=-1)
        sgn = np.where(top == 0, 1.0, np.sign(top))
        x = np.zeros_like(z)
        np.put_along_axis(x, j[..., None], sgn / w[j][..., None], axis=-1)
        return x
    if r == _INF:
        s = np.sign(z)
        dead = ~np.any(z != 0, axis=-1)
        s = np.where(dead[..., None], 1.0, s)
        return s / w
    y = np.sign(z) * (np.abs(z) / w) ** (1.0 / (r - 1.0))
    norms = np.asarray(space.norm_of(y))
    dead = ~(norms > 0)
    safe = np.where(dead, 1.0, norms)
    x = y / safe[..., None]
    if np.any(dead):
        fallback = np.zeros(space.dim)
        fallback[0] = w[0] ** (-1.0 / r)
        x = np.where(dead[..., None], fallback, x)
    return x


def positive_dual_attainer(space: LatticeSpace, z) -> np.ndarray:
    """Nonnegative unit vector maximizing <z, x> over the positive ball."""
    return np.abs(dual_attainer(space, np.maximum(np.asarray(z, dtype=float), 0.0)))


def positive_dual_norm(space: LatticeSpace, z):
    """sup of <z, x> over the positive part of the unit ball of `space`."""
    return space.dual.norm_of(np.maximum(np.asarray(z, dtype=float), 0.0))


def _fp_starts(M: np.ndarray, ball: LatticeSpace, positive: bool, extra_starts) -> np.ndarray:
    att = positive_dual_attainer if positive else dual_attainer
    rows = [att(ball, M), att(ball, M.sum(axis=0))[None, :]]
    rng = np.random.default_rng(_FP_SEED)
    rand = rng.standard_normal((_FP_STARTS, ball.dim))
    if positive:
        rand = np.abs(rand)
    rows.append(att(ball, rand))
    if extra_starts is not None:
        extra = np.atleast_2d(np.asarray(extra_starts, dtype=float))
        if extra.size:
            if positive:
                extra = np.maximum(extra, 0.0)
            norms = np.asarray(ball.norm_of(extra))
            keep = norms > 0
            if np.any(keep):
                rows.append(extra[keep] / norms[keep][:, None])
    return np.concatenate(rows, axis=0)


def _fixed_point_sup(M, q, ball, positive, extra_starts):
    att = positive_dual_attainer if positive else dual_attainer
    X = _fp_starts(M, ball, positive, extra_starts)
    best = pnorm(X @ M.T, q, axis=-1)
    X_best = X.copy()
    for _ in range(_FP_ITERS):
        z = _psi(X @ M.T, q) @ M
        X = att(ball, z)
        vals = pnorm(X @ M.T, q, axis=-1)
        gained = vals > best
        X_best[gained] = X[gained]
        stalled = np.max(vals - best) < 1e-13
        best = np.maximum(best, vals)
        if stalled:
            break
    k = int(np.argmax(best))
    return float(best[k]), X_best[k]


def ball_sup(M, q: float, ball: LatticeSpace, return_arg: bool = False, extra_starts=None):
    """sup of ||M x||_q over the unit ball of `ball`.

    With return_arg=True the result is (value, argument, exact); the
    argument always lies in the unit ball and the value is attained at it
    up to roundoff, so the value is a certified lower bound even on the
    inexact fixed-point branch.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[1] != ball.dim:
        raise ValueError(f"matrix shape {M.shape} does not match ball dim {ball.dim}")
    m, n = M.shape
    w = ball.weights
    rho = ball.exponent
    exact = True
    if m == 0:
        val, arg = 0.0, dual_attainer(ball, np.zeros(n))
    elif rho == 1.0:
        scores = pnorm(M, q, axis=0) / w
        j = int(np.argmax(scores))
        val = float(scores[j])
        arg = np.zeros(n)
        arg[j] = 1.0 / w[j]
    elif rho == _INF and n <= _SIGN_LIMIT:
        cand = _signs(n) / w
        vals = pnorm(cand @ M.T, q, axis=-1)
        k = int(np.argmax(vals))
        val, arg = float(vals[k]), cand[k]
    elif q == _INF:
        dn = np.asarray(ball.dual.norm_of(M))
        i = int(np.argmax(dn))
        val, arg = float(dn[i]), dual_attainer(ball, M[i])
    elif m == 1:
        val, arg = float(ball.dual.norm_of(M[0])), dual_attainer(ball, M[0])
    elif q == 1.0 and m <= _SIGN_LIMIT:
        combos = _signs(m) @ M
        dns = np.asarray(ball.dual.norm_of(combos))
        k = int(np.argmax(dns))
        val, arg = float(dns[k]), dual_attainer(ball, combos[k])
    elif rho == 2.0 and q == 2.0:
        scaled = M / np.sqrt(w)[None, :]
        _, svals, vt = np.linalg.svd(scaled)
        val = float(svals[0])
        arg = vt[0] / np.sqrt(w)
    else:
        val, arg = _fixed_point_sup(M, q, ball, positive=False, extra_starts=extra_starts)
        exact = False
    if return_arg:
        return val, arg, exact
    return val


def pos_ball_sup(M, q: float, ball: LatticeSpace, return_arg: bool = False, extra_starts=None):
    """sup of ||M x||_q over the positive part of the unit ball of `ball`.

    For entrywise nonnegative M this equals ball_sup, with the argument
    replaced by its absolute value; the general signed case adds its own
    exact branches and a positivity-preserving fixed point.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[1] != ball.dim:
        raise ValueError(f"matrix shape {M.shape} does not match ball dim {ball.dim}")
    m, n = M.shape
    w = ball.weights
    rho = ball.exponent
    if np.all(M >= 0):
        val, arg, exact = ball_sup(M, q, ball, return_arg=True, extra_starts=extra_starts)
        arg = np.abs(arg)
        if return_arg:
            return val, arg, exact
        return val
    exact = True
    if m == 0:
        val, arg = 0.0, positive_dual_attainer(ball, np.zeros(n))
    elif rho == 1.0:
        scores = pnorm(M, q, axis=0) / w
        j = int(np.argmax(scores))
        val = float(scores[j])
        arg = np.zeros(n)
        arg[j] = 1.0 / w[j]
    elif rho == _INF and n <= _SIGN_LIMIT:
        cand = _subset_indicators(n) / w
        vals = pnorm(cand @ M.T, q, axis=-1)
        k = int(np.argmax(vals))
        val, arg = float(vals[k]), cand[k]
    elif q == _INF or m == 1:
        plus = np.asarray(positive_dual_norm(ball, M))
        minus = np.asarray(positive_dual_norm(ball, -M))
        i = int(np.argmax(np.maximum(plus, minus)))
        z = M[i] if plus[i] >= minus[i] else -M[i]
        val, arg = float(max(plus[i], minus[i])), positive_dual_attainer(ball, z)
    elif q == 1.0 and m <= _SIGN_LIMIT:
        combos = _signs(m) @ M
        dns = np.asarray(positive_dual_norm(ball, combos))
        k = int(np.argmax(dns))
        val, arg = float(dns[k]), positive_dual_attainer(ball, combos[k])
    else:
        val, arg = _fixed_point_sup(M, q, ball, positive=True, extra_starts=extra_starts)
        exact = False
    if return_arg:
        return val, arg, exact
    return val


def _unit_directions(n: int) -> np.ndarray:
    """Fixed direction set on the Euclidean sphere of R^n, up to sign.

    Half-coverage suffices because every objective fed to the fixed point
    is even; the set is deterministic so estimates stay reproducible.
    """
    cached = _DIR_CACHE.get(n)
    if cached is not None:
        return cached
    if n == 1:
        D = np.ones((1, 1))
    elif n == 2:
        ang = np.linspace(0.0, np.pi, 32, endpoint=False)
        D = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    elif n == 3:
        k = np.arange(48, dtype=float)
        z = (k + 0.5) / 48.0
        phi = k * (np.pi * (3.0 - math.sqrt(5.0)))
        rxy = np.sqrt(1.0 - z * z)
        D = np.stack([rxy * np.cos(phi), rxy * np.sin(phi), z], axis=1)
    else:
        rng = np.random.default_rng((_FP_SEED, n))
        D = rng.standard_normal((64, n))
        D /= np.linalg.norm(D, axis=1, keepdims=True)
    _DIR_CACHE[n] = D
    return D


def _batch_fixed_point(A, q, ball, positive):
    """Warm-started monotone ascent; every evaluation is at a feasible
    point, so the result is a certified lower bound at any iteration cap."""
    att = positive_dual_attainer if positive else dual_attainer
    D = _unit_directions(A.shape[-1])
    if positive:
        D = np.abs(D)
    D = D / np.asarray(ball.norm_of(D))[:, None]
    grid = pnorm(np.einsum("gn,bmn->bgm", D, A), q, axis=-1)
    warm = D[np.argmax(grid, axis=-1)][:, None, :]
    X = np.concatenate([att(ball, A), att(ball, A.sum(axis=1))[:, None, :], warm], axis=1)
    best = np.max(grid, axis=-1)
    for it in range(_FP_BATCH_ITERS + 1):
        u = np.einsum("bkn,bmn->bkm", X, A)
        vals = np.max(pnorm(u, q, axis=-1), axis=-1)
        gained = float(np.max(vals - best))
        best = np.maximum(best, vals)
        if it == _FP_BATCH_ITERS or (it > 0 and gained < 1e-12):
            break
        X = att(ball, np.einsum("bkm,bmn->bkn", _psi(u, q), A))
    return best


def ball_sup_batch(arrays, q: float, ball: LatticeSpace, positive: bool = False) -> np.ndarray:
    """Vectorized ball_sup over a stack of matrices of shape (..., m, n).

    With positive=True the sup runs over the positive part of the ball;
    stacks containing signed matrices then only use branches that stay
    exact under the positivity constraint.
    """
    A = np.asarray(arrays, dtype=float)
    if A.shape[-1] != ball.dim:
        raise ValueError(f"trailing dim {A.shape[-1]} does not match ball dim {ball.dim}")
    lead = A.shape[:-2]
    m, n = A.shape[-2], A.shape[-1]
    A = A.reshape((-1, m, n))
    w = ball.weights
    rho = ball.exponent
    nonneg = bool(np.all(A >= 0))
    if m == 0:
        out = np.zeros(A.shape[0])
    elif rho == 1.0:
        out = np.max(pnorm(A, q, axis=-2) / w, axis=-1)
    elif rho == _INF and n <= _SIGN_LIMIT:
        cand = (_signs(n) if (nonneg or not positive) else _subset_indicators(n)) / w
        out = np.max(pnorm(np.einsum("kn,bmn->bkm", cand, A), q, axis=-1), axis=-1)
    elif q == _INF:
        if positive and not nonneg:
            dn = np.maximum(
                np.asarray(positive_dual_norm(ball, A)),
                np.asarray(positive_dual_norm(ball, -A)),
            )
        else:
            dn = np.asarray(ball.dual.norm_of(A))
        out = np.max(dn, axis=-1)
    elif m == 1:
        if positive and not nonneg:
            out = np.maximum(
                np.asarray(positive_dual_norm(ball, A[:, 0, :])),
                np.asarray(positive_dual_norm(ball, -A[:, 0, :])),
            )
        else:
            out = np.asarray(ball.dual.norm_of(A[:, 0, :]))
    elif q == 1.0 and m <= _SIGN_LIMIT:
        combos = np.einsum("km,bmn->bkn", _signs(m), A)
        if positive and not nonneg:
            dns = np.asarray(positive_dual_norm(ball, combos))
        else:
            dns = np.asarray(ball.dual.norm_of(combos))
        out = np.max(dns, axis=-1)
    elif rho == 2.0 and q == 2.0 and (nonneg or not positive):
        scaled = A / np.sqrt(w)[None, None, :]
        out = np.linalg.svd(scaled, compute_uv=False)[..., 0]
    else:
        out = _batch_fixed_point(A, q, ball, positive=positive and not nonneg)
    return out.reshape(lead)


def ball_sup_batch_is_exact(q: float, ball: LatticeSpace, m: int, positive_signed: bool = False) -> bool:
    """Whether ball_sup_batch uses only exact branches for these parameters."""
    rho = ball.exponent
    n = ball.dim
    if m == 0 or rho == 1.0 or (rho == _INF and n <= _SIGN_LIMIT):
        return True
    if q == _INF or m == 1 or (q == 1.0 and m <= _SIGN_LIMIT):
        return True
    if rho == 2.0 and q == 2.0 and not positive_signed:
        return True
    return False


_SPLIT_ITERS = 1000
_SPLIT_RELAX = 1.7
_SPLIT_TOL = 1e-10


def _svt(A: np.ndarray, tau: float) -> np.ndarray:
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    return U @ (np.maximum(s - tau, 0.0)[:, None] * Vt)


def spectral_cone_sup(M: np.ndarray):
    """max of <W, M> over entrywise nonnegative W with sigma_max(W) <= 1.

    By inf-convolution duality the value also equals the minimum of the
    nuclear norm over X >= M entrywise, so an operator-splitting scheme
    yields certified bounds from both sides: feasible X give upper bounds
    and the clipped, spectrally rescaled multiplier gives feasible W and
    lower bounds.  Returns (lower, upper, W, closed); closed means the
    relative gap fell below the solver tolerance, making the lower value
    the exact maximum for practical purposes.
    """
    M = np.asarray(M, dtype=float)
    scale = float(np.max(np.abs(M), initial=0.0))
    W0 = np.zeros_like(M)
    if scale == 0.0 or 0 in M.shape:
        return 0.0, 0.0, W0, True
    rho = 1.0 / scale
    X = np.maximum(M, 0.0)
    Y = X.copy()
    U = np.zeros_like(M)
    best_lo, best_W = 0.0, W0
    best_up = float(np.sum(np.linalg.svd(np.maximum(X, M), compute_uv=False)))
    for _ in range(_SPLIT_ITERS):
        X = _svt(Y - U, 1.0 / rho)
        Xr = _SPLIT_RELAX * X + (1.0 - _SPLIT_RELAX) * Y
        Y = np.maximum(Xr + U, M)
        U = U + Xr - Y
        up = float(np.sum(np.linalg.svd(np.maximum(X, M), compute_uv=False)))
        best_up = min(best_up, up)
        W = np.maximum(-rho * U, 0.0)
        s = np.linalg.svd(W, compute_uv=False)
        if s.size and s[0] > 1.0:
            W = W / s[0]
        lo = float(np.sum(W * M))
        if lo > best_lo:
            best_lo, best_W = lo, W
        if best_up - best_lo <= _SPLIT_TOL * max(1.0, best_up):
            return best_lo, best_up, best_W, True
    return best_lo, best_up, best_W, False
