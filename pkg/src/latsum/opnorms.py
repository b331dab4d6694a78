"""Summing-type operator ideal norm estimators.

Every ideal norm here is a supremum of a ratio over witness sequences of
length at most m.  The estimators share one joint multistart engine: each
witness block is either normalized by a closed-form constraint norm (the
ratio denominator) or projected row-wise into a unit ball, the objective
is evaluated in closed form, and gradients come from forward differences
through the projection.  Lengths 1..m are searched separately, each
seeding the next with its zero-padded best witness, so estimates are
exactly nondecreasing in m.

Estimator values are certified lower bounds of the capped-length suprema
whenever the constraint kernels run on exact branches (polyhedral spaces,
constraint exponent in {1, inf}, single rows, or Euclidean/Euclidean);
certificates are tuples of witness blocks and always reproduce the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from . import _kernels as K
from .lattice import LatticeSpace, LatticeVector, conjugate_exponent
from .search import NormEstimate, SearchConfig, _ascend
from .seqnorms import SeqNormKind

__all__ = [
    "NormParams",
    "LinearOperator",
    "IdealKind",
    "UnsupportedPairError",
    "operator_norm",
    "lambda_norm",
    "dplus_norm",
    "majorizing_norm",
    "cohen_nuclear_norm",
    "ideal_norm",
    "induced_map_constant",
]

_INF = math.inf
_FD_STEP = 1e-6
_IDEAL_TAGS = ("lambda", "dplus", "majorizing", "cn_left", "cn_right", "cn_both", "induced")


class UnsupportedPairError(ValueError):
    """No ideal estimator matches the requested sequence-norm pair."""


@dataclass(frozen=True)
class NormParams:
    """Exponent pair with 1 <= q <= p <= inf and their conjugates."""

    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (1.0 <= q <= p):
            raise ValueError("need 1 <= q <= p <= inf")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def p_conj(self) -> float:
        return conjugate_exponent(self.p)

    @property
    def q_conj(self) -> float:
        return conjugate_exponent(self.q)


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """A linear map between lattice spaces, stored as an n_out x n_in matrix."""

    matrix: np.ndarray
    domain: LatticeSpace
    codomain: LatticeSpace

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=float)
        if mat.shape != (self.codomain.dim, self.domain.dim):
            raise ValueError(
                f"matrix shape {mat.shape} does not match spaces "
                f"({self.codomain.dim}, {self.domain.dim})"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    def apply(self, x) -> LatticeVector:
        coords = x.coords if isinstance(x, LatticeVector) else np.asarray(x, dtype=float)
        return self.codomain.vector(self.matrix @ coords)

    def apply_rows(self, rows: np.ndarray) -> np.ndarray:
        """Apply to a stack of row vectors; shape (..., n_in) -> (..., n_out)."""
        return np.asarray(rows, dtype=float) @ self.matrix.T

    @cached_property
    def adjoint(self) -> "LinearOperator":
        """Transpose acting between the dual spaces; adjoint of adjoint is self."""
        adj = LinearOperator(self.matrix.T, self.codomain.dual, self.domain.dual)
        adj.__dict__["adjoint"] = self
        return adj

    def is_nonnegative(self) -> bool:
        return bool(np.all(self.matrix >= 0))


@dataclass(frozen=True)
class IdealKind:
    """Which ideal norm to compute; induced carries a sequence-norm pair."""

    tag: str
    params: Optional[NormParams] = None
    source: Optional[SeqNormKind] = None
    target: Optional[SeqNormKind] = None

    def __post_init__(self):
        if self.tag not in _IDEAL_TAGS:
            raise ValueError(f"unknown ideal tag {self.tag!r}")
        if self.tag == "induced":
            if self.source is None or self.target is None:
                raise ValueError("induced kind needs source and target sequence norms")
        elif self.params is None:
            raise ValueError(f"{self.tag} needs exponent params")
        elif self.tag.startswith("cn_") and self.params.p == _INF:
            raise ValueError("cohen-nuclear norms need p < inf")


def operator_norm(T: LinearOperator, cfg: Optional[SearchConfig] = None) -> NormEstimate:
    """Plain operator norm, via the mixed-norm kernel on the folded matrix."""
    cfg = cfg or SearchConfig()
    rho = T.codomain.exponent
    w = T.codomain.weights
    if rho == _INF:
        folded, q_eff = w[:, None] * T.matrix, _INF
    else:
        folded, q_eff = (w ** (1.0 / rho))[:, None] * T.matrix, rho
    val, arg, exact = K.ball_sup(folded, q_eff, T.domain, return_arg=True)
    cert = np.array(arg)
    cert.setflags(write=False)
    return NormEstimate(
        value=val,
        certificate=cert,
        exact=exact,
        method="vertex_enum" if exact else "multistart_ascent",
        starts_used=0,
        iterations=0,
        seed=cfg.seed,
    )


@dataclass(frozen=True)
class _Block:
    """One witness array in a joint ratio program."""

    cols: int
    nonneg: bool = False
    normalizer: Optional[Callable] = None
    row_space: Optional[LatticeSpace] = None


def _project_factory(blocks, m: int):
    dims = [m * b.cols for b in blocks]
    offsets = np.cumsum([0] + dims)

    def project(flat: np.ndarray) -> np.ndarray:
        out = np.array(flat, dtype=float)
        dead = np.zeros(out.shape[0], dtype=bool)
        for b, a, z in zip(blocks, offsets[:-1], offsets[1:]):
            part = out[:, a:z].reshape(out.shape[0], m, b.cols)
            if b.nonneg:
                part = np.maximum(part, 0.0)
            if b.normalizer is not None:
                nrm = np.asarray(b.normalizer(part))
                bad = ~(nrm > 1e-300)
                dead |= bad
                part = part / np.where(bad, 1.0, nrm)[:, None, None]
            if b.row_space is not None:
                norms = np.asarray(b.row_space.norm_of(part))
                part = part / np.maximum(norms, 1.0)[..., None]
            out[:, a:z] = part.reshape(out.shape[0], -1)
        out[dead] = 0.0
        return out

    def split(flat: np.ndarray):
        return [
            flat[:, a:z].reshape(flat.shape[0], m, b.cols)
            for b, a, z in zip(blocks, offsets[:-1], offsets[1:])
        ]

    return project, split, int(offsets[-1])


def _pad_rows(arr: np.ndarray, m: int) -> np.ndarray:
    arr = np.asarray(arr, dtype=float)
    if arr.shape[0] > m:
        return arr[:m]
    if arr.shape[0] < m:
        pad = np.zeros((m - arr.shape[0], arr.shape[1]))
        return np.concatenate([arr, pad])
    return arr


def _joint_ratio_once(objective, blocks, m, canonical, cfg: SearchConfig, salt: int):
    """One multistart run at a fixed witness length m."""
    project, split, dim = _project_factory(blocks, m)

    def value(flat: np.ndarray) -> np.ndarray:
        return np.asarray(objective(split(flat)))

    def evaluate(flat: np.ndarray, need_grad: bool):
        vals = value(flat)
        if not need_grad:
            return vals, None
        pert = flat[:, None, :] + _FD_STEP * np.eye(dim)[None, :, :]
        pvals = value(project(pert.reshape(-1, dim))).reshape(flat.shape[0], dim)
        return vals, (pvals - vals[:, None]) / _FD_STEP

    rows = []
    for cand in canonical:
        rows.append(np.concatenate([_pad_rows(c, m).ravel() for c in cand]))
    for j in range(cfg.starts):
        rng = np.random.default_rng((cfg.seed, salt, 1, j))
        draw = rng.standard_normal(dim)
        rows.append(draw)
    starts = np.stack(rows)
    dirs = np.empty((starts.shape[0], cfg.max_iters + 1, dim))
    for i in range(starts.shape[0]):
        rng = np.random.default_rng((cfg.seed, salt, 2, i))
        dirs[i] = rng.standard_normal((cfg.max_iters + 1, dim))
    val, point, iters = _ascend(evaluate, project, starts, dirs, cfg)
    return val, split(point[None, :]), iters, starts.shape[0]


def _run_lengths(objective_at, blocks_at, canonical_at, m: int, cfg: SearchConfig, salt_base: int):
    """Search lengths 1..m, seeding each with the previous best; monotone in m."""
    best_val = 0.0
    best_blocks = None
    best_len = 0
    total_iters = 0
    starts_used = 0
    carried = []
    for mm in range(1, m + 1):
        canonical = list(canonical_at(mm)) + carried
        val, split_pt, iters, used = _joint_ratio_once(
            objective_at(mm), blocks_at(mm), mm, canonical, cfg, salt_base * 1009 + mm
        )
        total_iters += iters
        starts_used = max(starts_used, used)
        point = tuple(part[0] for part in split_pt)
        carried = [point]
        if val > best_val:
            best_val, best_blocks, best_len = val, point, mm
    return best_val, best_blocks, best_len, total_iters, starts_used


def _seq_canonical(space: LatticeSpace, m: int):
    """Structured witness sequences: cycled basis rows and constant rows."""
    n = space.dim
    eye = np.zeros((m, n))
    for i in range(m):
        eye[i, i % n] = 1.0
    return [eye, np.ones((m, n))]


def _finish(value, blocks, cfg, iters, starts_used) -> NormEstimate:
    cert = None
    if blocks is not None:
        cert = tuple(np.array(b) for b in blocks)
        for c in cert:
            c.setflags(write=False)
    return NormEstimate(
        value=float(value),
        certificate=cert,
        exact=False,
        method="multistart_ascent",
        starts_used=starts_used,
        iterations=iters,
        seed=cfg.seed,
    )


def _normalize_witnesses(extra_witnesses):
    out = []
    for wit in extra_witnesses or []:
        if isinstance(wit, np.ndarray):
            wit = (wit,)
        out.append(tuple(np.asarray(b, dtype=float) for b in wit))
    return out


def _with_witnesses(canonical_at, witnesses):
    def build(mm: int):
        cands = list(canonical_at(mm))
        for wit in witnesses:
            if all(b.shape[0] <= mm for b in wit):
                cands.append(wit)
        return cands

    return build


def lambda_norm(
    T: LinearOperator,
    params: NormParams,
    m: int = 4,
    cfg: Optional[SearchConfig] = None,
    extra_witnesses=None,
) -> NormEstimate:
    """Positive summing constant: sup strong_p(T s) / pos_weak_q(s), len <= m.

    p = inf collapses to the plain operator norm.  The certificate is a
    1-tuple holding the witness sequence.
    """
    cfg = cfg or SearchConfig()
    if m < 1:
        raise ValueError("m must be >= 1")
    p, q = params.p, params.q
    if p == _INF:
        op = operator_norm(T, cfg)
        cert = (np.array(op.certificate)[None, :],)
        cert[0].setflags(write=False)
        return NormEstimate(op.value, cert, op.exact, op.method, op.starts_used, op.iterations, cfg.seed)
    E, F = T.domain, T.codomain

    def blocks_at(mm):
        return [_Block(E.dim, normalizer=lambda B: K.ball_sup_batch(np.abs(B), q, E.dual))]

    def objective_at(mm):
        def objective(parts):
            ts = parts[0] @ T.matrix.T
            return K.pnorm(np.asarray(F.norm_of(ts)), p, axis=-1)

        return objective

    opcert = operator_norm(T, cfg).certificate

    def canonical_at(mm):
        cands = [(c,) for c in _seq_canonical(E, mm)]
        cands.append((_pad_rows(np.array(opcert)[None, :], mm),))
        return cands

    canonical = _with_witnesses(canonical_at, _normalize_witnesses(extra_witnesses))
    val, blocks, _, iters, used = _run_lengths(objective_at, blocks_at, canonical, m, cfg, salt_base=11)
    return _finish(val, blocks, cfg, iters, used)


def _holder_row_weights(c: np.ndarray, q: float) -> np.ndarray:
    """Nonnegative alpha with ell_q norm 1 maximizing <alpha, c>, c >= 0."""
    c = np.maximum(np.asarray(c, dtype=float), 0.0)
    if not np.any(c > 0):
        out = np.zeros_like(c)
        if out.size:
            out[0] = 1.0
        return out
    if q == _INF:
        return np.ones_like(c)
    if q == 1.0:
        out = np.zeros_like(c)
        out[int(np.argmax(c))] = 1.0
        return out
    qs = conjugate_exponent(q)
    scaled = c / np.max(c)
    alpha = scaled ** (qs - 1.0)
    return alpha / K.pnorm(alpha, q)


def dplus_norm(
    T: LinearOperator,
    params: NormParams,
    m: int = 4,
    cfg: Optional[SearchConfig] = None,
    path: str = "both",
    extra_witnesses=None,
) -> NormEstimate:
    """Positive strongly summing constant, by two routes.

    bilinear: sup over nonnegative dual-codomain arrays U of
    strong_{q*}(T* U) / weak_{p*}(U), where the witness sequence on the
    domain side has been maximized out in closed form.  sequence: joint
    sup of sum_i <v_i, |T x_i|> over (x_i) with strong_q <= 1 and
    nonnegative (v_i) with pos_weak_{p*} <= 1.  path selects one route or
    the max of both; the bilinear best feeds the sequence search.  For
    p = inf only the bilinear route exists.  Certificates: (U,) for
    bilinear, (S, V) for sequence.
    """
    cfg = cfg or SearchConfig()
    if m < 1:
        raise ValueError("m must be >= 1")
    if path not in ("both", "bilinear", "sequence"):
        raise ValueError(f"unknown dplus path {path!r}")
    p, q = params.p, params.q
    ps, qs = params.p_conj, params.q_conj
    E, F = T.domain, T.codomain
    if p == _INF and path != "bilinear":
        if path == "sequence":
            raise UnsupportedPairError("sequence path needs p < inf")
        path = "bilinear"
    witnesses = _normalize_witnesses(extra_witnesses)

    results = []
    if path in ("both", "bilinear"):
        bil_wits = [w for w in witnesses if len(w) == 1]

        def blocks_at(mm):
            return [_Block(F.dim, nonneg=True, normalizer=lambda B: K.ball_sup_batch(B, ps, F))]

        def objective_at(mm):
            def objective(parts):
                pulled = parts[0] @ T.matrix
                return K.pnorm(np.asarray(E.dual.norm_of(pulled)), qs, axis=-1)

            return objective

        def canonical_at(mm):
            return [(np.abs(c),) for c in _seq_canonical(F.dual, mm)]

        canonical = _with_witnesses(canonical_at, bil_wits)
        val, blocks, _, iters, used = _run_lengths(
            objective_at, blocks_at, canonical, m, cfg, salt_base=13
        )
        results.append((val, blocks, iters, used))

    if path in ("both", "sequence"):
        seq_wits = [w for w in witnesses if len(w) == 2]
        if results and results[0][1] is not None:
            u_best = results[0][1][0]
            pulled = u_best @ T.matrix
            att = K.dual_attainer(E, pulled)
            alpha = _holder_row_weights(np.asarray(E.dual.norm_of(pulled)), q)
            seq_wits.append((att * alpha[:, None], np.array(u_best)))

        def blocks_at(mm):
            return [
                _Block(E.dim, normalizer=lambda B: K.pnorm(np.asarray(E.norm_of(B)), q, axis=-1)),
                _Block(F.dim, nonneg=True, normalizer=lambda B: K.ball_sup_batch(B, ps, F)),
            ]

        def objective_at(mm):
            def objective(parts):
                s, v = parts
                return np.sum(v * np.abs(s @ T.matrix.T), axis=(-2, -1))

            return objective

        def canonical_at(mm):
            scan = _seq_canonical(E, mm)
            vcan = [np.abs(c) for c in _seq_canonical(F.dual, mm)]
            return [(s, v) for s in scan for v in vcan]

        canonical = _with_witnesses(canonical_at, seq_wits)
        val, blocks, _, iters, used = _run_lengths(
            objective_at, blocks_at, canonical, m, cfg, salt_base=17
        )
        results.append((val, blocks, iters, used))

    best = max(results, key=lambda r: r[0])
    iters = sum(r[2] for r in results)
    used = max(r[3] for r in results)
    return _finish(best[0], best[1], cfg, iters, used)


def majorizing_norm(
    T: LinearOperator,
    params: NormParams,
    m: int = 4,
    cfg: Optional[SearchConfig] = None,
    extra_witnesses=None,
) -> NormEstimate:
    """Majorizing constant: sup over rows z_i in the domain ball and
    nonnegative dual arrays U of ell_{q*} of |<T z_i, u_i>| divided by
    weak_{p*}(U).  Certificate is the (Z, U) pair."""
    cfg = cfg or SearchConfig()
    if m < 1:
        raise ValueError("m must be >= 1")
    ps, qs = params.p_conj, params.q_conj
    E, F = T.domain, T.codomain

    def blocks_at(mm):
        return [
            _Block(E.dim, row_space=E),
            _Block(F.dim, nonneg=True, normalizer=lambda B: K.ball_sup_batch(B, ps, F)),
        ]

    def objective_at(mm):
        def objective(parts):
            z, u = parts
            pair = np.sum((z @ T.matrix.T) * u, axis=-1)
            return K.pnorm(pair, qs, axis=-1)

        return objective

    def canonical_at(mm):
        cands = []
        for u0 in [np.abs(c) for c in _seq_canonical(F.dual, mm)]:
            z0 = K.dual_attainer(E, u0 @ T.matrix)
            cands.append((z0, u0))
        return cands

    witnesses = []
    for wit in _normalize_witnesses(extra_witnesses):
        if len(wit) == 1:
            u = wit[0]
            witnesses.append((K.dual_attainer(E, u @ T.matrix), u))
        else:
            witnesses.append(wit)
    canonical = _with_witnesses(canonical_at, witnesses)
    val, blocks, _, iters, used = _run_lengths(objective_at, blocks_at, canonical, m, cfg, salt_base=19)
    return _finish(val, blocks, cfg, iters, used)


def cohen_nuclear_norm(
    T: LinearOperator,
    kind: str,
    params: NormParams,
    m: int = 4,
    cfg: Optional[SearchConfig] = None,
    extra_witnesses=None,
) -> NormEstimate:
    """Nuclear-type constants; kind in {left, right, both}.

    left:  sup cohen_p(T s) / pos_weak_q(s)
    right: sup pos_strong_p(T s) / weak_q(s)
    both:  sup pos_strong_p(T s) / pos_weak_q(s)

    Each is run as a joint program over the witness sequence S and the
    dual-side array of the target norm; certificate is (S, dual array).
    """
    cfg = cfg or SearchConfig()
    if m < 1:
        raise ValueError("m must be >= 1")
    if kind not in ("left", "right", "both"):
        raise ValueError(f"unknown cohen-nuclear kind {kind!r}")
    p, q = params.p, params.q
    if p == _INF:
        raise UnsupportedPairError("cohen-nuclear norms need p < inf")
    ps = params.p_conj
    E, F = T.domain, T.codomain

    if kind == "left":
        s_norm = lambda B: K.ball_sup_batch(np.abs(B), q, E.dual)
        v_nonneg = False
        v_norm = lambda B: K.ball_sup_batch(B, ps, F)
        def objective(parts):
            s, v = parts
            return np.sum(np.abs(np.sum(v * (s @ T.matrix.T), axis=-1)), axis=-1)
    elif kind == "right":
        s_norm = lambda B: K.ball_sup_batch(B, q, E.dual)
        v_nonneg = True
        v_norm = lambda B: K.ball_sup_batch(B, ps, F)
        def objective(parts):
            s, v = parts
            return np.sum(v * np.abs(s @ T.matrix.T), axis=(-2, -1))
    else:
        s_norm = lambda B: K.ball_sup_batch(np.abs(B), q, E.dual)
        v_nonneg = True
        v_norm = lambda B: K.ball_sup_batch(B, ps, F)
        def objective(parts):
            s, v = parts
            return np.sum(v * np.abs(s @ T.matrix.T), axis=(-2, -1))

    def blocks_at(mm):
        return [
            _Block(E.dim, normalizer=s_norm),
            _Block(F.dim, nonneg=v_nonneg, normalizer=v_norm),
        ]

    def objective_at(mm):
        return objective

    def canonical_at(mm):
        scan = _seq_canonical(E, mm)
        vcan = _seq_canonical(F.dual, mm)
        if v_nonneg:
            vcan = [np.abs(c) for c in vcan]
        return [(s, v) for s in scan for v in vcan]

    canonical = _with_witnesses(canonical_at, _normalize_witnesses(extra_witnesses))
    salt = {"left": 23, "right": 29, "both": 31}[kind]
    val, blocks, _, iters, used = _run_lengths(objective_at, blocks_at, canonical, m, cfg, salt_base=salt)
    return _finish(val, blocks, cfg, iters, used)


def _same_kind_constant(T, tag: str, param: float, m: int, cfg: SearchConfig) -> NormEstimate:
    E, F = T.domain, T.codomain

    def source_norm(B):
        if tag == "strong":
            return K.pnorm(np.asarray(E.norm_of(B)), param, axis=-1)
        if tag == "weak":
            return K.ball_sup_batch(B, param, E.dual)
        return K.ball_sup_batch(np.abs(B), param, E.dual)

    def target_norm(ts):
        if tag == "strong":
            return K.pnorm(np.asarray(F.norm_of(ts)), param, axis=-1)
        if tag == "weak":
            return K.ball_sup_batch(ts, param, F.dual)
        return K.ball_sup_batch(np.abs(ts), param, F.dual)

    def blocks_at(mm):
        return [_Block(E.dim, normalizer=source_norm)]

    def objective_at(mm):
        def objective(parts):
            return target_norm(parts[0] @ T.matrix.T)

        return objective

    def canonical_at(mm):
        return [(c,) for c in _seq_canonical(E, mm)]

    val, blocks, _, iters, used = _run_lengths(objective_at, blocks_at, canonical_at, m, cfg, salt_base=37)
    return _finish(val, blocks, cfg, iters, used)


def induced_map_constant(
    T: LinearOperator,
    source: SeqNormKind,
    target: SeqNormKind,
    m: int = 4,
    cfg: Optional[SearchConfig] = None,
) -> NormEstimate:
    """Norm of the induced sequence-space map, dispatched to the matching
    ideal estimator so shared pairs agree with it bit-for-bit.

    Supported pairs: (pos_weak q -> strong p) = lambda, (strong q ->
    pos_strong p) = dplus sequence path, (pos_weak q -> cohen p) = left
    nuclear, (weak q -> pos_strong p) = right nuclear, (pos_weak q ->
    pos_strong p) = both-sided nuclear, plus any same-tag pair among
    strong/weak/pos_weak.
    """
    cfg = cfg or SearchConfig()
    pair = (source.tag, target.tag)
    p, q = target.parameter, source.parameter
    if pair == ("pos_weak", "strong"):
        return lambda_norm(T, NormParams(p, q), m, cfg)
    if pair == ("strong", "pos_strong"):
        return dplus_norm(T, NormParams(p, q), m, cfg, path="sequence")
    if pair == ("pos_weak", "cohen"):
        return cohen_nuclear_norm(T, "left", NormParams(p, q), m, cfg)
    if pair == ("weak", "pos_strong"):
        return cohen_nuclear_norm(T, "right", NormParams(p, q), m, cfg)
    if pair == ("pos_weak", "pos_strong"):
        return cohen_nuclear_norm(T, "both", NormParams(p, q), m, cfg)
    if source.tag == target.tag and source.tag in ("strong", "weak", "pos_weak"):
        if source.parameter != target.parameter:
            raise UnsupportedPairError("same-kind pair needs equal parameters")
        return _same_kind_constant(T, source.tag, source.parameter, m, cfg)
    raise UnsupportedPairError(f"no estimator for pair {pair}")


def ideal_norm(
    T: LinearOperator, kind: IdealKind, m: int = 4, cfg: Optional[SearchConfig] = None
) -> NormEstimate:
    """Dispatch on IdealKind; the uniform entry point used by the CLI."""
    if kind.tag == "lambda":
        return lambda_norm(T, kind.params, m, cfg)
    if kind.tag == "dplus":
        return dplus_norm(T, kind.params, m, cfg)
    if kind.tag == "majorizing":
        return majorizing_norm(T, kind.params, m, cfg)
    if kind.tag in ("cn_left", "cn_right", "cn_both"):
        return cohen_nuclear_norm(T, kind.tag.removeprefix("cn_"), kind.params, m, cfg)
    return induced_map_constant(T, kind.source, kind.target, m, cfg)
