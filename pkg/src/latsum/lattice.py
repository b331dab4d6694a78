"""Finite-dimensional coordinate Banach lattices.

A space here is a weighted ell_r^n with the coordinatewise order:

    norm(x) = (sum_j w_j * |x_j|**r) ** (1/r)   for r < inf
    norm(x) = max_j w_j * |x_j|                 for r = inf

All objects are immutable after construction and every operation is pure,
so instances can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "LatticeSpace",
    "LatticeVector",
    "VectorSequence",
    "SpaceMismatchError",
    "UnsupportedExponentError",
    "conjugate_exponent",
    "dual_pairing",
    "positive_ball_extreme_points",
    "sample_positive_sphere",
]

_INF = math.inf


class SpaceMismatchError(ValueError):
    """Vectors or sequences from incompatible spaces were combined."""


class UnsupportedExponentError(ValueError):
    """The operation needs a polyhedral unit ball, i.e. exponent 1 or inf."""


def conjugate_exponent(r: float) -> float:
    """Holder conjugate exponent, with the conventions 1* = inf and inf* = 1."""
    if r == 1.0:
        return _INF
    if r == _INF:
        return 1.0
    return r / (r - 1.0)


def _frozen_array(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if shape is not None and arr.shape != shape:
        raise ValueError(f"expected array of shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LatticeSpace:
    """Weighted ell_r^n with strictly positive weights.

    Parameters
    ----------
    dim : number of coordinates, at least 1.
    exponent : r in [1, inf].  math.inf selects the weighted sup norm.
    weights : strictly positive array of length dim; defaults to all ones.
    """

    dim: int
    exponent: float = 2.0
    weights: np.ndarray = None

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError("dim must be a positive integer")
        object.__setattr__(self, "dim", int(self.dim))
        r = float(self.exponent)
        if not (r >= 1.0):
            raise ValueError("exponent must lie in [1, inf]")
        object.__setattr__(self, "exponent", r)
        w = np.ones(self.dim) if self.weights is None else np.array(self.weights, dtype=float)
        if w.shape != (self.dim,):
            raise ValueError("weights must have length dim")
        if not np.all(w > 0):
            raise ValueError("weights must be strictly positive")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def is_polyhedral(self) -> bool:
        return self.exponent in (1.0, _INF)

    @cached_property
    def dual(self) -> "LatticeSpace":
        """Dual space under the plain dot-product pairing.

        For r in (1, inf) the dual is ell_{r*} with weights w**(-r*/r); for
        r = 1 it is ell_inf with weights 1/w, and for r = inf it is ell_1
        with weights 1/w.  The double dual is this space itself, by object
        identity, so round trips are exact.
        """
        r = self.exponent
        rs = conjugate_exponent(r)
        if r == 1.0 or r == _INF:
            w = 1.0 / self.weights
        else:
            w = self.weights ** (-rs / r)
        d = LatticeSpace(self.dim, rs, w)
        d.__dict__["dual"] = self
        return d

    def norm_of(self, coords) -> np.ndarray | float:
        """Norm of coordinate arrays; batches over leading axes."""
        x = np.asarray(coords, dtype=float)
        if x.shape[-1] != self.dim:
            raise SpaceMismatchError(f"coordinate length {x.shape[-1]} != dim {self.dim}")
        a = np.abs(x)
        if self.exponent == _INF:
            out = np.max(self.weights * a, axis=-1)
        else:
            out = np.sum(self.weights * a ** self.exponent, axis=-1) ** (1.0 / self.exponent)
        return float(out) if out.ndim == 0 else out

    def vector(self, coords) -> "LatticeVector":
        return LatticeVector(_frozen_array(coords, (self.dim,)), self)

    def zero(self) -> "LatticeVector":
        return self.vector(np.zeros(self.dim))

    def basis_vector(self, j: int, scale: float = 1.0) -> "LatticeVector":
        coords = np.zeros(self.dim)
        coords[j] = scale
        return self.vector(coords)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LatticeSpace)
            and self.dim == other.dim
            and self.exponent == other.exponent
            and np.array_equal(self.weights, other.weights)
        )

    def close_to(self, other: "LatticeSpace", tol: float = 1e-9) -> bool:
        return (
            self.dim == other.dim
            and self.exponent == other.exponent
            and np.allclose(self.weights, other.weights, rtol=tol, atol=tol)
        )

    def __repr__(self) -> str:
        return f"LatticeSpace(dim={self.dim}, exponent={self.exponent}, weights={self.weights.tolist()})"


def dual_pairing(left, right) -> float:
    """Plain dot product; the pairing between a space and its dual."""
    a = left.coords if isinstance(left, LatticeVector) else np.asarray(left, dtype=float)
    b = right.coords if isinstance(right, LatticeVector) else np.asarray(right, dtype=float)
    return float(np.dot(a, b))


@dataclass(frozen=True, eq=False)
class LatticeVector:
    """A point of a LatticeSpace, with the lattice operations."""

    coords: np.ndarray
    space: LatticeSpace

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen_array(self.coords, (self.space.dim,)))

    def _check(self, other: "LatticeVector"):
        if self.space != other.space:
            raise SpaceMismatchError("vectors live in different spaces")

    def norm(self) -> float:
        return float(self.space.norm_of(self.coords))

    def abs(self) -> "LatticeVector":
        return self.space.vector(np.abs(self.coords))

    def pos_part(self) -> "LatticeVector":
        return self.space.vector(np.maximum(self.coords, 0.0))

    def neg_part(self) -> "LatticeVector":
        return self.space.vector(np.maximum(-self.coords, 0.0))

    def sup(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return self.space.vector(np.maximum(self.coords, other.coords))

    def inf(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return self.space.vector(np.minimum(self.coords, other.coords))

    def pairing(self, functional) -> float:
        return dual_pairing(self, functional)

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return self.space.vector(self.coords + other.coords)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return self.space.vector(self.coords - other.coords)

    def __neg__(self) -> "LatticeVector":
        return self.space.vector(-self.coords)

    def __mul__(self, scalar: float) -> "LatticeVector":
        return self.space.vector(self.coords * float(scalar))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LatticeVector)
            and self.space == other.space
            and np.array_equal(self.coords, other.coords)
        )

    def __repr__(self) -> str:
        return f"LatticeVector({self.coords.tolist()})"


@dataclass(frozen=True, eq=False)
class VectorSequence:
    """A finite sequence of vectors from one space, stored as an m x n array."""

    space: LatticeSpace
    array: np.ndarray

    def __post_init__(self):
        arr = np.array(self.array, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != self.space.dim:
            raise SpaceMismatchError(
                f"sequence array must have shape (m, {self.space.dim}), got {arr.shape}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "array", arr)

    @classmethod
    def from_vectors(cls, vectors) -> "VectorSequence":
        vectors = list(vectors)
        if not vectors:
            raise ValueError("from_vectors needs at least one vector; use empty() instead")
        space = vectors[0].space
        for v in vectors[1:]:
            if v.space != space:
                raise SpaceMismatchError("vectors live in different spaces")
        return cls(space, np.stack([v.coords for v in vectors]))

    @classmethod
    def empty(cls, space: LatticeSpace) -> "VectorSequence":
        return cls(space, np.zeros((0, space.dim)))

    def __len__(self) -> int:
        return self.array.shape[0]

    def entries(self):
        return [self.space.vector(row) for row in self.array]

    def abs(self) -> "VectorSequence":
        return VectorSequence(self.space, np.abs(self.array))

    def tail(self, start: int) -> "VectorSequence":
        return VectorSequence(self.space, self.array[start:])

    def is_nonnegative(self) -> bool:
        return bool(np.all(self.array >= 0))

    def __repr__(self) -> str:
        return f"VectorSequence(m={len(self)}, space={self.space!r})"


def positive_ball_extreme_points(space: LatticeSpace):
    """Extreme points of the positive part of the unit ball.

    exponent 1 gives the n scaled unit vectors e_j / w_j; exponent inf gives
    the 2^n - 1 nonzero indicator vectors scaled coordinatewise by 1 / w_j.
    Any convex objective that is monotone on the positive cone attains its
    maximum over the positive ball on this list.
    """
    pts = _positive_extreme_array(space)
    return [space.vector(row) for row in pts]


def _positive_extreme_array(space: LatticeSpace) -> np.ndarray:
    n, w = space.dim, space.weights
    if space.exponent == 1.0:
        return np.diag(1.0 / w)
    if space.exponent == _INF:
        if n > 16:
            raise UnsupportedExponentError("too many coordinates for indicator enumeration")
        masks = np.arange(1, 2**n)
        bits = (masks[:, None] >> np.arange(n)[None, :]) & 1
        return bits / w
    raise UnsupportedExponentError(
        f"positive ball of exponent {space.exponent} is not polyhedral"
    )


def _signed_extreme_array(space: LatticeSpace) -> np.ndarray:
    """Extreme points of the full unit ball for polyhedral exponents."""
    n, w = space.dim, space.weights
    if space.exponent == 1.0:
        eye = np.diag(1.0 / w)
        return np.concatenate([eye, -eye])
    if space.exponent == _INF:
        if n > 16:
            raise UnsupportedExponentError("too many coordinates for sign enumeration")
        masks = np.arange(2**n)
        signs = 1.0 - 2.0 * ((masks[:, None] >> np.arange(n)[None, :]) & 1)
        return signs / w
    raise UnsupportedExponentError(f"ball of exponent {space.exponent} is not polyhedral")


def sample_positive_sphere(space: LatticeSpace, count: int, seed: int):
    """Deterministic sample of points on the positive part of the unit sphere."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count == 0:
        return []
    rng = np.random.default_rng(seed)
    dirs = np.abs(rng.standard_normal((count, space.dim)))
    dead = ~(dirs.sum(axis=1) > 0)
    dirs[dead, 0] = 1.0
    dirs /= np.asarray(space.norm_of(dirs))[:, None]
    return [space.vector(row) for row in dirs]
