"""Idempotent measures on finite metric spaces.

A measure is stored as its density: one weight in [-inf, 0] per ground
point, with maximum exactly 0. The functional is recovered as
``mu(phi) = max_i (w_i + phi_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, SpaceMismatchError, ValidationError
from .maxplus import NEG_INF
from .space import PointConfig, check_weights

METRIC_TOL = 1e-12
ATOM_TOL = 1e-12


def sup_metric(points: np.ndarray) -> np.ndarray:
    return np.abs(points[:, None, :] - points[None, :, :]).max(axis=-1)


@dataclass(frozen=True, eq=False)
class GroundSpace:
    """A finite metric space, optionally embedded in R^d."""

    labels: tuple[str, ...]
    dist: np.ndarray
    coords: PointConfig | None = None

    def __post_init__(self) -> None:
        labels = tuple(str(s) for s in self.labels)
        n = len(labels)
        if n == 0:
            raise ValidationError("ground space is empty")
        if len(set(labels)) != n:
            raise ValidationError("ground point labels must be distinct")
        d = np.array(self.dist, dtype=float)
        if d.shape != (n, n):
            raise DimensionError(f"metric matrix must be {n}x{n}, got {d.shape}")
        if not np.all(np.isfinite(d)):
            raise ValidationError("metric entries must be finite")
        if np.any(d < 0):
            raise ValidationError("metric: entries must be nonnegative")
        if not np.array_equal(d, d.T):
            raise ValidationError("metric: matrix is not symmetric")
        off = ~np.eye(n, dtype=bool)
        if np.any(np.diag(d) != 0) or np.any(d[off] == 0):
            raise ValidationError("metric: d(i,j) = 0 must hold exactly when i = j")
        if n > 2:
            excess = d[:, None, :] - (d[:, :, None] + d[None, :, :])
            if excess.max() > METRIC_TOL:
                raise ValidationError("metric: triangle inequality fails")
        if self.coords is not None and len(self.coords) != n:
            raise DimensionError(f"{n} labels but {len(self.coords)} coordinate rows")
        d.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", d)

    @classmethod
    def from_points(
        cls,
        points: Sequence[Sequence[float]] | np.ndarray | PointConfig,
        metric: str | Sequence[Sequence[float]] | np.ndarray = "sup",
        labels: Sequence[str] | None = None,
    ) -> "GroundSpace":
        cfg = points if isinstance(points, PointConfig) else PointConfig(np.asarray(points, dtype=float))
        if isinstance(metric, str):
            if metric != "sup":
                raise ValidationError(f"unknown metric {metric!r}")
            if not np.all(np.isfinite(cfg.points)):
                raise ValidationError("the sup metric needs finite coordinates")
            dist = sup_metric(cfg.points)
        else:
            dist = np.asarray(metric, dtype=float)
        if labels is None:
            labels = [f"x{i}" for i in range(len(cfg))]
        return cls(tuple(labels), dist, cfg)

    @classmethod
    def from_matrix(cls, dist: Sequence[Sequence[float]] | np.ndarray, labels: Sequence[str] | None = None) -> "GroundSpace":
        dist = np.asarray(dist, dtype=float)
        if labels is None:
            labels = [f"x{i}" for i in range(len(dist))]
        return cls(tuple(labels), dist)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, GroundSpace):
            return False
        return (
            self.labels == other.labels
            and np.array_equal(self.dist, other.dist)
            and (self.coords == other.coords if self.coords is not None else other.coords is None)
        )

    def __hash__(self) -> int:
        return hash((self.labels, self.dist.tobytes()))

    @property
    def diameter(self) -> float:
        return float(self.dist.max())


def as_function(space: GroundSpace, values: Iterable[float]) -> np.ndarray:
    """Validate a real function on the ground space (one finite value per point)."""
    phi = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
    if phi.shape != (len(space),):
        raise SpaceMismatchError(f"function has {phi.size} values, space has {len(space)} points")
    if not np.all(np.isfinite(phi)):
        raise ValidationError("function values must be finite")
    return phi


@dataclass(frozen=True, eq=False)
class IdempotentMeasure:
    """A normalized density on a finite ground space."""

    space: GroundSpace
    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (len(self.space),):
            raise SpaceMismatchError(f"{w.size} weights for a space of {len(self.space)} points")
        w = check_weights(w)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IdempotentMeasure)
            and self.space == other.space
            and np.array_equal(self.weights, other.weights)
        )

    def __hash__(self) -> int:
        return hash(self.weights.tobytes())

    def __repr__(self) -> str:
        return f"IdempotentMeasure({self.weights.tolist()})"

    @property
    def support(self) -> list[int]:
        return support(self)

    @property
    def is_dirac(self) -> bool:
        return int(np.count_nonzero(self.weights > NEG_INF)) == 1

    def __call__(self, phi: Iterable[float]) -> float:
        return evaluate(self, phi)


def dirac(space: GroundSpace, i: int) -> IdempotentMeasure:
    w = np.full(len(space), NEG_INF)
    w[i] = 0.0
    return IdempotentMeasure(space, w)


def same_space(*measures: IdempotentMeasure) -> GroundSpace:
    space = measures[0].space
    for m in measures[1:]:
        if m.space != space:
            raise SpaceMismatchError("measures live on different ground spaces")
    return space


def weights_close(a: np.ndarray, b: np.ndarray, tol: float = ATOM_TOL) -> bool:
    """Equal -inf pattern and finite entries within ``tol``."""
    fa, fb = np.isfinite(a), np.isfinite(b)
    if not np.array_equal(fa, fb):
        return False
    return bool(np.all(np.abs(a[fa] - b[fa]) <= tol))


def evaluate(mu: IdempotentMeasure, phi: Iterable[float]) -> float:
    """mu(phi) = max_i (w_i + phi_i)."""
    phi = as_function(mu.space, phi)
    return float((mu.weights + phi).max())


def support(mu: IdempotentMeasure) -> list[int]:
    return [int(i) for i in np.flatnonzero(mu.weights > NEG_INF)]


def pushforward(f: Sequence[int], mu: IdempotentMeasure, target: GroundSpace | None = None) -> IdempotentMeasure:
    """Image measure under the point map ``i -> f[i]``; weights merge by max."""
    target = mu.space if target is None else target
    f = np.asarray(f)
    if f.shape != (len(mu.space),):
        raise DimensionError(f"point map must have one entry per source point ({len(mu.space)})")
    if not np.issubdtype(f.dtype, np.integer) or f.min() < 0 or f.max() >= len(target):
        raise ValidationError("point map sends a point outside the target space")
    w = np.full(len(target), NEG_INF)
    np.maximum.at(w, f, mu.weights)
    return IdempotentMeasure(target, w)


def combine_measures(atoms: Sequence[IdempotentMeasure], weights: Sequence[float]) -> IdempotentMeasure:
    """(+)_j a_j (.) mu_j; the density is the pointwise max of shifted densities."""
    if len(atoms) == 0:
        raise ValidationError("no measures to combine")
    a = check_weights(weights)
    if len(a) != len(atoms):
        raise DimensionError(f"{len(atoms)} measures but {len(a)} weights")
    space = same_space(*atoms)
    dens = np.stack([m.weights for m in atoms])
    return IdempotentMeasure(space, (a[:, None] + dens).max(axis=0))


def decompose(
    mu: IdempotentMeasure, part: tuple[Iterable[int], Iterable[int]]
) -> tuple[float, IdempotentMeasure, float, IdempotentMeasure]:
    """Split ``mu`` along a two-block partition of its support.

    Returns ``(a1, mu1, a2, mu2)`` where ``a_k`` is the largest weight on block
    ``k`` and ``mu_k`` is the renormalized restriction, so that
    ``a1 (.) mu1 (+) a2 (.) mu2 == mu``.
    """
    blocks = [sorted({int(i) for i in b}) for b in part]
    if len(blocks) != 2:
        raise ValidationError("a partition must have exactly two blocks")
    n = len(mu.space)
    for b in blocks:
        if any(i < 0 or i >= n for i in b):
            raise ValidationError("partition index out of range")
    if set(blocks[0]) & set(blocks[1]):
        raise ValidationError("partition blocks overlap")
    supp = set(support(mu))
    if not supp <= set(blocks[0]) | set(blocks[1]):
        raise ValidationError("partition does not cover the support")
    out: list = []
    for k, b in enumerate(blocks, start=1):
        idx = np.array(b, dtype=int)
        if not supp & set(b):
            raise ValidationError(f"block {k} misses the support")
        a = float(mu.weights[idx].max())
        w = np.full(n, NEG_INF)
        w[idx] = mu.weights[idx] - a
        out += [a, IdempotentMeasure(mu.space, w)]
    return out[0], out[1], out[2], out[3]


@dataclass(frozen=True, eq=False)
class MetaMeasure:
    """A second-level measure: weights over a finite list of measures.

    Atoms equal up to ``ATOM_TOL`` are merged on construction, keeping the
    larger weight.
    """

    atoms: tuple[IdempotentMeasure, ...]
    weights: np.ndarray

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        w = np.asarray(self.weights, dtype=float)
        if len(atoms) == 0:
            raise ValidationError("meta-measure has no atoms")
        if w.shape != (len(atoms),):
            raise DimensionError(f"{len(atoms)} atoms but {w.size} weights")
        same_space(*atoms)
        w = check_weights(w)
        kept: list[IdempotentMeasure] = []
        kept_w: list[float] = []
        for m, a in zip(atoms, w):
            for j, k in enumerate(kept):
                if weights_close(m.weights, k.weights):
                    kept_w[j] = max(kept_w[j], float(a))
                    break
            else:
                kept.append(m)
                kept_w.append(float(a))
        merged = np.array(kept_w)
        merged.setflags(write=False)
        object.__setattr__(self, "atoms", tuple(kept))
        object.__setattr__(self, "weights", merged)

    @property
    def space(self) -> GroundSpace:
        return self.atoms[0].space

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MetaMeasure)
            and len(self.atoms) == len(other.atoms)
            and all(a == b for a, b in zip(self.atoms, other.atoms))
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self) -> str:
        return f"MetaMeasure({list(self.atoms)}, {self.weights.tolist()})"

    @property
    def is_dirac(self) -> bool:
        return int(np.count_nonzero(self.weights > NEG_INF)) == 1

    def finite_atoms(self) -> list[tuple[IdempotentMeasure, float]]:
        return [(m, float(a)) for m, a in zip(self.atoms, self.weights) if a > NEG_INF]


def meta_dirac(mu: IdempotentMeasure) -> MetaMeasure:
    return MetaMeasure((mu,), np.zeros(1))


def combine_meta(metas: Sequence[MetaMeasure], weights: Sequence[float]) -> MetaMeasure:
    """(+)_j a_j (.) M_j at the second level."""
    a = check_weights(weights)
    if len(a) != len(metas):
        raise DimensionError(f"{len(metas)} meta-measures but {len(a)} weights")
    atoms: list[IdempotentMeasure] = []
    w: list[float] = []
    for M, aj in zip(metas, a):
        atoms += M.atoms
        w += [aj + x if aj > NEG_INF else NEG_INF for x in M.weights]
    return MetaMeasure(tuple(atoms), np.array(w))


def meta_pushforward(f: Sequence[int], M: MetaMeasure, target: GroundSpace | None = None) -> MetaMeasure:
    """Apply the ground map atom-wise (the second-level image of I f)."""
    return MetaMeasure(tuple(pushforward(f, m, target) for m in M.atoms), M.weights)
