"""Seeded random instances for the property battery and the CLI harnesses."""

from __future__ import annotations

import numpy as np

from .maxplus import NEG_INF
from .measure import GroundSpace, IdempotentMeasure, MetaMeasure, combine_measures
from .space import unit_interval_grid


def random_space(rng: np.random.Generator, n: int, dim: int = 2) -> GroundSpace:
    """n random points of the unit square with the Euclidean metric."""
    pts = rng.uniform(0.0, 1.0, size=(n, dim))
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1))
    return GroundSpace.from_points(pts, dist)


def interval_space(n: int = 101) -> GroundSpace:
    return GroundSpace.from_points(unit_interval_grid(n))


def random_weights(
    rng: np.random.Generator, n: int, *, min_support: int = 1, low: float = -3.0, dyadic: bool = False
) -> np.ndarray:
    """A normalized weight vector with at least ``min_support`` finite entries."""
    k = int(rng.integers(min(min_support, n), n + 1))
    idx = rng.permutation(n)[:k]
    w = np.full(n, NEG_INF)
    vals = rng.uniform(low, 0.0, size=k)
    if dyadic:
        vals = np.round(vals * 64) / 64
    w[idx] = vals
    w[idx[0]] = 0.0
    return w + 0.0


def random_measure(rng: np.random.Generator, space: GroundSpace, **kwargs) -> IdempotentMeasure:
    return IdempotentMeasure(space, random_weights(rng, len(space), **kwargs))


def random_non_dirac(rng: np.random.Generator, space: GroundSpace) -> IdempotentMeasure:
    return random_measure(rng, space, min_support=2)


def random_meta(rng: np.random.Generator, space: GroundSpace, max_atoms: int = 3) -> MetaMeasure:
    k = int(rng.integers(1, max_atoms + 1))
    atoms = tuple(random_measure(rng, space) for _ in range(k))
    return MetaMeasure(atoms, random_weights(rng, k, min_support=k))


def random_combination(rng: np.random.Generator, generators: list[IdempotentMeasure]) -> IdempotentMeasure:
    return combine_measures(generators, random_weights(rng, len(generators)))


def random_mr_samples(
    rng: np.random.Generator, generators: list[IdempotentMeasure], n: int, max_atoms: int = 3
) -> list[MetaMeasure]:
    """Second-level measures whose atoms lie in the hull K of ``generators``.

    K is max-plus convex, so the barycenter of each sample lies in K as well.
    """
    out = []
    for _ in range(n):
        k = int(rng.integers(1, max_atoms + 1))
        atoms = tuple(random_combination(rng, generators) for _ in range(k))
        out.append(MetaMeasure(atoms, random_weights(rng, k, min_support=k)))
    return out


def random_interval_measure(
    rng: np.random.Generator, space: GroundSpace, beta_max: float = 0.65
) -> IdempotentMeasure:
    """A measure on a [0, 1] grid with barycenter at most ``beta_max``.

    Every weight is clipped below ``b - s`` so that no point pushes the
    barycenter past ``b``.
    """
    pts = space.coords.points[:, 0]
    b = rng.uniform(0.0, beta_max)
    w = random_weights(rng, len(space), low=-1.0)
    w = np.minimum(w, b - pts)
    anchor = rng.choice(np.flatnonzero(pts <= b))
    w[anchor] = 0.0
    return IdempotentMeasure(space, w + 0.0)
