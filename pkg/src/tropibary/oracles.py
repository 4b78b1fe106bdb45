"""Brute-force reference computations.

Nothing here shares code paths with the fast routines it is used to check:
hull membership is decided by enumerating weight grids, ``d_n`` by sampling
Lipschitz functions, and decompositions of measures by exhaustive search.
"""

from __future__ import annotations

import functools
import itertools
from typing import Sequence

import numpy as np

from .maxplus import NEG_INF
from .measure import GroundSpace, IdempotentMeasure


def normalized_grid_weights(k: int, grid: Sequence[float]) -> np.ndarray:
    """All weight vectors of length k over ``grid`` whose maximum is 0."""
    return _normalized_grid_weights(k, tuple(sorted(set(grid), reverse=True)))


@functools.lru_cache(maxsize=32)
def _normalized_grid_weights(k: int, grid: tuple[float, ...]) -> np.ndarray:
    if 0.0 not in grid:
        raise ValueError("weight grid must contain 0")
    axes = np.meshgrid(*([np.array(grid)] * k), indexing="ij")
    rows = np.stack([a.ravel() for a in axes], axis=1)
    rows = rows[rows.max(axis=1) == 0.0]
    rows.setflags(write=False)
    return rows


def hull_grid_points(generators: np.ndarray, grid: Sequence[float]) -> np.ndarray:
    """Every normalized combination of the generators with weights on ``grid``."""
    W = normalized_grid_weights(len(generators), grid)
    return (W[:, :, None] + generators[None, :, :]).max(axis=1)


def grid_member(points: np.ndarray, p: np.ndarray, tol: float = 1e-9) -> bool:
    return bool(np.any(np.all(np.abs(points - p[None, :]) <= tol, axis=1)))


def default_hull_grid() -> list[float]:
    """Step 0.05 over [-5, 0] together with -inf."""
    return [-(k / 20) + 0.0 for k in range(101)] + [NEG_INF]


def dn_grid_search(
    mu: IdempotentMeasure, nu: IdempotentMeasure, n: int, values: Sequence[float]
) -> float:
    """max |mu(phi) - nu(phi)| / n over phi with phi_0 = 0 and other values in ``values``.

    Only n-Lipschitz candidates count, so the result is a lower bound for d_n
    that becomes exact once the grid contains an optimizer.
    """
    space = mu.space
    m = len(space)
    vals = np.asarray(values, dtype=float)
    phis = np.array([(0.0,) + c for c in itertools.product(vals, repeat=m - 1)])
    lip = np.all(np.abs(phis[:, :, None] - phis[:, None, :]) <= n * space.dist[None] + 1e-12, axis=(1, 2))
    phis = phis[lip]
    a = (mu.weights[None, :] + phis).max(axis=1)
    b = (nu.weights[None, :] + phis).max(axis=1)
    return float(np.abs(a - b).max() / n)


def grid_measures(space: GroundSpace, grid: Sequence[float]) -> list[IdempotentMeasure]:
    return [IdempotentMeasure(space, w) for w in normalized_grid_weights(len(space), grid)]


def decomposition_search(
    mu: IdempotentMeasure, candidates: Sequence[IdempotentMeasure], grid: Sequence[float]
) -> tuple[float, IdempotentMeasure, IdempotentMeasure] | None:
    """Find ``mu = a (.) mu2 (+) mu1`` with mu outside {mu1, mu2} among the candidates."""
    W = np.stack([c.weights for c in candidates])
    target = mu.weights
    not_mu = ~np.all(W == target[None, :], axis=1)
    below = np.all(W <= target[None, :], axis=1) & not_mu
    for a in grid:
        shifted = a + W
        below2 = np.all(shifted <= target[None, :], axis=1) & not_mu
        i1, i2 = np.flatnonzero(below), np.flatnonzero(below2)
        if i1.size == 0 or i2.size == 0:
            continue
        combo = np.maximum(W[i1][:, None, :], shifted[i2][None, :, :])
        hit = np.all(combo == target, axis=-1)
        if hit.any():
            j1, j2 = np.argwhere(hit)[0]
            return float(a), candidates[i1[j1]], candidates[i2[j2]]
    return None
