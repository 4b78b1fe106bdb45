"""Finite point configurations in R^d and max-plus convex combinations.

Points are 1-D float arrays. Reconstructed points are compared to targets
with an absolute tolerance of ``POINT_TOL``; residuated weights such as
``p_t - v_t`` are generally not exactly representable when the data lives
on a decimal grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ValidationError
from .maxplus import NEG_INF, JPair, check_scalar

POINT_TOL = 1e-9


def as_vector(v: Iterable[float], *, name: str = "point") -> np.ndarray:
    arr = np.array([check_scalar(x, name=name) for x in v], dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"{name} must be a non-empty vector")
    return arr


def points_equal(a: np.ndarray, b: np.ndarray, tol: float = POINT_TOL) -> bool:
    if a.shape != b.shape:
        return False
    finite = np.isfinite(a) & np.isfinite(b)
    if not np.array_equal(np.isfinite(a), np.isfinite(b)):
        return False
    return bool(np.all(a[~finite] == b[~finite]) and np.all(np.abs(a[finite] - b[finite]) <= tol))


def check_weights(weights: Sequence[float], *, name: str = "weights") -> np.ndarray:
    """Validate a normalized weight list: every entry <= 0 and max exactly 0."""
    w = np.array([check_scalar(x, name=name) for x in weights], dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValidationError("weight list must be non-empty", name=name)
    if np.any(w > 0):
        raise ValidationError("weights must be <= 0", name=name)
    if w.max() != 0.0:
        raise ValidationError("normalization: max weight must be 0", name=name)
    return w


@dataclass(frozen=True, eq=False)
class PointConfig:
    """A non-empty list of points of a common dimension."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise DimensionError("a point configuration needs at least one point of positive dimension")
        if np.any(np.isnan(pts)) or np.any(pts == np.inf):
            raise ValidationError("coordinates must be finite or -inf")
        pts = pts + 0.0
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def __getitem__(self, i: int) -> np.ndarray:
        return self.points[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PointConfig) and np.array_equal(self.points, other.points)

    def index_of(self, x: np.ndarray, tol: float = POINT_TOL) -> int | None:
        for i, p in enumerate(self.points):
            if points_equal(p, x, tol):
                return i
        return None


@dataclass(frozen=True, eq=False)
class TropicalHull:
    """The normalized max-plus span of a list of generators."""

    generators: PointConfig

    def __post_init__(self) -> None:
        if not isinstance(self.generators, PointConfig):
            object.__setattr__(self, "generators", PointConfig(self.generators))
        if not np.all(np.isfinite(self.generators.points)):
            raise ValidationError("hull generators must have finite coordinates")

    @property
    def dimension(self) -> int:
        return self.generators.dimension


@dataclass(frozen=True)
class Membership:
    member: bool
    weights: np.ndarray  # clamped residuation; normalized when member


@dataclass(frozen=True)
class Witness:
    """A certificate ``x = weight (.) y (+) z`` with points given by sample index."""

    y_index: int
    z_index: int
    weight: float
    y: np.ndarray
    z: np.ndarray


def _check_dim(x: np.ndarray, d: int) -> None:
    if x.shape != (d,):
        raise DimensionError(f"expected a point of dimension {d}, got shape {x.shape}")


def combine_points(points: Sequence[Sequence[float]] | np.ndarray, weights: Sequence[float]) -> np.ndarray:
    """The combination (+)_k w_k (.) v_k, taken coordinatewise."""
    pts = PointConfig(np.asarray(points, dtype=float)).points
    w = check_weights(weights)
    if len(w) != len(pts):
        raise DimensionError(f"{len(pts)} points but {len(w)} weights")
    return (w[:, None] + pts).max(axis=0)


def s_combine(x: Sequence[float], y: Sequence[float], j: JPair) -> np.ndarray:
    """t (.) x (+) p (.) y for (t, p) in J."""
    x = as_vector(x, name="x")
    y = as_vector(y, name="y")
    if x.shape != y.shape:
        raise DimensionError(f"dimension mismatch: {x.size} vs {y.size}")
    return np.maximum(j.t + x, j.p + y)


def hull_membership(hull: TropicalHull, p: Sequence[float], tol: float = POINT_TOL) -> Membership:
    """Decide whether ``p`` lies in the hull by clamped residuation.

    Every normalized representation of ``p`` has weights bounded above by
    ``min(0, min_t (p_t - v_kt))``; the maximal candidate either reconstructs
    ``p`` with maximum weight 0 or no representation exists.
    """
    p = as_vector(p)
    gens = hull.generators.points
    _check_dim(p, gens.shape[1])
    if not np.all(np.isfinite(p)):
        return Membership(False, np.full(len(gens), NEG_INF))
    lam = np.minimum(0.0, (p[None, :] - gens).min(axis=1))
    if lam.max() < -tol:
        return Membership(False, lam)
    lam = np.where(lam >= -tol, 0.0, lam)
    recon = (lam[:, None] + gens).max(axis=0)
    return Membership(points_equal(recon, p, tol) and lam.max() == 0.0, lam)


def _first_hit(mask: np.ndarray) -> tuple[int, ...] | None:
    flat = np.flatnonzero(mask)
    if flat.size == 0:
        return None
    return tuple(int(i) for i in np.unravel_index(flat[0], mask.shape))


def _two_term_hits(pts: np.ndarray, x: np.ndarray, grid: np.ndarray, tol: float) -> np.ndarray:
    """Boolean array [y, z, k]: grid[k] (.) pts[y] (+) pts[z] == x within tol."""
    shifted = grid[None, :, None] + pts[:, None, :]  # (y, k, d)
    combo = np.maximum(shifted[:, None, :, :], pts[None, :, None, :])  # (y, z, k, d)
    with np.errstate(invalid="ignore"):
        close = np.abs(combo - x) <= tol
    return close.all(axis=-1)


def extremal_witness(
    sample: PointConfig,
    x: Sequence[float],
    weight_grid: Sequence[float],
    tol: float = POINT_TOL,
) -> Witness | None:
    """Search for ``x = t (.) y (+) z`` with x outside {y, z}.

    Order is y index, then z index, then grid order. ``None`` only says that
    no witness exists inside the sample.
    """
    x = as_vector(x)
    _check_dim(x, sample.dimension)
    if sample.index_of(x, tol) is None:
        raise ValidationError("point is not in the sample")
    grid = check_weight_grid(weight_grid)
    pts = sample.points
    hits = _two_term_hits(pts, x, grid, tol)
    is_x = np.array([points_equal(p, x, tol) for p in pts])
    hits &= ~is_x[:, None, None] & ~is_x[None, :, None]
    return _witness(hits, pts, grid)


def b_membership_witness(
    hull: TropicalHull,
    x: Sequence[float],
    sample: PointConfig,
    weight_grid: Sequence[float],
    tol: float = POINT_TOL,
) -> Witness | None:
    """Search for ``x = lam (.) y (+) z`` with finite lam and not x = y = z.

    A witness shows that the fiber of the barycenter map over ``x`` holds
    the non-Dirac measure lam (.) delta_y (+) delta_z, so ``x`` has no
    one-point fiber.
    """
    x = as_vector(x)
    _check_dim(x, hull.dimension)
    if sample.dimension != hull.dimension:
        raise DimensionError("sample and hull dimensions differ")
    if not hull_membership(hull, x, tol).member:
        raise ValidationError("point lies outside the hull")
    for i, p in enumerate(sample.points):
        if not hull_membership(hull, p, tol).member:
            raise ValidationError(f"sample point {i} lies outside the hull")
    grid = check_weight_grid(weight_grid)
    finite = grid > NEG_INF
    pts = sample.points
    hits = _two_term_hits(pts, x, grid, tol) & finite[None, None, :]
    is_x = np.array([points_equal(p, x, tol) for p in pts])
    hits &= ~(is_x[:, None, None] & is_x[None, :, None])
    return _witness(hits, pts, grid)


def check_weight_grid(weight_grid: Sequence[float]) -> np.ndarray:
    grid = np.array([check_scalar(t, name="weight_grid") for t in weight_grid], dtype=float)
    if grid.size == 0:
        raise ValidationError("weight grid is empty")
    if np.any(grid > 0):
        raise ValidationError("weight grid entries must be <= 0")
    return grid


def _witness(hits: np.ndarray, pts: np.ndarray, grid: np.ndarray) -> Witness | None:
    hit = _first_hit(hits)
    if hit is None:
        return None
    yi, zi, k = hit
    return Witness(yi, zi, float(grid[k]), pts[yi].copy(), pts[zi].copy())


def unit_interval_grid(n: int = 101) -> PointConfig:
    """Uniform grid on [0, 1] with both endpoints."""
    if n < 2:
        raise ValidationError("a [0,1] grid needs at least 2 points")
    return PointConfig(np.linspace(0.0, 1.0, n)[:, None])


def unit_interval_weight_grid(n: int = 101) -> list[float]:
    """Weights 0, -1/(n-1), ..., -1 followed by -inf."""
    return [-float(s) + 0.0 for s in np.linspace(0.0, 1.0, n)] + [NEG_INF]


def candidate_weights(sample: PointConfig, x: Sequence[float]) -> list[float]:
    """Weights that can appear in a two-term representation of ``x``.

    If ``x = t (.) y (+) z`` and the y-term attains some coordinate, then
    ``t = x_c - y_c`` for that coordinate. Otherwise ``x = z`` and any ``t``
    below all these differences works. So 0, the nonpositive differences,
    one value below them, and -inf make a two-term search over ``sample``
    complete.
    """
    x = as_vector(x)
    _check_dim(x, sample.dimension)
    diffs = (x[None, :] - sample.points).ravel()
    diffs = diffs[np.isfinite(diffs) & (diffs <= 0)]
    vals = sorted({0.0, *(float(d) + 0.0 for d in diffs)}, reverse=True)
    return vals + [vals[-1] - 1.0, NEG_INF]
