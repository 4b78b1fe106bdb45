"""Idempotent barycenters at the first and second level."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SpaceMismatchError, ValidationError
from .maxplus import NEG_INF
from .measure import (
    GroundSpace,
    IdempotentMeasure,
    MetaMeasure,
    decompose,
    dirac,
    evaluate,
    same_space,
    support,
)
from .space import POINT_TOL, PointConfig, TropicalHull, check_weight_grid, as_vector, hull_membership, points_equal


@dataclass(frozen=True, eq=False)
class EmbeddedSpace:
    """A ground space whose points carry coordinates in R^d."""

    space: GroundSpace
    hull: TropicalHull | None = None

    def __post_init__(self) -> None:
        if self.space.coords is None:
            raise ValidationError("an embedded space needs coordinates")
        if not np.all(np.isfinite(self.space.coords.points)):
            raise ValidationError("embedded coordinates must be finite")
        if self.hull is not None:
            if self.hull.dimension != self.dimension:
                raise ValidationError("hull dimension differs from the coordinates")
            for i, p in enumerate(self.coords):
                if not hull_membership(self.hull, p).member:
                    raise ValidationError(f"ground point {i} lies outside the hull")

    @property
    def coords(self) -> np.ndarray:
        return self.space.coords.points

    @property
    def dimension(self) -> int:
        return self.coords.shape[1]


def _embedded(es: EmbeddedSpace | GroundSpace) -> EmbeddedSpace:
    return es if isinstance(es, EmbeddedSpace) else EmbeddedSpace(es)


def barycenter(es: EmbeddedSpace | GroundSpace, mu: IdempotentMeasure) -> np.ndarray:
    """The point whose t-th coordinate is mu applied to the t-th coordinate function."""
    es = _embedded(es)
    if mu.space != es.space:
        raise SpaceMismatchError("measure is not defined on this embedded space")
    return (mu.weights[:, None] + es.coords).max(axis=0)


def barycenter_meta(M: MetaMeasure) -> IdempotentMeasure:
    """beta_IX(M): the density max_j (a_j + rho_j)."""
    dens = np.stack([m.weights for m in M.atoms])
    return IdempotentMeasure(M.space, (M.weights[:, None] + dens).max(axis=0))


def barycenter_meta_functional(M: MetaMeasure, phi: Sequence[float]) -> float:
    """M applied to phi~, where phi~(nu) = nu(phi)."""
    return float(max(a + evaluate(m, phi) for m, a in zip(M.atoms, M.weights)))


def dirac_lift(kappa: IdempotentMeasure) -> MetaMeasure:
    """I(delta X)(kappa): Dirac atoms delta_x weighted by the density of kappa."""
    idx = support(kappa)
    return MetaMeasure(tuple(dirac(kappa.space, i) for i in idx), kappa.weights[idx])


def extremal_split(mu: IdempotentMeasure) -> tuple[float, IdempotentMeasure, IdempotentMeasure] | None:
    """A representation ``mu = a (.) mu2 (+) mu1`` with mu outside {mu1, mu2}.

    Splits off one point of density 0 from the rest of the support. Returns
    ``None`` exactly for Dirac measures, which admit no such representation.
    """
    supp = support(mu)
    if len(supp) < 2:
        return None
    top = next(i for i in supp if mu.weights[i] == 0.0)
    rest = [i for i in range(len(mu.space)) if i != top]
    a1, mu1, a2, mu2 = decompose(mu, ([top], rest))
    assert a1 == 0.0
    return a2, mu1, mu2


def meta_fiber_witness(mu: IdempotentMeasure) -> MetaMeasure | None:
    """A second-level measure over ``mu`` other than delta_mu, or None if mu is Dirac."""
    split = extremal_split(mu)
    if split is None:
        return None
    a, mu1, mu2 = split
    return MetaMeasure((mu1, mu2), np.array([0.0, a]))


def fiber_witness(
    es: EmbeddedSpace | GroundSpace,
    x: Sequence[float],
    weight_grid: Sequence[float],
    tol: float = POINT_TOL,
) -> IdempotentMeasure | None:
    """Search two-point measures lam (.) delta_y (+) delta_z with barycenter x.

    Only finite ``lam`` and ``y != z`` are tried, so any hit is non-Dirac.
    Order: y index, z index, grid order.
    """
    es = _embedded(es)
    x = as_vector(x)
    if x.shape != (es.dimension,):
        raise ValidationError(f"point must have dimension {es.dimension}")
    on_ground = any(points_equal(p, x, tol) for p in es.coords)
    if not on_ground and (es.hull is None or not hull_membership(es.hull, x, tol).member):
        raise ValidationError("point is neither a ground point nor in the hull")
    grid = check_weight_grid(weight_grid)
    grid = grid[grid > NEG_INF]
    pts = es.coords
    shifted = grid[None, :, None] + pts[:, None, :]
    combo = np.maximum(shifted[:, None, :, :], pts[None, :, None, :])
    hits = (np.abs(combo - x) <= tol).all(axis=-1)
    hits &= ~np.eye(len(pts), dtype=bool)[:, :, None]
    flat = np.flatnonzero(hits)
    if flat.size == 0:
        return None
    yi, zi, k = np.unravel_index(flat[0], hits.shape)
    w = np.full(len(pts), NEG_INF)
    w[zi] = 0.0
    w[yi] = grid[k]
    return IdempotentMeasure(es.space, w)


def embed_by_functionals(measures: Sequence[IdempotentMeasure], tests: Sequence[Sequence[float]]) -> PointConfig:
    """Coordinates (nu(phi_1), ..., nu(phi_k)) of measures under test functions.

    Each coordinate is max-plus affine in the measure, so combinations of
    measures map to combinations of their coordinate vectors.
    """
    same_space(*measures)
    return PointConfig(np.array([[evaluate(m, phi) for phi in tests] for m in measures]))
