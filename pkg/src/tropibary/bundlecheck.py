"""Fiber-preserving deformations and a finite checker for their hypotheses.

Two families of maps are provided, each paired as (g, h):

* second level, ``I^2 X -> I^2 X``: ``mr_g`` shifts every atom towards the
  barycenter, ``mr_h`` mixes in the Dirac lift of the barycenter;
* the unit interval, ``I[0,1] -> I[0,1]``: ``interval_l`` folds the mass on
  ``[p, 1]`` onto ``p``, ``interval_h0`` mixes in a small multiple of
  ``delta_1``.

Each map preserves the barycenter exactly; the checker measures how far the
maps move measures (certified ``d_I`` upper bounds) and whether the two
images are separated by the support structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .barycenter import barycenter, barycenter_meta, dirac_lift
from .errors import ValidationError
from .maxplus import NEG_INF, check_scalar
from .measure import GroundSpace, IdempotentMeasure, MetaMeasure, combine_meta, support, weights_close
from .metric import dI, meta_dI
from .space import POINT_TOL

FIBER_TOL = 1e-12
INTERVAL_SPLIT = 2.0 / 3.0


def shift_bound(epsilon: float, diam: float) -> float:
    """A weight t with d_I(mu (+) t (.) kappa, mu) <= epsilon / 2 for all mu, kappa.

    For phi in Lip_n the shift moves mu(phi) by at most
    ``max(0, t + n diam) / n``, which vanishes for ``n <= N`` when
    ``t = -N diam``; the remaining tail is at most ``diam 2^-N``.
    """
    if not epsilon > 0 or not diam > 0:
        raise ValidationError("epsilon and diameter must be positive")
    N = max(1, math.ceil(math.log2(2.0 * diam / epsilon)))
    return -N * diam


def _check_t(t: float) -> float:
    t = check_scalar(t, name="t")
    if t > 0:
        raise ValidationError("shift weight t must be <= 0")
    return t


def shift_towards(mu: IdempotentMeasure, kappa: IdempotentMeasure, t: float) -> IdempotentMeasure:
    """s(mu, kappa, 0, t) = mu (+) t (.) kappa."""
    if t == NEG_INF:
        return mu
    return IdempotentMeasure(mu.space, np.maximum(mu.weights, t + kappa.weights))


def mr_g(M: MetaMeasure, t: float) -> MetaMeasure:
    """Replace every atom mu_j by mu_j (+) t (.) beta(M), keeping the weights."""
    t = _check_t(t)
    kappa = barycenter_meta(M)
    return MetaMeasure(tuple(shift_towards(m, kappa, t) for m in M.atoms), M.weights)


def mr_h(M: MetaMeasure, t: float) -> MetaMeasure:
    """M (+) t (.) I(delta X)(beta(M))."""
    t = _check_t(t)
    if t == NEG_INF:
        return M
    return combine_meta([M, dirac_lift(barycenter_meta(M))], [0.0, t])


def has_finite_dirac_atom(M: MetaMeasure) -> bool:
    return any(a > NEG_INF and m.is_dirac for m, a in zip(M.atoms, M.weights))


def _grid_index(space: GroundSpace, value: float) -> int:
    if space.coords is None or space.coords.dimension != 1:
        raise ValidationError("interval constructions need a one-dimensional grid")
    pts = space.coords.points[:, 0]
    hits = np.flatnonzero(np.abs(pts - value) <= POINT_TOL)
    if hits.size == 0:
        raise ValidationError(f"{value} is not a grid point")
    return int(hits[0])


def _interval_beta(nu: IdempotentMeasure) -> float:
    return float(barycenter(nu.space, nu)[0])


def interval_l(nu: IdempotentMeasure, p: float) -> IdempotentMeasure:
    """Fold the part of nu above ``p`` onto ``p``.

    The new density agrees with nu below ``p``, is -inf above it, and takes
    ``max_{s >= p} (s - p) + rho(s)`` at ``p``. Since beta(nu) <= 2/3 < p
    forces ``rho(s) <= 2/3 - s``, that value is negative and the barycenter is
    unchanged.
    """
    beta = _interval_beta(nu)
    if beta > INTERVAL_SPLIT:
        raise ValidationError(f"barycenter {beta} exceeds 2/3")
    if not INTERVAL_SPLIT < p <= 1.0:
        raise ValidationError(f"fold point {p} must lie in (2/3, 1]")
    ip = _grid_index(nu.space, p)
    pts = nu.space.coords.points[:, 0]
    p = pts[ip]
    above = pts >= p
    w = np.where(above, NEG_INF, nu.weights)
    w[ip] = ((pts[above] - p) + nu.weights[above]).max()
    return IdempotentMeasure(nu.space, w)


def interval_h0(mu: IdempotentMeasure, t: float) -> IdempotentMeasure:
    """mu (+) t (.) delta_1 for t <= -1."""
    t = check_scalar(t, name="t")
    if t > -1.0:
        raise ValidationError("interval_h0 needs t <= -1")
    beta = _interval_beta(mu)
    if not 0.0 <= beta <= INTERVAL_SPLIT:
        raise ValidationError(f"barycenter {beta} outside [0, 2/3]")
    one = _grid_index(mu.space, 1.0)
    if t == NEG_INF:
        return mu
    w = mu.weights.copy()
    w[one] = max(w[one], t)
    return IdempotentMeasure(mu.space, w)


def interval_cut(epsilon: float, space: GroundSpace) -> float:
    """Smallest grid point p in (2/3, 1) with p >= 1 - epsilon / 2.

    For n-Lipschitz phi, folding moves nu(phi) by at most (n + 1)(1 - p), so
    d_I(l(nu, p), nu) <= (1 + ln 2)(1 - p) < 2 (1 - p) <= epsilon.
    """
    if not epsilon > 0:
        raise ValidationError("epsilon must be positive")
    pts = np.sort(space.coords.points[:, 0])
    ok = pts[(pts > INTERVAL_SPLIT) & (pts < 1.0) & (pts >= 1.0 - epsilon / 2)]
    if ok.size == 0:
        raise ValidationError(f"grid has no fold point in (2/3, 1) within epsilon={epsilon}")
    return float(ok[0])


def in_measure_hull(generators: Sequence[IdempotentMeasure], mu: IdempotentMeasure, tol: float = FIBER_TOL) -> bool:
    """Is mu a normalized max-plus combination of the generators (clamped residuation on densities)?"""
    gens = np.stack([g.weights for g in generators])
    with np.errstate(invalid="ignore"):
        diff = np.where(np.isfinite(gens), mu.weights[None, :] - gens, np.inf)
    lam = np.minimum(0.0, diff.min(axis=1))
    if lam.max() < -tol:
        return False
    lam = np.where(lam >= -tol, 0.0, lam)
    recon = (lam[:, None] + gens).max(axis=0)
    return weights_close(recon, mu.weights, 1e-9)


@dataclass
class TWReport:
    mode: str
    epsilon: float
    t: float
    samples: int = 0
    fiber_preserved: bool = True
    g_close: float = 0.0
    h_close: float = 0.0
    images_disjoint: bool = True
    vacuous: int = 0
    skipped: list[dict[str, Any]] = field(default_factory=list)
    details: list[dict[str, Any]] = field(default_factory=list)

    @property
    def checked(self) -> int:
        return self.samples - len(self.skipped)

    @property
    def passed(self) -> bool:
        return (
            self.checked > 0
            and self.fiber_preserved
            and self.images_disjoint
            and self.g_close <= self.epsilon
            and self.h_close <= self.epsilon
            and all(d.get("ok", True) for d in self.details)
        )

    def merge(self, record: dict[str, Any]) -> None:
        self.samples += 1
        if "skipped" in record:
            self.skipped.append(record)
            return
        self.details.append(record)
        self.fiber_preserved &= record["fiber_preserved"]
        self.images_disjoint &= record["images_disjoint"]
        self.g_close = max(self.g_close, record["g_close"])
        self.h_close = max(self.h_close, record["h_close"])
        self.vacuous += int(record.get("vacuous", False))


def _mr_record(M: MetaMeasure, t: float, tol: float, generators: Sequence[IdempotentMeasure] | None) -> dict[str, Any]:
    kappa = barycenter_meta(M)
    if generators is not None and not in_measure_hull(generators, kappa):
        return {"skipped": "barycenter outside K"}
    g, h = mr_g(M, t), mr_h(M, t)
    vacuous = kappa.is_dirac
    fiber = weights_close(barycenter_meta(g).weights, kappa.weights, FIBER_TOL) and weights_close(
        barycenter_meta(h).weights, kappa.weights, FIBER_TOL
    )
    disjoint = vacuous or (not has_finite_dirac_atom(g) and has_finite_dirac_atom(h))
    return {
        "fiber_preserved": fiber,
        "g_close": meta_dI(g, M, tol).upper,
        "h_close": meta_dI(h, M, tol).upper,
        "images_disjoint": disjoint,
        "vacuous": vacuous,
    }


def tw_verify_mr(
    samples: Sequence[MetaMeasure],
    epsilon: float,
    generators: Sequence[IdempotentMeasure] | None = None,
    tol: float = 1e-6,
) -> TWReport:
    """Check mr_g / mr_h on second-level measures.

    With ``generators`` given, samples whose barycenter falls outside their
    hull K are skipped and Dirac generators are rejected.
    """
    if not samples:
        raise ValidationError("no samples")
    if generators is not None and any(g.is_dirac for g in generators):
        raise ValidationError("generators of K must be non-Dirac")
    t = shift_bound(epsilon, samples[0].space.diameter)
    report = TWReport("mr", epsilon, t)
    for M in samples:
        report.merge(_mr_record(M, t, tol, generators))
    return report


def tw_verify_interval(samples: Sequence[IdempotentMeasure], epsilon: float, tol: float = 1e-6) -> TWReport:
    """Check the fold g_0 = l(., p) and h_0 on measures over a [0, 1] grid."""
    if not samples:
        raise ValidationError("no samples")
    space = samples[0].space
    t = min(shift_bound(epsilon, space.diameter), -1.0)
    p = interval_cut(epsilon, space)
    one = _grid_index(space, 1.0)
    report = TWReport("interval", epsilon, t)
    for nu in samples:
        try:
            g0, h0 = interval_l(nu, p), interval_h0(nu, t)
        except ValidationError as exc:
            report.merge({"skipped": str(exc)})
            continue
        beta = barycenter(space, nu)
        fiber = bool(
            np.all(np.abs(barycenter(space, g0) - beta) <= FIBER_TOL)
            and np.all(np.abs(barycenter(space, h0) - beta) <= FIBER_TOL)
        )
        identity = interval_l(nu, 1.0)
        report.merge(
            {
                "fiber_preserved": fiber,
                "g_close": dI(g0, nu, tol).upper,
                "h_close": dI(h0, nu, tol).upper,
                "images_disjoint": one not in support(g0) and one in support(h0),
                "ok": identity.weights.tobytes() == nu.weights.tobytes(),
            }
        )
    return report


def tw_verify(mode: str, samples: Sequence[Any], epsilon: float, **kwargs: Any) -> TWReport:
    if mode == "mr":
        return tw_verify_mr(samples, epsilon, **kwargs)
    if mode == "interval":
        return tw_verify_interval(samples, epsilon, **kwargs)
    raise ValidationError(f"unknown mode {mode!r} (expected 'mr' or 'interval')")
