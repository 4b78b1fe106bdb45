"""The invariant battery run by ``tropibary verify``.

Each check draws seeded random instances, tests one law, and returns a
:class:`~tropibary.report.Check` carrying the first counterexample on
failure. Random scalars are drawn from dyadic grids wherever a law is meant
to hold exactly, so float rounding cannot mask or fake a failure.
"""

from __future__ import annotations

import math
from typing import Any, Callable

import numpy as np

from . import barycenter as bc
from . import bundlecheck as bd
from . import measure as ms
from . import metric as mt
from . import oracles
from .document import Document, round_trip
from .maxplus import NEG_INF, JPair, odot, oplus, rho_metric
from .report import Check, Report
from .sampling import (
    interval_space,
    random_interval_measure,
    random_meta,
    random_mr_samples,
    random_non_dirac,
    random_space,
    random_weights,
)
from .space import PointConfig, TropicalHull, combine_points, hull_membership, s_combine
from .errors import ValidationError

CheckFn = Callable[[np.random.Generator, int], Check]
BATTERY: list[tuple[str, CheckFn, int]] = []


def invariant(name: str, size: int) -> Callable[[CheckFn], CheckFn]:
    def register(fn: CheckFn) -> CheckFn:
        BATTERY.append((name, fn, size))
        return fn

    return register


def _run(name: str, size: int, trial: Callable[[int], Any]) -> Check:
    """Call ``trial(k)`` for k < size; a non-None return is a counterexample."""
    for k in range(size):
        bad = trial(k)
        if bad is not None:
            return Check(name, False, k + 1, "violated", bad)
    return Check(name, True, size)


def dyadic(rng: np.random.Generator, size: Any = None, low: float = -8.0, high: float = 8.0) -> Any:
    return np.round(rng.uniform(low, high, size) * 64) / 64


def _scalar(rng: np.random.Generator) -> float:
    return NEG_INF if rng.random() < 0.1 else float(dyadic(rng))


# maxplus


@invariant("maxplus.oplus_laws", 500)
def check_oplus(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        a, b, c = _scalar(rng), _scalar(rng), _scalar(rng)
        ok = (
            oplus(oplus(a, b), c) == oplus(a, oplus(b, c))
            and oplus(a, b) == oplus(b, a)
            and oplus(a, a) == a
            and oplus(NEG_INF, a) == a
        )
        return None if ok else [a, b, c]

    return _run("maxplus.oplus_laws", size, trial)


@invariant("maxplus.odot_laws", 500)
def check_odot(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        a, b, c = _scalar(rng), _scalar(rng), _scalar(rng)
        ok = (
            odot(odot(a, b), c) == odot(a, odot(b, c))
            and odot(a, b) == odot(b, a)
            and odot(a, oplus(b, c)) == oplus(odot(a, b), odot(a, c))
            and odot(NEG_INF, a) == NEG_INF
            and odot(0.0, a) == a
        )
        return None if ok else [a, b, c]

    return _run("maxplus.odot_laws", size, trial)


@invariant("maxplus.rho_metric_axioms", 500)
def check_rho(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        x, y, z = (NEG_INF if rng.random() < 0.1 else rng.uniform(-5, 2) for _ in range(3))
        ok = (
            rho_metric(x, x) == 0.0
            and abs(rho_metric(x, y) - rho_metric(y, x)) <= 1e-12
            and rho_metric(x, z) <= rho_metric(x, y) + rho_metric(y, z) + 1e-12
            and (x == y or rho_metric(x, y) > 0)
        )
        return None if ok else [x, y, z]

    return _run("maxplus.rho_metric_axioms", size, trial)


@invariant("maxplus.jpair_rejects_unnormalized", 200)
def check_jpair(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        t, p = -rng.uniform(0.01, 3), -rng.uniform(0.01, 3)
        try:
            JPair(t, p)
        except ValidationError:
            pass
        else:
            return [t, p]
        JPair(0.0, p)
        JPair(t, 0.0)
        return None

    return _run("maxplus.jpair_rejects_unnormalized", size, trial)


# space


def _random_hull(rng: np.random.Generator) -> np.ndarray:
    k, d = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    return np.round(rng.uniform(0, 2, (k, d)) * 20) / 20


@invariant("space.combine_in_hull", 300)
def check_combine_in_hull(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        gens = rng.uniform(-3, 3, (int(rng.integers(1, 5)), int(rng.integers(1, 4))))
        w = random_weights(rng, len(gens))
        p = combine_points(gens, w)
        return None if hull_membership(TropicalHull(PointConfig(gens)), p).member else [gens, w]

    return _run("space.combine_in_hull", size, trial)


@invariant("space.hull_matches_grid_oracle", 100)
def check_hull_oracle(rng: np.random.Generator, size: int) -> Check:
    grid = oracles.default_hull_grid()

    def trial(_: int) -> Any:
        gens = _random_hull(rng)
        pts = oracles.hull_grid_points(gens, grid)
        hull = TropicalHull(PointConfig(gens))
        for _ in range(5):
            if rng.random() < 0.5:
                p = pts[rng.integers(len(pts))]
            else:
                p = np.round(rng.uniform(-0.5, 2.5, gens.shape[1]) * 20) / 20
            if hull_membership(hull, p).member != oracles.grid_member(pts, p):
                return {"generators": gens, "point": p}
        return None

    return _run("space.hull_matches_grid_oracle", size, trial)


@invariant("space.s_combine_identities", 300)
def check_s_combine(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        d = int(rng.integers(1, 4))
        x, y = dyadic(rng, d), dyadic(rng, d)
        t = float(dyadic(rng, low=-4, high=0))
        j = JPair(0.0, t) if rng.random() < 0.5 else JPair(t, 0.0)
        ok = np.array_equal(s_combine(x, y, JPair(0.0, NEG_INF)), x) and np.array_equal(s_combine(x, x, j), x)
        return None if ok else [x, y, t]

    return _run("space.s_combine_identities", size, trial)


@invariant("space.combine_monotone", 300)
def check_monotone(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        gens = rng.uniform(-3, 3, (int(rng.integers(2, 5)), 2))
        w = random_weights(rng, len(gens))
        k = int(rng.integers(len(w)))
        w2 = w.copy()
        w2[k] = min(0.0, (w[k] if w[k] > NEG_INF else -5.0) + rng.uniform(0, 2))
        ok = np.all(combine_points(gens, w2) >= combine_points(gens, w))
        return None if ok else [gens, w, w2]

    return _run("space.combine_monotone", size, trial)


# measure


def _dyadic_measure(rng: np.random.Generator, space: ms.GroundSpace, **kw: Any) -> ms.IdempotentMeasure:
    return ms.IdempotentMeasure(space, random_weights(rng, len(space), dyadic=True, **kw))


@invariant("measure.axioms", 500)
def check_axioms(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(1, 6)))
        mu = _dyadic_measure(rng, X)
        phi, psi = dyadic(rng, len(X)), dyadic(rng, len(X))
        c = float(dyadic(rng))
        ok = (
            ms.evaluate(mu, c + phi) == c + ms.evaluate(mu, phi)
            and ms.evaluate(mu, np.maximum(phi, psi)) == max(ms.evaluate(mu, phi), ms.evaluate(mu, psi))
            and ms.evaluate(mu, np.full(len(X), c)) == c
        )
        return None if ok else {"weights": mu.weights, "phi": phi, "psi": psi, "c": c}

    return _run("measure.axioms", size, trial)


@invariant("measure.nonexpansive", 500)
def check_nonexpansive(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(1, 6)))
        mu = ms.IdempotentMeasure(X, random_weights(rng, len(X)))
        phi, psi = rng.uniform(-5, 5, len(X)), rng.uniform(-5, 5, len(X))
        ok = abs(ms.evaluate(mu, phi) - ms.evaluate(mu, psi)) <= np.abs(phi - psi).max() + 1e-12
        return None if ok else {"weights": mu.weights, "phi": phi, "psi": psi}

    return _run("measure.nonexpansive", size, trial)


@invariant("measure.min_max_bounds", 500)
def check_bounds(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(1, 6)))
        mu = ms.IdempotentMeasure(X, random_weights(rng, len(X)))
        phi = rng.uniform(-5, 5, len(X))
        v = ms.evaluate(mu, phi)
        return None if phi.min() <= v <= phi.max() else {"weights": mu.weights, "phi": phi}

    return _run("measure.min_max_bounds", size, trial)


@invariant("measure.pushforward_functorial", 300)
def check_functorial(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(1, 6)))
        Y = random_space(rng, int(rng.integers(1, 5)))
        Z = random_space(rng, int(rng.integers(1, 5)))
        f = rng.integers(0, len(Y), len(X))
        g = rng.integers(0, len(Z), len(Y))
        mu = ms.IdempotentMeasure(X, random_weights(rng, len(X)))
        lhs = ms.pushforward(g[f], mu, Z)
        rhs = ms.pushforward(g, ms.pushforward(f, mu, Y), Z)
        psi = rng.uniform(-5, 5, len(Z))
        ok = lhs == rhs and ms.evaluate(lhs, psi) == ms.evaluate(mu, psi[g[f]])
        return None if ok else {"f": f, "g": g, "weights": mu.weights}

    return _run("measure.pushforward_functorial", size, trial)


@invariant("measure.combine_affine", 300)
def check_combine_affine(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(1, 6)))
        k = int(rng.integers(1, 4))
        atoms = [_dyadic_measure(rng, X) for _ in range(k)]
        a = random_weights(rng, k, dyadic=True)
        phi = dyadic(rng, len(X))
        lhs = ms.evaluate(ms.combine_measures(atoms, a), phi)
        rhs = max(oplus(NEG_INF, odot(aj, ms.evaluate(m, phi))) for m, aj in zip(atoms, a))
        return None if lhs == rhs else {"atoms": [m.weights for m in atoms], "a": a, "phi": phi}

    return _run("measure.combine_affine", size, trial)


@invariant("measure.decompose_reconstructs", 300)
def check_decompose(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(2, 7)))
        mu = _dyadic_measure(rng, X, min_support=2)
        supp = ms.support(mu)
        cut = int(rng.integers(1, len(supp)))
        order = rng.permutation(supp)
        b1 = list(order[:cut])
        b2 = [i for i in range(len(X)) if i not in b1]
        a1, m1, a2, m2 = ms.decompose(mu, (b1, b2))
        ok = ms.combine_measures([m1, m2], [a1, a2]) == mu and max(a1, a2) == 0.0
        return None if ok else {"weights": mu.weights, "blocks": [b1, b2]}

    return _run("measure.decompose_reconstructs", size, trial)


# metric


def _separates(a: ms.IdempotentMeasure, b: ms.IdempotentMeasure) -> bool:
    """Some term of the full series is positive, so the untruncated distance is."""
    return any(mt.dn_exact(a, b, 2**k) > 0 for k in range(64))


@invariant("metric.dI_is_metric", 200)
def check_dI_metric(rng: np.random.Generator, size: int) -> Check:
    tol = 1e-6

    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(2, 6)))
        a, b, c = (ms.IdempotentMeasure(X, random_weights(rng, len(X))) for _ in range(3))
        ab, ba, bc_, ac = mt.dI(a, b, tol), mt.dI(b, a, tol), mt.dI(b, c, tol), mt.dI(a, c, tol)
        ok = (
            ab.value == ba.value
            and mt.dI(a, a, tol).value == 0.0
            and ac.value <= ab.value + bc_.value + 2 * tol + 1e-9
            and (a == b or ab.value > 0 or _separates(a, b))
        )
        return None if ok else {"a": a.weights, "b": b.weights, "c": c.weights}

    return _run("metric.dI_is_metric", size, trial)


@invariant("metric.dirac_isometry", 100)
def check_isometry(rng: np.random.Generator, size: int) -> Check:
    tol = 1e-6

    def trial(_: int) -> Any:
        X = random_space(rng, 5)
        for i in range(5):
            for j in range(5):
                r = mt.dI(ms.dirac(X, i), ms.dirac(X, j), tol)
                if abs(r.value - X.dist[i, j]) > tol:
                    return {"dist": X.dist, "pair": [i, j], "value": r.value}
        return None

    return _run("metric.dirac_isometry", size, trial)


def random_self_map(rng: np.random.Generator, X: ms.GroundSpace) -> np.ndarray:
    return rng.integers(0, len(X), len(X))


@invariant("metric.pushforward_displacement", 100)
def check_pushforward_displacement(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, 5)
        h = random_self_map(rng, X)
        eps = float(X.dist[np.arange(5), h].max())
        for _ in range(10):
            mu = ms.IdempotentMeasure(X, random_weights(rng, 5))
            r = mt.dI(ms.pushforward(h, mu), mu, 1e-6)
            if r.value > eps + 1e-6:
                return {"dist": X.dist, "h": h, "weights": mu.weights, "eps": eps, "value": r.value}
        return None

    return _run("metric.pushforward_displacement", size, trial)


@invariant("metric.dn_dominates_samples", 200)
def check_dominates(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(2, 6)))
        mu, nu = (ms.IdempotentMeasure(X, random_weights(rng, len(X))) for _ in range(2))
        n = int(rng.integers(1, 6))
        exact = mt.dn_exact(mu, nu, n)
        for _ in range(20):
            # a random n-Lipschitz function: scaled distance to a random point plus a constant
            phi = n * rng.uniform(-1, 1) * X.dist[int(rng.integers(len(X)))] + rng.uniform(-3, 3)
            if not mt.lipschitz_check(X, phi, n):
                return {"phi": phi, "n": n, "reason": "sample not Lipschitz"}
            if abs(ms.evaluate(mu, phi) - ms.evaluate(nu, phi)) / n > exact + 1e-9:
                return {"mu": mu.weights, "nu": nu.weights, "phi": phi, "n": n}
        return None

    return _run("metric.dn_dominates_samples", size, trial)


@invariant("metric.n_dn_nondecreasing", 200)
def check_n_dn(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(2, 6)))
        mu, nu = (ms.IdempotentMeasure(X, random_weights(rng, len(X))) for _ in range(2))
        ns = np.arange(1, 30)
        scaled = ns * mt.dn_many(mu, nu, ns)
        return None if np.all(np.diff(scaled) >= -1e-12) else {"mu": mu.weights, "nu": nu.weights}

    return _run("metric.n_dn_nondecreasing", size, trial)


@invariant("metric.closed_form_matches_lp", 40)
def check_lp(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(2, 5)))
        mu, nu = (ms.IdempotentMeasure(X, random_weights(rng, len(X))) for _ in range(2))
        n = int(rng.integers(1, 5))
        a, b = mt.dn_exact(mu, nu, n), mt.dn_lp(mu, nu, n)
        return None if abs(a - b) <= 1e-7 else {"mu": mu.weights, "nu": nu.weights, "n": n, "closed": a, "lp": b}

    return _run("metric.closed_form_matches_lp", size, trial)


@invariant("metric.closed_form_matches_grid_search", 30)
def check_grid_search(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        # integer metric on 3 points, so the optimal distance cones lie on the integer grid
        dist = np.array([[0, 1, 2], [1, 0, 1], [2, 1, 0]], dtype=float)[np.ix_(*[rng.permutation(3)] * 2)]
        X = ms.GroundSpace.from_matrix(dist)
        mu, nu = (ms.IdempotentMeasure(X, random_weights(rng, 3)) for _ in range(2))
        n = int(rng.integers(1, 4))
        a = mt.dn_exact(mu, nu, n)
        b = oracles.dn_grid_search(mu, nu, n, np.arange(-2 * n, 2 * n + 1, dtype=float))
        return None if abs(a - b) <= 1e-12 else {"mu": mu.weights, "nu": nu.weights, "n": n, "closed": a, "grid": b}

    return _run("metric.closed_form_matches_grid_search", size, trial)


# barycenter


def _embedded_space(rng: np.random.Generator, n: int, d: int = 2) -> ms.GroundSpace:
    pts = np.unique(dyadic(rng, (n, d), -4, 4), axis=0)
    return ms.GroundSpace.from_points(pts)


@invariant("barycenter.affinity", 300)
def check_affinity(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = _embedded_space(rng, int(rng.integers(2, 6)))
        m1, m2 = _dyadic_measure(rng, X), _dyadic_measure(rng, X)
        a = float(dyadic(rng, low=-4, high=0))
        lhs = bc.barycenter(X, ms.combine_measures([m1, m2], [a, 0.0]))
        rhs = combine_points([bc.barycenter(X, m1), bc.barycenter(X, m2)], [a, 0.0])
        M1, M2 = random_meta(rng, X), random_meta(rng, X)
        lhs2 = bc.barycenter_meta(ms.combine_meta([M1, M2], [a, 0.0]))
        rhs2 = ms.combine_measures([bc.barycenter_meta(M1), bc.barycenter_meta(M2)], [a, 0.0])
        ok = np.array_equal(lhs, rhs) and ms.weights_close(lhs2.weights, rhs2.weights)
        return None if ok else {"m1": m1.weights, "m2": m2.weights, "a": a}

    return _run("barycenter.affinity", size, trial)


@invariant("barycenter.in_hull", 300)
def check_in_hull(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = _embedded_space(rng, int(rng.integers(1, 6)))
        mu = ms.IdempotentMeasure(X, random_weights(rng, len(X)))
        b = bc.barycenter(X, mu)
        return None if hull_membership(TropicalHull(X.coords), b).member else {"weights": mu.weights}

    return _run("barycenter.in_hull", size, trial)


@invariant("barycenter.dirac_meta_identity", 300)
def check_beta_delta(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(1, 6)))
        mu = ms.IdempotentMeasure(X, random_weights(rng, len(X)))
        ok = bc.barycenter_meta(ms.meta_dirac(mu)) == mu and bc.barycenter_meta(bc.dirac_lift(mu)) == mu
        return None if ok else {"weights": mu.weights}

    return _run("barycenter.dirac_meta_identity", size, trial)


@invariant("barycenter.functional_matches_density", 300)
def check_functional(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(1, 6)))
        M = random_meta(rng, X)
        phi = rng.uniform(-5, 5, len(X))
        a = ms.evaluate(bc.barycenter_meta(M), phi)
        b = bc.barycenter_meta_functional(M, phi)
        return None if abs(a - b) <= 1e-12 else {"meta": repr(M), "phi": phi}

    return _run("barycenter.functional_matches_density", size, trial)


@invariant("barycenter.dirac_fiber_triviality", 300)
def check_dirac_fiber(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(1, 5)))
        k = int(rng.integers(1, 4))
        x = int(rng.integers(len(X)))
        atoms = tuple(
            ms.dirac(X, x) if rng.random() < 0.5 else ms.IdempotentMeasure(X, random_weights(rng, len(X)))
            for _ in range(k)
        )
        M = ms.MetaMeasure(atoms, random_weights(rng, k))
        beta = bc.barycenter_meta(M)
        fin = [m for m, _ in M.finite_atoms()]
        expected = beta.is_dirac
        structural = all(m.is_dirac for m in fin) and all(m == fin[0] for m in fin)
        return None if expected == structural else {"meta": repr(M)}

    return _run("barycenter.dirac_fiber_triviality", size, trial)


@invariant("barycenter.extremal_equals_dirac", 1)
def check_extremal(rng: np.random.Generator, size: int) -> Check:
    grid = [0.0, -0.5, -1.0, -2.0, NEG_INF]
    count = 0
    for n in range(1, 5):
        X = ms.GroundSpace.from_points(np.arange(n, dtype=float)[:, None])
        cands = oracles.grid_measures(X, grid)
        for mu in cands:
            count += 1
            found = oracles.decomposition_search(mu, cands, grid)
            split = bc.extremal_split(mu)
            ok = (found is None) == mu.is_dirac and (split is None) == mu.is_dirac
            if split is not None:
                a, m1, m2 = split
                ok &= ms.combine_measures([m1, m2], [0.0, a]) == mu and mu not in (m1, m2)
            if not ok:
                return Check("barycenter.extremal_equals_dirac", False, count, "violated", {"weights": mu.weights})
    return Check("barycenter.extremal_equals_dirac", True, count)


@invariant("barycenter.naturality", 300)
def check_naturality(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(1, 6)))
        Y = random_space(rng, int(rng.integers(1, 5)))
        f = rng.integers(0, len(Y), len(X))
        M = random_meta(rng, X)
        lhs = bc.barycenter_meta(ms.meta_pushforward(f, M, Y))
        rhs = ms.pushforward(f, bc.barycenter_meta(M), Y)
        return None if lhs == rhs else {"f": f, "meta": repr(M)}

    return _run("barycenter.naturality", size, trial)


# bundlecheck


def _mr_report(rng: np.random.Generator, n: int, eps: float) -> bd.TWReport:
    X = random_space(rng, int(rng.integers(3, 6)))
    gens = [random_non_dirac(rng, X) for _ in range(3)]
    return bd.tw_verify_mr(random_mr_samples(rng, gens, n), eps, gens)


def _interval_report(rng: np.random.Generator, n: int, eps: float, grid: int = 101) -> bd.TWReport:
    X = interval_space(grid)
    return bd.tw_verify_interval([random_interval_measure(rng, X) for _ in range(n)], eps)


@invariant("bundlecheck.mr_harness", 4)
def check_mr(rng: np.random.Generator, size: int) -> Check:
    for k in range(size):
        eps = (0.25, 0.1)[k % 2]
        rep = _mr_report(rng, 10, eps)
        if not rep.passed:
            return Check("bundlecheck.mr_harness", False, k + 1, "deformation checks failed", tw_summary(rep))
    return Check("bundlecheck.mr_harness", True, size * 10)


@invariant("bundlecheck.interval_harness", 2)
def check_interval(rng: np.random.Generator, size: int) -> Check:
    for k in range(size):
        rep = _interval_report(rng, 10, 0.1)
        if not rep.passed:
            return Check("bundlecheck.interval_harness", False, k + 1, "deformation checks failed", tw_summary(rep))
    return Check("bundlecheck.interval_harness", True, size * 10)


@invariant("bundlecheck.meta_displacement", 100)
def check_meta_displacement(rng: np.random.Generator, size: int) -> Check:
    """Second-level version: moving atoms by at most eps moves M by at most eps."""

    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(2, 5)))
        M = random_meta(rng, X)
        t = -float(rng.uniform(0, 4))
        kappa = ms.IdempotentMeasure(X, random_weights(rng, len(X)))
        moved = ms.MetaMeasure(tuple(bd.shift_towards(m, kappa, t) for m in M.atoms), M.weights)
        eps = max(mt.dI(bd.shift_towards(m, kappa, t), m, 1e-7).upper for m in M.atoms)
        r = mt.meta_dI(moved, M, 1e-7)
        return None if r.value <= eps + 1e-6 else {"meta": repr(M), "eps": eps, "value": r.value}

    return _run("bundlecheck.meta_displacement", size, trial)


# cli


@invariant("cli.document_round_trip", 100)
def check_round_trip(rng: np.random.Generator, size: int) -> Check:
    def trial(_: int) -> Any:
        X = random_space(rng, int(rng.integers(1, 5))) if rng.random() < 0.5 else _embedded_space(rng, 3)
        measures = {f"m{i}": ms.IdempotentMeasure(X, random_weights(rng, len(X))) for i in range(3)}
        metas = {"M": (("m0", "m2"), random_weights(rng, 2))}
        doc = Document(X, measures, metas)
        return None if round_trip(doc) == doc else {"space": X.dist}

    return _run("cli.document_round_trip", size, trial)


def tw_summary(rep: bd.TWReport) -> dict[str, Any]:
    return {
        "mode": rep.mode,
        "epsilon": rep.epsilon,
        "t": rep.t,
        "samples": rep.samples,
        "checked": rep.checked,
        "fiber_preserved": rep.fiber_preserved,
        "g_close": rep.g_close,
        "h_close": rep.h_close,
        "images_disjoint": rep.images_disjoint,
        "vacuous": rep.vacuous,
        "skipped": len(rep.skipped),
    }


def run_battery(seed: int, scale: float = 1.0, only: str | None = None) -> Report:
    """Run every registered invariant with its own child generator."""
    report = Report("verify", {"seed": seed})
    children = np.random.SeedSequence(seed).spawn(len(BATTERY))
    for (name, fn, size), ss in zip(BATTERY, children):
        if only and not name.startswith(only):
            continue
        n = max(1, math.ceil(size * scale))
        try:
            report.add(fn(np.random.default_rng(ss), n))
        except Exception as exc:  # a crash inside a check is a failure of that check
            report.add(Check(name, False, 0, f"{type(exc).__name__}: {exc}"))
    return report
