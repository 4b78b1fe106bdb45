"""Lipschitz-dual distances between idempotent measures.

``d_n(mu, nu)`` is the supremum of ``|mu(phi) - nu(phi)| / n`` over
n-Lipschitz ``phi``. For one ordering and one support index ``i`` the
problem is a small LP; its optimum is attained at the distance cone
``phi_j = -n d(i, j)``, which simultaneously minimizes every other
coordinate once ``phi_i`` is pinned. ``dn_exact`` evaluates that optimum in
closed form; ``dn_lp`` solves the same LPs with HiGHS and serves as an
independent cross-check.

``d_I = sum_n d_n / 2^n`` is truncated after N terms with the certified
tail bound ``diam * 2^-N`` (every ``d_n`` is at most the diameter).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import TropibaryError, ValidationError
from .maxplus import NEG_INF
from .measure import GroundSpace, IdempotentMeasure, MetaMeasure, as_function, same_space, weights_close

LP_TOL = 1e-9


@dataclass(frozen=True)
class DistanceResult:
    value: float
    error_bound: float

    @property
    def upper(self) -> float:
        return self.value + self.error_bound

    def as_dict(self) -> dict[str, float]:
        return {"value": self.value, "error_bound": self.error_bound}


def _gap(lam: np.ndarray, kap: np.ndarray, dist: np.ndarray, ns: np.ndarray) -> np.ndarray:
    """sup over Lip_n of mu(phi) - nu(phi), for each n in ``ns``."""
    sel = lam > NEG_INF
    inner = (kap[None, None, :] - ns[:, None, None] * dist[sel][None, :, :]).max(axis=-1)
    return (lam[sel][None, :] - inner).max(axis=-1)


def dn_many(mu: IdempotentMeasure, nu: IdempotentMeasure, ns: Sequence[int]) -> np.ndarray:
    space = same_space(mu, nu)
    ns = np.asarray(ns, dtype=float)
    if np.any(ns < 1) or np.any(ns != np.floor(ns)):
        raise ValidationError("Lipschitz constants must be positive integers")
    if mu == nu:
        return np.zeros(len(ns))
    gap = np.maximum(_gap(mu.weights, nu.weights, space.dist, ns), _gap(nu.weights, mu.weights, space.dist, ns))
    return np.maximum(gap, 0.0) / ns


def dn_exact(mu: IdempotentMeasure, nu: IdempotentMeasure, n: int) -> float:
    return float(dn_many(mu, nu, [n])[0])


def dn_lp(mu: IdempotentMeasure, nu: IdempotentMeasure, n: int) -> float:
    """d_n by explicit linear programming over the Lipschitz polytope."""
    space = same_space(mu, nu)
    if n < 1:
        raise ValidationError("Lipschitz constant must be a positive integer")
    m = len(space)
    # Variables: phi_0..phi_{m-1}, w. Lipschitz rows phi_a - phi_b <= n d(a,b).
    lip_rows, lip_rhs = [], []
    for a in range(m):
        for b in range(m):
            if a != b:
                row = np.zeros(m + 1)
                row[a], row[b] = 1.0, -1.0
                lip_rows.append(row)
                lip_rhs.append(n * space.dist[a, b])
    pin = np.zeros((1, m + 1))
    pin[0, 0] = 1.0
    best = 0.0
    for lam, kap in ((mu.weights, nu.weights), (nu.weights, mu.weights)):
        cap_rows, cap_rhs = [], []
        for j in np.flatnonzero(kap > NEG_INF):
            row = np.zeros(m + 1)
            row[j], row[m] = 1.0, -1.0  # kap_j + phi_j <= w
            cap_rows.append(row)
            cap_rhs.append(-kap[j])
        A = np.array(lip_rows + cap_rows) if lip_rows else np.array(cap_rows)
        rhs = np.array(lip_rhs + cap_rhs)
        for i in np.flatnonzero(lam > NEG_INF):
            c = np.zeros(m + 1)
            c[i], c[m] = -1.0, 1.0
            res = linprog(
                c, A_ub=A, b_ub=rhs, A_eq=pin, b_eq=[0.0],
                bounds=[(None, None)] * (m + 1), method="highs",
                options={"primal_feasibility_tolerance": LP_TOL, "dual_feasibility_tolerance": LP_TOL},
            )
            if res.status != 0:
                raise TropibaryError(f"LP solver failed: {res.message}")
            best = max(best, lam[i] - res.fun)
    return float(best / n)


def series_length(diam: float, tol: float) -> int:
    """Smallest N >= 1 with diam * 2^-N <= tol."""
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    if diam <= tol:
        return 1
    N = max(1, math.ceil(math.log2(diam / tol)))
    while diam * 2.0 ** -N > tol:
        N += 1
    return N


def dI(mu: IdempotentMeasure, nu: IdempotentMeasure, tol: float = 1e-6) -> DistanceResult:
    """Truncated d_I with a certified bound on the omitted tail."""
    space = same_space(mu, nu)
    diam = space.diameter
    N = series_length(diam, tol)
    ns = np.arange(1, N + 1, dtype=float)
    value = float(np.sum(dn_many(mu, nu, ns) / 2.0 ** ns))
    return DistanceResult(value, diam * 2.0 ** -N)


def lipschitz_check(space: GroundSpace, phi: Sequence[float], n: float) -> bool:
    phi = as_function(space, phi)
    return bool(np.all(np.abs(phi[:, None] - phi[None, :]) <= n * space.dist + 1e-12))


# Second level: measures on IX, with IX carrying d_I.


def atom_union(*metas: MetaMeasure) -> list[IdempotentMeasure]:
    atoms: list[IdempotentMeasure] = []
    for M in metas:
        for m in M.atoms:
            if not any(weights_close(m.weights, a.weights) for a in atoms):
                atoms.append(m)
    return atoms


def level2_space(atoms: Sequence[IdempotentMeasure], tol: float) -> tuple[GroundSpace, float]:
    """Finite subspace of IX spanned by ``atoms``, with upper d_I values.

    Each entry is a truncated series plus its tail bound, so it dominates the
    true distance by at most the returned error; the matrix stays a metric
    because adding a constant off the diagonal preserves the triangle
    inequality.
    """
    k = len(atoms)
    dist = np.zeros((k, k))
    err = 0.0
    for a in range(k):
        for b in range(a + 1, k):
            r = dI(atoms[a], atoms[b], tol)
            dist[a, b] = dist[b, a] = r.upper
            err = max(err, r.error_bound)
    return GroundSpace.from_matrix(dist, [f"m{i}" for i in range(k)]), err


def lift(M: MetaMeasure, atoms: Sequence[IdempotentMeasure], space: GroundSpace) -> IdempotentMeasure:
    w = np.full(len(atoms), NEG_INF)
    for m, a in zip(M.atoms, M.weights):
        idx = next(i for i, x in enumerate(atoms) if weights_close(m.weights, x.weights))
        w[idx] = max(w[idx], a)
    return IdempotentMeasure(space, w)


def meta_dI(M: MetaMeasure, K: MetaMeasure, tol: float = 1e-6) -> DistanceResult:
    """Certified d_I between second-level measures.

    The result's ``upper`` bounds the true distance from above.
    """
    atoms = atom_union(M, K)
    if len(atoms) == 1:
        return DistanceResult(0.0, 0.0)
    space, ground_err = level2_space(atoms, tol / 2)
    r = dI(lift(M, atoms, space), lift(K, atoms, space), tol / 2)
    return DistanceResult(r.value, r.error_bound + ground_err)
