from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropibary.barycenter import (
    EmbeddedSpace,
    barycenter,
    barycenter_meta,
    barycenter_meta_functional,
    dirac_lift,
    extremal_split,
    fiber_witness,
    meta_fiber_witness,
)
from tropibary.measure import GroundSpace, IdempotentMeasure, MetaMeasure, combine_measures, dirac, evaluate, meta_dirac
from tropibary.sampling import random_measure, random_meta, random_space
from tropibary.space import TropicalHull, hull_membership, unit_interval_weight_grid

from .conftest import NEG_INF


def on_grid(space: GroundSpace, entries: dict[float, float]) -> IdempotentMeasure:
    w = np.full(len(space), NEG_INF)
    for x, a in entries.items():
        w[int(round(x * (len(space) - 1)))] = a
    return IdempotentMeasure(space, w)


class TestBarycenter:
    def test_dirac(self, segment):
        assert np.array_equal(barycenter(segment, dirac(segment, 1)), [3.0, 0.0])

    def test_segment_example(self, segment):
        assert np.array_equal(barycenter(segment, IdempotentMeasure(segment, [0.0, -2.0])), [1.0, 1.0])

    def test_interval_example(self, unit_grid):
        mu = on_grid(unit_grid, {0.1: 0.0, 0.9: -0.4})
        assert barycenter(unit_grid, mu)[0] == pytest.approx(0.5, abs=1e-15)

    def test_in_hull(self, rng):
        for _ in range(30):
            X = random_space(rng, 4)
            b = barycenter(X, random_measure(rng, X))
            assert hull_membership(TropicalHull(X.coords), b).member

    def test_needs_coordinates(self, two_points):
        with pytest.raises(ValueError):
            barycenter(two_points, dirac(two_points, 0))


class TestMetaBarycenter:
    def test_dirac_meta(self, segment):
        mu = IdempotentMeasure(segment, [0.0, -1.5])
        assert barycenter_meta(meta_dirac(mu)) == mu
        assert barycenter_meta(dirac_lift(mu)) == mu

    def test_two_diracs(self, two_points):
        M = MetaMeasure((dirac(two_points, 0), dirac(two_points, 1)), np.array([0.0, -1.0]))
        assert np.array_equal(barycenter_meta(M).weights, [0.0, -1.0])

    @pytest.mark.parametrize("t", [0.0, -1.0, NEG_INF])
    def test_repeated_atom(self, two_points, t):
        mu = IdempotentMeasure(two_points, [0.0, -0.25])
        assert barycenter_meta(MetaMeasure((mu, mu), np.array([0.0, t]))) == mu

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_functional_matches_density(self, seed):
        rng = np.random.default_rng(seed)
        X = random_space(rng, 3)
        M = random_meta(rng, X)
        phi = rng.uniform(-2, 2, 3)
        assert barycenter_meta_functional(M, phi) == pytest.approx(evaluate(barycenter_meta(M), phi), abs=1e-12)

    def test_affinity(self, rng):
        X = random_space(rng, 3)
        for _ in range(20):
            M, K = random_meta(rng, X), random_meta(rng, X)
            a = -float(rng.uniform(0, 2))
            lhs = barycenter_meta(MetaMeasure(M.atoms + K.atoms, np.concatenate([M.weights, a + K.weights])))
            rhs = combine_measures([barycenter_meta(M), barycenter_meta(K)], [0.0, a])
            assert np.allclose(lhs.weights, rhs.weights, atol=1e-12)


class TestFibers:
    def test_singleton(self):
        X = GroundSpace.from_points([[1.0, 2.0]])
        assert fiber_witness(X, [1.0, 2.0], [0.0, -1.0]) is None

    def test_left_endpoint(self, unit_grid):
        mu = fiber_witness(unit_grid, [0.0], unit_interval_weight_grid(101))
        assert mu is not None and not mu.is_dirac
        assert barycenter(unit_grid, mu)[0] == pytest.approx(0.0, abs=1e-12)
        # the documented witness (0 at 0, -1 at 1) lies in the same fiber
        assert barycenter(unit_grid, on_grid(unit_grid, {0.0: 0.0, 1.0: -1.0}))[0] == 0.0

    def test_segment_interior(self, segment):
        es = EmbeddedSpace(segment, TropicalHull(segment.coords))
        mu = fiber_witness(es, [1.0, 1.0], [0.0, -1.0, -2.0, -3.0])
        assert mu is not None and len(mu.support) == 2
        assert np.array_equal(barycenter(es, mu), [1.0, 1.0])

    def test_extremal_split_none_for_dirac(self, segment):
        assert extremal_split(dirac(segment, 0)) is None
        assert meta_fiber_witness(dirac(segment, 0)) is None

    def test_extremal_split_reconstructs(self, rng):
        X = random_space(rng, 4)
        for _ in range(20):
            mu = random_measure(rng, X, min_support=2)
            a, mu1, mu2 = extremal_split(mu)
            assert combine_measures([mu1, mu2], [0.0, a]) == mu
            assert mu not in (mu1, mu2)
            M = meta_fiber_witness(mu)
            assert not M.is_dirac and barycenter_meta(M) == mu
