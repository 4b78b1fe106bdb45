from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropibary.measure import GroundSpace, IdempotentMeasure, MetaMeasure, dirac, evaluate
from tropibary.metric import dI, dn_exact, dn_lp, lipschitz_check, meta_dI, series_length
from tropibary.oracles import dn_grid_search
from tropibary.sampling import random_measure, random_space

from .conftest import NEG_INF


class TestDn:
    def test_equal_measures(self, two_points):
        mu = IdempotentMeasure(two_points, [0.0, -0.3])
        assert dn_exact(mu, mu, 4) == 0.0

    @pytest.mark.parametrize("n", [1, 2, 7])
    def test_diracs(self, segment, n):
        assert dn_exact(dirac(segment, 0), dirac(segment, 1), n) == 3.0

    @pytest.mark.parametrize("n", range(1, 9))
    def test_closed_form_example(self, two_points, n):
        mu, nu = dirac(two_points, 0), IdempotentMeasure(two_points, [0.0, -1.0])
        assert dn_exact(mu, nu, n) == pytest.approx(1 - 1 / n, abs=1e-15)
        assert dn_grid_search(mu, nu, n, range(-2 * n, 2 * n + 1)) == pytest.approx(1 - 1 / n, abs=1e-15)

    def test_agrees_with_lp(self, rng):
        for _ in range(10):
            X = random_space(rng, 4)
            mu, nu = random_measure(rng, X), random_measure(rng, X)
            for n in (1, 3):
                assert dn_exact(mu, nu, n) == pytest.approx(dn_lp(mu, nu, n), abs=1e-7)

    def test_dominates_lipschitz_functions(self, rng):
        X = random_space(rng, 4)
        mu, nu = random_measure(rng, X), random_measure(rng, X)
        for _ in range(50):
            phi = rng.uniform(-1, 1) * 2 * X.dist[int(rng.integers(4))]
            assert lipschitz_check(X, phi, 2)
            assert abs(evaluate(mu, phi) - evaluate(nu, phi)) / 2 <= dn_exact(mu, nu, 2) + 1e-12


class TestDI:
    def test_closed_form(self, two_points):
        r = dI(dirac(two_points, 0), IdempotentMeasure(two_points, [0.0, -1.0]), 1e-6)
        assert abs(r.value - (1 - math.log(2))) <= 1e-6
        assert r.error_bound <= 1e-6
        assert r.value <= 1 - math.log(2) <= r.upper

    def test_equal(self, two_points):
        mu = IdempotentMeasure(two_points, [-0.5, 0.0])
        assert dI(mu, mu).value == 0.0

    def test_dirac_isometry(self, segment):
        assert abs(dI(dirac(segment, 0), dirac(segment, 1), 1e-6).value - 3.0) <= 1e-6

    def test_series_length(self):
        assert series_length(1.0, 0.25) == 2
        assert series_length(1.0, 1.0) == 1

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_metric_axioms(self, seed):
        rng = np.random.default_rng(seed)
        X = random_space(rng, 3)
        a, b, c = (random_measure(rng, X) for _ in range(3))
        ab, bc, ac = dI(a, b), dI(b, c), dI(a, c)
        assert ab.value == dI(b, a).value
        assert ac.value <= ab.value + bc.value + 2e-6


class TestLipschitz:
    def test_examples(self, two_points):
        assert lipschitz_check(two_points, [4.0, 4.0], 1)
        assert not lipschitz_check(two_points, [0.0, 3.0], 2)
        assert lipschitz_check(two_points, [0.0, 2.0], 2)


class TestMetaDistance:
    def test_dirac_meta_isometry(self, two_points):
        mu, nu = dirac(two_points, 0), IdempotentMeasure(two_points, [0.0, -1.0])
        M = MetaMeasure((mu,), np.array([0.0]))
        K = MetaMeasure((nu,), np.array([0.0]))
        r = meta_dI(M, K, 1e-6)
        assert abs(r.value - (1 - math.log(2))) <= r.error_bound + 1e-6

    def test_zero(self, two_points):
        M = MetaMeasure((dirac(two_points, 0), dirac(two_points, 1)), np.array([0.0, NEG_INF + 0]))
        assert meta_dI(M, M).value == 0.0
