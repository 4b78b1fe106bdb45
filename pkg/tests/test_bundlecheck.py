from __future__ import annotations

import numpy as np
import pytest

from tropibary.barycenter import barycenter, barycenter_meta, dirac_lift
from tropibary.bundlecheck import (
    has_finite_dirac_atom,
    interval_cut,
    interval_h0,
    interval_l,
    mr_g,
    mr_h,
    shift_bound,
    shift_towards,
    tw_verify,
    tw_verify_interval,
    tw_verify_mr,
)
from tropibary.errors import ValidationError
from tropibary.measure import IdempotentMeasure, MetaMeasure, dirac, meta_dirac
from tropibary.metric import dI
from tropibary.sampling import random_interval_measure, random_meta, random_non_dirac, random_space

from .conftest import NEG_INF
from .test_barycenter import on_grid


class TestShiftBound:
    def test_examples(self):
        assert shift_bound(1.0, 1.0) == -1.0
        assert shift_bound(2.5, 2.5) == -2.5
        assert shift_bound(0.25, 1.0) == -3.0

    def test_certified_displacement(self, two_points):
        mu, kappa = dirac(two_points, 0), dirac(two_points, 1)
        assert dI(shift_towards(mu, kappa, -3.0), mu).upper <= 0.25

    def test_rejects_nonpositive_epsilon(self):
        with pytest.raises(ValidationError):
            shift_bound(0.0, 1.0)


def two_dirac_meta(space) -> MetaMeasure:
    return MetaMeasure((dirac(space, 0), dirac(space, 1)), np.array([0.0, -1.0]))


class TestMR:
    def test_bottom_shift_is_identity(self, two_points):
        M = two_dirac_meta(two_points)
        assert mr_g(M, NEG_INF).atoms == M.atoms
        assert mr_h(M, NEG_INF) is M

    def test_dirac_meta_fixed(self, two_points):
        mu = IdempotentMeasure(two_points, [0.0, -0.5])
        assert mr_g(meta_dirac(mu), -2.0).atoms == (mu,)
        assert mr_h(meta_dirac(dirac(two_points, 0)), -2.0).atoms == (dirac(two_points, 0),)

    def test_two_dirac_example(self, two_points):
        M = two_dirac_meta(two_points)
        g = mr_g(M, -2.0)
        assert np.array_equal(g.atoms[0].weights, [0.0, -3.0])
        assert np.array_equal(g.atoms[1].weights, [-2.0, 0.0])
        assert barycenter_meta(g) == barycenter_meta(M)
        assert not has_finite_dirac_atom(g)
        h = mr_h(M, -2.0)
        assert barycenter_meta(h) == barycenter_meta(M)
        assert has_finite_dirac_atom(h)
        # M (+) (-2) (.) {delta_a: 0, delta_b: -1} is dominated by M itself
        assert h.atoms == M.atoms and np.array_equal(h.weights, M.weights)

    def test_harness_three_points(self, rng):
        X = random_space(rng, 3)
        rep = tw_verify_mr([random_meta(rng, X) for _ in range(20)], 0.25)
        assert rep.passed and rep.checked == 20

    def test_dirac_samples_are_vacuous(self, two_points):
        samples = [dirac_lift(dirac(two_points, i)) for i in range(2)]
        rep = tw_verify_mr(samples, 0.25)
        assert rep.passed and rep.vacuous == 2
        assert rep.g_close == 0.0 and rep.h_close == 0.0

    def test_rejects_dirac_generators(self, two_points):
        with pytest.raises(ValidationError):
            tw_verify_mr([two_dirac_meta(two_points)], 0.25, [dirac(two_points, 0)])

    def test_samples_outside_hull_are_skipped(self, rng):
        X = random_space(rng, 4)
        gens = [random_non_dirac(rng, X) for _ in range(3)]
        rep = tw_verify_mr([dirac_lift(dirac(X, 0))], 0.25, gens)
        assert rep.checked == 0 and not rep.passed


class TestInterval:
    def test_l_at_one_is_identity(self, unit_grid, rng):
        nu = random_interval_measure(rng, unit_grid)
        assert interval_l(nu, 1.0).weights.tobytes() == nu.weights.tobytes()

    def test_l_keeps_low_dirac(self, unit_grid):
        nu = on_grid(unit_grid, {0.5: 0.0})
        assert interval_l(nu, 0.8) == nu

    def test_l_folds_tail(self, unit_grid):
        nu = on_grid(unit_grid, {0.1: 0.0, 0.9: -0.4})
        folded = interval_l(nu, 0.8)
        expected = on_grid(unit_grid, {0.1: 0.0, 0.8: -0.3})
        assert np.allclose(folded.weights, expected.weights, atol=1e-12, equal_nan=False)
        assert folded.support == expected.support
        assert barycenter(unit_grid, folded)[0] == pytest.approx(0.5, abs=1e-12)
        assert barycenter(unit_grid, nu)[0] == pytest.approx(0.5, abs=1e-12)

    def test_h0_examples(self, unit_grid):
        h = interval_h0(on_grid(unit_grid, {0.0: 0.0}), -1.0)
        assert np.array_equal(h.weights, on_grid(unit_grid, {0.0: 0.0, 1.0: -1.0}).weights)
        assert barycenter(unit_grid, h)[0] == 0.0
        h = interval_h0(on_grid(unit_grid, {0.5: 0.0}), -2.0)
        assert np.array_equal(h.weights, on_grid(unit_grid, {0.5: 0.0, 1.0: -2.0}).weights)
        assert barycenter(unit_grid, h)[0] == 0.5
        mu = on_grid(unit_grid, {0.3: 0.0})
        assert interval_h0(mu, NEG_INF) == mu

    def test_cut_is_above_two_thirds(self, unit_grid):
        p = interval_cut(0.1, unit_grid)
        assert 2 / 3 < p < 1 and p >= 0.95

    def test_harness(self, unit_grid, rng):
        rep = tw_verify_interval([random_interval_measure(rng, unit_grid) for _ in range(20)], 0.1)
        assert rep.passed and rep.checked == 20
        assert all(d["ok"] for d in rep.details)

    def test_unknown_mode(self):
        with pytest.raises(ValidationError):
            tw_verify("torus", [], 0.1)
