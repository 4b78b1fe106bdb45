from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropibary.errors import SpaceMismatchError, ValidationError
from tropibary.measure import (
    GroundSpace,
    IdempotentMeasure,
    MetaMeasure,
    combine_measures,
    decompose,
    dirac,
    evaluate,
    pushforward,
    support,
)

from .conftest import NEG_INF, dyadic

THREE = GroundSpace.from_matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]])


@st.composite
def weights(draw, n: int) -> np.ndarray:
    w = np.array(draw(st.lists(st.one_of(dyadic, st.just(NEG_INF)), min_size=n, max_size=n)))
    w[draw(st.integers(0, n - 1))] = 0.0
    w = np.where(w > NEG_INF, np.minimum(w, 0.0), w)
    return w


class TestGroundSpace:
    def test_rejects_asymmetric(self):
        with pytest.raises(ValidationError):
            GroundSpace.from_matrix([[0, 1], [2, 0]])

    def test_rejects_triangle_violation(self):
        with pytest.raises(ValidationError):
            GroundSpace.from_matrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]])

    def test_rejects_zero_distance(self):
        with pytest.raises(ValidationError):
            GroundSpace.from_matrix([[0, 0], [0, 0]])

    def test_sup_metric_default(self, segment):
        assert segment.dist[0, 1] == 3.0
        assert segment.diameter == 3.0


class TestMeasure:
    def test_rejects_unnormalized(self, two_points):
        with pytest.raises(ValidationError, match="normalization: max weight must be 0"):
            IdempotentMeasure(two_points, [-1.0, -2.0])

    def test_rejects_wrong_length(self, two_points):
        with pytest.raises(ValidationError):
            IdempotentMeasure(two_points, [0.0])

    def test_weights_read_only(self, two_points):
        mu = dirac(two_points, 0)
        with pytest.raises(ValueError):
            mu.weights[1] = 0.0

    def test_evaluate_examples(self, two_points):
        assert evaluate(dirac(two_points, 1), [3.0, -7.0]) == -7.0
        assert evaluate(IdempotentMeasure(two_points, [0.0, -1.0]), [2.0, 5.0]) == 4.0

    @given(weights(3), dyadic)
    def test_constant_function(self, w, c):
        assert evaluate(IdempotentMeasure(THREE, w), [c] * 3) == c

    def test_support(self):
        assert support(dirac(THREE, 2)) == [2]
        assert support(IdempotentMeasure(THREE, [0.0, -1.0, NEG_INF])) == [0, 1]
        both = combine_measures([dirac(THREE, 0), dirac(THREE, 2)], [0.0, -3.0])
        assert support(both) == [0, 2]

    def test_space_mismatch(self, two_points):
        with pytest.raises(SpaceMismatchError):
            combine_measures([dirac(two_points, 0), dirac(THREE, 0)], [0.0, 0.0])


class TestAxioms:
    @given(weights(3), st.lists(dyadic, min_size=3, max_size=3), st.lists(dyadic, min_size=3, max_size=3), dyadic)
    def test_axioms_exact(self, w, phi, psi, c):
        mu = IdempotentMeasure(THREE, w)
        phi, psi = np.array(phi), np.array(psi)
        assert evaluate(mu, np.maximum(phi, psi)) == max(evaluate(mu, phi), evaluate(mu, psi))
        assert evaluate(mu, phi + c) == evaluate(mu, phi) + c
        assert abs(evaluate(mu, phi) - evaluate(mu, psi)) <= np.abs(phi - psi).max()
        assert phi.min() <= evaluate(mu, phi) <= phi.max()


class TestPushforward:
    def test_identity(self):
        mu = IdempotentMeasure(THREE, [0.0, -1.0, -2.0])
        assert pushforward([0, 1, 2], mu) == mu

    def test_constant(self):
        mu = IdempotentMeasure(THREE, [0.0, -1.0, -2.0])
        assert pushforward([1, 1, 1], mu) == dirac(THREE, 1)

    def test_merge_takes_max(self):
        mu = IdempotentMeasure(THREE, [0.0, -1.0, -2.0])
        assert np.array_equal(pushforward([0, 2, 2], mu).weights, [0.0, NEG_INF, -1.0])

    @given(weights(3), st.lists(st.integers(0, 2), min_size=3, max_size=3), st.lists(st.integers(0, 2), min_size=3, max_size=3))
    def test_functorial(self, w, f, g):
        mu = IdempotentMeasure(THREE, w)
        gf = [g[i] for i in f]
        assert pushforward(g, pushforward(f, mu)) == pushforward(gf, mu)


class TestCombineAndDecompose:
    def test_single_atom(self):
        mu = IdempotentMeasure(THREE, [0.0, -1.0, -2.0])
        assert combine_measures([mu], [0.0]) == mu

    def test_two_diracs(self, two_points):
        out = combine_measures([dirac(two_points, 0), dirac(two_points, 1)], [0.0, -1.0])
        assert np.array_equal(out.weights, [0.0, -1.0])

    def test_singleton_blocks(self, two_points):
        a1, mu1, a2, mu2 = decompose(IdempotentMeasure(two_points, [0.0, -1.0]), ([0], [1]))
        assert (a1, a2) == (0.0, -1.0)
        assert mu1 == dirac(two_points, 0) and mu2 == dirac(two_points, 1)

    def test_subtracts_block_maxima(self):
        mu = IdempotentMeasure(THREE, [0.0, -2.0, -3.0])
        a1, mu1, a2, mu2 = decompose(mu, ([0], [1, 2]))
        assert a1 == 0.0 and mu1 == dirac(THREE, 0)
        assert a2 == -2.0 and np.array_equal(mu2.weights, [NEG_INF, 0.0, -1.0])

    def test_empty_block_rejected(self):
        with pytest.raises(ValidationError):
            decompose(IdempotentMeasure(THREE, [0.0, -1.0, NEG_INF]), ([0, 1], [2]))

    @settings(max_examples=50)
    @given(weights(3), st.sets(st.integers(0, 2), min_size=1, max_size=2))
    def test_reconstructs(self, w, block):
        mu = IdempotentMeasure(THREE, w)
        b1 = sorted(block)
        b2 = [i for i in range(3) if i not in block]
        supp = set(mu.support)
        if not (supp & set(b1)) or not (supp & set(b2)):
            return
        a1, mu1, a2, mu2 = decompose(mu, (b1, b2))
        assert combine_measures([mu1, mu2], [a1, a2]) == mu


class TestMetaMeasure:
    def test_merges_equal_atoms(self, two_points):
        mu = dirac(two_points, 0)
        M = MetaMeasure((mu, mu), np.array([0.0, -1.0]))
        assert len(M.atoms) == 1 and M.is_dirac

    def test_needs_normalization(self, two_points):
        with pytest.raises(ValidationError):
            MetaMeasure((dirac(two_points, 0),), np.array([-1.0]))
