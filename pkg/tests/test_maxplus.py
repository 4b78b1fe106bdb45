from __future__ import annotations

import math

import pytest
from hypothesis import given

from tropibary.errors import ValidationError
from tropibary.maxplus import JPair, check_scalar, odot, oplus, parse_scalar, rho_metric, to_token

from .conftest import NEG_INF, scalar


class TestExamples:
    @pytest.mark.parametrize(
        "a, b, expected",
        [(NEG_INF, 5.0, 5.0), (0.0, -1.0, 0.0), (-2.5, -2.5, -2.5)],
    )
    def test_oplus(self, a, b, expected):
        assert oplus(a, b) == expected

    @pytest.mark.parametrize(
        "a, b, expected",
        [(NEG_INF, 3.0, NEG_INF), (0.0, 7.25, 7.25), (-1.0, -2.0, -3.0)],
    )
    def test_odot(self, a, b, expected):
        assert odot(a, b) == expected

    def test_rho(self):
        assert rho_metric(0.4, 0.4) == 0.0
        assert rho_metric(NEG_INF, 0.0) == 1.0
        assert rho_metric(math.log(2), math.log(3)) == pytest.approx(1.0, abs=1e-15)


class TestLaws:
    @given(scalar, scalar, scalar)
    def test_semiring(self, a, b, c):
        assert oplus(a, b) == oplus(b, a)
        assert oplus(oplus(a, b), c) == oplus(a, oplus(b, c))
        assert oplus(a, a) == a
        assert odot(a, b) == odot(b, a)
        assert odot(odot(a, b), c) == odot(a, odot(b, c))
        assert odot(a, oplus(b, c)) == oplus(odot(a, b), odot(a, c))

    @given(scalar)
    def test_units(self, a):
        assert oplus(NEG_INF, a) == a
        assert odot(0.0, a) == a
        assert odot(NEG_INF, a) == NEG_INF

    @given(scalar, scalar, scalar)
    def test_rho_is_metric(self, a, b, c):
        assert rho_metric(a, b) == rho_metric(b, a)
        assert (rho_metric(a, b) == 0) == (a == b)
        bound = rho_metric(a, b) + rho_metric(b, c)
        assert rho_metric(a, c) <= bound * (1 + 1e-15) + 1e-15


class TestValidation:
    @pytest.mark.parametrize("bad", [math.nan, math.inf])
    def test_rejects_nan_and_plus_inf(self, bad):
        with pytest.raises(ValidationError):
            check_scalar(bad)

    def test_negative_zero_normalized(self):
        assert math.copysign(1.0, check_scalar(-0.0)) == 1.0

    def test_jpair(self):
        assert JPair(0.0, NEG_INF).p == NEG_INF
        with pytest.raises(ValidationError):
            JPair(-1.0, -2.0)
        with pytest.raises(ValidationError):
            JPair(0.5, 0.0)

    def test_tokens(self):
        assert parse_scalar("-Inf") == NEG_INF
        assert parse_scalar(-1) == -1.0
        assert to_token(NEG_INF) == "-Inf"
        for bad in ("inf", True, None, "1"):
            with pytest.raises(ValidationError):
                parse_scalar(bad)
