"""Scalar arithmetic in the max-plus semiring R_max = R u {-inf}.

Scalars are plain Python floats. The bottom element is the IEEE value
``-inf``; NaN and ``+inf`` are rejected wherever a scalar enters the library,
so the only non-finite value that can ever appear is the bottom element.
The semiring operations below branch on the bottom element explicitly and
never rely on ``-inf + x`` happening to work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Union

from .errors import ValidationError

NEG_INF: float = float("-inf")
NEG_INF_TOKEN = "-Inf"

Scalar = float
Token = Union[float, int, str]


def is_bottom(a: float) -> bool:
    return a == NEG_INF


def check_scalar(a: Any, *, name: str | None = None) -> float:
    """Coerce ``a`` to a float in R_max, rejecting NaN and +inf."""
    try:
        x = float(a)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"not a max-plus scalar: {a!r}", name=name) from exc
    if math.isnan(x):
        raise ValidationError("NaN is not a max-plus scalar", name=name)
    if x == math.inf:
        raise ValidationError("+inf is not a max-plus scalar", name=name)
    # -0.0 would break bit-exact comparisons after additions with 0.0
    return x + 0.0


def oplus(a: float, b: float) -> float:
    """Max-plus sum: max(a, b), with -inf neutral."""
    if is_bottom(a):
        return b
    if is_bottom(b):
        return a
    return a if a >= b else b


def odot(a: float, b: float) -> float:
    """Max-plus product: a + b, with -inf absorbing."""
    if is_bottom(a) or is_bottom(b):
        return NEG_INF
    return a + b


def rho_metric(x: float, y: float) -> float:
    """The metric |e^x - e^y| on R_max (e^-inf = 0)."""
    return abs(math.exp(x) - math.exp(y))


@dataclass(frozen=True)
class JPair:
    """A parameter pair (t, p) with t, p <= 0 and max(t, p) = 0."""

    t: float
    p: float

    def __post_init__(self) -> None:
        t = check_scalar(self.t, name="JPair.t")
        p = check_scalar(self.p, name="JPair.p")
        if t > 0 or p > 0:
            raise ValidationError(f"JPair entries must be <= 0, got ({t}, {p})")
        if oplus(t, p) != 0.0:
            raise ValidationError(f"JPair requires t (+) p = 0, got ({t}, {p})")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "p", p)


def parse_scalar(token: Token, *, name: str | None = None) -> float:
    """Read a serialized scalar: a finite number or the literal ``"-Inf"``."""
    if isinstance(token, bool):
        raise ValidationError(f"not a scalar token: {token!r}", name=name)
    if isinstance(token, str):
        if token == NEG_INF_TOKEN:
            return NEG_INF
        raise ValidationError(f"unknown scalar token {token!r} (expected a number or \"-Inf\")", name=name)
    if isinstance(token, (int, float)):
        x = check_scalar(token, name=name)
        if is_bottom(x):
            raise ValidationError("-inf must be written as the token \"-Inf\"", name=name)
        return x
    raise ValidationError(f"not a scalar token: {token!r}", name=name)


def to_token(a: float) -> Token:
    """Serialize a scalar for JSON output."""
    a = check_scalar(a)
    return NEG_INF_TOKEN if is_bottom(a) else a


def format_scalar(a: float) -> str:
    """Human-readable, round-trippable text form of a scalar."""
    return NEG_INF_TOKEN if is_bottom(a) else repr(float(a))
