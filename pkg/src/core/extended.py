"""Extended reals R ∪ {−∞} with the scalar conventions used by the dynamics.

NEG_INF is a tagged singleton rather than ``float("-inf")`` so that
``0 · NEG_INF`` can be defined as 0 without fighting IEEE semantics.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence, Union

from src.errors import ExtendedArithmeticError, ParseError

NEG_INF_TOKEN = "-inf"

# Result of distance_inf when exactly one side is −∞.
INFINITE = math.inf


class NegInf:
    """The distinguished bottom element −∞."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (NegInf, ())

    def __repr__(self) -> str:
        return "NEG_INF"

    def __str__(self) -> str:
        return NEG_INF_TOKEN

    def __float__(self) -> float:
        return -math.inf

    def __eq__(self, other) -> bool:
        return isinstance(other, NegInf)

    def __hash__(self) -> int:
        return hash("NEG_INF")

    def __lt__(self, other) -> bool:
        if isinstance(other, NegInf):
            return False
        if isinstance(other, (int, float)):
            return True
        return NotImplemented

    def __le__(self, other) -> bool:
        if isinstance(other, (NegInf, int, float)):
            return True
        return NotImplemented

    def __gt__(self, other) -> bool:
        if isinstance(other, (NegInf, int, float)):
            return False
        return NotImplemented

    def __ge__(self, other) -> bool:
        if isinstance(other, NegInf):
            return True
        if isinstance(other, (int, float)):
            return False
        return NotImplemented


NEG_INF = NegInf()

ExtendedReal = Union[float, NegInf]


def to_extended(value) -> ExtendedReal:
    """Normalize a raw value (number, float -inf, NEG_INF) to an ExtendedReal."""
    if isinstance(value, NegInf):
        return NEG_INF
    number = float(value)
    if math.isnan(number):
        raise ExtendedArithmeticError("NaN is not an extended real")
    if number == -math.inf:
        return NEG_INF
    if number == math.inf:
        raise ExtendedArithmeticError("+inf is not an element of R ∪ {−∞}")
    # fold -0.0 into 0.0
    return number + 0.0


def ext_mul(coefficient: float, value: ExtendedReal) -> ExtendedReal:
    """Scalar product c·v with c·(−∞) = −∞ for c > 0 and 0·(−∞) = 0."""
    if isinstance(value, NegInf):
        if coefficient > 0:
            return NEG_INF
        if coefficient == 0:
            return 0.0
        raise ExtendedArithmeticError(
            f"negative coefficient {coefficient!r} times -inf is +inf"
        )
    return coefficient * value + 0.0


def ext_sum(terms: Iterable[ExtendedReal]) -> ExtendedReal:
    """Sum that is −∞ as soon as any term is −∞."""
    total = 0.0
    for term in terms:
        if isinstance(term, NegInf):
            return NEG_INF
        total += term
    return total + 0.0


def format_value(value: ExtendedReal) -> str:
    """Round-trip text form: ``repr`` of the float, or ``-inf``."""
    if isinstance(value, NegInf):
        return NEG_INF_TOKEN
    return repr(float(value) + 0.0)


def parse_value(token: str, field: str | None = None) -> ExtendedReal:
    """Parse a decimal token or the literal ``-inf``."""
    text = token.strip()
    if text == NEG_INF_TOKEN:
        return NEG_INF
    try:
        number = float(text)
    except ValueError:
        raise ParseError(f"not a number: {token!r}", field=field) from None
    if not math.isfinite(number):
        raise ParseError(f"non-finite token {token!r} (only '-inf' is allowed)", field=field)
    return number + 0.0


def to_json_value(value: ExtendedReal):
    """JSON has no −∞; it is written as the string ``"-inf"``."""
    if isinstance(value, NegInf):
        return NEG_INF_TOKEN
    return float(value) + 0.0


def vector_to_json(values: Sequence[ExtendedReal]) -> list:
    return [to_json_value(v) for v in values]
