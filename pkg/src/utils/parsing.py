"""
Parsing Utilities for ECFCensus
Exact parsing of rationals and quadratic-irrational specs from text
"""
from fractions import Fraction
from typing import Optional, Union

from core.errors import InvalidQuery
from core.qi_core import QuadraticIrrational, qi_from_poly

INFINITY_TOKENS = {"inf", "infinity", "oo", "none"}


def parse_rational(value: Union[str, int, Fraction]) -> Fraction:
    """Parse "p/q" or an integer; floats are refused to keep inputs exact"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise InvalidQuery(f"float {value} is not an exact rational; use p/q")
    text = str(value).strip()
    if "." in text or "e" in text.lower():
        raise InvalidQuery(f"{text!r} is not an exact rational; use p/q")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidQuery(f"cannot parse rational {text!r}: {e}")


def parse_optional_rational(value) -> Optional[Fraction]:
    """Like parse_rational, with "inf" mapping to None"""
    if value is None:
        return None
    if isinstance(value, str) and value.strip().lower() in INFINITY_TOKENS:
        return None
    return parse_rational(value)


def format_rational(value: Optional[Fraction]) -> str:
    return "inf" if value is None else str(value)


def parse_qi_spec(spec: str) -> QuadraticIrrational:
    """Parse "A,B,C,sign" with sign + or -"""
    parts = [p.strip() for p in spec.split(",")]
    if len(parts) != 4 or parts[3] not in ("+", "-", "+1", "-1"):
        raise InvalidQuery(f"expected 'A,B,C,sign', got {spec!r}")
    try:
        A, B, C = (int(p) for p in parts[:3])
    except ValueError as e:
        raise InvalidQuery(f"bad coefficients in {spec!r}: {e}")
    return qi_from_poly(A, B, C, -1 if parts[3].startswith("-") else 1)
