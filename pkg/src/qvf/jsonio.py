"""Strict JSON helpers: exact rationals travel as ``"p/q"`` strings."""
from __future__ import annotations

import re
from fractions import Fraction

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


class ParseError(ValueError):
    """Malformed input document."""


def rat(x: Fraction) -> str:
    return str(Fraction(x))


def parse_rational(value) -> Fraction:
    # JSON floats are refused: they are not exact
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value):
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError as exc:
            raise ParseError(f"zero denominator in {value!r}") from exc
    raise ParseError(f"not an exact rational (expected 'p/q' string): {value!r}")


def parse_rational_list(values, length: int | None = None, name: str = "value") -> list[Fraction]:
    if not isinstance(values, list):
        raise ParseError(f"{name} must be a list")
    if length is not None and len(values) != length:
        raise ParseError(f"{name} must have {length} entries, got {len(values)}")
    return [parse_rational(v) for v in values]


def cpair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]
