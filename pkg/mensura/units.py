#!/usr/bin/env python

"""
    Dimensions, units and dimensioned quantities.

    Dimension exponents and unit scale factors are exact `Fraction`s, so the
    bookkeeping never drifts. The canonical unit of length is the foot; mass,
    time and current use kg, s and A. Units are taken from a fixed table and
    written with a small grammar:

        expr := term (('*' | '/') term)*
        term := ident ('^' int)?
"""

from dataclasses import dataclass, field
from fractions import Fraction
import logging
import re
from typing import Dict, Tuple

from .util import (
    DimensionError,
    EmptyUnitExpressionError,
    MalformedExponentError,
    UnknownUnitError,
)

log = logging.getLogger(__name__)

BASE_DIMENSIONS = ("L", "M", "T", "I")
CANONICAL_TOKENS = ("ft", "kg", "s", "A")

# 1 ft is exactly 0.3048 m
FEET_PER_METRE = Fraction(1250, 381)


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError(f"exponents must be exact, got float {value!r}")
    return Fraction(value)


@dataclass(frozen=True)
class Dimension:
    exponents: Tuple[Fraction, ...] = (Fraction(0),) * len(BASE_DIMENSIONS)

    def __post_init__(self):
        exponents = tuple(_as_fraction(e) for e in self.exponents)
        if len(exponents) != len(BASE_DIMENSIONS):
            raise ValueError(
                f"a dimension has {len(BASE_DIMENSIONS)} exponents, "
                f"got {len(exponents)}"
            )
        object.__setattr__(self, "exponents", exponents)

    @classmethod
    def of(cls, L=0, M=0, T=0, I=0):
        return cls((L, M, T, I))

    @property
    def is_dimensionless(self):
        return not any(self.exponents)

    def __mul__(self, other):
        return Dimension(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __truediv__(self, other):
        return Dimension(tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def __pow__(self, power):
        power = _as_fraction(power)
        return Dimension(tuple(e * power for e in self.exponents))

    def __getitem__(self, symbol):
        return self.exponents[BASE_DIMENSIONS.index(symbol)]

    def __str__(self):
        parts = []
        for symbol, exponent in zip(BASE_DIMENSIONS, self.exponents):
            if exponent == 1:
                parts.append(symbol)
            elif exponent:
                parts.append(f"{symbol}^{_format_exponent(exponent)}")
        return "*".join(parts) if parts else "1"


DIMENSIONLESS = Dimension()
LENGTH = Dimension.of(L=1)
MASS = Dimension.of(M=1)
TIME = Dimension.of(T=1)
CURRENT = Dimension.of(I=1)
VOLUME = LENGTH ** 3


def _format_exponent(exponent):
    if exponent.denominator == 1:
        return str(exponent.numerator)
    return f"({exponent.numerator}/{exponent.denominator})"


@dataclass(frozen=True)
class Unit:
    """A unit is a dimension plus an exact scale to the canonical unit of
    that dimension. Two units are equal when both of those agree, whatever
    they are called."""

    name: str = field(compare=False)
    dimension: Dimension
    scale_to_canonical: Fraction
    factors: Tuple[Tuple[str, Fraction], ...] = field(default=(), compare=False)

    def __post_init__(self):
        scale = _as_fraction(self.scale_to_canonical)
        if scale <= 0:
            raise ValueError(f"unit scale must be positive, got {scale}")
        object.__setattr__(self, "scale_to_canonical", scale)

    def to_canonical(self, value):
        return value * self.scale_to_canonical

    def __mul__(self, other):
        return _unit_from_factors(self.factors + other.factors)

    def __truediv__(self, other):
        return _unit_from_factors(
            self.factors + tuple((token, -exp) for token, exp in other.factors)
        )

    def __pow__(self, power):
        power = _as_fraction(power)
        return _unit_from_factors(tuple((t, e * power) for t, e in self.factors))

    def __str__(self):
        return self.name


# token -> (dimension, scale to canonical)
UNIT_TABLE: Dict[str, Tuple[Dimension, Fraction]] = {
    "ft": (LENGTH, Fraction(1)),
    "in": (LENGTH, Fraction(1, 12)),
    "m": (LENGTH, FEET_PER_METRE),
    "cm": (LENGTH, FEET_PER_METRE / 100),
    "ft3": (VOLUME, Fraction(1)),
    "m3": (VOLUME, FEET_PER_METRE ** 3),
    "kg": (MASS, Fraction(1)),
    "s": (TIME, Fraction(1)),
    "A": (CURRENT, Fraction(1)),
}

DIMENSION_TABLE: Dict[str, Dimension] = {
    "L": LENGTH,
    "M": MASS,
    "T": TIME,
    "I": CURRENT,
}


def _merge_factors(factors):
    merged = {}
    for token, exponent in factors:
        merged[token] = merged.get(token, Fraction(0)) + _as_fraction(exponent)
    return tuple((token, exp) for token, exp in merged.items() if exp != 0)


def _unit_from_factors(factors):
    factors = _merge_factors(factors)
    dimension = DIMENSIONLESS
    scale = Fraction(1)
    for token, exponent in factors:
        token_dim, token_scale = UNIT_TABLE[token]
        dimension = dimension * token_dim ** exponent
        if exponent.denominator == 1:
            scale *= token_scale ** exponent.numerator
        elif token_scale != 1:
            raise ValueError(f"fractional power of a scaled unit: {token}^{exponent}")
    unit = Unit("", dimension, scale, factors)
    object.__setattr__(unit, "name", format_unit(unit))
    return unit


def canonical_unit(dimension):
    """The scale-1 unit of a dimension, spelled with ft, kg, s and A."""
    return _unit_from_factors(tuple(zip(CANONICAL_TOKENS, dimension.exponents)))


def format_unit(unit):
    """Canonical printer; parse_unit_expr(format_unit(u)) == u."""
    if not unit.factors:
        return "ft^0"
    parts = []
    for token, exponent in unit.factors:
        if exponent == 1:
            parts.append(token)
        else:
            parts.append(f"{token}^{_format_exponent(exponent)}")
    return "*".join(parts)


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_EXPONENT_RE = re.compile(r"[+-]?\d+")
_SPACE_RE = re.compile(r"\s*")


def _byte_offset(text, index):
    return len(text[:index].encode("utf-8"))


def _tokenize(text, table):
    """Parses an expression into (token, exponent) factors, raising a
    distinct UnitParseError subclass for each kind of failure."""
    if not text or not text.strip():
        raise EmptyUnitExpressionError("empty unit expression", text, 0)

    factors = []
    pos = _SPACE_RE.match(text, 0).end()
    sign = 1
    while True:
        ident = _IDENT_RE.match(text, pos)
        if not ident:
            found = repr(text[pos]) if pos < len(text) else "end of input"
            raise UnknownUnitError(
                f"expected a unit name, found {found}", text, _byte_offset(text, pos)
            )
        token = ident.group()
        if token not in table:
            raise UnknownUnitError(
                f"unknown unit '{token}'", text, _byte_offset(text, pos)
            )
        pos = _SPACE_RE.match(text, ident.end()).end()

        exponent = 1
        if pos < len(text) and text[pos] == "^":
            pos = _SPACE_RE.match(text, pos + 1).end()
            number = _EXPONENT_RE.match(text, pos)
            tail = number.end() if number else pos
            glued = tail < len(text) and (text[tail].isalnum() or text[tail] in "._")
            if not number or glued:
                raise MalformedExponentError(
                    "exponent must be an integer", text, _byte_offset(text, pos)
                )
            exponent = int(number.group())
            pos = _SPACE_RE.match(text, tail).end()

        factors.append((token, Fraction(sign * exponent)))

        if pos == len(text):
            return factors
        if text[pos] not in "*/":
            raise UnknownUnitError(
                f"unexpected character {text[pos]!r}", text, _byte_offset(text, pos)
            )
        sign = 1 if text[pos] == "*" else -1
        pos = _SPACE_RE.match(text, pos + 1).end()


def parse_unit_expr(text):
    """Parses a unit expression such as "ft", "in" or "m^3" into a Unit."""
    unit = _unit_from_factors(_tokenize(text, UNIT_TABLE))
    log.debug(
        "Parsed unit %r as %s (scale %s)", text, unit.dimension, unit.scale_to_canonical
    )
    return unit


def parse_dimension_expr(text):
    """Parses a dimension written with L, M, T and I, e.g. "L^3" or "M*L/T^2".
    A bare "1" is dimensionless."""
    if text is not None and text.strip() == "1":
        return DIMENSIONLESS
    dimension = DIMENSIONLESS
    for symbol, exponent in _tokenize(text, DIMENSION_TABLE):
        dimension = dimension * DIMENSION_TABLE[symbol] ** exponent
    return dimension


FOOT = parse_unit_expr("ft")
INCH = parse_unit_expr("in")
CUBIC_FOOT = parse_unit_expr("ft3")


@dataclass(frozen=True)
class Quantity:
    value: float
    unit: Unit

    @property
    def dimension(self):
        return self.unit.dimension

    @property
    def canonical_value(self):
        return float(self.unit.to_canonical(self.value))

    def __mul__(self, other):
        if isinstance(other, Quantity):
            return Quantity(self.value * other.value, self.unit * other.unit)
        return Quantity(self.value * other, self.unit)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Quantity):
            return Quantity(self.value / other.value, self.unit / other.unit)
        return Quantity(self.value / other, self.unit)

    def __pow__(self, power):
        power = _as_fraction(power)
        if power.denominator == 1:
            return Quantity(self.value ** power.numerator, self.unit ** power)
        base = canonical_unit(self.dimension)
        return Quantity(self.canonical_value ** float(power), base ** power)

    def __add__(self, other):
        return Quantity(self.value + convert(other, self.unit).value, self.unit)

    def __sub__(self, other):
        return Quantity(self.value - convert(other, self.unit).value, self.unit)

    def __str__(self):
        return f"{self.value} {self.unit}"


def convert(quantity, to):
    """Re-expresses a quantity in another unit of the same dimension."""
    if quantity.dimension != to.dimension:
        raise DimensionError(
            f"cannot convert {quantity.unit} ({quantity.dimension}) "
            f"to {to} ({to.dimension})"
        )
    ratio = quantity.unit.scale_to_canonical / to.scale_to_canonical
    if ratio == 1:
        return Quantity(quantity.value, to)
    return Quantity(quantity.value * float(ratio), to)
