"""
BadicDim - finite-scale Assouad and lower dimensions on b-adic cube trees

Copyright (C) 2026  The BadicDim developers

This program is free software: you can redistribute it and/or modify
it under the terms of the GNU General Public License as published by
the Free Software Foundation, either version 3 of the License, or
(at your option) any later version.

This program is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
GNU General Public License for more details.

You should have received a copy of the GNU General Public License
along with this program. If not, see <https://www.gnu.org/licenses/>.
"""

import math
from decimal import Context, Decimal
from fractions import Fraction
from typing import List, Optional, Union

from badicdim.components.errors import ParameterError

Number = Union[int, Fraction, str, float]

_LOG_CONTEXT = Context(prec=60)


def to_fraction(value: Number) -> Fraction:
    """Exact rational from user input; floats go through their shortest repr so 0.1 stays 1/10."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"not a rational number: {value!r}")


def text_input_to_int(text: str) -> Optional[int]:
    try:
        if text.startswith('0x'):
            return int(text, 16)
        return int(text, 10)
    except (ValueError, AttributeError):
        return None


def parse_int_list(text: str) -> List[int]:
    values = []
    for item in text.split(","):
        value = text_input_to_int(item.strip())
        if value is None:
            raise ParameterError(f"not an integer list: {text!r}")
        values.append(value)
    return values


def _ln(value: Fraction) -> Decimal:
    return (_LOG_CONTEXT.ln(Decimal(value.numerator)) -
            _LOG_CONTEXT.ln(Decimal(value.denominator)))


def compare_power(a: Number, base: int, exponent: Number, denominator_limit: int = 64) -> int:
    """Sign of a - base**exponent, exact whenever the exponent's denominator is small."""
    a = to_fraction(a)
    exponent = to_fraction(exponent)
    if a <= 0:
        return -1
    p, q = exponent.numerator, exponent.denominator
    if q <= denominator_limit:
        lhs = a.numerator ** q
        rhs = a.denominator ** q
        if p >= 0:
            rhs *= base ** p
        else:
            lhs *= base ** (-p)
        return (lhs > rhs) - (lhs < rhs)
    lhs = _ln(a)
    rhs = _LOG_CONTEXT.multiply(_LOG_CONTEXT.divide(Decimal(p), Decimal(q)), _ln(Fraction(base)))
    return (lhs > rhs) - (lhs < rhs)


def power_le(a: Number, base: int, exponent: Number, denominator_limit: int = 64) -> bool:
    return compare_power(a, base, exponent, denominator_limit) <= 0


def power_ge(a: Number, base: int, exponent: Number, denominator_limit: int = 64) -> bool:
    return compare_power(a, base, exponent, denominator_limit) >= 0


def _estimate(base: int, exponent: Fraction, coefficient: Fraction) -> int:
    if coefficient <= 0:
        return 0
    log_value = math.log(coefficient) + float(exponent) * math.log(base)
    if log_value > 700:
        raise ParameterError(f"{coefficient}*{base}^({exponent}) is too large")
    return math.floor(math.exp(log_value))


def floor_power(base: int, exponent: Number, coefficient: Number = 1, denominator_limit: int = 64) -> int:
    """Largest integer N with N <= coefficient * base**exponent."""
    exponent = to_fraction(exponent)
    coefficient = to_fraction(coefficient)
    value = _estimate(base, exponent, coefficient)

    def fits(n):
        return n <= 0 or power_le(Fraction(n) / coefficient, base, exponent, denominator_limit)

    while not fits(value):
        value -= 1
    while fits(value + 1):
        value += 1
    return value


def ceil_power(base: int, exponent: Number, coefficient: Number = 1, denominator_limit: int = 64) -> int:
    """Smallest integer L with L >= coefficient * base**exponent."""
    exponent = to_fraction(exponent)
    coefficient = to_fraction(coefficient)
    if coefficient <= 0:
        return 0
    lower = floor_power(base, exponent, coefficient, denominator_limit)
    if lower > 0 and compare_power(Fraction(lower) / coefficient, base, exponent, denominator_limit) == 0:
        return lower
    return lower + 1


def integer_root(value: int, degree: int) -> Optional[int]:
    if value < 0 or degree < 1:
        return None
    guess = round(value ** (1.0 / degree))
    for candidate in (guess - 1, guess, guess + 1):
        if candidate >= 0 and candidate ** degree == value:
            return candidate
    return None


def log_ratio(count: int, scale_levels: int, base: int) -> float:
    if count <= 0 or scale_levels <= 0:
        return 0.0
    return math.log(count) / (scale_levels * math.log(base))


def format_ratio(value: float, decimals: int = 6) -> str:
    return "{0:.{1}f}".format(value, decimals)
