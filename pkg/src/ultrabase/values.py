"""Exact distance values: parsing, canonical formatting, epsilon grouping.

All distances are `fractions.Fraction` internally, so equality tests are
exact. Decimal text maps to the exact rational it denotes ("0.50" and
"0.5" are the same value). Floats are converted through their repr, i.e.
the shortest decimal that round-trips, which keeps ingestion deterministic.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import ParseError

Numeric = Fraction | int | float | str


def to_fraction(value: Numeric) -> Fraction:
    """Convert a number-like value to an exact Fraction.

    Floats go through repr so that 0.1 becomes 1/10, not the underlying
    binary expansion; NaN and infinities are rejected.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return parse_decimal(value)
    raise TypeError(f"cannot interpret {value!r} as a distance value")


def parse_decimal(token: str) -> Fraction:
    """Parse a decimal token ("1", "0.25", "2.5e-3") to an exact Fraction."""
    text = token.strip()
    if not text:
        raise ParseError("empty numeric field")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"invalid numeric field {token!r}") from exc


def format_value(value: Fraction) -> str:
    """Canonical decimal rendering of an exact value.

    Terminating decimals are printed exactly ("0.5", "3", "0.125");
    anything else falls back to the shortest round-trip float string,
    e.g. 1/3 -> "0.3333333333333333".
    """
    num, den = value.numerator, value.denominator
    if den == 1:
        return str(num)
    twos = _strip_factor(den, 2)
    fives = _strip_factor(den // (2**twos), 5)
    if den == 2**twos * 5**fives:
        digits = max(twos, fives)
        scaled = num * 10**digits // den
        sign = "-" if scaled < 0 else ""
        text = str(abs(scaled)).rjust(digits + 1, "0")
        return f"{sign}{text[:-digits]}.{text[-digits:]}"
    return repr(float(value))


def _strip_factor(n: int, p: int) -> int:
    count = 0
    while n % p == 0:
        n //= p
        count += 1
    return count


def group_values(
    values: list[Fraction], epsilon: Fraction
) -> tuple[tuple[Fraction, ...], dict[Fraction, int]]:
    """Collapse near-equal values and assign ranks.

    Sorted distinct inputs are chained into one group while consecutive
    gaps stay <= epsilon; each group is represented by its smallest
    member. Returns the increasing tuple of representatives and a map
    from every input value to its 1-based rank (rank 0 is reserved for
    distance zero).
    """
    distinct = sorted(set(values))
    reps: list[Fraction] = []
    rank_of: dict[Fraction, int] = {}
    prev: Fraction | None = None
    for v in distinct:
        if prev is None or v - prev > epsilon:
            reps.append(v)
        rank_of[v] = len(reps)
        prev = v
    return tuple(reps), rank_of
