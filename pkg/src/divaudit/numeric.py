"""Number handling shared by every layer: exact rationals or tolerant floats."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Number = Union[Fraction, float]


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class NumericError(ArithmeticError):
    """Floating-point evaluation failed (overflow, non-finite result)."""


@dataclass(frozen=True)
class NumericMode:
    """Either exact rational arithmetic or floats compared within ``eps``."""

    exact: bool = True
    eps: float = 1e-9

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")

    @property
    def name(self) -> str:
        return "exact" if self.exact else "float"

    def coerce(self, x) -> Number:
        if self.exact:
            return to_fraction(x)
        return float(to_fraction(x)) if isinstance(x, str) else float(x)

    @classmethod
    def from_name(cls, name: str, eps: float = 1e-9) -> "NumericMode":
        if name == "exact":
            return cls(True, eps)
        if name == "float":
            return cls(False, eps)
        raise ValueError(f"unknown numeric mode {name!r} (expected 'exact' or 'float')")


EXACT = NumericMode(True)
FLOAT = NumericMode(False)


def to_fraction(x) -> Fraction:
    """Convert ints, Fractions, floats (exactly) and "p/q" / decimal strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, str)):
        try:
            return Fraction(x.strip() if isinstance(x, str) else x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {x!r}") from exc
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite number: {x!r}")
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a number")


def is_exact(*xs) -> bool:
    return all(isinstance(x, (Fraction, int)) and not isinstance(x, bool) for x in xs)


def approx_eq(a: Number, b: Number, eps: float = 1e-9) -> bool:
    """Exact equality for rationals, relative-absolute tolerance otherwise."""
    if is_exact(a, b):
        return a == b
    a, b = float(a), float(b)
    return abs(a - b) <= eps * max(1.0, abs(a), abs(b))


def cmp(a: Number, b: Number, eps: float = 1e-9) -> int:
    """Three-way comparison; -1, 0 or 1."""
    if approx_eq(a, b, eps):
        return 0
    return 1 if a > b else -1


def leq(a: Number, b: Number, eps: float = 1e-9) -> bool:
    return cmp(a, b, eps) <= 0


def format_number(x: Number) -> str:
    """Rationals print as "p" or "p/q"; floats as their shortest repr."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def to_json_number(x: Number):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return x
    return float(x)


def from_json_number(raw, mode: NumericMode = EXACT, where: str = "value") -> Number:
    """Read a JSON number or "p/q" string; non-integer JSON floats are refused in exact mode."""
    if isinstance(raw, bool) or not isinstance(raw, (int, float, str)):
        raise ValueError(f"{where}: expected a number or 'p/q' string, got {raw!r}")
    if mode.exact:
        if isinstance(raw, float) and not raw.is_integer():
            raise ValueError(f"{where}: exact mode requires rational strings, got float {raw!r}")
        return to_fraction(int(raw) if isinstance(raw, float) else raw)
    return float(to_fraction(raw)) if isinstance(raw, str) else float(raw)


def _int_root(n: int, k: int):
    """Exact k-th root of a nonnegative integer, or None."""
    if n < 2:
        return n
    # integer Newton from above converges to floor(n ** (1/k))
    r = 1 << (n.bit_length() // k + 1)
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    return r if r ** k == n else None


def power(base: Number, exponent: Fraction) -> Number:
    """base ** exponent, staying rational whenever the result is rational."""
    exponent = to_fraction(exponent)
    if is_exact(base):
        base = Fraction(base)
        if exponent.denominator == 1:
            if base == 0 and exponent < 0:
                raise ZeroDivisionError("zero to a negative power")
            return base ** exponent.numerator
        if base < 0:
            raise DomainError(f"negative base {base} with fractional exponent {exponent}")
        q = exponent.denominator
        num, den = _int_root(base.numerator, q), _int_root(base.denominator, q)
        if num is not None and den is not None:
            root = Fraction(num, den)
            if root == 0 and exponent < 0:
                raise ZeroDivisionError("zero to a negative power")
            return root ** exponent.numerator
    b = float(base)
    if b < 0 and exponent.denominator != 1:
        raise DomainError(f"negative base {b} with fractional exponent {exponent}")
    if b == 0 and exponent < 0:
        raise ZeroDivisionError("zero to a negative power")
    return b ** float(exponent)
