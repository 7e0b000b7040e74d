"""Syntax tree of law-invariant functionals.

Nodes are frozen dataclasses, so specs are hashable, comparable and safe to
share. ``PiecewisePoly`` holds utilities u(x) and distortion weights g(t) as
piecewise polynomials with rational breakpoints; that keeps expected utility
and dual utility integrals in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from ..numeric import Number


def _trim(coeffs) -> Tuple[Fraction, ...]:
    coeffs = [Fraction(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs) or (Fraction(0),)


def _poly_eval(coeffs, x):
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_antiderivative(coeffs):
    return (Fraction(0),) + tuple(c / (k + 1) for k, c in enumerate(coeffs))


@dataclass(frozen=True)
class PiecewisePoly:
    """Right-continuous piecewise polynomial.

    ``pieces`` is a tuple of (start, coefficients); the first start is None
    (minus infinity) and later starts strictly increase. Piece k applies on
    [start_k, start_{k+1}). Coefficients are in increasing degree.
    """

    pieces: Tuple[Tuple[Optional[Fraction], Tuple[Fraction, ...]], ...]

    def __post_init__(self):
        if not self.pieces or self.pieces[0][0] is not None:
            raise ValueError("first piece must start at -infinity (start=None)")
        starts = [s for s, _ in self.pieces[1:]]
        if any(s is None for s in starts) or any(not a < b for a, b in zip(starts, starts[1:])):
            raise ValueError("piece starts must strictly increase")

    @classmethod
    def poly(cls, *coeffs) -> "PiecewisePoly":
        return cls(((None, _trim(coeffs)),))

    @classmethod
    def build(cls, pieces) -> "PiecewisePoly":
        return cls(tuple((None if s is None else Fraction(s), _trim(c)) for s, c in pieces))

    def _piece_at(self, x) -> int:
        k = 0
        for i, (s, _) in enumerate(self.pieces):
            if s is not None and x >= s:
                k = i
        return k

    def __call__(self, x: Number) -> Number:
        return _poly_eval(self.pieces[self._piece_at(x)][1], x)

    def integrate(self, a: Number, b: Number) -> Number:
        """Exact integral over [a, b] (a <= b)."""
        if a == b:
            return 0 * a
        return self.primitive(b) - self.primitive(a)

    def primitive(self, x: Number) -> Number:
        """A continuous antiderivative, zero at 0 when 0 lies in the first piece."""
        k = self._piece_at(x)
        anti, offset = self._antiderivatives[k]
        return _poly_eval(anti, x) + offset

    @property
    def _antiderivatives(self):
        cached = self.__dict__.get("_anti")
        if cached is None:
            out = []
            for i, (s, c) in enumerate(self.pieces):
                anti = _poly_antiderivative(c)
                if i == 0:
                    offset = Fraction(0)
                else:
                    prev_anti, prev_off = out[-1]
                    offset = _poly_eval(prev_anti, s) + prev_off - _poly_eval(anti, s)
                out.append((anti, offset))
            cached = tuple(out)
            object.__setattr__(self, "_anti", cached)
        return cached

    def is_increasing_on_grid(self, lo=0, hi=1, n: int = 256) -> bool:
        grid = [Fraction(lo) + (Fraction(hi) - Fraction(lo)) * k / n for k in range(n + 1)]
        vals = [self(t) for t in grid]
        return all(a <= b for a, b in zip(vals, vals[1:]))


# -- expression nodes ----------------------------------------------------------


class Node:
    """Base class of functional specs."""

    def __str__(self):
        from .dsl import to_text

        return to_text(self)


@dataclass(frozen=True, repr=False)
class Mean(Node):
    pass


@dataclass(frozen=True, repr=False)
class Var(Node):
    pass


@dataclass(frozen=True, repr=False)
class EssSup(Node):
    pass


@dataclass(frozen=True, repr=False)
class EssInf(Node):
    pass


@dataclass(frozen=True, repr=False)
class Quantile(Node):
    t: Fraction

    def __post_init__(self):
        if not 0 < self.t < 1:
            raise ValueError(f"quantile level must lie in (0, 1), got {self.t}")


@dataclass(frozen=True, repr=False)
class StopLoss(Node):
    k: Fraction


@dataclass(frozen=True, repr=False)
class ExpMoment(Node):
    a: Fraction


@dataclass(frozen=True, repr=False)
class EU(Node):
    utility: PiecewisePoly


@dataclass(frozen=True, repr=False)
class Dual(Node):
    weight: PiecewisePoly


@dataclass(frozen=True, repr=False)
class Const(Node):
    value: Fraction


@dataclass(frozen=True, repr=False)
class Neg(Node):
    arg: Node


@dataclass(frozen=True, repr=False)
class Abs(Node):
    arg: Node


@dataclass(frozen=True, repr=False)
class Pow(Node):
    base: Node
    exponent: Fraction


@dataclass(frozen=True, repr=False)
class Sum(Node):
    left: Node
    right: Node


@dataclass(frozen=True, repr=False)
class Product(Node):
    left: Node
    right: Node


@dataclass(frozen=True, repr=False)
class Quotient(Node):
    left: Node
    right: Node


Spec = Union[Mean, Var, EssSup, EssInf, Quantile, StopLoss, ExpMoment, EU, Dual, Const, Neg, Abs, Pow, Sum, Product, Quotient]


def _repr(self):
    return f"<{type(self).__name__} {self}>"


for _cls in (Mean, Var, EssSup, EssInf, Quantile, StopLoss, ExpMoment, EU, Dual, Const, Neg, Abs, Pow, Sum, Product, Quotient):
    _cls.__repr__ = _repr
