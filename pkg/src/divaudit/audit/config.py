"""Audit configuration and the dependence classes that pairs are drawn from."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Tuple

from ..coupling import Tag
from ..numeric import EXACT, NumericMode, format_number


class PairClass(str, enum.Enum):
    ALL = "All"
    ID = "ID"
    COMONOTONIC = "Comonotonic"
    ANTIMONOTONIC = "Antimonotonic"
    AM_AND_ID = "AM_and_ID"
    INDEPENDENT = "Independent"
    IN_AND_ID = "IN_and_ID"
    EXCHANGEABLE = "Exchangeable"

    @property
    def required_tags(self) -> Tuple[Tag, ...]:
        return _REQUIRED[self]

    @property
    def identically_distributed(self) -> bool:
        return Tag.ID_MARGINALS in self.required_tags or self is PairClass.EXCHANGEABLE

    @classmethod
    def parse(cls, name: str) -> "PairClass":
        aliases = {"cm": cls.COMONOTONIC, "am": cls.ANTIMONOTONIC, "in": cls.INDEPENDENT, "ex": cls.EXCHANGEABLE,
                   "am_id": cls.AM_AND_ID, "in_id": cls.IN_AND_ID}
        key = name.strip()
        for c in cls:
            if c.value.lower() == key.lower():
                return c
        if key.lower() in aliases:
            return aliases[key.lower()]
        raise ValueError(f"unknown pair class {name!r}; expected one of {', '.join(c.value for c in cls)}")


_REQUIRED = {
    PairClass.ALL: (),
    PairClass.ID: (Tag.ID_MARGINALS,),
    PairClass.COMONOTONIC: (Tag.COMONOTONIC,),
    PairClass.ANTIMONOTONIC: (Tag.ANTIMONOTONIC,),
    PairClass.AM_AND_ID: (Tag.ANTIMONOTONIC, Tag.ID_MARGINALS),
    PairClass.INDEPENDENT: (Tag.INDEPENDENT,),
    PairClass.IN_AND_ID: (Tag.INDEPENDENT, Tag.ID_MARGINALS),
    PairClass.EXCHANGEABLE: (Tag.EXCHANGEABLE,),
}


def default_lambda_grid(k: int = 16) -> Tuple[Fraction, ...]:
    return tuple(Fraction(i, k) for i in range(k + 1))


def scan_order(grid) -> list:
    """Simplest weights first: by denominator, then value (1/2 leads the interior)."""
    return sorted(grid, key=lambda lam: (Fraction(lam).limit_denominator(10**9).denominator, lam))


@dataclass(frozen=True)
class AuditConfig:
    lambda_grid: Tuple[Fraction, ...] = field(default_factory=default_lambda_grid)
    budget: int = 500
    seed: int = 0
    support_size: Tuple[int, int] = (1, 4)
    value_range: Tuple[int, int] = (-4, 4)
    denominators: Tuple[int, ...] = (1, 2)
    mode: NumericMode = EXACT

    def __post_init__(self):
        grid = tuple(Fraction(x) for x in self.lambda_grid)
        object.__setattr__(self, "lambda_grid", grid)
        if any(not 0 <= x <= 1 for x in grid):
            raise ValueError("mixing weights must lie in [0, 1]")
        for required in (Fraction(0), Fraction(1, 2), Fraction(1)):
            if required not in grid:
                raise ValueError(f"the weight grid must contain {format_number(required)}")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        lo, hi = self.support_size
        if not 1 <= lo <= hi:
            raise ValueError("support size range must satisfy 1 <= min <= max")
        if self.value_range[0] > self.value_range[1]:
            raise ValueError("empty value range")
        if not self.denominators or any(d < 1 for d in self.denominators):
            raise ValueError("denominators must be positive integers")

    def echo(self) -> dict:
        return {
            "lambda_grid": [format_number(x) for x in self.lambda_grid],
            "budget": self.budget,
            "seed": self.seed,
            "support_size": list(self.support_size),
            "value_range": list(self.value_range),
            "denominators": list(self.denominators),
            "mode": self.mode.name,
        }
