"""Preferences built from functionals: total orders and Pareto (incomplete) orders."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Tuple

from ..dist import DiscreteDist
from ..numeric import Number, cmp
from . import ast as A
from .evaluate import evaluate

HIGHER = "higher"
LOWER = "lower"


class ComparisonResult(str, enum.Enum):
    STRICTLY_BETTER = "strictly_better"
    STRICTLY_WORSE = "strictly_worse"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"

    @property
    def weakly_better(self) -> bool:
        return self in (ComparisonResult.STRICTLY_BETTER, ComparisonResult.EQUIVALENT)

    def flipped(self) -> "ComparisonResult":
        swap = {
            ComparisonResult.STRICTLY_BETTER: ComparisonResult.STRICTLY_WORSE,
            ComparisonResult.STRICTLY_WORSE: ComparisonResult.STRICTLY_BETTER,
        }
        return swap.get(self, self)


@dataclass(frozen=True)
class Criterion:
    spec: A.Node
    direction: str = HIGHER

    def __post_init__(self):
        if self.direction not in (HIGHER, LOWER):
            raise ValueError(f"direction must be 'higher' or 'lower', got {self.direction!r}")

    def oriented_cmp(self, a: Number, b: Number, eps: float) -> int:
        """+1 when value ``a`` is better than ``b`` under this direction."""
        c = cmp(a, b, eps)
        return c if self.direction == HIGHER else -c

    def __str__(self):
        return f"({self.spec}, {self.direction})"


@dataclass(frozen=True)
class Preference:
    """``kind`` is "total" (one criterion) or "pareto" (one or more)."""

    kind: str
    criteria: Tuple[Criterion, ...]

    def __post_init__(self):
        if self.kind not in ("total", "pareto"):
            raise ValueError(f"unknown preference kind {self.kind!r}")
        if not self.criteria:
            raise ValueError("a preference needs at least one criterion")
        if self.kind == "total" and len(self.criteria) != 1:
            raise ValueError("a total preference has exactly one criterion")

    @classmethod
    def total(cls, spec: A.Node, direction: str = HIGHER) -> "Preference":
        return cls("total", (Criterion(spec, direction),))

    @classmethod
    def pareto(cls, items: Iterable[Tuple[A.Node, str]]) -> "Preference":
        return cls("pareto", tuple(Criterion(s, d) for s, d in items))

    @property
    def is_total(self) -> bool:
        return self.kind == "total"

    def values(self, d: DiscreteDist) -> Tuple[Number, ...]:
        return tuple(evaluate(c.spec, d) for c in self.criteria)

    def compare_values(self, vx, vy, eps: float = 1e-9) -> ComparisonResult:
        signs = {c.oriented_cmp(a, b, eps) for c, a, b in zip(self.criteria, vx, vy)}
        if signs == {0}:
            return ComparisonResult.EQUIVALENT
        if -1 not in signs:
            return ComparisonResult.STRICTLY_BETTER
        if 1 not in signs:
            return ComparisonResult.STRICTLY_WORSE
        return ComparisonResult.INCOMPARABLE

    def compare(self, dX: DiscreteDist, dY: DiscreteDist, eps: float = 1e-9) -> ComparisonResult:
        """How X ranks against Y. Exact values compare exactly; floats within ``eps``."""
        return self.compare_values(self.values(dX), self.values(dY), eps)

    def reversed(self) -> "Preference":
        flip = {HIGHER: LOWER, LOWER: HIGHER}
        return Preference(self.kind, tuple(Criterion(c.spec, flip[c.direction]) for c in self.criteria))

    def __str__(self):
        if self.is_total:
            c = self.criteria[0]
            return f"total({c.spec}, {c.direction})"
        return "pareto([" + ", ".join(str(c) for c in self.criteria) + "])"


def compare(pref: Preference, dX: DiscreteDist, dY: DiscreteDist, eps: float = 1e-9) -> ComparisonResult:
    return pref.compare(dX, dY, eps)
