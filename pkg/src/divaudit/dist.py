"""Finite-support probability distributions.

A :class:`DiscreteDist` is the law of a bounded payoff: strictly increasing
atom values with positive probabilities summing to one. In exact mode every
entry is a :class:`~fractions.Fraction`; in float mode entries are floats and
atoms closer than ``eps`` are merged at construction.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Tuple

from .numeric import (
    EXACT,
    DomainError,
    Number,
    NumericError,
    NumericMode,
    approx_eq,
    is_exact,
)

Atom = Tuple[Number, Number]


@dataclass(frozen=True)
class DiscreteDist:
    values: Tuple[Number, ...]
    probs: Tuple[Number, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("a distribution needs at least one atom")
        if len(self.values) != len(self.probs):
            raise ValueError("values and probs differ in length")
        for a, b in zip(self.values, self.values[1:]):
            if not a < b:
                raise ValueError(f"atom values must be strictly increasing ({a} !< {b})")
        for p in self.probs:
            if not p > 0:
                raise ValueError(f"probabilities must be positive, got {p}")
        total = sum(self.probs)
        if self.exact:
            if total != 1:
                raise ValueError(f"probabilities sum to {total}, not 1")
        elif abs(total - 1) > 1e-12:
            raise ValueError(f"probabilities sum to {total!r}, not 1")

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.values, self.probs))
            object.__setattr__(self, "_hash", h)
        return h

    # -- construction -----------------------------------------------------

    @classmethod
    def from_atoms(cls, atoms: Iterable[Atom], mode: NumericMode = EXACT) -> "DiscreteDist":
        """Build from (value, prob) pairs, sorting and merging duplicate values.

        Zero-probability atoms are dropped. In float mode values within
        ``mode.eps`` are merged at their probability-weighted mean and the
        probabilities are renormalised.
        """
        pairs = []
        exact = mode.exact
        for v, p in atoms:
            if not (exact and type(v) is Fraction and type(p) is Fraction):
                v, p = mode.coerce(v), mode.coerce(p)
            if p < 0:
                raise ValueError(f"negative probability {p} at value {v}")
            if p != 0:
                pairs.append((v, p))
        if not pairs:
            raise ValueError("a distribution needs at least one atom")
        pairs.sort(key=lambda vp: vp[0])
        merged: list = []
        for v, p in pairs:
            if merged and (v == merged[-1][0] or (not mode.exact and v - merged[-1][0] <= mode.eps)):
                v0, p0 = merged[-1]
                merged[-1] = (v0 if v == v0 else v0 + (v - v0) * (p / (p0 + p)), p0 + p)
            else:
                merged.append((v, p))
        total = sum(p for _, p in merged)
        if mode.exact:
            if total != 1:
                raise ValueError(f"probabilities sum to {total}, not 1")
        else:
            if abs(total - 1) > 1e-9:
                raise ValueError(f"probabilities sum to {total!r}, not 1")
            merged = [(v, p / total) for v, p in merged]
        return cls(tuple(v for v, _ in merged), tuple(p for _, p in merged))

    @classmethod
    def point_mass(cls, c, mode: NumericMode = EXACT) -> "DiscreteDist":
        return cls((mode.coerce(c),), (mode.coerce(1),))

    @classmethod
    def from_dict(cls, mapping: dict, mode: NumericMode = EXACT) -> "DiscreteDist":
        return cls.from_atoms(mapping.items(), mode)

    # -- basic views ------------------------------------------------------

    @cached_property
    def exact(self) -> bool:
        return is_exact(*self.values, *self.probs)

    @property
    def mode(self) -> NumericMode:
        return EXACT if self.exact else NumericMode(False)

    def atoms(self):
        return list(zip(self.values, self.probs))

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        inner = ", ".join(f"{v}: {p}" for v, p in self.atoms())
        return f"DiscreteDist({{{inner}}})"

    @cached_property
    def cumulative(self) -> Tuple[Number, ...]:
        """P(X <= v_i) for each atom; the last entry is exactly 1 in exact mode."""
        out, acc = [], 0
        for p in self.probs:
            acc += p
            out.append(acc)
        if self.exact:
            out[-1] = Fraction(1)
        return tuple(out)

    @property
    def is_degenerate(self) -> bool:
        return len(self.values) == 1

    # -- quantiles and moments -------------------------------------------

    def cdf(self, x: Number) -> Number:
        i = bisect_right(self.values, x)
        return self.cumulative[i - 1] if i else 0

    def quantile(self, t: Number) -> Number:
        """Left quantile: the smallest atom v with P(X <= v) >= t."""
        if not 0 < t < 1:
            raise DomainError(f"quantile level must lie in (0, 1), got {t}")
        cum = self.cumulative
        if not self.exact or not is_exact(t):
            t = t - 1e-12
        i = bisect_left(cum, t)
        return self.values[min(i, len(self.values) - 1)]

    @cached_property
    def _mean(self) -> Number:
        return sum(v * p for v, p in zip(self.values, self.probs))

    def mean(self) -> Number:
        return self._mean

    def variance(self) -> Number:
        m = self._mean
        var = sum(p * (v - m) ** 2 for v, p in zip(self.values, self.probs))
        return var if self.exact else max(var, 0.0)

    def support_bounds(self) -> Tuple[Number, Number]:
        return self.values[0], self.values[-1]

    def range_width(self) -> Number:
        return self.values[-1] - self.values[0]

    def ess_sup(self) -> Number:
        return self.values[-1]

    def ess_inf(self) -> Number:
        return self.values[0]

    def stop_loss(self, k: Number) -> Number:
        """E[(X - k)+]."""
        zero = Fraction(0) if self.exact and is_exact(k) else 0.0
        return sum((p * (v - k) for v, p in zip(self.values, self.probs) if v > k), zero)

    def exp_moment(self, a: Number) -> float:
        """E[exp(a X)] in floating point; overflow names the atom."""
        total = 0.0
        for v, p in zip(self.values, self.probs):
            try:
                total += float(p) * math.exp(float(a * v))
            except OverflowError:
                raise NumericError(f"exp({a}*{v}) overflows at atom {v}") from None
        if not math.isfinite(total):
            raise NumericError(f"E[exp({a}X)] is not finite")
        return total

    def central_abs_moment(self, p: Number, center: Number | None = None) -> Number:
        """E|X - center|^p, exact for integer p in exact mode."""
        c = self._mean if center is None else center
        if self.exact and is_exact(c) and Fraction(p).denominator == 1:
            k = int(p)
            return sum(q * abs(v - c) ** k for v, q in zip(self.values, self.probs))
        return sum(float(q) * abs(float(v - c)) ** float(p) for v, q in zip(self.values, self.probs))

    def sup_distance(self, center: Number | None = None) -> Number:
        c = self._mean if center is None else center
        return max(abs(self.values[0] - c), abs(self.values[-1] - c))

    # -- transformations ---------------------------------------------------

    def map(self, f: Callable[[Number], Number]) -> "DiscreteDist":
        """Law of f(X)."""
        return DiscreteDist.from_atoms(((f(v), p) for v, p in self.atoms()), self._construction_mode())

    def shift(self, c: Number) -> "DiscreteDist":
        if self.exact and type(c) is Fraction:
            # order and probabilities are preserved exactly; skip re-validation
            out = object.__new__(DiscreteDist)
            object.__setattr__(out, "values", tuple(v + c for v in self.values))
            object.__setattr__(out, "probs", self.probs)
            return out
        return self.map(lambda v: v + c)

    def negate(self) -> "DiscreteDist":
        return self.map(lambda v: -v)

    def to_float(self) -> "DiscreteDist":
        return DiscreteDist.from_atoms(self.atoms(), NumericMode(False))

    def same_law(self, other: "DiscreteDist", eps: float = 1e-9) -> bool:
        if len(self) != len(other):
            return False
        return all(
            approx_eq(a, b, eps) and approx_eq(p, q, eps)
            for (a, p), (b, q) in zip(self.atoms(), other.atoms())
        )

    def _construction_mode(self) -> NumericMode:
        return EXACT if self.exact else NumericMode(False)


def mixture(parts: Iterable[Tuple[Number, DiscreteDist]], mode: NumericMode | None = None) -> DiscreteDist:
    """Probability mixture sum_i w_i * law_i."""
    parts = list(parts)
    if mode is None:
        mode = EXACT if all(d.exact and is_exact(w) for w, d in parts) else NumericMode(False)
    return DiscreteDist.from_atoms(((v, w * p) for w, d in parts for v, p in d.atoms()), mode)
