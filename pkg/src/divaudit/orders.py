"""Stochastic orders between finite-support laws, and generators of ordered pairs.

Stop-loss transforms of finite laws are piecewise linear with kinks only at
atoms, so checking dominance on the union of the two supports is exact.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .dist import DiscreteDist
from .numeric import DomainError, Number, approx_eq, cmp, is_exact

GEQ = "geq"
LT_OR_INCOMPARABLE = "lt_or_incomparable"


@dataclass(frozen=True)
class OrderVerdict:
    """Outcome of a concave-order test.

    ``witness`` is a kink point where the stop-loss dominance fails; it is
    only set when the means agree (a mean gap needs no witness).
    """

    relation: str
    witness: Optional[Number] = None
    reason: Optional[str] = None

    def __bool__(self):
        return self.relation == GEQ


def _eps(*ds: DiscreteDist) -> float:
    return 0 if all(d.exact for d in ds) else 1e-9


def _kinks(dX: DiscreteDist, dY: DiscreteDist):
    return sorted(set(dX.values) | set(dY.values))


def concave_order_geq(dX: DiscreteDist, dY: DiscreteDist) -> OrderVerdict:
    """X >=_cv Y: equal means and E[(Y-k)+] >= E[(X-k)+] at every kink k."""
    eps = _eps(dX, dY)
    if not approx_eq(dX.mean(), dY.mean(), eps):
        return OrderVerdict(LT_OR_INCOMPARABLE, reason="mean gap")
    kinks = _kinks(dX, dY)
    for k, sy, sx in zip(kinks, _stop_losses(dY, kinks), _stop_losses(dX, kinks)):
        if cmp(sy, sx, eps) < 0:
            return OrderVerdict(LT_OR_INCOMPARABLE, witness=k, reason="stop-loss")
    return OrderVerdict(GEQ)


def _stop_losses(d: DiscreteDist, kinks) -> list:
    """E[(X - k)+] at each k, from suffix sums of mass and first moment."""
    mass, first = [0] * (len(d) + 1), [0] * (len(d) + 1)
    for i in range(len(d) - 1, -1, -1):
        mass[i] = mass[i + 1] + d.probs[i]
        first[i] = first[i + 1] + d.probs[i] * d.values[i]
    out = []
    for k in kinks:
        i = bisect_right(d.values, k)
        out.append(first[i] - k * mass[i])
    return out


def increasing_convex_order_leq(dX: DiscreteDist, dY: DiscreteDist) -> bool:
    """X <=_icx Y: E[(X-k)+] <= E[(Y-k)+] at every kink, with no mean condition."""
    eps = _eps(dX, dY)
    kinks = _kinks(dX, dY)
    return all(cmp(sx, sy, eps) <= 0 for sx, sy in zip(_stop_losses(dX, kinks), _stop_losses(dY, kinks)))


def mean_preserving_spread(d: DiscreteDist, atom_index: int, delta: Number, split: Number) -> DiscreteDist:
    """Split atom (v, p) into (v + a, split*p) and (v - b, (1-split)*p).

    With a = 2*delta*(1-split) and b = 2*delta*split the conditional mean of
    the two new atoms is v, so the result sits below ``d`` in concave order.
    """
    if not 0 <= atom_index < len(d):
        raise DomainError(f"atom index {atom_index} out of range for {len(d)} atoms")
    if not delta > 0:
        raise DomainError(f"spread size must be positive, got {delta}")
    if not 0 < split < 1:
        raise DomainError(f"split must lie in (0, 1), got {split}")
    mode = d.mode
    delta, split = mode.coerce(delta), mode.coerce(split)
    v, p = d.values[atom_index], d.probs[atom_index]
    a, b = 2 * delta * (1 - split), 2 * delta * split
    atoms = [vp for i, vp in enumerate(d.atoms()) if i != atom_index]
    atoms += [(v + a, split * p), (v - b, (1 - split) * p)]
    out = DiscreteDist.from_atoms(atoms, mode)
    if not concave_order_geq(d, out):
        raise ArithmeticError("spread failed its concave-order self-check")
    return out


def coarsen(d: DiscreteDist, bin_edges: Sequence[Number]) -> DiscreteDist:
    """Conditional expectation of X given the bin it falls in.

    Bins are [e0, e1], (e1, e2], ..., (e_{m-1}, e_m] and must cover the
    support. Each bin's atoms collapse to their probability-weighted mean.
    """
    edges = list(bin_edges)
    if len(edges) < 2:
        raise DomainError("need at least two bin edges")
    if any(not a < b for a, b in zip(edges, edges[1:])):
        raise DomainError("bin edges must be strictly increasing")
    lo, hi = d.support_bounds()
    if lo < edges[0] or hi > edges[-1]:
        raise DomainError(f"bins [{edges[0]}, {edges[-1]}] do not cover the support [{lo}, {hi}]")
    groups: dict = {}
    for v, p in d.atoms():
        k = max(bisect_left(edges, v) - 1, 0)
        groups.setdefault(k, []).append((v, p))
    atoms = []
    for members in groups.values():
        mass = sum(p for _, p in members)
        atoms.append((sum(v * p for v, p in members) / mass, mass))
    return DiscreteDist.from_atoms(atoms, d.mode)


def uniform_edges(d: DiscreteDist, width: Number) -> list:
    """Edges of equal-width bins starting at the minimum atom and covering the support."""
    lo, hi = d.support_bounds()
    if not width > 0:
        raise DomainError("bin width must be positive")
    if is_exact(width, lo):
        width = Fraction(width)
    edges = [lo]
    while edges[-1] < hi:
        edges.append(edges[-1] + width)
    if len(edges) == 1:
        edges.append(lo + width)
    return edges
