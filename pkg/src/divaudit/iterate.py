"""Symmetrization sequences that push a payoff toward its mean.

``antimonotonic`` mode averages two antimonotonic copies, which at least
halves the range at each step. ``independent`` mode averages two independent
copies, so after n steps the law is that of the dyadic i.i.d. mean of 2^n
copies. Both keep the mean exactly.
"""

from __future__ import annotations

from bisect import bisect_left

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .coupling import JointDist, Tag
from .dist import DiscreteDist, mixture
from .numeric import DomainError, Number, format_number, is_exact
from .orders import coarsen, concave_order_geq

ANTIMONOTONIC = "antimonotonic"
INDEPENDENT = "independent"
MODES = (ANTIMONOTONIC, INDEPENDENT)

SUPPORT_CAP = 4096
COARSEN_TOLERANCE = 1e-6


class SupportCapExceeded(RuntimeError):
    pass


def _half(d: DiscreteDist) -> Number:
    return Fraction(1, 2) if d.exact else 0.5


def antimonotonic_pairing(d: DiscreteDist) -> List[Tuple[Number, Number, Number]]:
    """Cells (Q(U), Q(1-U), mass) over the breakpoints refined by t -> 1 - t."""
    cum = d.cumulative
    cuts = sorted({0, 1, *cum, *(1 - c for c in cum)})
    tiny = 0 if d.exact else 1e-12
    out = []
    for a, b in zip(cuts, cuts[1:]):
        if b - a <= tiny:
            continue
        m = (a + b) / 2
        out.append((d.quantile(m), d.quantile(1 - m), b - a))
    return out


def symmetrization_step(d: DiscreteDist, mode: str = ANTIMONOTONIC) -> DiscreteDist:
    """Law of (X1 + X2)/2 for two copies of ``d`` coupled as ``mode`` says."""
    half = _half(d)
    if mode == ANTIMONOTONIC:
        atoms = [((u + v) * half, m) for u, v, m in antimonotonic_pairing(d)]
    elif mode == INDEPENDENT and not d.exact:
        v = np.asarray(d.values, dtype=float)
        q = np.asarray(d.probs, dtype=float)
        return _float_law((v[:, None] + v[None, :]).ravel() * 0.5, np.outer(q, q).ravel(), d.mode.eps)
    elif mode == INDEPENDENT:
        fast = _lattice_square(d)
        if fast is not None:
            return fast
        acc: Dict[Number, Number] = {}
        for u, p in d.atoms():
            for v, q in d.atoms():
                key = (u + v) * half
                acc[key] = acc.get(key, 0) + p * q
        atoms = list(acc.items())
    else:
        raise DomainError(f"unknown symmetrization mode {mode!r}; expected one of {MODES}")
    return DiscreteDist.from_atoms(atoms, d.mode)


def _lattice_square(d: DiscreteDist, max_span: int = 1 << 16) -> Optional[DiscreteDist]:
    """Exact law of (X1 + X2)/2 for i.i.d. copies on a lattice; None if the lattice is too fine.

    With values lo + k/D and masses b_k/Q the law is the square of an integer
    polynomial, computed as one big-integer product of the coefficients packed
    into fixed-width bit slots.
    """
    D = math.lcm(*(v.denominator for v in d.values))
    lo = d.values[0]
    ks = [int((v - lo) * D) for v in d.values]
    if ks[-1] > max_span:
        return None
    Q = math.lcm(*(p.denominator for p in d.probs))
    bs = [p.numerator * (Q // p.denominator) for p in d.probs]
    width = 2 * max(b.bit_length() for b in bs) + len(ks).bit_length() + 1
    packed = sum(b << (k * width) for k, b in zip(ks, bs))
    sq = packed * packed
    mask = (1 << width) - 1
    q2 = Q * Q
    values, probs = [], []
    for m in range(2 * ks[-1] + 1):
        c = (sq >> (m * width)) & mask
        if c:
            values.append(lo + Fraction(m, 2 * D))
            probs.append(Fraction(c, q2))
    return DiscreteDist(tuple(values), tuple(probs))


def _float_law(values: np.ndarray, probs: np.ndarray, eps: float) -> DiscreteDist:
    """Sort, merge values closer than ``eps`` (weighted mean) and renormalise, vectorised."""
    keep = probs > 0
    values, probs = values[keep], probs[keep]
    order = np.argsort(values, kind="stable")
    values, probs = values[order], probs[order]
    starts = np.concatenate(([0], np.nonzero(np.diff(values) > eps)[0] + 1))
    ends = np.append(starts[1:], len(values)) - 1
    mass = np.add.reduceat(probs, starts)
    # offsets from each group's first value keep subnormal weights from skewing the centre
    base = values[starts]
    offset = np.add.reduceat((values - np.repeat(base, ends - starts + 1)) * probs, starts) / mass
    centre = np.clip(base + offset, base, values[ends])
    mass = mass / mass.sum()
    return DiscreteDist(tuple(centre.tolist()), tuple(mass.tolist()))


def lp_moment(d: DiscreteDist, p: Number, center: Number) -> Number:
    """E|X - center|^p; exact for integer p on exact laws."""
    return d.central_abs_moment(p, center)


def _root(x: Number, p: Number) -> Number:
    if p == 1:
        return x
    return float(x) ** (1.0 / float(p))


def _coarsen_to_cap(d: DiscreteDist, p: Number, cap: int) -> Tuple[DiscreteDist, Number, float]:
    """Equal-width binning with widths R, R/2, R/4, ...

    Stops at the coarsest width whose Lp perturbation ||X - E[X | bin]||_p is
    within tolerance, or at the finest width that still fits under ``cap``,
    whichever comes first. Returns (law, width, perturbation).
    """
    lo, hi = d.support_bounds()
    width = d.range_width()
    best = None
    if not d.exact:
        return _coarsen_float(d, p, cap)
    while True:
        k = math.ceil((hi - lo) / width)
        edges = [lo + width * i for i in range(k + 1)]
        edges[-1] = max(edges[-1], hi)
        out = coarsen(d, edges)
        if len(out) > cap:
            if best is None:
                raise SupportCapExceeded("no equal-width binning fits under the support cap")
            return best
        best = (out, width, _perturbation(d, edges, p))
        if best[2] <= COARSEN_TOLERANCE:
            return best
        width = width / 2


def _coarsen_float(d: DiscreteDist, p: Number, cap: int):
    v = np.asarray(d.values, dtype=float)
    q = np.asarray(d.probs, dtype=float)
    lo, width = v[0], v[-1] - v[0]
    best = None
    while True:
        idx = np.maximum(np.ceil((v - lo) / width) - 1, 0).astype(np.int64)
        starts = np.concatenate(([0], np.nonzero(np.diff(idx))[0] + 1))
        if len(starts) > cap:
            if best is None:
                raise SupportCapExceeded("no equal-width binning fits under the support cap")
            return best
        mass = np.add.reduceat(q, starts)
        centre = np.add.reduceat(v * q, starts) / mass
        spread = np.abs(v - np.repeat(centre, np.diff(np.append(starts, len(v)))))
        pert = float((q * spread ** float(p)).sum() ** (1.0 / float(p)))
        best = (_float_law(centre, mass, d.mode.eps), width, pert)
        if pert <= COARSEN_TOLERANCE:
            return best
        width /= 2


def _perturbation(d: DiscreteDist, edges, p: Number) -> float:
    groups: Dict[int, list] = {}
    for v, q in d.atoms():
        k = max(bisect_left(edges, v) - 1, 0)
        groups.setdefault(k, []).append((v, q))
    total = 0.0
    for members in groups.values():
        mass = sum(q for _, q in members)
        c = sum(v * q for v, q in members) / mass
        total += sum(float(q) * abs(float(v - c)) ** float(p) for v, q in members)
    return total ** (1.0 / float(p))


@dataclass(frozen=True)
class StepRecord:
    n: int
    dist: DiscreteDist
    range_width: Number
    sup_distance: Number
    lp_moment: Number
    lp_distance: Number
    flags: Tuple[str, ...] = ()

    def to_json(self) -> dict:
        def num(x):
            return format_number(x) if is_exact(x) else float(x)

        return {
            "n": self.n,
            "atoms": len(self.dist),
            "R": num(self.range_width),
            "sup_distance": num(self.sup_distance),
            "lp_moment": num(self.lp_moment),
            "lp_distance": num(self.lp_distance),
            "flags": list(self.flags),
        }


@dataclass
class IterationTrace:
    mode: str
    p: Number
    mean: Number
    steps: List[StepRecord] = field(default_factory=list)

    @property
    def dists(self) -> List[DiscreteDist]:
        return [s.dist for s in self.steps]

    @property
    def ranges(self) -> List[Number]:
        return [s.range_width for s in self.steps]

    def json_lines(self) -> str:
        out = []
        for s in self.steps:
            rec = {"mode": self.mode, "p": format_number(Fraction(self.p)), **s.to_json()}
            out.append(json.dumps(rec, sort_keys=False))
        return "\n".join(out)


def _record(n: int, d: DiscreteDist, mean: Number, p: Number, flags=()) -> StepRecord:
    mom = lp_moment(d, p, mean)
    return StepRecord(n, d, d.range_width(), d.sup_distance(mean), mom, _root(mom, p), tuple(flags))


def run_sequence(
    d: DiscreteDist,
    mode: str = ANTIMONOTONIC,
    n_steps: int = 10,
    p: Number = 2,
    cap: int = SUPPORT_CAP,
) -> IterationTrace:
    """Trace of n_steps symmetrization steps starting at ``d``.

    Distances are measured to the constant E[X]; mean conservation is
    asserted at each step. In independent mode a law above ``cap`` atoms is
    coarsened and the step is flagged.
    """
    if n_steps < 0:
        raise DomainError("number of steps must be nonnegative")
    if not p >= 1:
        raise DomainError(f"moment exponent must be at least 1, got {p}")
    if mode not in MODES:
        raise DomainError(f"unknown symmetrization mode {mode!r}; expected one of {MODES}")
    mean = d.mean()
    trace = IterationTrace(mode, p, mean, [_record(0, d, mean, p)])
    cur = d
    for n in range(1, n_steps + 1):
        cur = symmetrization_step(cur, mode)
        flags = []
        if len(cur) > cap:
            cur, width, pert = _coarsen_to_cap(cur, p, cap)
            flags.append(f"coarsened(width={format_number(width)}, perturbation={pert:.3g})")
            if pert > COARSEN_TOLERANCE:
                flags.append("perturbation_above_tolerance")
        if cur.exact and cur.mean() != mean:
            raise ArithmeticError(f"mean drifted at step {n}: {cur.mean()} != {mean}")
        trace.steps.append(_record(n, cur, mean, p, flags))
    return trace


def dyadic_baseline(d: DiscreteDist, n: int, p: Number = 2, cap: int = SUPPORT_CAP) -> IterationTrace:
    """Exact laws of the i.i.d. dyadic averages S_k = 2^-k (Y_1 + ... + Y_{2^k}), k <= n."""
    mean = d.mean()
    trace = IterationTrace(INDEPENDENT, p, mean, [_record(0, d, mean, p)])
    cur = d
    for k in range(1, n + 1):
        cur = symmetrization_step(cur, INDEPENDENT)
        if len(cur) > cap:
            raise SupportCapExceeded(
                f"dyadic average at step {k} has {len(cur)} atoms (cap {cap}); "
                "use fewer steps or coarsen the input law"
            )
        trace.steps.append(_record(k, cur, mean, p))
    return trace


def lln_comparison(d: DiscreteDist, n: int, p: Number = 2) -> List[dict]:
    """Per step: Lp distances of both modes and whether the antimonotonic iterate >=_cv the baseline."""
    anti = run_sequence(d, ANTIMONOTONIC, n, p)
    base = dyadic_baseline(d, n, p)
    rows = []
    for a, b in zip(anti.steps, base.steps):
        rows.append(
            {
                "n": a.n,
                "antimonotonic_lp": a.to_json()["lp_distance"],
                "iid_lp": b.to_json()["lp_distance"],
                "antimonotonic_geq_cv_iid": bool(concave_order_geq(a.dist, b.dist)),
            }
        )
    return rows


# -- conditional symmetrization under a martingale coupling -------------------------


def _conditional_laws(J: JointDist) -> List[Tuple[Number, Number, DiscreteDist]]:
    """(x, P(X = x), law of Y - x given X = x) for each row."""
    if Tag.MARTINGALE not in J.tags:
        raise DomainError("conditional symmetrization needs a martingale coupling (E[Y | X] = X)")
    out = []
    for i, x in enumerate(J.x_values):
        row = J.probs[i]
        mass = J.row_sums[i]
        atoms = [(y - x, q / mass) for y, q in zip(J.y_values, row) if q > 0]
        out.append((x, mass, DiscreteDist.from_atoms(atoms, J.mode)))
    return out


def _unconditional(rows) -> DiscreteDist:
    return mixture([(mass, z.shift(x)) for x, mass, z in rows])


def conditional_symmetrization(J: JointDist, n_steps: int) -> List[dict]:
    """Laws of Y_k = X + Z_k where each row's Z is symmetrized antimonotonically k times.

    Each record holds the step, the law of Y_k and the largest conditional range.
    """
    rows = _conditional_laws(J)
    out = []
    for k in range(n_steps + 1):
        if k:
            rows = [(x, mass, symmetrization_step(z, ANTIMONOTONIC)) for x, mass, z in rows]
        out.append(
            {
                "n": k,
                "law": _unconditional(rows),
                "max_conditional_range": max(z.range_width() for _, _, z in rows),
            }
        )
    return out


def conditional_pair_joint(J: JointDist) -> JointDist:
    """Exchangeable pair (X + Q_Z(U), X + Q_Z(1-U)) built row by row from a martingale coupling.

    Both coordinates have the y-marginal of J, and their average is the law
    after one conditional symmetrization step.
    """
    cells = []
    for x, mass, z in _conditional_laws(J):
        for u, v, m in antimonotonic_pairing(z):
            cells.append((x + u, x + v, mass * m))
    return JointDist.from_cells(cells, J.mode)
