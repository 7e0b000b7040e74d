"""Joint laws of payoff pairs and the dependence structures between them.

Every :class:`JointDist` carries ``tags``: the set of dependence kinds that
its probability matrix actually satisfies. Tags are computed from the matrix,
never declared, so a tag is always a certificate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import accumulate
from typing import Callable, Dict, FrozenSet, Iterable, List, Sequence, Tuple

from . import _lp
from .dist import DiscreteDist
from .numeric import EXACT, DomainError, Number, NumericMode, approx_eq, is_exact, to_fraction


class Tag(str, enum.Enum):
    COMONOTONIC = "comonotonic"
    ANTIMONOTONIC = "antimonotonic"
    INDEPENDENT = "independent"
    EXCHANGEABLE = "exchangeable"
    NQD = "NQD"
    MARTINGALE = "martingale"
    ID_MARGINALS = "ID-marginals"


class CouplingKind(str, enum.Enum):
    COMONOTONIC = "comonotonic"
    ANTIMONOTONIC = "antimonotonic"
    INDEPENDENT = "independent"
    EXCHANGEABLE_SYMMETRIZED = "exchangeable"


class InfeasibleCoupling(Exception):
    """No martingale coupling exists for the requested marginals."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail


@dataclass(frozen=True)
class JointDist:
    """Finite joint law of (X, Y) on the grid ``x_values`` x ``y_values``.

    Grids are the supports of the two marginals: strictly increasing, and
    every row and column carries positive mass.
    """

    x_values: Tuple[Number, ...]
    y_values: Tuple[Number, ...]
    probs: Tuple[Tuple[Number, ...], ...]

    def __post_init__(self):
        if len(self.probs) != len(self.x_values) or any(len(r) != len(self.y_values) for r in self.probs):
            raise ValueError("probability matrix does not match the grids")
        for grid in (self.x_values, self.y_values):
            if not grid:
                raise ValueError("empty grid")
            for a, b in zip(grid, grid[1:]):
                if not a < b:
                    raise ValueError("grid values must be strictly increasing")
        if any(p < 0 for r in self.probs for p in r):
            raise ValueError("negative probability in joint matrix")
        total = sum(sum(r) for r in self.probs)
        if self.exact:
            if total != 1:
                raise ValueError(f"joint mass is {total}, not 1")
        elif abs(total - 1) > 1e-12:
            raise ValueError(f"joint mass is {total!r}, not 1")
        if any(s == 0 for s in self.row_sums) or any(s == 0 for s in self.col_sums):
            raise ValueError("every grid value must carry positive marginal mass")

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.x_values, self.y_values, self.probs))
            object.__setattr__(self, "_hash", h)
        return h

    @classmethod
    def from_cells(cls, cells: Iterable[Tuple[Number, Number, Number]], mode: NumericMode = EXACT) -> "JointDist":
        """Build from (x, y, p) triples; duplicates add up, zero cells vanish."""
        mass: Dict[Tuple[Number, Number], Number] = {}
        for x, y, p in cells:
            x, y, p = mode.coerce(x), mode.coerce(y), mode.coerce(p)
            if p < 0:
                raise ValueError(f"negative probability at ({x}, {y})")
            if p:
                mass[(x, y)] = mass.get((x, y), 0) + p
        if not mass:
            raise ValueError("joint law has no mass")
        xs = _merge_grid(sorted({x for x, _ in mass}), mode)
        ys = _merge_grid(sorted({y for _, y in mass}), mode)
        xi, yi = _grid_index(xs, mode), _grid_index(ys, mode)
        zero = mode.coerce(0)
        mat = [[zero] * len(ys) for _ in xs]
        for (x, y), p in mass.items():
            mat[xi(x)][yi(y)] += p
        if not mode.exact:
            total = sum(map(sum, mat))
            mat = [[p / total for p in r] for r in mat]
        return cls(tuple(xs), tuple(ys), tuple(tuple(r) for r in mat))

    @classmethod
    def from_matrix(cls, x_values, y_values, probs, mode: NumericMode = EXACT) -> "JointDist":
        cells = ((x, y, p) for x, row in zip(x_values, probs) for y, p in zip(y_values, row))
        return cls.from_cells(cells, mode)

    # -- views ---------------------------------------------------------------

    @cached_property
    def exact(self) -> bool:
        return is_exact(*self.x_values, *self.y_values, *(p for r in self.probs for p in r))

    @property
    def mode(self) -> NumericMode:
        return EXACT if self.exact else NumericMode(False)

    @cached_property
    def row_sums(self) -> Tuple[Number, ...]:
        return tuple(sum(r) for r in self.probs)

    @cached_property
    def col_sums(self) -> Tuple[Number, ...]:
        return tuple(sum(col) for col in zip(*self.probs))

    @cached_property
    def x_marginal(self) -> DiscreteDist:
        return DiscreteDist.from_atoms(zip(self.x_values, self.row_sums), self.mode)

    @cached_property
    def y_marginal(self) -> DiscreteDist:
        return DiscreteDist.from_atoms(zip(self.y_values, self.col_sums), self.mode)

    def cells(self) -> List[Tuple[Number, Number, Number]]:
        return [
            (x, y, p)
            for x, row in zip(self.x_values, self.probs)
            for y, p in zip(self.y_values, row)
            if p
        ]

    def transpose(self) -> "JointDist":
        return JointDist(self.y_values, self.x_values, tuple(zip(*self.probs)))

    def shift_x(self, c: Number) -> "JointDist":
        """Joint law of (X + c, Y); preserves every dependence tag except ID/exchangeability."""
        return JointDist(tuple(x + c for x in self.x_values), self.y_values, self.probs)

    def pushforward(self, f: Callable[[Number, Number], Number]) -> DiscreteDist:
        """Law of f(X, Y)."""
        return DiscreteDist.from_atoms(((f(x, y), p) for x, y, p in self.cells()), self.mode)

    def __repr__(self):
        inner = ", ".join(f"({x}, {y}): {p}" for x, y, p in self.cells())
        return f"JointDist({{{inner}}})"

    # -- certificates ----------------------------------------------------------

    @cached_property
    def tags(self) -> FrozenSet[Tag]:
        return frozenset(tag for tag, check in _VERIFIERS.items() if check(self))

    def has(self, *tags: Tag) -> bool:
        return all(Tag(t) in self.tags for t in tags)


def _merge_grid(values: List[Number], mode: NumericMode) -> List[Number]:
    if mode.exact:
        return values
    out: List[Number] = []
    for v in values:
        if not out or v - out[-1] > mode.eps:
            out.append(v)
    return out


def _grid_index(grid: Sequence[Number], mode: NumericMode):
    if mode.exact:
        pos = {v: i for i, v in enumerate(grid)}
        return pos.__getitem__
    from bisect import bisect_right

    def index(v):
        i = bisect_right(grid, v + mode.eps) - 1
        return max(i, 0)

    return index


# -- tag verifiers -------------------------------------------------------------


def _tol(J: JointDist) -> float:
    return 0 if J.exact else 1e-9


def _support_indices(J: JointDist) -> List[Tuple[int, int]]:
    tol = _tol(J)
    return [(i, j) for i, r in enumerate(J.probs) for j, p in enumerate(r) if p > tol]


def is_comonotonic(J: JointDist) -> bool:
    """Support is a chain: no two support cells are strictly discordant."""
    js = [j for _, j in sorted(_support_indices(J))]
    return all(a <= b for a, b in zip(js, js[1:]))


def is_antimonotonic(J: JointDist) -> bool:
    js = [j for _, j in sorted(_support_indices(J), key=lambda ij: (ij[0], -ij[1]))]
    return all(a >= b for a, b in zip(js, js[1:]))


def is_independent(J: JointDist) -> bool:
    eps = _tol(J) or 1e-9
    return all(
        approx_eq(p, J.row_sums[i] * J.col_sums[j], eps)
        for i, r in enumerate(J.probs)
        for j, p in enumerate(r)
    )


def is_exchangeable(J: JointDist) -> bool:
    if len(J.x_values) != len(J.y_values):
        return False
    eps = _tol(J) or 1e-9
    if not all(approx_eq(a, b, eps) for a, b in zip(J.x_values, J.y_values)):
        return False
    n = len(J.x_values)
    return all(approx_eq(J.probs[i][j], J.probs[j][i], eps) for i in range(n) for j in range(i + 1, n))


def is_nqd(J: JointDist) -> bool:
    """P(X<=x, Y<=y) <= P(X<=x) P(Y<=y) at every grid point."""
    tol = _tol(J)
    fx = list(accumulate(J.row_sums))
    fy = list(accumulate(J.col_sums))
    running = [0] * len(J.y_values)
    for i, row in enumerate(J.probs):
        running = [a + b for a, b in zip(running, row)]
        joint = list(accumulate(running))
        for j, h in enumerate(joint):
            if h > fx[i] * fy[j] + tol:
                return False
    return True


def is_martingale(J: JointDist) -> bool:
    """E[Y | X = x] = x on every row."""
    eps = _tol(J) or 1e-9
    scale = max(abs(v) for v in (*J.x_values, *J.y_values)) or 1
    for x, row, px in zip(J.x_values, J.probs, J.row_sums):
        lhs = sum(p * y for y, p in zip(J.y_values, row))
        if J.exact:
            if lhs != x * px:
                return False
        elif abs(lhs - x * px) > eps * float(scale):
            return False
    return True


def has_id_marginals(J: JointDist) -> bool:
    return J.x_marginal.same_law(J.y_marginal)


_VERIFIERS = {
    Tag.COMONOTONIC: is_comonotonic,
    Tag.ANTIMONOTONIC: is_antimonotonic,
    Tag.INDEPENDENT: is_independent,
    Tag.EXCHANGEABLE: is_exchangeable,
    Tag.NQD: is_nqd,
    Tag.MARTINGALE: is_martingale,
    Tag.ID_MARGINALS: has_id_marginals,
}


def verify_tags(J: JointDist, claimed: Iterable[str]) -> None:
    """Raise ValueError naming any claimed tag the matrix does not satisfy."""
    bad = []
    for t in claimed:
        try:
            tag = Tag(t)
        except ValueError:
            raise ValueError(f"unknown tag {t!r}") from None
        if tag not in J.tags:
            bad.append(tag.value)
    if bad:
        raise ValueError(f"joint law fails claimed tag(s): {', '.join(bad)}")


# -- constructors ----------------------------------------------------------------


def _common_mode(*ds: DiscreteDist) -> NumericMode:
    return EXACT if all(d.exact for d in ds) else NumericMode(False)


def _quantile_coupling(dX: DiscreteDist, dY: DiscreteDist, reflect: bool) -> JointDist:
    """Couple through one uniform U: (Q_X(U), Q_Y(U)) or (Q_X(U), Q_Y(1-U))."""
    mode = _common_mode(dX, dY)
    cy = [1 - c for c in dY.cumulative] if reflect else list(dY.cumulative)
    cuts = sorted({0, 1, *dX.cumulative, *cy})
    cells = []
    for a, b in zip(cuts, cuts[1:]):
        if b - a <= (0 if mode.exact else 1e-12):
            continue
        m = (a + b) / 2
        cells.append((dX.quantile(m), dY.quantile(1 - m if reflect else m), b - a))
    return JointDist.from_cells(cells, mode)


def comonotonic_pair(dX: DiscreteDist, dY: DiscreteDist) -> JointDist:
    return _quantile_coupling(dX, dY, reflect=False)


def antimonotonic_pair(dX: DiscreteDist, dY: DiscreteDist) -> JointDist:
    return _quantile_coupling(dX, dY, reflect=True)


def independent_pair(dX: DiscreteDist, dY: DiscreteDist) -> JointDist:
    mode = _common_mode(dX, dY)
    probs = tuple(tuple(p * q for q in dY.probs) for p in dX.probs)
    if mode.exact:
        return JointDist(dX.values, dY.values, probs)
    return JointDist.from_matrix(dX.values, dY.values, probs, mode)


def exchange_symmetrize(J: JointDist) -> JointDist:
    """(J + J^T) / 2 on the union grid."""
    half = Fraction(1, 2) if J.exact else 0.5
    cells = [(x, y, p * half) for x, y, p in J.cells()] + [(y, x, p * half) for x, y, p in J.cells()]
    return JointDist.from_cells(cells, J.mode)


def couple(kind: CouplingKind | str, dX: DiscreteDist, dY: DiscreteDist) -> JointDist:
    kind = CouplingKind(kind)
    if kind is CouplingKind.COMONOTONIC:
        return comonotonic_pair(dX, dY)
    if kind is CouplingKind.ANTIMONOTONIC:
        return antimonotonic_pair(dX, dY)
    if kind is CouplingKind.INDEPENDENT:
        return independent_pair(dX, dY)
    return exchange_symmetrize(independent_pair(dX, dY))


def martingale_coupling(dX: DiscreteDist, dY: DiscreteDist) -> JointDist:
    """A joint law of (X', Y') with the given marginals and E[Y' | X'] = X'.

    Exists iff X >= Y in concave order. Solved as a linear feasibility
    problem: exact rational simplex for exact inputs, HiGHS for floats.
    Raises :class:`InfeasibleCoupling` otherwise.
    """
    exact = dX.exact and dY.exact
    mx, my = dX.mean(), dY.mean()
    if not approx_eq(mx, my, 0 if exact else 1e-9):
        raise InfeasibleCoupling("mean gap", f"E[X]={mx}, E[Y]={my}")
    nx, ny = len(dX), len(dY)
    A, b = [], []
    for i in range(nx):  # row sums
        A.append([int(k // ny == i) for k in range(nx * ny)])
        b.append(dX.probs[i])
    for j in range(ny):  # column sums
        A.append([int(k % ny == j) for k in range(nx * ny)])
        b.append(dY.probs[j])
    for i in range(nx):  # conditional means
        A.append([dY.values[k % ny] if k // ny == i else 0 for k in range(nx * ny)])
        b.append(dX.values[i] * dX.probs[i])
    if exact:
        sol = _lp.feasible_point(A, b)
    else:
        sol = _float_feasible(A, b)
    if sol is None:
        raise InfeasibleCoupling("not in concave order", "no martingale coupling exists")
    probs = [[sol[i * ny + j] for j in range(ny)] for i in range(nx)]
    if exact:
        J = JointDist(dX.values, dY.values, tuple(tuple(r) for r in probs))
    else:
        J = JointDist.from_matrix(dX.values, dY.values, probs, NumericMode(False))
    if Tag.MARTINGALE not in J.tags:
        raise InfeasibleCoupling("numerical failure", "solver output fails the martingale check")
    return J


def _float_feasible(A, b):
    import numpy as np
    from scipy.optimize import linprog

    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    res = linprog(np.zeros(A.shape[1]), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    if res.status != 0:
        return None
    return [max(float(v), 0.0) for v in res.x]


def convex_combine(J: JointDist, lam: Number) -> DiscreteDist:
    """Law of lam*X + (1 - lam)*Y under the coupling J."""
    if not 0 <= lam <= 1:
        raise DomainError(f"mixing weight must lie in [0, 1], got {lam}")
    if J.exact and is_exact(lam):
        lam = to_fraction(lam)
    else:
        lam = float(lam)
    if lam == 1:
        return J.x_marginal
    if lam == 0:
        return J.y_marginal
    mu = 1 - lam
    return J.pushforward(lambda x, y: lam * x + mu * y)


def sum_law(J: JointDist) -> DiscreteDist:
    """Law of X + Y under the coupling J."""
    return J.pushforward(lambda x, y: x + y)
