"""Deterministic streams of test laws, coupled pairs and concave-ordered pairs.

Every stream opens with a fixed list of hand-picked cases (the small laws on
which the classic counterexamples live) and continues with seeded random
cases. Every emitted joint law carries the verified tags of its class.
"""

from __future__ import annotations

import random
import zlib
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, List, Tuple

from ..coupling import (
    JointDist,
    antimonotonic_pair,
    comonotonic_pair,
    exchange_symmetrize,
    independent_pair,
    martingale_coupling,
)
from ..dist import DiscreteDist
from ..iterate import conditional_pair_joint
from ..orders import coarsen, concave_order_geq, mean_preserving_spread, uniform_edges
from .config import AuditConfig, PairClass

F = Fraction


def _d(mapping) -> DiscreteDist:
    return DiscreteDist.from_dict({F(k): F(v) for k, v in mapping.items()})


# Small laws shared by the hand-picked cases.
LAW_A = _d({0: F(2, 3), 3: F(1, 3)})
LAW_B = _d({0: F(1, 2), 1: F(1, 2)})
LAW_C = _d({1: F(1, 2), 3: F(1, 2)})
LAW_D = _d({-1: F(1, 2), 1: F(1, 2)})
LAW_D_SPREAD = _d({F(-3, 2): F(1, 4), F(-1, 2): F(1, 4), 1: F(1, 2)})
LAW_Z_A = _d({0: F(1, 3), F(3, 2): F(2, 3)})
DELTA_0 = DiscreteDist.point_mass(0)
DELTA_1 = DiscreteDist.point_mass(1)

ID_BASES = (LAW_A, LAW_B, LAW_C, LAW_D)
NON_ID_BASES = (
    (DELTA_1, LAW_C),
    (LAW_C, LAW_C.negate()),
    (LAW_A, LAW_A.negate()),
    (DELTA_0, LAW_A),
    (DELTA_0, LAW_B),
)
# (X, Y) with X >=_cv Y
CV_BASES = (
    (LAW_D, LAW_D_SPREAD),
    (LAW_Z_A, LAW_A),
    (DiscreteDist.point_mass(2), LAW_C),
    (DiscreteDist.point_mass(LAW_A.mean()), LAW_A),
    (DiscreteDist.point_mass(F(1, 2)), LAW_B),
)


def _rng(label: str, seed: int) -> random.Random:
    return random.Random(zlib.crc32(label.encode()) + seed)


def random_dist(rng: random.Random, cfg: AuditConfig) -> DiscreteDist:
    lo, hi = cfg.support_size
    n = rng.randint(lo, hi)
    den = rng.choice(cfg.denominators)
    vmin, vmax = cfg.value_range
    values = rng.sample(range(vmin * den, vmax * den + 1), min(n, (vmax - vmin) * den + 1))
    weights = [rng.randint(1, 5) for _ in values]
    total = sum(weights)
    return DiscreteDist.from_atoms([(F(v, den), F(w, total)) for v, w in zip(values, weights)])


def random_joint(rng: random.Random, cfg: AuditConfig) -> JointDist:
    den = rng.choice(cfg.denominators)
    vmin, vmax = cfg.value_range
    xs = rng.sample(range(vmin * den, vmax * den + 1), rng.randint(1, 3))
    ys = rng.sample(range(vmin * den, vmax * den + 1), rng.randint(1, 3))
    cells = [(F(x, den), F(y, den), rng.randint(0, 4)) for x in xs for y in ys]
    if not any(w for *_, w in cells):
        cells[0] = (cells[0][0], cells[0][1], 1)
    total = sum(w for *_, w in cells)
    return JointDist.from_cells([(x, y, F(w, total)) for x, y, w in cells])


def _permutation_joint(rng: random.Random, cfg: AuditConfig) -> JointDist:
    """Uniform law on n atoms coupled through a random permutation."""
    den = rng.choice(cfg.denominators)
    vmin, vmax = cfg.value_range
    n = rng.randint(2, 4)
    values = sorted(rng.sample(range(vmin * den, vmax * den + 1), n))
    perm = list(range(n))
    rng.shuffle(perm)
    return JointDist.from_cells([(F(values[i], den), F(values[perm[i]], den), F(1, n)) for i in range(n)])


def _cv_chain(rng: random.Random, d: DiscreteDist) -> DiscreteDist:
    """One to three mean-preserving spreads of ``d``."""
    out = d
    for _ in range(rng.randint(1, 3)):
        i = rng.randrange(len(out))
        delta = F(rng.randint(1, 4), rng.choice((1, 2)))
        split = F(rng.randint(1, 3), 4)
        out = mean_preserving_spread(out, i, delta, split)
    return out


def _conditional_pair(x: DiscreteDist, y: DiscreteDist) -> JointDist:
    return conditional_pair_joint(martingale_coupling(x, y))


def _random_non_id_marginals(rng: random.Random, cfg: AuditConfig) -> Tuple[DiscreteDist, DiscreteDist]:
    kind = rng.randrange(5)
    d = random_dist(rng, cfg)
    if kind == 0:
        return d, random_dist(rng, cfg)
    if kind == 1:
        return d, d.negate()
    if kind == 2:
        return d, d.shift(F(rng.randint(1, 4), rng.choice(cfg.denominators)))
    if kind == 3:
        return DiscreteDist.point_mass(F(rng.randint(*cfg.value_range))), d
    return d, _cv_chain(rng, d)


# -- hand-picked cases per class ---------------------------------------------------


def _exchangeable_canonical() -> List[JointDist]:
    out = []
    for d in ID_BASES:
        out += [antimonotonic_pair(d, d), independent_pair(d, d), comonotonic_pair(d, d)]
    out += [_conditional_pair(LAW_D, LAW_D_SPREAD), _conditional_pair(LAW_Z_A, LAW_A)]
    return out


def canonical_pairs(cls: PairClass) -> List[JointDist]:
    am_id = [antimonotonic_pair(d, d) for d in ID_BASES]
    in_id = [independent_pair(d, d) for d in ID_BASES]
    cm_id = [comonotonic_pair(d, d) for d in ID_BASES]
    am = [antimonotonic_pair(x, y) for x, y in NON_ID_BASES] + am_id
    ind = [independent_pair(x, y) for x, y in NON_ID_BASES] + in_id
    cm = [comonotonic_pair(x, y) for x, y in NON_ID_BASES] + cm_id
    table = {
        PairClass.AM_AND_ID: am_id,
        PairClass.IN_AND_ID: in_id,
        PairClass.EXCHANGEABLE: _exchangeable_canonical(),
        PairClass.ID: am_id + in_id + _exchangeable_canonical(),
        PairClass.ANTIMONOTONIC: am,
        PairClass.INDEPENDENT: ind,
        PairClass.COMONOTONIC: cm,
        PairClass.ALL: am + ind + cm + _exchangeable_canonical(),
    }
    seen, out = set(), []
    for J in table[cls]:
        if J not in seen:
            seen.add(J)
            out.append(J)
    return out


# -- random cases per class ----------------------------------------------------------


def _random_pair(cls: PairClass, rng: random.Random, cfg: AuditConfig) -> JointDist:
    if cls is PairClass.AM_AND_ID:
        d = random_dist(rng, cfg)
        return antimonotonic_pair(d, d)
    if cls is PairClass.IN_AND_ID:
        d = random_dist(rng, cfg)
        return independent_pair(d, d)
    if cls is PairClass.EXCHANGEABLE:
        k = rng.randrange(6)
        if k == 0:
            return exchange_symmetrize(random_joint(rng, cfg))
        d = random_dist(rng, cfg)
        if k == 1:
            return comonotonic_pair(d, d)
        if k == 2:
            return antimonotonic_pair(d, d)
        if k == 3:
            return independent_pair(d, d)
        if k == 4:
            return _conditional_pair(d, _cv_chain(rng, d))
        return _conditional_pair(DiscreteDist.point_mass(d.mean()), d)
    if cls is PairClass.ID:
        k = rng.randrange(3)
        if k == 0:
            return _permutation_joint(rng, cfg)
        if k == 1:
            return exchange_symmetrize(random_joint(rng, cfg))
        return _random_pair(rng.choice((PairClass.AM_AND_ID, PairClass.IN_AND_ID, PairClass.EXCHANGEABLE)), rng, cfg)
    if cls in (PairClass.ANTIMONOTONIC, PairClass.INDEPENDENT, PairClass.COMONOTONIC):
        couple: Callable = {
            PairClass.ANTIMONOTONIC: antimonotonic_pair,
            PairClass.INDEPENDENT: independent_pair,
            PairClass.COMONOTONIC: comonotonic_pair,
        }[cls]
        if rng.random() < 0.25:
            d = random_dist(rng, cfg)
            return couple(d, d)
        return couple(*_random_non_id_marginals(rng, cfg))
    # ALL
    k = rng.randrange(4)
    if k == 0:
        return random_joint(rng, cfg)
    return _random_pair(
        rng.choice((PairClass.ANTIMONOTONIC, PairClass.INDEPENDENT, PairClass.COMONOTONIC, PairClass.ID)), rng, cfg
    )


def _to_mode(J: JointDist, cfg: AuditConfig) -> JointDist:
    if cfg.mode.exact:
        return J
    return JointDist.from_cells(J.cells(), cfg.mode)


def generate_pairs(cls: PairClass, cfg: AuditConfig) -> Iterator[JointDist]:
    """Up to ``cfg.budget`` joint laws, each carrying the tags ``cls`` requires."""
    return iter(_pair_list(PairClass(cls), cfg))


@lru_cache(maxsize=64)
def _pair_list(cls: PairClass, cfg: AuditConfig) -> Tuple[JointDist, ...]:
    # the stream does not depend on the preference, so one list serves every audit
    out: List[JointDist] = []
    for J in canonical_pairs(cls):
        if len(out) >= cfg.budget:
            return tuple(out)
        J = _to_mode(J, cfg)
        if J.has(*cls.required_tags):
            out.append(J)
    rng = _rng(f"pairs:{cls.value}", cfg.seed)
    attempts = 0
    while len(out) < cfg.budget and attempts < 50 * cfg.budget:
        attempts += 1
        J = _to_mode(_random_pair(cls, rng, cfg), cfg)
        if J.has(*cls.required_tags):
            out.append(J)
    return tuple(out)


def generate_laws(cfg: AuditConfig) -> Iterator[DiscreteDist]:
    """Laws for the weak risk attitude checks."""
    emitted = 0
    for d in ID_BASES + (LAW_D_SPREAD, LAW_Z_A):
        if emitted >= cfg.budget:
            return
        emitted += 1
        yield d if cfg.mode.exact else d.to_float()
    rng = _rng("laws", cfg.seed)
    while emitted < cfg.budget:
        emitted += 1
        d = random_dist(rng, cfg)
        yield d if cfg.mode.exact else d.to_float()


def _random_cv_pair(rng: random.Random, cfg: AuditConfig) -> Tuple[DiscreteDist, DiscreteDist]:
    d = random_dist(rng, cfg)
    k = rng.randrange(4)
    if k == 0:
        return d, _cv_chain(rng, d)
    if k == 1:
        return DiscreteDist.point_mass(d.mean()), d
    if k == 2:
        width = F(rng.randint(1, 4), rng.choice((1, 2)))
        return coarsen(d, uniform_edges(d, width)), d
    from ..iterate import symmetrization_step

    return symmetrization_step(d, rng.choice(("antimonotonic", "independent"))), d


def generate_cv_pairs(cfg: AuditConfig) -> Iterator[Tuple[DiscreteDist, DiscreteDist]]:
    """(X, Y) with X >=_cv Y, each pair confirmed by the stop-loss test."""
    emitted = 0
    for x, y in CV_BASES:
        if emitted >= cfg.budget:
            return
        emitted += 1
        yield (x, y) if cfg.mode.exact else (x.to_float(), y.to_float())
    rng = _rng("cv-pairs", cfg.seed)
    while emitted < cfg.budget:
        x, y = _random_cv_pair(rng, cfg)
        if not concave_order_geq(x, y):
            raise AssertionError(f"generated pair is not concave-ordered: {x} vs {y}")
        emitted += 1
        yield (x, y) if cfg.mode.exact else (x.to_float(), y.to_float())
