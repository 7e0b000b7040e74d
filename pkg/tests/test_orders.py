import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import dists, seeded_dist
from divaudit.dist import DiscreteDist
from divaudit.numeric import DomainError
from divaudit.orders import (
    GEQ,
    LT_OR_INCOMPARABLE,
    coarsen,
    concave_order_geq,
    increasing_convex_order_leq,
    mean_preserving_spread,
    uniform_edges,
)

X = DiscreteDist.from_dict({-1: F(1, 2), 1: F(1, 2)})
Y = DiscreteDist.from_dict({F(-3, 2): F(1, 4), F(-1, 2): F(1, 4), 1: F(1, 2)})


class TestConcaveOrder:
    def test_golden_spread(self):
        assert concave_order_geq(X, Y).relation == GEQ
        v = concave_order_geq(Y, X)
        assert v.relation == LT_OR_INCOMPARABLE and v.reason == "stop-loss"

    def test_mean_gap_has_no_witness(self):
        v = concave_order_geq(X, X.shift(1))
        assert v.reason == "mean gap" and v.witness is None

    def test_point_mass_dominates(self):
        assert concave_order_geq(DiscreteDist.point_mass(0), X)

    @given(dists())
    def test_reflexive(self, d):
        assert concave_order_geq(d, d)

    @given(dists())
    def test_mean_point_mass_is_top(self, d):
        assert concave_order_geq(DiscreteDist.point_mass(d.mean()), d)

    @given(dists(), dists())
    def test_cv_implies_equal_mean_and_smaller_variance(self, a, b):
        if concave_order_geq(a, b):
            assert a.mean() == b.mean()
            assert a.variance() <= b.variance()

    @given(dists(), dists())
    def test_icx_agrees_with_cv_under_equal_means(self, a, b):
        b = b.shift(a.mean() - b.mean())
        assert bool(concave_order_geq(a, b)) == increasing_convex_order_leq(a, b)


def _single_kink_oracle(dX, dY, grid):
    """Brute force over min(x, k) and the two linear utilities."""
    if dX.mean() != dY.mean():
        return False
    for k in grid:
        ex = sum(p * min(v, k) for v, p in dX.atoms())
        ey = sum(p * min(v, k) for v, p in dY.atoms())
        if ex < ey:
            return False
    return True


class TestOracleAgreement:
    def test_seeded_against_kink_utilities(self):
        rng = random.Random(11)
        for _ in range(200):
            a = seeded_dist(rng)
            b = seeded_dist(rng)
            if rng.random() < 0.5:
                b = b.shift(a.mean() - b.mean())
            grid = sorted(set(a.values) | set(b.values))
            assert bool(concave_order_geq(a, b)) == _single_kink_oracle(a, b, grid)


class TestSpread:
    def test_point_mass(self):
        out = mean_preserving_spread(DiscreteDist.point_mass(0), 0, 1, F(1, 2))
        assert out == DiscreteDist.from_dict({-1: F(1, 2), 1: F(1, 2)})

    def test_builds_golden_y(self):
        out = mean_preserving_spread(X, 0, F(1, 2), F(1, 2))
        assert out == Y

    @given(dists(), st.data())
    def test_spread_is_cv_smaller(self, d, data):
        i = data.draw(st.integers(0, len(d) - 1))
        delta = data.draw(st.fractions(F(1, 8), 3, max_denominator=8))
        split = data.draw(st.fractions(F(1, 10), F(9, 10), max_denominator=10))
        out = mean_preserving_spread(d, i, delta, split)
        assert concave_order_geq(d, out)
        assert out.mean() == d.mean()

    @pytest.mark.parametrize("args", [(5, 1, F(1, 2)), (0, 0, F(1, 2)), (0, 1, 1)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            mean_preserving_spread(X, *args)


class TestCoarsen:
    def test_bins_are_left_closed_first_then_right_closed(self):
        d = DiscreteDist.from_dict({0: F(1, 4), 1: F(1, 4), 2: F(1, 4), 3: F(1, 4)})
        out = coarsen(d, [0, 1, 3])
        assert out == DiscreteDist.from_dict({F(1, 2): F(1, 2), F(5, 2): F(1, 2)})

    def test_must_cover_support(self):
        with pytest.raises(DomainError):
            coarsen(X, [0, 1])

    @given(dists(), st.fractions(F(1, 4), 4, max_denominator=4))
    def test_coarsen_is_cv_larger(self, d, width):
        out = coarsen(d, uniform_edges(d, width))
        assert concave_order_geq(out, d)
        assert len(out) <= len(d)
