import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import dists
from divaudit.dist import DiscreteDist
from divaudit.functionals import ast as A
from divaudit.functionals.catalog import CLASS_NAMES, COLUMNS, catalog, get
from divaudit.functionals.dsl import parse, parse_preference
from divaudit.functionals.evaluate import EvaluationError, dual_utility, evaluate
from divaudit.functionals.preference import ComparisonResult, Preference

LAW_A = DiscreteDist.from_dict({0: F(2, 3), 3: F(1, 3)})
LAW_D = DiscreteDist.from_dict({-1: F(1, 2), 1: F(1, 2)})
LAW_Z = DiscreteDist.from_dict({0: F(1, 3), F(3, 2): F(2, 3)})


class TestEvaluate:
    def test_weird_var_golden(self):
        spec = get("WeirdVar").preference.criteria[0].spec
        assert evaluate(spec, LAW_A) == 1
        assert evaluate(spec, LAW_Z) == F(1, 4)

    def test_quantile_and_stop_loss(self):
        assert evaluate(parse("quantile(1/2)"), LAW_A) == 0
        assert evaluate(parse("stoploss(1)"), LAW_A) == F(2, 3)

    def test_exp_ratio_matches_cosh(self):
        value = evaluate(parse("expmom(2) / expmom(1)"), LAW_D)
        assert value == pytest.approx(math.cosh(2) / math.cosh(1), abs=1e-12)

    def test_dual_with_unit_weight_is_mean(self):
        assert evaluate(parse("dual(1)"), LAW_A) == LAW_A.mean()

    def test_dual_increasing_weight_favours_upper_tail(self):
        # integral of 2t * Q(t) over (2/3, 1) times 3
        assert evaluate(parse("dual(2*t)"), LAW_A) == 3 * (1 - F(4, 9))

    def test_dual_piecewise_matches_split_weights(self):
        w = A.PiecewisePoly.build([(None, [0, 2]), (F(1, 2), [1])])
        d = DiscreteDist.from_dict({0: F(1, 4), 1: F(1, 4), 2: F(1, 2)})
        # Q = 0 on (0,1/4], 1 on (1/4,1/2], 2 on (1/2,1)
        expected = 1 * (F(1, 4) - F(1, 16)) + 2 * F(1, 2)
        assert dual_utility(w, d) == expected

    def test_eu(self):
        assert evaluate(parse("eu(x^2)"), LAW_A) == 3

    def test_rational_root_stays_exact(self):
        assert evaluate(parse("pow(var, 1/2)"), DiscreteDist.from_dict({0: F(1, 2), 2: F(1, 2)})) == 1

    def test_division_by_zero(self):
        with pytest.raises(EvaluationError, match="zero"):
            evaluate(parse("mean / var"), DiscreteDist.point_mass(1))

    def test_negative_base_root(self):
        with pytest.raises(EvaluationError):
            evaluate(parse("pow(mean, 1/2)"), DiscreteDist.point_mass(-1))

    @given(dists())
    def test_linear_identities(self, d):
        assert evaluate(parse("mean - mean"), d) == 0
        assert evaluate(parse("esssup - essinf"), d) == d.range_width()
        assert evaluate(parse("eu(x^2) - pow(mean, 2)"), d) == d.variance()

    @given(dists(), st.fractions(-3, 3, max_denominator=4))
    def test_dual_is_translation_equivariant(self, d, c):
        spec = parse("dual(2*t)")
        assert evaluate(spec, d.shift(c)) == evaluate(spec, d) + c

    def test_float_mode(self):
        assert evaluate(parse("var"), LAW_A.to_float()) == pytest.approx(2.0)


class TestPreference:
    def test_total(self):
        p = parse_preference("total(mean, higher)")
        assert p.compare(LAW_A, DiscreteDist.point_mass(0)) is ComparisonResult.STRICTLY_BETTER
        assert p.compare(LAW_A, DiscreteDist.point_mass(1)) is ComparisonResult.EQUIVALENT

    def test_pareto_incomparable(self):
        p = get("MeanVariancePareto").preference
        riskier_richer = DiscreteDist.from_dict({0: F(1, 2), 4: F(1, 2)})
        assert p.compare(riskier_richer, DiscreteDist.point_mass(1)) is ComparisonResult.INCOMPARABLE

    def test_reversed(self):
        p = get("EssSup").preference
        r = p.reversed()
        assert r.compare(LAW_A, LAW_D) is p.compare(LAW_A, LAW_D).flipped()
        assert r.reversed() == p

    def test_validation(self):
        with pytest.raises(ValueError):
            Preference("total", ())
        with pytest.raises(ValueError):
            Preference("lexicographic", (get("MeanOnly").preference.criteria[0],))

    @given(dists(), dists())
    def test_antisymmetry(self, a, b):
        for entry in catalog():
            try:
                ab = entry.preference.compare(a, b)
                ba = entry.preference.compare(b, a)
            except EvaluationError:
                continue
            assert ab is ba.flipped()


class TestCatalog:
    def test_eight_entries_with_full_profiles(self):
        entries = catalog()
        assert len(entries) == 8
        assert len(COLUMNS) == 2 * len(CLASS_NAMES) + 4
        for e in entries:
            assert set(e.profile) == set(COLUMNS)

    def test_lookup_is_case_insensitive(self):
        assert get("weirdvar").name == "WeirdVar"
        with pytest.raises(KeyError):
            get("Nope")

    def test_mean_squared_treats_x_and_minus_x_alike(self):
        p = get("MeanSquared").preference
        assert p.compare(LAW_A, LAW_A.negate()) is ComparisonResult.EQUIVALENT
        assert p.compare(DiscreteDist.point_mass(0), LAW_A) is ComparisonResult.STRICTLY_WORSE
