"""Acceptance criteria 1-10, each at its stated tolerance.

Every expected number is produced here by a small independent oracle
(direct sums over atoms, binomial pmfs, brute-force kink utilities) rather
than by the library code under test.
"""

import json
import math
import random
import time
from fractions import Fraction as F

import pytest

from conftest import seeded_dist
from divaudit.audit import (
    AuditConfig,
    PairClass,
    check_diversification,
    check_strong_risk_aversion,
    implication_matrix,
    verify_certificate,
)
from divaudit.audit import checks as checks_mod
from divaudit.audit import generators as gen_mod
from divaudit.coupling import (
    InfeasibleCoupling,
    Tag,
    antimonotonic_pair,
    comonotonic_pair,
    convex_combine,
    couple,
    independent_pair,
    is_nqd,
    martingale_coupling,
    sum_law,
)
from divaudit.dist import DiscreteDist, mixture
from divaudit.functionals import ast as A
from divaudit.functionals.catalog import catalog, get
from divaudit.functionals.dsl import parse, parse_preference, to_text
from divaudit.functionals.evaluate import _cached as cached_eval
from divaudit.functionals.evaluate import evaluate
from divaudit.iterate import ANTIMONOTONIC, INDEPENDENT, dyadic_baseline, run_sequence
from divaudit.orders import concave_order_geq, mean_preserving_spread

acceptance = pytest.mark.acceptance

LAW_A = DiscreteDist.from_dict({0: F(2, 3), 3: F(1, 3)})
LAW_C = DiscreteDist.from_dict({1: F(1, 2), 3: F(1, 2)})
LAW_X4 = DiscreteDist.from_dict({-1: F(1, 2), 1: F(1, 2)})
LAW_Y4 = DiscreteDist.from_dict({F(-3, 2): F(1, 4), F(-1, 2): F(1, 4), 1: F(1, 2)})

def _mean_var(atoms):
    m = sum(v * p for v, p in atoms)
    return m, sum(p * (v - m) ** 2 for v, p in atoms)


def _weird_var_oracle(atoms):
    m, s2 = _mean_var(atoms)
    return m - s2 * abs(2 - s2)


def _exp_ratio_oracle(atoms):
    num = math.fsum(float(p) * math.exp(2 * float(v)) for v, p in atoms)
    den = math.fsum(float(p) * math.exp(float(v)) for v, p in atoms)
    return num / den


def _json_value(x):
    return x if isinstance(x, (int, float)) else F(x)


def _golden_reports():
    """The violated verdicts of criteria 1-4 as (preference, report)."""
    weird, quarter, ratio = (get(n).preference for n in ("WeirdVar", "MeanVarQuarter", "ExpRatio"))
    cfg = AuditConfig()
    return [
        (weird, check_diversification(weird, PairClass.AM_AND_ID, cfg)),
        (quarter, check_diversification(quarter, PairClass.ANTIMONOTONIC, cfg)),
        (weird, check_diversification(weird, PairClass.IN_AND_ID, cfg)),
        (ratio, check_strong_risk_aversion(ratio, cfg)),
    ]


@acceptance(1)
class TestCriterion1WeakStrange:
    def test_golden_values_and_certificate(self):
        t0 = time.perf_counter()
        pref = get("WeirdVar").preference
        spec = pref.criteria[0].spec
        z = convex_combine(antimonotonic_pair(LAW_A, LAW_A), F(1, 2))
        assert evaluate(spec, LAW_A) == _weird_var_oracle(LAW_A.atoms()) == 1
        assert evaluate(spec, z) == _weird_var_oracle(z.atoms()) == F(1, 4)
        rep = check_diversification(pref, PairClass.AM_AND_ID, AuditConfig())
        elapsed = time.perf_counter() - t0
        cert = rep.certificate
        assert rep.violated
        assert _json_value(cert["values"]["x"]) == 1 and _json_value(cert["values"]["y"]) == 1
        assert _json_value(cert["values"]["mix"]) == F(1, 4)
        assert cert["lambda"] == "1/2" and cert["class"] == "AM_and_ID"
        assert elapsed < 1.0, f"took {elapsed:.2f}s"


@acceptance(2)
class TestCriterion2MeanVariance:
    def test_antimonotonic_certificate(self):
        pref = get("MeanVarQuarter").preference
        rep = check_diversification(pref, PairClass.ANTIMONOTONIC, AuditConfig())
        cert = rep.certificate
        assert rep.violated
        assert cert["x"] == {"atoms": [{"v": 1, "p": 1}]}
        assert cert["y"] == {"atoms": [{"v": 1, "p": "1/2"}, {"v": 3, "p": "1/2"}]}
        assert cert["lambda"] == "1/2"
        assert _json_value(cert["values"]["x"]) == 1 and _json_value(cert["values"]["y"]) == 1
        oracle = 1.5 - math.sqrt(0.5)
        mix = cert["values"]["mix"]
        assert abs(mix - oracle) <= 1e-12
        # the reference figure is quoted to 10 decimals
        assert round(mix, 10) == 0.7928932188

    def test_strong_risk_aversion_holds_at_500(self):
        rep = check_strong_risk_aversion(get("MeanVarQuarter").preference, AuditConfig(budget=500))
        assert not rep.violated and rep.pairs_tested == 500


@acceptance(3)
class TestCriterion3WeakStrange2:
    def test_independent_certificate(self):
        pref = get("WeirdVar").preference
        rep = check_diversification(pref, PairClass.IN_AND_ID, AuditConfig())
        vals = rep.certificate["values"]
        assert (_json_value(vals["x"]), _json_value(vals["mix"])) == (1, 0)
        mix = convex_combine(independent_pair(LAW_A, LAW_A), F(1, 2))
        assert _weird_var_oracle(mix.atoms()) == 0


@acceptance(4)
class TestCriterion4NotStrong:
    def test_order_values_and_audit(self):
        assert concave_order_geq(LAW_X4, LAW_Y4)
        pref = get("ExpRatio").preference
        spec = pref.criteria[0].spec
        vx, vy = evaluate(spec, LAW_X4), evaluate(spec, LAW_Y4)
        oracle_x = _exp_ratio_oracle(LAW_X4.atoms())
        assert abs(math.cosh(2) / math.cosh(1) - oracle_x) <= 1e-12
        assert abs(vx - oracle_x) <= 1e-12
        assert abs(vy - _exp_ratio_oracle(LAW_Y4.atoms())) <= 1e-12
        assert vx > vy
        rep = check_strong_risk_aversion(pref, AuditConfig())
        assert rep.violated

    def test_geometric_mixing_on_independent_pairs(self):
        spec = get("ExpRatio").preference.criteria[0].spec
        rng = random.Random(404)
        grid = AuditConfig().lambda_grid
        worst = math.inf
        for _ in range(200):
            x, y = seeded_dist(rng, 4, -3, 3), seeded_dist(rng, 4, -3, 3)
            J = independent_pair(x, y)
            vx, vy = evaluate(spec, x), evaluate(spec, y)
            for lam in grid:
                bound = vx ** float(lam) * vy ** float(1 - lam)
                worst = min(worst, bound - evaluate(spec, convex_combine(J, lam)))
        assert worst >= -1e-12, worst


@acceptance(5)
class TestCriterion5RangeHalving:
    def test_thousand_laws(self):
        t0 = time.perf_counter()
        rng = random.Random(5)
        for _ in range(1000):
            d = seeded_dist(rng, 12, -10, 10, (1, 2, 3))
            trace = run_sequence(d, ANTIMONOTONIC, 40)
            r = trace.ranges
            assert all(isinstance(x, F) for x in r)
            assert all(b <= a / 2 for a, b in zip(r, r[1:]))
            last = trace.steps[-1].dist
            assert max(abs(v - d.mean()) for v in last.values) <= r[0] / F(2) ** 40
        elapsed = time.perf_counter() - t0
        assert elapsed < 30, f"took {elapsed:.1f}s"


def _ordered_or_not(rng):
    x = seeded_dist(rng, 4, -4, 4)
    k = rng.randrange(3)
    if k == 0:
        y = x
        for _ in range(rng.randint(1, 3)):
            y = mean_preserving_spread(y, rng.randrange(len(y)), F(rng.randint(1, 4), 2), F(rng.randint(1, 3), 4))
    else:
        y = seeded_dist(rng, 4, -4, 4)
        y = y.shift(x.mean() - y.mean())
    return (x, y) if k != 2 else (y, x)


@acceptance(6)
class TestCriterion6MartingaleDuality:
    def test_feasibility_matches_order(self):
        rng = random.Random(6)
        seen = {True: 0, False: 0}
        for _ in range(200):
            x, y = _ordered_or_not(rng)
            assert x.mean() == y.mean()
            try:
                J = martingale_coupling(x, y)
            except InfeasibleCoupling:
                J = None
            assert (J is not None) == bool(concave_order_geq(x, y))
            seen[J is not None] += 1
            if J is not None:
                assert J.x_marginal == x and J.y_marginal == y
                for i, xv in enumerate(J.x_values):
                    row = J.probs[i]
                    assert sum(yv * q for yv, q in zip(J.y_values, row)) == xv * sum(row)
        assert seen[True] > 20 and seen[False] > 20


def _binomial_dyadic_second_moment(n):
    m = 2**n
    mean = F(1, 2)
    return sum(F(math.comb(m, k), 2**m) * (F(k, m) - mean) ** 2 for k in range(m + 1))


@acceptance(7)
class TestCriterion7LLN:
    def test_coin_l2(self):
        coin = DiscreteDist.from_dict({0: F(1, 2), 1: F(1, 2)})
        trace = run_sequence(coin, INDEPENDENT, 6)
        for n, step in enumerate(trace.steps):
            assert step.lp_moment == _binomial_dyadic_second_moment(n) == F(1, 4) / 2**n

    def test_antimonotonic_dominates_iid(self):
        rng = random.Random(7)
        for _ in range(100):
            d = seeded_dist(rng, 4, -3, 3, (1,))
            anti = run_sequence(d, ANTIMONOTONIC, 6).dists
            base = dyadic_baseline(d, 6).dists
            for a, b in zip(anti, base):
                assert concave_order_geq(a, b)


@acceptance(8)
class TestCriterion8SumOrder:
    def test_quadruples(self):
        rng = random.Random(8)
        for _ in range(200):
            xs, ys = [], []
            for _ in range(2):
                x = seeded_dist(rng, 3, -3, 3)
                y = x
                for _ in range(rng.randint(0, 2)):
                    y = mean_preserving_spread(y, rng.randrange(len(y)), F(rng.randint(1, 3), 2), F(rng.randint(1, 3), 4))
                if rng.random() < 0.3:
                    x = DiscreteDist.point_mass(x.mean())
                assert concave_order_geq(x, y)
                xs.append(x)
                ys.append(y)
            coupling = antimonotonic_pair if rng.random() < 0.5 else independent_pair
            jx = coupling(*xs)
            assert is_nqd(jx)
            assert concave_order_geq(sum_law(jx), sum_law(independent_pair(*ys)))


def _clear_caches():
    gen_mod._pair_list.cache_clear()
    checks_mod.mixed_law.cache_clear()
    cached_eval.cache_clear()


@pytest.fixture(scope="module")
def matrix_run():
    _clear_caches()
    t0 = time.perf_counter()
    rep = implication_matrix(AuditConfig(seed=0, budget=500))
    return rep, time.perf_counter() - t0


@acceptance(9)
class TestCriterion9Matrix:
    def test_matches_profiles(self, matrix_run):
        rep, elapsed = matrix_run
        assert rep.mismatches == []
        assert not [c for c in rep.consistency if c["status"] == "fail"]
        assert rep.ok
        assert elapsed < 120, f"took {elapsed:.1f}s"

    def test_deterministic(self, matrix_run):
        rep, _ = matrix_run
        _clear_caches()
        again = implication_matrix(AuditConfig(seed=0, budget=500))
        assert json.dumps(again.to_json(), sort_keys=True) == json.dumps(rep.to_json(), sort_keys=True)


def _single_kink_geq(x, y):
    """X >=_cv Y via linear utilities +-x and every kink utility min(x, k)."""
    ex = sum(v * p for v, p in x.atoms())
    ey = sum(v * p for v, p in y.atoms())
    if ex != ey:
        return False
    for k in set(x.values) | set(y.values):
        if sum(min(v, k) * p for v, p in x.atoms()) < sum(min(v, k) * p for v, p in y.atoms()):
            return False
    return True


def _random_pw(rng):
    pieces = [(None, [F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(rng.randint(1, 3))])]
    for s in sorted(rng.sample(range(1, 10), rng.randint(0, 2))):
        pieces.append((F(s, 10), [F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]))
    return A.PiecewisePoly.build(pieces)


def _random_ast(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        k = rng.randrange(10)
        return [
            lambda: A.Mean(), lambda: A.Var(), lambda: A.EssSup(), lambda: A.EssInf(),
            lambda: A.Quantile(F(rng.randint(1, 9), 10)),
            lambda: A.StopLoss(F(rng.randint(-6, 6), rng.randint(1, 4))),
            lambda: A.ExpMoment(F(rng.randint(1, 8), 4)),
            lambda: A.EU(_random_pw(rng)),
            lambda: A.Dual(_random_pw(rng)),
            lambda: A.Const(F(rng.randint(-9, 9), rng.randint(1, 5))),
        ][k]()
    k = rng.randrange(6)
    if k == 0:
        return A.Neg(_random_ast(rng, depth - 1))
    if k == 1:
        return A.Abs(_random_ast(rng, depth - 1))
    if k == 2:
        return A.Pow(_random_ast(rng, depth - 1), F(rng.randint(0, 8), rng.randint(1, 4)))
    op = (A.Sum, A.Product, A.Quotient)[k - 3]
    return op(_random_ast(rng, depth - 1), _random_ast(rng, depth - 1))


@acceptance(10)
class TestCriterion10Properties:
    def test_order_oracle(self):
        rng = random.Random(10)
        agree_true = 0
        for _ in range(500):
            x, y = _ordered_or_not(rng)
            if rng.random() < 0.2:
                y = y.shift(F(1, 2))
            verdict = bool(concave_order_geq(x, y))
            assert verdict == _single_kink_geq(x, y)
            agree_true += verdict
        assert 50 < agree_true < 450

    def test_dsl_round_trip(self):
        for entry in catalog():
            text = str(entry.preference)
            assert parse_preference(text) == entry.preference
            assert str(parse_preference(text)) == text
        rng = random.Random(1010)
        for _ in range(200):
            spec = _random_ast(rng, 4)
            text = to_text(spec)
            assert parse(text) == spec
            assert to_text(parse(text)) == text

    def test_coupling_marginals(self):
        rng = random.Random(1011)
        for _ in range(500):
            x, y = seeded_dist(rng, 5), seeded_dist(rng, 5)
            for kind in ("comonotonic", "antimonotonic", "independent"):
                J = couple(kind, x, y)
                assert J.x_marginal == x and J.y_marginal == y
                assert J.has(Tag(kind))
            J = couple("exchangeable", x, y)
            half = mixture([(F(1, 2), x), (F(1, 2), y)])
            assert J.x_marginal == half and J.y_marginal == half and J.has(Tag.EXCHANGEABLE)
            ys = mean_preserving_spread(x, rng.randrange(len(x)), F(1, 2), F(1, 2))
            J = martingale_coupling(x, ys)
            assert J.x_marginal == x and J.y_marginal == ys and J.has(Tag.MARTINGALE)
        assert comonotonic_pair(x, x).has(Tag.ID_MARGINALS)

    def test_certificates_reverify(self, matrix_run):
        for pref, golden in _golden_reports():
            assert golden.violated
            assert verify_certificate(pref, json.loads(json.dumps(golden.certificate)))
        rep, _ = matrix_run
        by_name = {e.name: e.preference for e in catalog()}
        count = 0
        for name, cols in rep.rows.items():
            for audit in cols.values():
                if audit.violated:
                    cert = json.loads(json.dumps(audit.certificate))
                    assert verify_certificate(by_name[name], cert)
                    count += 1
        assert count > 50
