"""Searches for violations of diversification and risk attitude properties.

Each check walks a deterministic stream of cases and stops at the first
violation, which it returns as a self-contained certificate. A clean run
only means no violation was found within the budget.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from ..coupling import JointDist, convex_combine
from ..dist import DiscreteDist
from ..functionals.evaluate import EvaluationError, evaluate
from ..functionals.preference import ComparisonResult, Preference
from ..io import dist_from_json, dist_to_json, joint_from_json, joint_to_json
from ..numeric import EXACT, NumericError, NumericMode, approx_eq, is_exact, to_json_number
from ..orders import concave_order_geq
from .config import AuditConfig, PairClass, scan_order
from .generators import generate_cv_pairs, generate_laws, generate_pairs
from .report import NO_VIOLATION, VIOLATED, AuditReport

BAD = (ComparisonResult.STRICTLY_WORSE, ComparisonResult.INCOMPARABLE)
MIX_VS_COMPONENT = "mix_vs_component"
COMPONENT_VS_MIX = "component_vs_mix"

_EVAL_ERRORS = (EvaluationError, NumericError, ZeroDivisionError, OverflowError, ValueError)


@lru_cache(maxsize=100_000)
def mixed_law(J: JointDist, lam) -> DiscreteDist:
    return convex_combine(J, lam)


def _values_json(pref: Preference, d: DiscreteDist):
    vals = [to_json_number(v) for v in pref.values(d)]
    return vals[0] if pref.is_total else vals


# -- equalizing a pair ---------------------------------------------------------------


def _equivalent(pref: Preference, dX: DiscreteDist, dY: DiscreteDist, eps: float) -> bool:
    try:
        return pref.compare(dX, dY, eps) is ComparisonResult.EQUIVALENT
    except _EVAL_ERRORS:
        return False


def equalizing_shift(pref: Preference, dX: DiscreteDist, dY: DiscreteDist, eps: float = 1e-9):
    """A constant c with X + c equivalent to Y, or None.

    Tries c = 0, then the value gap of the first criterion, then a bracketed
    root of c -> U(X + c) - U(Y), rounded to a nearby simple rational when
    that is an exact solution.
    """
    if _equivalent(pref, dX, dY, eps):
        return Fraction(0) if dX.exact else 0.0
    spec = pref.criteria[0].spec
    try:
        ux, uy = evaluate(spec, dX), evaluate(spec, dY)
    except _EVAL_ERRORS:
        return None
    gap = uy - ux
    if is_exact(gap) and dX.exact:
        if _equivalent(pref, dX.shift(gap), dY, eps):
            return gap
    elif math.isfinite(float(gap)):
        g = Fraction(float(gap)) if dX.exact else float(gap)
        if _equivalent(pref, dX.shift(g), dY, eps):
            return g
    root = _root(spec, dX, float(uy), float(gap))
    if root is None:
        return None
    candidates = [Fraction(root).limit_denominator(10**6), Fraction(root)] if dX.exact else [root]
    for c in candidates:
        if _equivalent(pref, dX.shift(c), dY, eps):
            return c
    return None


def _root(spec, dX: DiscreteDist, target: float, guess: float) -> Optional[float]:
    from scipy.optimize import brentq

    def f(c: float) -> float:
        shifted = dX.shift(Fraction(c) if dX.exact else c)
        return float(evaluate(spec, shifted)) - target

    guess = guess if math.isfinite(guess) else 0.0
    try:
        f0 = f(guess)
        if f0 == 0:
            return guess
        for k in range(8):
            step = 2.0**k
            for lo, hi in ((guess - step, guess), (guess, guess + step)):
                flo, fhi = f(lo), f(hi)
                if flo == 0:
                    return lo
                if fhi == 0:
                    return hi
                if (flo < 0) != (fhi < 0):
                    return brentq(f, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    except _EVAL_ERRORS:
        return None
    return None


# -- diversification -----------------------------------------------------------------


def _lambdas(cfg: AuditConfig):
    lams = scan_order(cfg.lambda_grid)
    return lams if cfg.mode.exact else [float(x) for x in lams]


def _scan_pair(pref: Preference, J: JointDist, c, cfg: AuditConfig, relation: str):
    """First weight at which the mix of (X + c, Y) fails; returns (lambda, mix law, comparison) or None."""
    dY = J.y_marginal
    for lam in _lambdas(cfg):
        mix = mixed_law(J, lam)
        if c:
            mix = mix.shift(lam * c)
        try:
            if relation == MIX_VS_COMPONENT:
                res = pref.compare(mix, dY, cfg.mode.eps)
            else:
                res = pref.compare(dY, mix, cfg.mode.eps)
        except _EVAL_ERRORS:
            continue
        if res in BAD:
            return lam, mix, res
    return None


def _pair_audit(pref: Preference, pair_class, cfg: AuditConfig, prop: str, relation: str, shown: Preference):
    pair_class = PairClass(pair_class)
    tested = skipped = 0
    for J in generate_pairs(pair_class, cfg):
        dX, dY = J.x_marginal, J.y_marginal
        c = equalizing_shift(pref, dX, dY, cfg.mode.eps)
        if c is None:
            skipped += 1
            continue
        tested += 1
        Jc = J.shift_x(c) if c else J
        hit = _scan_pair(pref, J, c, cfg, relation)
        if hit is None:
            continue
        lam, mix, res = hit
        cert = {
            "kind": "pair",
            "property": prop,
            "class": pair_class.value,
            "x": dist_to_json(Jc.x_marginal),
            "y": dist_to_json(dY),
            "joint": joint_to_json(Jc),
            "lambda": to_json_number(lam),
            "shift": to_json_number(c),
            "relation": relation,
            "values": {
                "x": _values_json(pref, Jc.x_marginal),
                "y": _values_json(pref, dY),
                "mix": _values_json(pref, mix),
            },
            "comparison": res.value,
        }
        return AuditReport(prop, str(shown), VIOLATED, tested, cfg.seed, cfg.echo(), pair_class.value, skipped, cert)
    return AuditReport(prop, str(shown), NO_VIOLATION, tested, cfg.seed, cfg.echo(), pair_class.value, skipped)


def check_diversification(pref: Preference, pair_class, cfg: AuditConfig = AuditConfig()) -> AuditReport:
    """Search for X equivalent to Y in the class with the mix strictly worse than Y (or incomparable)."""
    return _pair_audit(pref, pair_class, cfg, "diversification", MIX_VS_COMPONENT, pref)


def check_anti_diversification(pref: Preference, pair_class, cfg: AuditConfig = AuditConfig()) -> AuditReport:
    """Search for X equivalent to Y with Y strictly worse than the mix (or incomparable)."""
    return _pair_audit(pref, pair_class, cfg, "anti_diversification", COMPONENT_VS_MIX, pref)


# -- risk attitudes ------------------------------------------------------------------


def _law_audit(pref: Preference, cfg: AuditConfig, prop: str, seeking: bool) -> AuditReport:
    tested = 0
    for d in generate_laws(cfg):
        tested += 1
        sure = DiscreteDist.point_mass(d.mean(), d.mode)
        a, b = (d, sure) if seeking else (sure, d)
        try:
            res = pref.compare(a, b, cfg.mode.eps)
        except _EVAL_ERRORS:
            continue
        if res in BAD:
            cert = {
                "kind": "law",
                "property": prop,
                "x": dist_to_json(sure),
                "y": dist_to_json(d),
                "relation": "y_vs_x" if seeking else "x_vs_y",
                "values": {"x": _values_json(pref, sure), "y": _values_json(pref, d)},
                "comparison": res.value,
            }
            return AuditReport(prop, str(pref), VIOLATED, tested, cfg.seed, cfg.echo(), None, 0, cert)
    return AuditReport(prop, str(pref), NO_VIOLATION, tested, cfg.seed, cfg.echo())


def check_weak_risk_aversion(pref: Preference, cfg: AuditConfig = AuditConfig()) -> AuditReport:
    """Search for a law strictly preferred to (or incomparable with) its mean."""
    return _law_audit(pref, cfg, "weak_risk_aversion", seeking=False)


def check_weak_risk_seeking(pref: Preference, cfg: AuditConfig = AuditConfig()) -> AuditReport:
    return _law_audit(pref, cfg, "weak_risk_seeking", seeking=True)


def _order_audit(pref: Preference, cfg: AuditConfig, prop: str, seeking: bool) -> AuditReport:
    tested = 0
    for x, y in generate_cv_pairs(cfg):
        tested += 1
        a, b = (y, x) if seeking else (x, y)
        try:
            res = pref.compare(a, b, cfg.mode.eps)
        except _EVAL_ERRORS:
            continue
        if res in BAD:
            cert = {
                "kind": "ordered_pair",
                "property": prop,
                "x": dist_to_json(x),
                "y": dist_to_json(y),
                "relation": "y_vs_x" if seeking else "x_vs_y",
                "values": {"x": _values_json(pref, x), "y": _values_json(pref, y)},
                "comparison": res.value,
            }
            return AuditReport(prop, str(pref), VIOLATED, tested, cfg.seed, cfg.echo(), None, 0, cert)
    return AuditReport(prop, str(pref), NO_VIOLATION, tested, cfg.seed, cfg.echo())


def check_strong_risk_aversion(pref: Preference, cfg: AuditConfig = AuditConfig()) -> AuditReport:
    """Search for X >=_cv Y with X strictly worse than Y (or incomparable)."""
    return _order_audit(pref, cfg, "strong_risk_aversion", seeking=False)


def check_strong_risk_seeking(pref: Preference, cfg: AuditConfig = AuditConfig()) -> AuditReport:
    return _order_audit(pref, cfg, "strong_risk_seeking", seeking=True)


CHECKS = {
    "weak_risk_aversion": check_weak_risk_aversion,
    "weak_risk_seeking": check_weak_risk_seeking,
    "strong_risk_aversion": check_strong_risk_aversion,
    "strong_risk_seeking": check_strong_risk_seeking,
}
PAIR_CHECKS = {
    "diversification": check_diversification,
    "anti_diversification": check_anti_diversification,
}


# -- certificate re-verification -------------------------------------------------------


class CertificateError(AssertionError):
    pass


def _same_values(pref: Preference, d: DiscreteDist, stored) -> bool:
    got = pref.values(d)
    stored = [stored] if pref.is_total else list(stored)
    if len(got) != len(stored):
        return False
    for g, s in zip(got, stored):
        if isinstance(s, float) or not is_exact(g):
            if not approx_eq(float(g), float(s), 1e-9):
                return False
        elif to_json_number(g) != s:
            return False
    return True


def verify_certificate(pref: Preference, cert: dict, mode: NumericMode = EXACT) -> bool:
    """Rebuild a violation from its JSON certificate alone; raise CertificateError if it does not hold."""

    def need(cond, msg):
        if not cond:
            raise CertificateError(msg)

    x = dist_from_json(cert["x"], mode, "certificate x")
    y = dist_from_json(cert["y"], mode, "certificate y")
    kind = cert["kind"]
    eps = mode.eps
    if kind == "pair":
        J = joint_from_json(cert["joint"], mode, "certificate joint")
        need(J.x_marginal.same_law(x) and J.y_marginal.same_law(y), "joint marginals differ from x and y")
        need(J.has(*PairClass(cert["class"]).required_tags), f"joint is not in class {cert['class']}")
        need(pref.compare(x, y, eps) is ComparisonResult.EQUIVALENT, "x and y are not equivalent")
        lam = Fraction(cert["lambda"]) if mode.exact else float(Fraction(cert["lambda"]))
        mix = convex_combine(J, lam)
        if cert["relation"] == MIX_VS_COMPONENT:
            res = pref.compare(mix, y, eps)
        else:
            res = pref.compare(y, mix, eps)
        need(_same_values(pref, mix, cert["values"]["mix"]), "mix value does not reproduce")
    else:
        if kind == "law":
            need(len(x) == 1 and x.values[0] == y.mean(), "x is not the point mass at the mean of y")
        elif kind == "ordered_pair":
            need(bool(concave_order_geq(x, y)), "x does not dominate y in concave order")
        else:
            raise CertificateError(f"unknown certificate kind {kind!r}")
        res = pref.compare(y, x, eps) if cert["relation"] == "y_vs_x" else pref.compare(x, y, eps)
    need(_same_values(pref, x, cert["values"]["x"]), "x value does not reproduce")
    need(_same_values(pref, y, cert["values"]["y"]), "y value does not reproduce")
    need(res.value == cert["comparison"], f"comparison is {res.value}, certificate says {cert['comparison']}")
    need(res in BAD, "comparison is not a violation")
    return True
