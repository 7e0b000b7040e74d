"""Evaluation of functional specs on finite laws.

Results stay rational whenever every step allows it (exact laws, no
exponentials, roots that happen to be rational); otherwise they are floats.
"""

from __future__ import annotations

from functools import lru_cache

from ..dist import DiscreteDist
from ..numeric import DomainError, Number, NumericError, power
from . import ast as A


class EvaluationError(ValueError):
    """Evaluation failed at a specific node of the spec."""

    def __init__(self, node: A.Node, message: str):
        super().__init__(f"{message} (in {node})")
        self.node = node


def dual_utility(weight: A.PiecewisePoly, d: DiscreteDist) -> Number:
    """Integral of g(t) * Q(t) over (0, 1), summed over the quantile steps."""
    zero = 0 * d.probs[0]
    total = zero
    prev = weight.primitive(zero)
    for v, c in zip(d.values, d.cumulative):
        cur = weight.primitive(c)
        total += v * (cur - prev)
        prev = cur
    return total


def expected_utility(utility: A.PiecewisePoly, d: DiscreteDist) -> Number:
    return sum((p * utility(v) for v, p in d.atoms()), 0 * d.probs[0])


def _eval(spec: A.Node, d: DiscreteDist) -> Number:
    if isinstance(spec, A.Mean):
        return d.mean()
    if isinstance(spec, A.Var):
        return d.variance()
    if isinstance(spec, A.EssSup):
        return d.ess_sup()
    if isinstance(spec, A.EssInf):
        return d.ess_inf()
    if isinstance(spec, A.Quantile):
        return d.quantile(spec.t)
    if isinstance(spec, A.StopLoss):
        return d.stop_loss(spec.k)
    if isinstance(spec, A.ExpMoment):
        return d.exp_moment(spec.a)
    if isinstance(spec, A.EU):
        return expected_utility(spec.utility, d)
    if isinstance(spec, A.Dual):
        return dual_utility(spec.weight, d)
    if isinstance(spec, A.Const):
        return spec.value
    if isinstance(spec, A.Neg):
        return -evaluate(spec.arg, d)
    if isinstance(spec, A.Abs):
        return abs(evaluate(spec.arg, d))
    if isinstance(spec, A.Pow):
        base = evaluate(spec.base, d)
        try:
            return power(base, spec.exponent)
        except (DomainError, ZeroDivisionError) as exc:
            raise EvaluationError(spec, str(exc)) from None
    if isinstance(spec, A.Sum):
        return evaluate(spec.left, d) + evaluate(spec.right, d)
    if isinstance(spec, A.Product):
        return evaluate(spec.left, d) * evaluate(spec.right, d)
    if isinstance(spec, A.Quotient):
        den = evaluate(spec.right, d)
        if den == 0:
            raise EvaluationError(spec, f"denominator {spec.right} is zero")
        return evaluate(spec.left, d) / den
    raise TypeError(f"not a functional spec: {spec!r}")


@lru_cache(maxsize=200_000)
def _cached(spec: A.Node, d: DiscreteDist) -> Number:
    try:
        return _eval(spec, d)
    except NumericError as exc:
        raise EvaluationError(spec, str(exc)) from None


def evaluate(spec: A.Node, d: DiscreteDist) -> Number:
    """Value of ``spec`` on the law ``d``; depends on ``d`` only."""
    return _cached(spec, d)
