"""Finite-support toolkit for couplings, stochastic orders, risk functionals and diversification audits."""

from .coupling import (
    InfeasibleCoupling,
    JointDist,
    Tag,
    antimonotonic_pair,
    comonotonic_pair,
    convex_combine,
    couple,
    exchange_symmetrize,
    independent_pair,
    martingale_coupling,
    sum_law,
)
from .dist import DiscreteDist, mixture
from .numeric import EXACT, FLOAT, DomainError, NumericError, NumericMode
from .orders import OrderVerdict, coarsen, concave_order_geq, increasing_convex_order_leq, mean_preserving_spread

__version__ = "0.1.0"

__all__ = [
    "InfeasibleCoupling", "JointDist", "Tag", "antimonotonic_pair", "comonotonic_pair", "convex_combine",
    "couple", "exchange_symmetrize", "independent_pair", "martingale_coupling", "sum_law",
    "DiscreteDist", "mixture", "EXACT", "FLOAT", "DomainError", "NumericError", "NumericMode",
    "OrderVerdict", "coarsen", "concave_order_geq", "increasing_convex_order_leq", "mean_preserving_spread",
]
