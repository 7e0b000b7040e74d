"""Law-invariant functionals, their text syntax, and preferences built on them."""

from .ast import (
    EU,
    Abs,
    Const,
    Dual,
    EssInf,
    EssSup,
    ExpMoment,
    Mean,
    Neg,
    Node,
    PiecewisePoly,
    Pow,
    Product,
    Quantile,
    Quotient,
    StopLoss,
    Sum,
    Var,
)
from .catalog import CLASS_NAMES, COLUMNS, CatalogEntry, catalog
from .dsl import ParseError, parse, parse_preference, to_text
from .evaluate import EvaluationError, evaluate
from .preference import ComparisonResult, Criterion, Preference, compare

__all__ = [
    "EU", "Abs", "Const", "Dual", "EssInf", "EssSup", "ExpMoment", "Mean", "Neg", "Node",
    "PiecewisePoly", "Pow", "Product", "Quantile", "Quotient", "StopLoss", "Sum", "Var",
    "CLASS_NAMES", "COLUMNS", "CatalogEntry", "catalog",
    "ParseError", "parse", "parse_preference", "to_text",
    "EvaluationError", "evaluate",
    "ComparisonResult", "Criterion", "Preference", "compare",
]
