"""Built-in preferences and the verdict profile each is expected to show.

A profile maps an audit column ("div:<class>", "anti:<class>", "weak_RA",
"weak_RS", "strong_RA", "strong_RS") to True (the property holds, so the audit
must find no violation), False (the audit must find a violation) or None (not
asserted).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .dsl import parse_preference
from .preference import Preference

CLASS_NAMES = (
    "All",
    "ID",
    "Comonotonic",
    "Antimonotonic",
    "AM_and_ID",
    "Independent",
    "IN_and_ID",
    "Exchangeable",
)
ATTITUDES = ("weak_RA", "weak_RS", "strong_RA", "strong_RS")
COLUMNS = tuple(f"div:{c}" for c in CLASS_NAMES) + tuple(f"anti:{c}" for c in CLASS_NAMES) + ATTITUDES

_CODE = {"H": True, "F": False, "-": None}


def _row(prefix: str, codes: str) -> Dict[str, Optional[bool]]:
    codes = codes.split()
    assert len(codes) == len(CLASS_NAMES)
    return {f"{prefix}:{c}": _CODE[k] for c, k in zip(CLASS_NAMES, codes)}


def _profile(div: str, anti: str, attitudes: str) -> Dict[str, Optional[bool]]:
    out = {**_row("div", div), **_row("anti", anti)}
    out.update({a: _CODE[k] for a, k in zip(ATTITUDES, attitudes.split())})
    return out


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    preference: Preference
    profile: Dict[str, Optional[bool]] = field(hash=False, compare=False)
    note: str = ""


# class order:            All ID CM AM AMID IN INID EX
_ENTRIES = [
    (
        "DualIncreasing",
        "total(dual(2*t), higher)",
        _profile("F F H F F F F F", "H H H H H H H H", "F H F H"),
        "dual utility with increasing weight: affine on comonotonic pairs, strong risk seeking",
    ),
    (
        "EssSup",
        "total(esssup, higher)",
        _profile("F F H F F H H F", "H H H H H H H H", "F H F H"),
        "essential supremum: neutral on independent pairs yet strongly risk seeking",
    ),
    (
        "MeanVariancePareto",
        "pareto([(mean, higher), (var, lower)])",
        _profile("H H H H H H H H", "F F - F F F F F", "H F H F"),
        "incomplete mean-variance order",
    ),
    (
        "WeirdVar",
        "total(mean - var * abs(2 - var), higher)",
        _profile("F F F F F F F F", "F F F F F F F F", "H F F F"),
        "weakly risk averse without diversification on antimonotonic or independent identical pairs",
    ),
    (
        "MeanVarQuarter",
        "total(mean - pow(var, 1/4), higher)",
        _profile("F H F F H F H H", "F F - F F F F F", "H F H F"),
        "strongly risk averse, diversifying only between identically distributed payoffs",
    ),
    (
        "ExpRatio",
        "total(expmom(2) / expmom(1), lower)",
        _profile("F F - - - H H F", "F F - F F F F F", "H F F F"),
        "diversifies on independent pairs but is not strongly risk averse",
    ),
    (
        "MeanOnly",
        "total(mean, higher)",
        _profile("H H H H H H H H", "H H H H H H H H", "H H H H"),
        "risk neutral",
    ),
    (
        "MeanSquared",
        "total(pow(mean, 2), higher)",
        _profile("F H F F H F H H", "H H H H H H H H", "H H H H"),
        "risk neutral, yet X and -X are equivalent and (X - X)/2 is worse",
    ),
]


def catalog() -> List[CatalogEntry]:
    """The eight built-in preferences in a fixed order."""
    return [CatalogEntry(n, parse_preference(t), p, note) for n, t, p, note in _ENTRIES]


def catalog_text() -> Dict[str, str]:
    return {n: t for n, t, _, _ in _ENTRIES}


def get(name: str) -> CatalogEntry:
    for entry in catalog():
        if entry.name.lower() == name.lower():
            return entry
    names = ", ".join(n for n, *_ in _ENTRIES)
    raise KeyError(f"unknown catalog preference {name!r}; known: {names}")
