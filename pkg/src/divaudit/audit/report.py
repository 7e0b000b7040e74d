"""Audit reports: verdict, optional certificate, counts and the config echo."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

SCHEMA = "divaudit.audit-report/1"
MATRIX_SCHEMA = "divaudit.matrix-report/1"

VIOLATED = "violated"
NO_VIOLATION = "no_violation_within_budget"


@dataclass
class AuditReport:
    property: str
    preference: str
    verdict: str
    pairs_tested: int
    seed: int
    config: Dict[str, Any]
    pair_class: Optional[str] = None
    pairs_skipped: int = 0
    certificate: Optional[Dict[str, Any]] = None

    def __post_init__(self):
        if (self.verdict == VIOLATED) != (self.certificate is not None):
            raise ValueError("a certificate must be present exactly when the verdict is 'violated'")

    @property
    def violated(self) -> bool:
        return self.verdict == VIOLATED

    @property
    def column(self) -> str:
        return column_name(self.property, self.pair_class)

    def to_json(self) -> dict:
        out = {
            "schema": SCHEMA,
            "property": self.property,
            "class": self.pair_class,
            "preference": self.preference,
            "verdict": self.verdict,
            "pairs_tested": self.pairs_tested,
            "pairs_skipped": self.pairs_skipped,
            "seed": self.seed,
            "config": self.config,
            "certificate": self.certificate,
        }
        return out

    def table(self) -> str:
        rows = [
            ("property", self.column),
            ("preference", self.preference),
            ("verdict", self.verdict),
            ("pairs tested", str(self.pairs_tested)),
            ("pairs skipped", str(self.pairs_skipped)),
            ("seed", str(self.seed)),
        ]
        cert = self.certificate
        if cert:
            for key in ("lambda", "shift", "relation", "comparison"):
                if key in cert:
                    rows.append((key, str(cert[key])))
            for key, value in cert.get("values", {}).items():
                rows.append((f"value[{key}]", str(value)))
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


_SHORT = {
    "diversification": "div",
    "anti_diversification": "anti",
    "weak_risk_aversion": "weak_RA",
    "weak_risk_seeking": "weak_RS",
    "strong_risk_aversion": "strong_RA",
    "strong_risk_seeking": "strong_RS",
}
PROPERTIES = tuple(_SHORT)


def column_name(prop: str, pair_class: Optional[str]) -> str:
    short = _SHORT[prop]
    return f"{short}:{pair_class}" if pair_class else short


@dataclass
class MatrixReport:
    columns: List[str]
    rows: Dict[str, Dict[str, AuditReport]]
    expected: Dict[str, Dict[str, Optional[bool]]]
    mismatches: List[dict] = field(default_factory=list)
    consistency: List[dict] = field(default_factory=list)
    seed: int = 0
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches and all(c["status"] != "fail" for c in self.consistency)

    def to_json(self) -> dict:
        return {
            "schema": MATRIX_SCHEMA,
            "seed": self.seed,
            "config": self.config,
            "columns": self.columns,
            "rows": {
                name: {col: rep.to_json() for col, rep in cols.items()} for name, cols in self.rows.items()
            },
            "mismatches": self.mismatches,
            "consistency": self.consistency,
            "ok": self.ok,
        }

    def table(self) -> str:
        mark = {True: "pass", False: "FAIL"}
        header = ["preference"] + self.columns
        body = []
        for name, cols in self.rows.items():
            line = [name]
            for col in self.columns:
                rep = cols[col]
                cell = mark[not rep.violated]
                exp = self.expected[name].get(col)
                if exp is not None and exp == rep.violated:
                    cell += "!"
                line.append(cell)
            body.append(line)
        widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
        fmt = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()  # noqa: E731
        out = [fmt(header), fmt(["-" * w for w in widths])] + [fmt(r) for r in body]
        out.append("")
        out.append("pass = no violation within budget; FAIL = violated with certificate; ! = differs from expected profile")
        for c in self.consistency:
            out.append(f"[{c['status']}] {c['check']} {c['preference']}: {c['detail']}")
        out.append(f"mismatches: {len(self.mismatches)}")
        return "\n".join(out)
