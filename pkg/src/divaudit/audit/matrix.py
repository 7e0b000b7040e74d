"""The preference x property matrix over the built-in catalog, checked against expectations."""

from __future__ import annotations

from typing import Callable, Dict, Iterable, List, Optional

from ..functionals.catalog import COLUMNS, CatalogEntry, catalog
from .checks import CHECKS, PAIR_CHECKS, verify_certificate
from .config import AuditConfig, PairClass
from .report import NO_VIOLATION, AuditReport, MatrixReport

_ATTITUDE_CHECKS = {
    "weak_RA": "weak_risk_aversion",
    "weak_RS": "weak_risk_seeking",
    "strong_RA": "strong_risk_aversion",
    "strong_RS": "strong_risk_seeking",
}
_PAIR_PREFIX = {"div": "diversification", "anti": "anti_diversification"}


def run_column(entry: CatalogEntry, column: str, cfg: AuditConfig) -> AuditReport:
    if column in _ATTITUDE_CHECKS:
        return CHECKS[_ATTITUDE_CHECKS[column]](entry.preference, cfg)
    prefix, cls = column.split(":")
    return PAIR_CHECKS[_PAIR_PREFIX[prefix]](entry.preference, PairClass(cls), cfg)


def _holds(rep: AuditReport) -> bool:
    return rep.verdict == NO_VIOLATION


def consistency_checks(rows: Dict[str, Dict[str, AuditReport]]) -> List[dict]:
    """Cross-column implications that every preference must respect."""
    out = []

    def add(check, name, status, detail):
        out.append({"check": check, "preference": name, "status": status, "detail": detail})

    for name, r in rows.items():
        h = {col: _holds(rep) for col, rep in r.items()}
        # diversification on antimonotonic ID pairs implies weak risk aversion
        bad = h["div:AM_and_ID"] and not h["weak_RA"]
        add("am_id_div_implies_weak_ra", name, "fail" if bad else "pass",
            "div:AM_and_ID holds but weak_RA is violated" if bad else "div:AM_and_ID => weak_RA respected")
        # strong risk aversion implies diversification on ID and exchangeable pairs
        bad = h["strong_RA"] and not (h["div:ID"] and h["div:Exchangeable"])
        add("strong_ra_implies_id_div", name, "fail" if bad else "pass",
            "strong_RA holds but div on ID or Exchangeable is violated" if bad else "strong_RA => div:ID, div:Exchangeable respected")
        # risk neutrality is equivalent to diversification neutrality on ID-type classes
        neutral = h["weak_RA"] and h["weak_RS"]
        id_neutral = all(h[f"{p}:{c}"] for p in ("div", "anti") for c in ("ID", "Exchangeable", "AM_and_ID"))
        am_id_neutral = h["div:AM_and_ID"] and h["anti:AM_and_ID"]
        bad = (neutral and not id_neutral) or (am_id_neutral and not neutral)
        add("neutrality_equivalence", name, "fail" if bad else "pass",
            "risk neutrality and neutrality on ID / Exchangeable / AM_and_ID pairs disagree" if bad
            else "risk neutrality <=> diversification neutrality on ID-type classes respected")
        # independent ID diversification implies weak risk aversion only under a continuity
        # assumption with no finite-support analogue; reported, never enforced
        info = h["div:IN_and_ID"] and not h["weak_RA"]
        add("in_id_div_vs_weak_ra", name, "info",
            "div:IN_and_ID holds while weak_RA is violated (continuity assumption not met)" if info
            else "div:IN_and_ID => weak_RA consistent (consistency-checked only)")
    return out


def implication_matrix(
    cfg: AuditConfig = AuditConfig(),
    entries: Optional[Iterable[CatalogEntry]] = None,
    progress: Optional[Callable[[str, str], None]] = None,
) -> MatrixReport:
    """Run every column for every catalog preference and compare with the expected profiles."""
    entries = list(entries) if entries is not None else catalog()
    rows: Dict[str, Dict[str, AuditReport]] = {}
    mismatches = []
    for entry in entries:
        cols = {}
        for column in COLUMNS:
            if progress:
                progress(entry.name, column)
            rep = run_column(entry, column, cfg)
            cols[column] = rep
            expected = entry.profile.get(column)
            if rep.certificate is not None:
                verify_certificate(entry.preference, rep.certificate, cfg.mode)
            if expected is None:
                continue
            if expected and rep.violated:
                mismatches.append({
                    "preference": entry.name, "column": column, "expected": "holds",
                    "found": "violated", "certificate": rep.certificate,
                })
            elif not expected and not rep.violated:
                mismatches.append({
                    "preference": entry.name, "column": column, "expected": "violated",
                    "found": f"no violation in {rep.pairs_tested} cases", "certificate": None,
                })
        rows[entry.name] = cols
    return MatrixReport(
        columns=list(COLUMNS),
        rows=rows,
        expected={e.name: dict(e.profile) for e in entries},
        mismatches=mismatches,
        consistency=consistency_checks(rows),
        seed=cfg.seed,
        config=cfg.echo(),
    )
