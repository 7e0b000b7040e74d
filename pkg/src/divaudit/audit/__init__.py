"""Falsification audits of diversification and risk attitude properties."""

from .checks import (
    CertificateError,
    check_anti_diversification,
    check_diversification,
    check_strong_risk_aversion,
    check_strong_risk_seeking,
    check_weak_risk_aversion,
    check_weak_risk_seeking,
    equalizing_shift,
    verify_certificate,
)
from .config import AuditConfig, PairClass, default_lambda_grid, scan_order
from .generators import canonical_pairs, generate_cv_pairs, generate_laws, generate_pairs
from .matrix import consistency_checks, implication_matrix
from .report import NO_VIOLATION, VIOLATED, AuditReport, MatrixReport

__all__ = [
    "CertificateError", "check_anti_diversification", "check_diversification",
    "check_strong_risk_aversion", "check_strong_risk_seeking", "check_weak_risk_aversion",
    "check_weak_risk_seeking", "equalizing_shift", "verify_certificate",
    "AuditConfig", "PairClass", "default_lambda_grid", "scan_order",
    "canonical_pairs", "generate_cv_pairs", "generate_laws", "generate_pairs",
    "consistency_checks", "implication_matrix",
    "NO_VIOLATION", "VIOLATED", "AuditReport", "MatrixReport",
]
