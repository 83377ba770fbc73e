"""Verification harness: relation suites, closed-form image checks, CLI."""

from .cases import RelationCase, enumerate_cases, expected_case_count
from .report import Report
from .suites import (
    suite_appendix,
    suite_cyclicity_adjunction,
    suite_decategorified,
    suite_relation_preservation,
)

__all__ = [
    "RelationCase",
    "Report",
    "enumerate_cases",
    "expected_case_count",
    "suite_relation_preservation",
    "suite_appendix",
    "suite_cyclicity_adjunction",
    "suite_decategorified",
]
