"""Identity and inequality suites with structured reports."""
from .config import SuiteConfig, load_config
from .identities import identity_suite, rel_err
from .inequalities import inequality_suite
from .report import Case, Report, emit_report, merge_reports

__all__ = [
    "SuiteConfig",
    "load_config",
    "identity_suite",
    "rel_err",
    "inequality_suite",
    "Case",
    "Report",
    "emit_report",
    "merge_reports",
]
