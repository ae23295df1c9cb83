"""Suite-wide hooks: one visible verdict line per acceptance criterion."""

from __future__ import annotations

import sys


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        verdict = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {name}: {verdict}", file=sys.stderr)
    elif report.when == "setup" and report.skipped:
        reason = report.longrepr[2] if isinstance(report.longrepr, tuple) else "skipped"
        print(f"\nACCEPTANCE {name}: SKIPPED ({reason})", file=sys.stderr)
