"""Prints one PASS/FAIL line per acceptance criterion as the gate runs."""

from __future__ import annotations


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_c"):
        return
    number = name[6:8]
    label = name[9:].replace("_", " ")
    status = "PASS" if report.passed else "FAIL"
    print("\nACCEPTANCE %s %s: %s" % (number, status, label), flush=True)
