"""Shared pytest wiring: the acceptance marker and its pass/fail summary."""

from __future__ import annotations

import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance: end-to-end acceptance criterion (one summary line each)"
    )
    config._acceptance_rows = []


def pytest_collection_modifyitems(config, items):
    labels = {}
    for item in items:
        if item.get_closest_marker("acceptance"):
            doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
            labels[item.nodeid] = doc
    config._acceptance_labels = labels


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or not item.get_closest_marker("acceptance"):
        return
    label = item.config._acceptance_labels.get(item.nodeid, item.name)
    if report.passed:
        verdict = "PASS"
    elif report.skipped:
        verdict = "SKIP"
    else:
        verdict = "FAIL"
    item.config._acceptance_rows.append((verdict, label))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = getattr(config, "_acceptance_rows", [])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for verdict, label in rows:
        terminalreporter.write_line(f"[{verdict}] {label}")
