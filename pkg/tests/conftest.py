"""Collects acceptance outcomes and prints one line per criterion at the end of the run."""

from __future__ import annotations

_OUTCOMES: dict[int, list[tuple[str, str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    n = marker.args[0]
    outcome = "FAIL" if call.excinfo is not None else "PASS"
    detail = dict(item.user_properties).get("detail", "")
    _OUTCOMES.setdefault(n, []).append((item.name, outcome, detail))


def pytest_collection_modifyitems(config, items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            # setup failures and skips should still show up as a line
            _OUTCOMES.setdefault(marker.args[0], [])


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_OUTCOMES):
        runs = _OUTCOMES[n]
        if not runs:
            terminalreporter.write_line(f"criterion {n:2d}: NOT RUN")
            continue
        status = "PASS" if all(o == "PASS" for _, o, _ in runs) else "FAIL"
        details = "; ".join(d for _, _, d in runs if d)
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {details}")
