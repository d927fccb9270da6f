from __future__ import annotations

import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
MINI = FIXTURES / "pwc-mini"
GOLDEN = FIXTURES / "golden" / "lpwc.nt"
CATALOG_MINI = FIXTURES / "catalog-mini.json"


def load_dump(name: str):
    return json.loads((MINI / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def mini_build():
    from kgforge.pipeline import build_graph

    return build_graph(MINI)


@pytest.fixture
def mini_graph(mini_build):
    from kgforge.rdf import GraphBuffer

    return GraphBuffer(mini_build.graph)


# -- acceptance criteria summary --------------------------------------------------

_CRITERIA: dict[int, tuple[str, list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    if report.when == "call" or report.outcome != "passed":
        _CRITERIA.setdefault(number, (title, []))[1].append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, outcomes = _CRITERIA[number]
        if "failed" in outcomes:
            verdict = "FAIL"
        elif all(o == "skipped" for o in outcomes):
            verdict = "SKIP"
        else:
            verdict = "PASS"
        terminalreporter.write_line(f"criterion {number:>2}: {verdict}  {title}")
