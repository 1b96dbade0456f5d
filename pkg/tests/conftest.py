from __future__ import annotations

import pytest

from hypercolor.code import code_for
from hypercolor.hypgeo import TessellationSignature
from hypercolor.tessellation.builder import build_complex
from hypercolor.tessellation.coloring import three_color
from hypercolor.tessellation.geometric import build_geometric


@pytest.fixture(scope="session")
def bolza():
    """The geometric {8,3} complex on the genus-2 surface."""
    return build_geometric(TessellationSignature.of(8, 2))


@pytest.fixture(scope="session")
def bolza_coloring(bolza):
    return three_color(bolza)


@pytest.fixture(scope="session")
def bolza_code(bolza, bolza_coloring):
    return code_for(bolza, bolza_coloring)


@pytest.fixture(scope="session")
def code_10_2():
    return code_for(build_complex(TessellationSignature.of(10, 2)))


@pytest.fixture(scope="session")
def code_10_3():
    return code_for(build_complex(TessellationSignature.of(10, 3)))


# -- acceptance summary ---------------------------------------------------------

_CRITERIA: dict[int, list[bool]] = {}
_DETAILS: dict[int, list[str]] = {}


def note(criterion: int, text: str) -> None:
    """Attach a detail line to a criterion's summary."""
    _DETAILS.setdefault(criterion, []).append(text)


def _criterion_of(nodeid: str) -> int | None:
    name = nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return None
    return int(name[len("test_criterion_"):].split("_")[0])


def pytest_runtest_logreport(report):
    n = _criterion_of(report.nodeid)
    if n is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _CRITERIA.setdefault(n, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        outcomes = _CRITERIA[n]
        state = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(
            f"criterion {n:2d}: {state} ({sum(outcomes)}/{len(outcomes)} checks)"
        )
        for line in _DETAILS.get(n, []):
            terminalreporter.write_line(f"    {line}")
