from __future__ import annotations

import functools

import numpy as np
import pytest

from surfhom import fusion_data as fd
from surfhom import reflection_algebra as ra

BUILTINS = ("trivial", "fib", "ising", "pointed:2:0", "pointed:2:1/2", "pointed:3:1/3")

SEMION_DOC = {
    "simples": ["1", "s"],
    "unit": "1",
    "dual": {"1": "1", "s": "s"},
    "fusion": [["1", "1", "1", 1], ["1", "s", "s", 1], ["s", "1", "s", 1], ["s", "s", "1", 1]],
    "F": [["s", "s", "s", "s", "1", "1", -1.0, 0.0]],
    "R": [["s", "s", "1", 0.0, 1.0]],
}


@functools.lru_cache(maxsize=None)
def category(name: str) -> fd.FusionData:
    if name == "semion":
        return fd.load(SEMION_DOC, name="semion")
    return fd.builtin(name)


@functools.lru_cache(maxsize=None)
def reflection(name: str) -> ra.ReflectionAlgebra:
    return ra.build_reflection_algebra(category(name))


@pytest.fixture(params=BUILTINS + ("semion",))
def any_category(request) -> fd.FusionData:
    return category(request.param)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20261016)


_CRITERIA: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" in report.nodeid and report.when == "call":
        _CRITERIA[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in sorted(_CRITERIA.items()):
        name = nodeid.split("::test_criterion_")[1]
        number, _, title = name.partition("_")
        terminalreporter.write_line(f"criterion {int(number):2d} {title.replace('_', ' ')}: {outcome.upper()}")
