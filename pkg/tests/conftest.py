import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from cfxlab.models import DecisionTree, Fbdd, Perceptron  # noqa: E402


@pytest.fixture
def perceptron():
    return Perceptron((3, -2, 1), -1)


@pytest.fixture
def and_tree():
    """Class 1 iff x1 and x2, over three features."""
    return DecisionTree(3, 0, {0: (0, 10, 1), 1: (1, 12, 11)}, {10: 0, 11: 1, 12: 0})


@pytest.fixture
def identity_fbdd():
    return Fbdd(1, 0, {0: (0, 1, 2)}, {1: 0, 2: 1})


@pytest.fixture(autouse=True)
def _no_cap_override(monkeypatch):
    monkeypatch.delenv("CFXLAB_MAX_DIM", raising=False)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
