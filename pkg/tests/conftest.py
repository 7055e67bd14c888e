import functools

import numpy as np
import pytest

from qidem.models import BUILTINS, builtin
from qidem.presubgroups import search_idempotents


@functools.lru_cache(maxsize=None)
def found(name):
    """Default-seeded search result, shared by every test in the session."""
    return search_idempotents(builtin(name))


@pytest.fixture(params=BUILTINS)
def model_name(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def record(number, title, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title}"
    ACCEPTANCE_LINES.append(line + (f" -- {detail}" if detail else ""))
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
