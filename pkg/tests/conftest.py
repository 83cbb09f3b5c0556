import os

import pytest

from szverify import groups as gr
from szverify.context import make_context

# Filled in by test_acceptance.py; printed at the end of the run.
_CRITERIA = {}


def record_criterion(n, passed, note=""):
    _CRITERIA[n] = (passed, note)


@pytest.fixture(scope="session")
def ctx8():
    return make_context(1)


@pytest.fixture(scope="session")
def ctx32():
    return make_context(2)


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    env = os.environ.get("SUZUKI_CACHE_DIR")
    if env:
        return env
    return str(tmp_path_factory.mktemp("szcache"))


@pytest.fixture(scope="session")
def group8(ctx8, cache_dir):
    return gr.get_group(ctx8, cache_dir=cache_dir, jobs=2)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        passed, note = _CRITERIA[n]
        word = "SKIP" if passed is None else ("PASS" if passed else "FAIL")
        line = f"ACCEPTANCE CRITERION {n}: {word}"
        if note:
            line += f"  ({note})"
        terminalreporter.write_line(line)
