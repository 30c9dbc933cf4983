import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import tropfiber as tf  # noqa: E402


@pytest.fixture(scope="session")
def cp2():
    return tf.load_example("cp2")


@pytest.fixture(scope="session")
def ex2():
    return tf.load_example("blowup2a")


@pytest.fixture(scope="session")
def ex3():
    return tf.load_example("blowup2b")


@pytest.fixture(scope="session")
def blowup1():
    return tf.load_example("blowup1")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
