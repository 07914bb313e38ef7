import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from revcomp.corpus import fixture_corpus, shuttle  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"
MACHINES = Path(__file__).parent.parent / "machines"

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def corpus():
    return fixture_corpus(4) + [shuttle(4, 2)]


@pytest.fixture(scope="session")
def golden_runs():
    return json.loads((GOLDEN / "corpus_runs.json").read_text())


@pytest.fixture
def machines_dir():
    return MACHINES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
