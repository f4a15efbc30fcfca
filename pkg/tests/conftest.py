from pathlib import Path

import pytest

from subcat.corpus import parse_corpus

DATA = Path(__file__).parent / "data"


@pytest.fixture
def coordination_text():
    return (DATA / "coordination.conll").read_text(encoding="utf-8")


@pytest.fixture
def coordination(coordination_text):
    return parse_corpus(coordination_text, strict=True)[0]


@pytest.fixture
def published_counts_path():
    return DATA / "published_counts.tsv"


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
