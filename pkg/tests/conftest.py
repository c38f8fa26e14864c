import pytest

from fitchmtt.properties import traced_corpus


@pytest.fixture(scope="session")
def corpus_decls():
    return traced_corpus()


def pytest_terminal_summary(terminalreporter):
    import sys

    lines = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
