import re
from pathlib import Path

import pytest

from titlegen.corpus import document_from_text, load_stopwords
from titlegen.deptree import FixtureParser, parse_conllu

FIXTURES = Path(__file__).parent / "fixtures"
PARSES = FIXTURES / "parses"
CORPUS = FIXTURES / "corpus"


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


@pytest.fixture(scope="session")
def fixture_parser():
    return FixtureParser(PARSES)


@pytest.fixture(scope="session")
def trees():
    """Fixture parses by sent_id."""
    out = {}
    for path in sorted(PARSES.glob("*.conllu")):
        for tree in parse_conllu(path.read_text(encoding="utf-8")):
            out[tree.sent_id] = tree
    return out


def load_article(category, name):
    path = CORPUS / category / f"{name}.txt"
    return document_from_text(f"{category}/{name}", path.read_text(encoding="utf-8"), category)


@pytest.fixture(scope="session")
def article():
    return load_article


# one PASS/FAIL line per acceptance criterion in the terminal summary
_criteria = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        ok = report.outcome == "passed"
        _criteria[n] = _criteria.get(n, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if _criteria[n] else 'FAIL'}")


# Reference titles with the fixture node ids each one keeps.
EXAMPLE_TITLES = {
    "blogs": ("Blogging movement building up for years", {2, 3, 6, 7, 8, 10}),
    "daylewis": ("Japan's oldest film studio honoured with Day-Lewis", {1, 2, 3, 4, 5, 9, 11, 12}),
    "smoking": ("Comprehensive ban on smoking in public places in Scotland", {2, 3, 4, 5, 6, 9, 10, 11, 12}),
    "xbox": ("Microsoft sold 19.9 million units worldwide", {4, 6, 7, 8, 9, 10}),
}
