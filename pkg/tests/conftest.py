import pytest
from hypothesis import settings

from uqcanon import cartan
from uqcanon.coeff import RationalCoeff, parse_laurent
from uqcanon.crystal import build_graph
from uqcanon.pipeline import build_store

settings.register_profile("default", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("default")


def lp(text):
    return parse_laurent(text)


def rc(num, den="1"):
    return RationalCoeff(parse_laurent(num), parse_laurent(den))


def _store(name, h):
    return build_store(cartan.preset(name), h)


@pytest.fixture(scope="session")
def a1_store():
    return _store("A1", 4)


@pytest.fixture(scope="session")
def a2_store():
    return _store("A2", 6)


@pytest.fixture(scope="session")
def a2_graph(a2_store):
    return build_graph(a2_store)


@pytest.fixture(scope="session")
def db_store():
    return _store("A1-double-bond", 4)


# -- acceptance data sets ---------------------------------------------------------


@pytest.fixture(scope="session")
def a2_8():
    return _store("A2", 8)


@pytest.fixture(scope="session")
def a3_6():
    return _store("A3", 6)


@pytest.fixture(scope="session")
def db_6():
    return _store("A1-double-bond", 6)


# -- per-criterion verdicts, printed after the run ----------------------------------

_VERDICTS = {}


@pytest.fixture(scope="session")
def verdicts():
    return _VERDICTS


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_VERDICTS):
        ok, notes = _VERDICTS[k]
        line = f"criterion {k}: {'PASS' if ok else 'FAIL'}"
        if notes:
            line += " | " + "; ".join(notes)
        terminalreporter.write_line(line)
