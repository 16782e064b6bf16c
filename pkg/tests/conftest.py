import pytest

from capentropy.io import parse_structure
from capentropy.setsystem import SetSystem

L1_TEXT = """\
lattice
elements g d e f b c a
g d
g e
g f
d b
e b
e c
f c
b a
c a
"""

PENTAGON_TEXT = """\
lattice
elements 0 a b c 1
0 a
a b
b 1
0 c
c 1
"""

DIAMOND_TEXT = """\
lattice
elements 0 x y z 1
0 x
0 y
0 z
x 1
y 1
z 1
"""

CHAIN3_TEXT = """\
lattice
elements a b c
a b
b c
"""


@pytest.fixture
def s1():
    return SetSystem.from_labels(3, ["-", "1", "3", "12", "13", "23", "123"])


@pytest.fixture
def s2():
    return SetSystem.from_labels(3, ["-", "1", "3", "12", "23", "123"])


@pytest.fixture
def remark_system():
    # Jordan-Dedekind but not regular
    return SetSystem.from_labels(3, ["-", "12", "3", "123"])


@pytest.fixture
def four_player():
    return SetSystem.from_labels(4, ["-", "1", "12", "3", "34", "1234"])


@pytest.fixture
def l1():
    return parse_structure(L1_TEXT)


@pytest.fixture
def eta_l1():
    return SetSystem.from_labels(3, ["-", "d", "e", "f", "de", "ef", "def"], players="def")


@pytest.fixture
def pentagon():
    return parse_structure(PENTAGON_TEXT)


@pytest.fixture
def diamond():
    return parse_structure(DIAMOND_TEXT)


@pytest.fixture
def chain3():
    return parse_structure(CHAIN3_TEXT)


# acceptance summary: test_acceptance appends (name, passed, detail)
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  ({detail})")
