import pytest
from hypothesis import strategies as st

from freeacts.catalog import generate_monoids
from freeacts.monoid import cyclic_group, symmetric_group, trivial_monoid, zero_monoid

SMALL_MONOIDS = [e.monoid for k in (1, 2, 3) for e in generate_monoids(k).entries]
ORDER4_MONOIDS = [e.monoid for e in generate_monoids(4).entries]

ACCEPTANCE_LINES = []


@pytest.fixture
def trivial():
    return trivial_monoid()


@pytest.fixture
def c2():
    return cyclic_group(2)


@pytest.fixture
def c3():
    return cyclic_group(3)


@pytest.fixture
def zero():
    return zero_monoid()


@pytest.fixture
def s3():
    return symmetric_group(3)


@st.composite
def monoids(draw, pool=SMALL_MONOIDS + ORDER4_MONOIDS):
    """A catalog monoid under a random relabeling that keeps the identity at 0."""
    m = draw(st.sampled_from(pool))
    rest = draw(st.permutations(list(range(1, m.order))))
    return m.relabel((0,) + tuple(rest))


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
