import numpy as np
import pytest
from hypothesis import strategies as st

from flamelets import PersistenceDiagram


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_diagram(rng, k, convention="sublevel", dim=0, scale=1.0):
    births = rng.uniform(0, scale, k)
    deaths = births + rng.uniform(0, scale, k)
    pairs = list(zip(births, deaths)) if convention == "sublevel" else list(zip(deaths, births))
    return PersistenceDiagram(pairs, dim, convention)


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def diagrams(draw, max_size=4):
    n = draw(st.integers(0, max_size))
    pairs = []
    for _ in range(n):
        b = draw(st.floats(-5, 5, allow_nan=False))
        pairs.append((b, b + draw(st.floats(0, 5, allow_nan=False))))
    return PersistenceDiagram(pairs)


# acceptance report: one line per criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def acceptance_line(number, name: str, ok: bool, detail: str) -> str:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name} -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
