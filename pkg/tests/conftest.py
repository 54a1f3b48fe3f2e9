import random

import pytest
from hypothesis import strategies as st

from extremal_ga.graph import Graph


@st.composite
def graphs(draw, min_n=1, max_n=8, directed=None):
    n = draw(st.integers(min_n, max_n))
    d = draw(st.booleans()) if directed is None else directed
    if d:
        slots = [(u, v) for u in range(n) for v in range(n) if u != v]
    else:
        slots = [(u, v) for u in range(n) for v in range(u + 1, n)]
    bits = draw(st.lists(st.booleans(), min_size=len(slots), max_size=len(slots)))
    return Graph.from_arcs(n, [s for s, b in zip(slots, bits) if b], d)


@st.composite
def graph_and_perm(draw, **kw):
    g = draw(graphs(**kw))
    p = draw(st.permutations(list(range(g.n))))
    return g, p


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
