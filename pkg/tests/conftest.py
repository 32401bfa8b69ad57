import pytest
from hypothesis import strategies as st

from qflag import _kernels

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=sorted(_kernels.available_backends()))
def backend(request, monkeypatch):
    """Run a test once per importable kernel backend."""
    mod = _kernels.available_backends()[request.param]
    for name in ("enumerate_flag", "lookup_subfaces", "gf2_rank"):
        monkeypatch.setattr(_kernels, name, getattr(mod, name))
    return request.param


@st.composite
def digraphs(draw, max_vertices=7, min_vertices=1):
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return n, [p for p, keep in zip(pairs, mask) if keep]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
