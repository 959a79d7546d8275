from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from virtknot.gauss import GaussCode, Pass, parse

UNKNOT = parse("()")
KINK_POS = parse("O1+U1+")
KINK_NEG = parse("O1-U1-")
TREFOIL = parse("O1+U2+O3+U1+O2+U3+")
FIGURE_EIGHT = parse("O1+U2+O3-U4-O2+U1+O4-U3-")
# Interlaced two-crossing virtual diagram; see the README note on naming.
VIRTUAL_TREFOIL = parse("O1+O2+U1+U2+")
KISHINO_STYLE = parse("O1+U2-U1+O2-O3+U4-U3+O4-")


@st.composite
def codes(draw, min_n: int = 0, max_n: int = 5) -> GaussCode:
    """Arbitrary valid signed Gauss codes with ids 1..n in random order."""
    n = draw(st.integers(min_n, max_n))
    word = [(c, o) for c in range(1, n + 1) for o in (True, False)]
    word = draw(st.permutations(word))
    signs = draw(st.lists(st.sampled_from((1, -1)), min_size=n, max_size=n))
    return GaussCode(tuple(Pass(c, o, signs[c - 1]) for c, o in word))


def seeded(seed: int) -> random.Random:
    return random.Random(seed)


# ---------------------------------------------------------------- acceptance report

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config) -> None:
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion; printed after the run."""
    lines = request.config.stash[_ACCEPTANCE]

    def record(number: int, ok: bool, detail: str) -> None:
        lines.append((number, f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}: {detail}"))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
