from __future__ import annotations

import pytest

from rainbowmatch.generators import GenKind, GenSpec, gen_random
from rainbowmatch.graph import ColoredMultigraph, Edge

# Two disjoint perfect matchings on 3+3 vertices; the smallest interesting
# normal-form instance.  Digest pinned to catch canonicalization drift.
I2_EDGES = [(0, 0, 0), (1, 1, 0), (2, 2, 0), (0, 1, 1), (1, 2, 1), (2, 0, 1)]
I2_DIGEST = "027292b5e2c530b4"

# One line per acceptance criterion, echoed after the run so the verdicts
# survive pytest's output capture.
CRITERION_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.line(line)


def seeded(n: int, left: int, right: int, seed: int) -> ColoredMultigraph:
    return gen_random(GenSpec(GenKind.RANDOM, n, left, right, seed))


def snapshot_shift(g: ColoredMultigraph, pivot: int, donor: int) -> list[Edge]:
    """Reference shift semantics: decide every color's rewrite from the
    original graph at once, then apply them all."""
    out = []
    pivot_by_color = {e.c: e for e in g.edges if e.u == pivot}
    donor_by_color = {e.c: e for e in g.edges if e.u == donor}
    for e in g.edges:
        if e.u == donor:
            p = pivot_by_color.get(e.c)
            if p is None:
                out.append(Edge(pivot, e.v, e.c))  # move
            else:
                out.append(Edge(donor, p.v, e.c))  # swap, donor half
        elif e.u == pivot and e.c in donor_by_color:
            out.append(Edge(pivot, donor_by_color[e.c].v, e.c))  # swap, pivot half
        else:
            out.append(e)
    return out


@pytest.fixture
def i2() -> ColoredMultigraph:
    return ColoredMultigraph.of(2, 3, 3, I2_EDGES)


@pytest.fixture
def g43() -> ColoredMultigraph:
    # One left vertex too many; a single Move normalizes it.
    return ColoredMultigraph.of(
        2, 4, 3, [(0, 0, 0), (1, 1, 0), (2, 2, 0), (3, 0, 1), (1, 1, 1), (2, 2, 1)]
    )


@pytest.fixture
def swap_trap() -> ColoredMultigraph:
    # Under the last-vertex donor rule the first step is swap-only and the
    # procedure revisits its own state; the max-drain rule normalizes it.
    return ColoredMultigraph.of(
        2, 5, 3, [(0, 0, 0), (4, 1, 0), (1, 2, 0), (1, 0, 1), (2, 1, 1), (3, 2, 1)]
    )


@pytest.fixture
def cycle_instance() -> ColoredMultigraph:
    # Max-drain reduction enters a period-2 cycle on this one.
    return seeded(3, 6, 5, 17)


@pytest.fixture
def deficit_instance() -> ColoredMultigraph:
    # Every peel leaves the wrong right vertex standing and no candidate
    # survives verification; construction fails with CountDeficit.
    return seeded(3, 6, 5, 1)
