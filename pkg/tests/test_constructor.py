from __future__ import annotations

import pytest
from hypothesis import given, settings

from conftest import seeded
from rainbowmatch.construct import (
    ConstructStatus,
    FailReason,
    PeelStrategy,
    construct,
)
from rainbowmatch.generators import gen_latin
from rainbowmatch.graph import (
    Edge,
    Matching,
    Side,
    canonical_digest,
    delete_vertex,
    is_rainbow_matching,
)
from rainbowmatch.oracle import max_rainbow
from strategies import counts_valid_graphs


def test_base_case_i2(i2):
    out = construct(i2)
    assert out.status is ConstructStatus.MATCHED
    assert out.matching == Matching((Edge(0, 0, 0), Edge(1, 2, 1)))
    assert is_rainbow_matching(i2, out.matching, 2)
    assert out.trace == ()  # base case peels nothing


def test_latin_first_feasible():
    g = gen_latin(4, 3, 0)
    out = construct(g)
    assert out.status in (ConstructStatus.MATCHED, ConstructStatus.STEP_FAILED)
    if out.status is ConstructStatus.MATCHED:
        assert is_rainbow_matching(g, out.matching, 3)


def test_latin_backtracking_succeeds():
    for seed in range(20):
        g = gen_latin(4, 3, seed)
        out = construct(g, PeelStrategy.BACKTRACKING)
        assert out.status is ConstructStatus.MATCHED
        assert is_rainbow_matching(g, out.matching, 3)


def test_trace_coherence():
    g = gen_latin(4, 3, 2)
    out = construct(g, PeelStrategy.BACKTRACKING)
    assert out.status is ConstructStatus.MATCHED
    for depth, step in enumerate(out.trace):
        assert step.depth == depth
        assert step.edge in step.graph.edges
        assert step.edge.c == step.color
        assert step.edge.u == step.pivot


def test_matched_uses_peeled_colors_distinctly():
    g = gen_latin(4, 3, 4)
    out = construct(g, PeelStrategy.BACKTRACKING)
    assert out.status is ConstructStatus.MATCHED
    assert len({e.c for e in out.matching.edges}) == g.n


def test_deficit_instance_pinned(deficit_instance):
    assert canonical_digest(deficit_instance) == "2114ed8bc95ecb18"
    out = construct(deficit_instance, PeelStrategy.BACKTRACKING)
    assert out.status is ConstructStatus.STEP_FAILED
    assert out.failure.reason is FailReason.COUNT_DEFICIT
    assert out.failure.depth == 0
    assert out.failure.digest == canonical_digest(deficit_instance)
    # the instance itself is solvable, which is what makes it a finding
    assert max_rainbow(deficit_instance).max_size == 3
    # an assembled-but-unverifiable candidate is retained for analysis
    assert out.candidate is not None
    assert not is_rainbow_matching(deficit_instance, out.candidate, 3)


def test_stalled_instance_fails_cleanly(cycle_instance):
    out = construct(cycle_instance, PeelStrategy.BACKTRACKING)
    assert out.status is ConstructStatus.STEP_FAILED
    assert out.failure.reason is FailReason.REDUCTION_STALLED
    assert out.candidate is None


def test_budget_limits_attempts(deficit_instance):
    out = construct(deficit_instance, PeelStrategy.BACKTRACKING, budget=3)
    assert out.attempts <= 3
    assert out.status is ConstructStatus.STEP_FAILED


def test_invalid_inputs(i2):
    with pytest.raises(ValueError):
        construct(delete_vertex(i2, Side.LEFT, 0))
    from rainbowmatch.graph import delete_color

    with pytest.raises(ValueError):
        construct(delete_color(i2, 0))


@given(counts_valid_graphs(max_n=3))
@settings(max_examples=150, deadline=None)
def test_soundness_never_lies(g):
    if g.n < 2:
        return
    out = construct(g, PeelStrategy.BACKTRACKING, budget=64)
    if out.status is ConstructStatus.MATCHED:
        assert is_rainbow_matching(g, out.matching, g.n)
    else:
        assert out.matching is None
        assert out.failure is not None


def test_matched_on_oversized_when_possible():
    hits = 0
    for seed in range(40):
        g = seeded(3, 6, 5, seed)
        out = construct(g, PeelStrategy.BACKTRACKING)
        if out.status is ConstructStatus.MATCHED:
            assert is_rainbow_matching(g, out.matching, 3)
            hits += 1
    assert hits > 0  # some oversized instances do lift cleanly
