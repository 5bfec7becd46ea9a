from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbowmatch.generators import (
    GenKind,
    GenSpec,
    count_instances,
    count_matchings,
    enumerate_instances,
    gen_latin,
    gen_random,
    instances_for,
    latin_spec_stream,
    random_spec_stream,
)
from rainbowmatch.graph import canonical_digest, edges_by_color, validate
from rainbowmatch.reduction import is_normal_form


def test_spec_round_trip():
    spec = GenSpec(GenKind.RANDOM, 3, 5, 4, seed=11)
    assert GenSpec.from_dict(spec.to_dict()) == spec
    latin = GenSpec(GenKind.LATIN, 3, 4, 4, seed=2, drop=1)
    assert GenSpec.from_dict(latin.to_dict()) == latin


def test_gen_random_deterministic():
    spec = GenSpec(GenKind.RANDOM, 3, 5, 4, seed=7)
    a, b = gen_random(spec), gen_random(spec)
    assert a.edges == b.edges
    other = gen_random(GenSpec(GenKind.RANDOM, 3, 5, 4, seed=8))
    assert other.edges != a.edges


@given(st.integers(1, 4), st.integers(0, 3), st.integers(0, 3), st.integers(0, 1000))
@settings(max_examples=150)
def test_gen_random_always_counts_valid(n, dl, dr, seed):
    g = gen_random(GenSpec(GenKind.RANDOM, n, n + 1 + dl, n + 1 + dr, seed))
    assert validate(g, require_counts=True).ok
    assert all(len(es) == n + 1 for es in edges_by_color(g).values())


def test_gen_random_rejects_small_sides():
    with pytest.raises(ValueError):
        gen_random(GenSpec(GenKind.RANDOM, 3, 3, 4, seed=0))
    with pytest.raises(ValueError):
        gen_random(GenSpec(GenKind.RANDOM, 0, 2, 2, seed=0))


def test_gen_latin_shape_and_validity():
    g = gen_latin(4, 3, 0)
    assert g.n == 3 and g.left_size == 4 and g.right_size == 4
    assert validate(g, require_counts=True).ok
    assert is_normal_form(g)
    # simple graph: no parallel edges at all
    assert len({(e.u, e.v) for e in g.edges}) == len(g.edges)


def test_gen_latin_drop_symbol_varies():
    a = gen_latin(4, 0, 5)
    b = gen_latin(4, 3, 5)
    assert a.n == b.n == 3
    assert a.edges != b.edges


def test_gen_latin_deterministic():
    assert gen_latin(5, 2, 9).edges == gen_latin(5, 2, 9).edges


def test_count_formulas():
    assert count_matchings(3, 3, 3) == 6
    assert count_instances(2, 3, 3) == 36
    assert count_instances(1, 2, 2) == 2
    assert count_matchings(4, 3, 3) == 24


def test_enumeration_full():
    insts = list(enumerate_instances(2, 3, 3))
    assert len(insts) == 36
    digests = {canonical_digest(g) for g in insts}
    assert len(digests) == 36
    for g in insts:
        assert validate(g, require_counts=True).ok


def test_enumeration_guard():
    with pytest.raises(ValueError):
        next(enumerate_instances(4, 8, 8))


def test_instances_for_dispatch():
    rnd = list(instances_for(GenSpec(GenKind.RANDOM, 2, 3, 3, seed=1)))
    assert len(rnd) == 1
    lat = list(instances_for(GenSpec(GenKind.LATIN, 3, 4, 4, seed=1)))
    assert len(lat) == 1 and lat[0].n == 3
    full = list(instances_for(GenSpec(GenKind.EXHAUSTIVE, 2, 3, 3)))
    assert len(full) == 36


def test_spec_streams():
    rs = list(random_spec_stream(3, 4, 4, 100, 5))
    assert [s.seed for s in rs] == [100, 101, 102, 103, 104]
    ls = list(latin_spec_stream(4, None, 0, 3))
    assert all(s.kind is GenKind.LATIN and s.n == 3 for s in ls)
    assert [s.seed for s in ls] == [0, 1, 2]
