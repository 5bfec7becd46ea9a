"""Exact maximum rainbow matching search, plus an independent naive checker."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import ColoredMultigraph, Edge, Matching, validate

NAIVE_EDGE_LIMIT = 24


@dataclass(frozen=True)
class OracleResult:
    max_size: int
    witness: Matching
    nodes_explored: int


def _require_proper(g: ColoredMultigraph) -> None:
    report = validate(g)
    if not report.ok:
        raise ValueError(f"invalid graph: {report.violations[0].detail}")


def max_rainbow(g: ColoredMultigraph) -> OracleResult:
    """Exact maximum via color-major backtracking.

    Colors are processed in ascending index order; at each color the branches
    are every feasible edge of that color (in edge-list order) followed by a
    skip branch.  Subtrees that cannot strictly beat the incumbent are pruned,
    so the returned witness is the first maximum reached under this fixed
    order, deterministic for a given edge list.
    """
    _require_proper(g)
    n = g.n
    by_color: list[list[Edge]] = [[] for _ in range(n)]
    for e in g.edges:
        by_color[e.c].append(e)

    best = 0
    best_pick: tuple[Edge, ...] = ()
    nodes = 0
    picked: list[Edge] = []

    def search(ci: int, used_l: int, used_r: int) -> None:
        nonlocal best, best_pick, nodes
        nodes += 1
        if len(picked) > best:
            best = len(picked)
            best_pick = tuple(picked)
        if ci == n or len(picked) + (n - ci) <= best:
            return
        for e in by_color[ci]:
            if not (used_l >> e.u) & 1 and not (used_r >> e.v) & 1:
                picked.append(e)
                search(ci + 1, used_l | (1 << e.u), used_r | (1 << e.v))
                picked.pop()
        search(ci + 1, used_l, used_r)

    search(0, 0, 0)
    return OracleResult(best, Matching(best_pick), nodes)


def has_rainbow(g: ColoredMultigraph, k: int) -> tuple[bool, Matching | None]:
    """Early-exit check for a rainbow matching of size ``k``; returns the
    first witness found, or None."""
    _require_proper(g)
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return True, Matching(())
    n = g.n
    if k > min(n, g.left_size, g.right_size):
        return False, None
    by_color: list[list[Edge]] = [[] for _ in range(n)]
    for e in g.edges:
        by_color[e.c].append(e)

    picked: list[Edge] = []

    def search(ci: int, used_l: int, used_r: int) -> bool:
        if len(picked) == k:
            return True
        if ci == n or len(picked) + (n - ci) < k:
            return False
        for e in by_color[ci]:
            if not (used_l >> e.u) & 1 and not (used_r >> e.v) & 1:
                picked.append(e)
                if search(ci + 1, used_l | (1 << e.u), used_r | (1 << e.v)):
                    return True
                picked.pop()
        return search(ci + 1, used_l, used_r)

    found = search(0, 0, 0)
    return found, Matching(tuple(picked)) if found else None


def max_rainbow_naive(g: ColoredMultigraph) -> OracleResult:
    """Edge-major subset enumeration, for cross-validating ``max_rainbow``.

    Walks the include/exclude tree over the edge list, abandoning a subset as
    soon as it violates the rainbow-matching property (any extension would
    fail the filter too).  No color grouping, no bound pruning: deliberately
    a different algorithm from the color-major search.
    """
    _require_proper(g)
    m = len(g.edges)
    if m > NAIVE_EDGE_LIMIT:
        raise ValueError(
            f"naive enumeration capped at {NAIVE_EDGE_LIMIT} edges (got {m}); use max_rainbow"
        )
    edges = g.edges
    best = 0
    best_pick: tuple[Edge, ...] = ()
    nodes = 0
    picked: list[Edge] = []

    def walk(i: int, used_l: int, used_r: int, used_c: int) -> None:
        nonlocal best, best_pick, nodes
        nodes += 1
        if len(picked) > best:
            best = len(picked)
            best_pick = tuple(picked)
        if i == m:
            return
        e = edges[i]
        if not (used_l >> e.u) & 1 and not (used_r >> e.v) & 1 and not (used_c >> e.c) & 1:
            picked.append(e)
            walk(i + 1, used_l | (1 << e.u), used_r | (1 << e.v), used_c | (1 << e.c))
            picked.pop()
        walk(i + 1, used_l, used_r, used_c)

    walk(0, 0, 0, 0)
    return OracleResult(best, Matching(best_pick), nodes)


def rainbow_pairs(g: ColoredMultigraph) -> list[tuple[Edge, Edge]]:
    """All size-2 rainbow matchings of a 2-colored instance, in edge order.

    The n == 2 base case is small enough to enumerate every witness, which
    matters to callers that need a witness satisfying extra side conditions.
    """
    if g.n != 2:
        raise ValueError(f"rainbow_pairs needs n == 2 (got {g.n})")
    _require_proper(g)
    es = g.edges
    return [
        (es[i], es[j])
        for i in range(len(es))
        for j in range(i + 1, len(es))
        if es[i].c != es[j].c and es[i].u != es[j].u and es[i].v != es[j].v
    ]
