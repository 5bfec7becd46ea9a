"""Edge shifting: rewrite a donor vertex's edges onto a pivot vertex.

Both rules operate on left vertices.  For each donor edge, taken in ascending
color order against the current working graph:

* Move: the pivot has no edge of that color: the donor edge is re-attached
  to the pivot, keeping its right endpoint and color.
* Swap: the pivot already has exactly one edge of that color (properness):
  the two edges exchange right endpoints.

Each color is touched at most once and a rule only inspects edges of its own
color, so this sequential pass equals the all-at-once reading; a dedicated
test asserts that equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .graph import ColoredMultigraph, Edge, Side, colors_at, validate


class RewriteKind(str, Enum):
    MOVE = "move"
    SWAP = "swap"


@dataclass(frozen=True)
class ShiftRewrite:
    """One applied rule instance.

    Move: removed=[(donor, b, c)], added=[(pivot, b, c)].
    Swap: removed=[(pivot, g, c), (donor, a, c)], added=[(pivot, a, c), (donor, g, c)].
    """

    kind: RewriteKind
    color: int
    removed: tuple[Edge, ...]
    added: tuple[Edge, ...]


@dataclass(frozen=True)
class ShiftOutcome:
    graph: ColoredMultigraph
    rewrites: tuple[ShiftRewrite, ...]
    moves: int
    swaps: int


def shift_applicable(g: ColoredMultigraph, pivot: int) -> bool:
    """True iff the pivot's color spectrum is not yet full.

    Properness caps a vertex at n distinct colors, so "not full" is
    equivalently "fewer than n".
    """
    return len(colors_at(g, Side.LEFT, pivot)) < g.n


def shift(g: ColoredMultigraph, pivot: int, donor: int) -> ShiftOutcome:
    """Apply Move/Swap rewrites for every donor edge; all other edges are
    unchanged.  Properness and per-color edge counts are preserved."""
    if pivot == donor:
        raise ValueError("pivot and donor must be distinct")
    if not 0 <= pivot < g.left_size:
        raise ValueError(f"pivot {pivot} out of range")
    if not 0 <= donor < g.left_size:
        raise ValueError(f"donor {donor} out of range")
    report = validate(g)
    if not report.ok:
        raise ValueError(f"invalid graph: {report.violations[0].detail}")

    work = list(g.edges)
    pivot_by_color: dict[int, int] = {e.c: i for i, e in enumerate(work) if e.u == pivot}
    donor_edges = sorted((e.c, i) for i, e in enumerate(work) if e.u == donor)

    rewrites: list[ShiftRewrite] = []
    moves = 0
    swaps = 0
    for c, i in donor_edges:
        e = work[i]
        j = pivot_by_color.get(c)
        if j is None:
            moved = Edge(pivot, e.v, c)
            work[i] = moved
            pivot_by_color[c] = i
            rewrites.append(ShiftRewrite(RewriteKind.MOVE, c, (e,), (moved,)))
            moves += 1
        else:
            pe = work[j]
            work[j] = Edge(pivot, e.v, c)
            work[i] = Edge(donor, pe.v, c)
            rewrites.append(ShiftRewrite(RewriteKind.SWAP, c, (pe, e), (work[j], work[i])))
            swaps += 1

    out = ColoredMultigraph(g.n, g.left_size, g.right_size, tuple(work))
    return ShiftOutcome(out, tuple(rewrites), moves, swaps)
