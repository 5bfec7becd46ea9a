"""Core value types for properly edge-colored bipartite multigraphs.

Everything here is an immutable value; all operations are pure functions, so
graphs can be shared freely across worker processes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

RULE_SHAPE = "shape"
RULE_BOUNDS = "bounds"
RULE_PROPERNESS = "properness"
RULE_COUNTS = "counts"


class Side(str, Enum):
    """Which part of the bipartition a vertex index refers to."""

    LEFT = "left"
    RIGHT = "right"

    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


class Edge(NamedTuple):
    """One colored edge: left endpoint ``u``, right endpoint ``v``, color ``c``."""

    u: int
    v: int
    c: int


@dataclass(frozen=True)
class ColoredMultigraph:
    """Bipartite multigraph on dense 0-based vertex and color indices.

    A graph is *proper* when every color class is a matching: no two edges of
    the same color share a left vertex or a right vertex.  Parallel edges are
    allowed as long as their colors differ.

    Edge order is part of the value (it pins branch order in the solver and
    rewrite order in shifting); semantic operations treat ``edges`` as a
    multiset.
    """

    n: int
    left_size: int
    right_size: int
    edges: tuple[Edge, ...]

    @staticmethod
    def of(
        n: int,
        left_size: int,
        right_size: int,
        edges: Iterable[tuple[int, int, int]],
    ) -> "ColoredMultigraph":
        """Build a graph from any iterable of ``(u, v, c)`` triples."""
        return ColoredMultigraph(n, left_size, right_size, tuple(Edge(*e) for e in edges))

    def side_size(self, side: Side) -> int:
        return self.left_size if side is Side.LEFT else self.right_size


@dataclass(frozen=True)
class Matching:
    """A set of edges claimed pairwise vertex-disjoint and color-distinct."""

    edges: tuple[Edge, ...]

    @staticmethod
    def of(edges: Iterable[tuple[int, int, int]]) -> "Matching":
        return Matching(tuple(Edge(*e) for e in edges))

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str
    edge_indices: tuple[int, ...]


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]


def edges_by_color(g: ColoredMultigraph) -> dict[int, list[Edge]]:
    """Group edges by color, preserving edge-list order within each color."""
    out: dict[int, list[Edge]] = {}
    for e in g.edges:
        out.setdefault(e.c, []).append(e)
    return out


def validate(g: ColoredMultigraph, require_counts: bool = False) -> ValidationReport:
    """Report every violated structural invariant of ``g``.

    Checks index bounds and properness; with ``require_counts`` additionally
    checks that each color class has exactly ``n + 1`` edges.  Never raises:
    all problems are reported.
    """
    violations: list[Violation] = []
    if g.n < 0 or g.left_size < 0 or g.right_size < 0:
        violations.append(
            Violation(RULE_SHAPE, f"negative dimension: n={g.n} left={g.left_size} right={g.right_size}", ())
        )

    for i, e in enumerate(g.edges):
        if not (0 <= e.u < g.left_size and 0 <= e.v < g.right_size and 0 <= e.c < g.n):
            violations.append(Violation(RULE_BOUNDS, f"edge {tuple(e)} out of bounds", (i,)))

    by_color: dict[int, list[tuple[int, Edge]]] = {}
    for i, e in enumerate(g.edges):
        by_color.setdefault(e.c, []).append((i, e))
    for c, items in sorted(by_color.items()):
        seen_u: dict[int, int] = {}
        seen_v: dict[int, int] = {}
        for i, e in items:
            if e.u in seen_u:
                violations.append(
                    Violation(RULE_PROPERNESS, f"color {c}: edges share left vertex {e.u}", (seen_u[e.u], i))
                )
            else:
                seen_u[e.u] = i
            if e.v in seen_v:
                violations.append(
                    Violation(RULE_PROPERNESS, f"color {c}: edges share right vertex {e.v}", (seen_v[e.v], i))
                )
            else:
                seen_v[e.v] = i

    if require_counts:
        for c in range(g.n):
            count = len(by_color.get(c, []))
            if count != g.n + 1:
                idx = tuple(i for i, _ in by_color.get(c, []))
                violations.append(
                    Violation(RULE_COUNTS, f"color {c} has {count} edges, expected {g.n + 1}", idx)
                )

    return ValidationReport(ok=not violations, violations=tuple(violations))


def _check_vertex(g: ColoredMultigraph, side: Side, vertex: int) -> None:
    if not 0 <= vertex < g.side_size(side):
        raise ValueError(f"vertex {vertex} out of range for side {side.value} (size {g.side_size(side)})")


def incident_edges(g: ColoredMultigraph, side: Side, vertex: int) -> list[Edge]:
    _check_vertex(g, side, vertex)
    if side is Side.LEFT:
        return [e for e in g.edges if e.u == vertex]
    return [e for e in g.edges if e.v == vertex]


def colors_at(g: ColoredMultigraph, side: Side, vertex: int) -> set[int]:
    """The set of colors on edges incident to ``vertex``; by properness its
    size equals the vertex degree."""
    return {e.c for e in incident_edges(g, side, vertex)}


def degree(g: ColoredMultigraph, side: Side, vertex: int) -> int:
    return len(incident_edges(g, side, vertex))


def delete_color(g: ColoredMultigraph, c: int) -> ColoredMultigraph:
    """Remove color class ``c`` and reindex the remaining colors densely."""
    if not 0 <= c < g.n:
        raise ValueError(f"color {c} out of range (n={g.n})")
    edges = tuple(
        Edge(e.u, e.v, e.c if e.c < c else e.c - 1) for e in g.edges if e.c != c
    )
    return ColoredMultigraph(g.n - 1, g.left_size, g.right_size, edges)


def delete_vertex(g: ColoredMultigraph, side: Side, vertex: int) -> ColoredMultigraph:
    """Remove ``vertex`` with its incident edges; reindex that side densely."""
    _check_vertex(g, side, vertex)
    if side is Side.LEFT:
        edges = tuple(
            Edge(e.u if e.u < vertex else e.u - 1, e.v, e.c) for e in g.edges if e.u != vertex
        )
        return ColoredMultigraph(g.n, g.left_size - 1, g.right_size, edges)
    edges = tuple(
        Edge(e.u, e.v if e.v < vertex else e.v - 1, e.c) for e in g.edges if e.v != vertex
    )
    return ColoredMultigraph(g.n, g.left_size, g.right_size - 1, edges)


def is_rainbow_matching(g: ColoredMultigraph, m: Matching, k: int) -> bool:
    """True iff ``m`` has exactly ``k`` edges of ``g``, pairwise disjoint on
    both sides and pairwise color-distinct."""
    if len(m.edges) != k:
        return False
    present = set(g.edges)
    if any(e not in present for e in m.edges):
        return False
    lefts = {e.u for e in m.edges}
    rights = {e.v for e in m.edges}
    colors = {e.c for e in m.edges}
    return len(lefts) == k and len(rights) == k and len(colors) == k


def canonical_edges(edges: Iterable[Edge]) -> tuple[Edge, ...]:
    return tuple(sorted(edges, key=lambda e: (e.c, e.u, e.v)))


def to_dict(g: ColoredMultigraph) -> dict:
    """Canonical dict form: edges sorted lexicographically by (c, u, v)."""
    return {
        "n": g.n,
        "left": g.left_size,
        "right": g.right_size,
        "edges": [[e.u, e.v, e.c] for e in canonical_edges(g.edges)],
    }


def from_dict(d: dict) -> ColoredMultigraph:
    """Parse the instance dict form; edge order in the input is preserved.

    Raises ValueError on malformed input (missing keys, wrong types).
    """
    if not isinstance(d, dict):
        raise ValueError(f"instance must be a JSON object, got {type(d).__name__}")
    try:
        n = d["n"]
        left = d["left"]
        right = d["right"]
        raw_edges = d["edges"]
    except KeyError as exc:
        raise ValueError(f"instance missing key {exc}") from exc
    if not all(isinstance(x, int) for x in (n, left, right)):
        raise ValueError("instance fields n/left/right must be integers")
    if not isinstance(raw_edges, list):
        raise ValueError("instance field edges must be a list")
    edges = []
    for t in raw_edges:
        if not (isinstance(t, list) and len(t) == 3 and all(isinstance(x, int) for x in t)):
            raise ValueError(f"bad edge entry {t!r}: expected [u, v, c]")
        edges.append(Edge(t[0], t[1], t[2]))
    return ColoredMultigraph(n, left, right, tuple(edges))


def to_canonical_json(g: ColoredMultigraph) -> str:
    """Single-line canonical serialization; bit-exact for golden tests."""
    return json.dumps(to_dict(g), separators=(",", ":"))


def from_json(text: str) -> ColoredMultigraph:
    return from_dict(json.loads(text))


def canonical_digest(g: ColoredMultigraph) -> str:
    """64-bit hex digest, invariant under edge-list reordering (not under
    vertex or color relabeling)."""
    return hashlib.sha256(to_canonical_json(g).encode()).hexdigest()[:16]


def read_instances(text: str) -> list[ColoredMultigraph]:
    """Parse either a single JSON instance or a JSONL stream of instances."""
    stripped = text.strip()
    if not stripped:
        return []
    try:
        return [from_dict(json.loads(stripped))]
    except json.JSONDecodeError:
        pass
    out = []
    for lineno, line in enumerate(stripped.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            out.append(from_dict(json.loads(line)))
        except json.JSONDecodeError as exc:
            raise ValueError(f"line {lineno}: not valid JSON: {exc}") from exc
    return out
