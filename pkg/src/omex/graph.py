"""Bounded-degree bipartite graphs: representation, validation, JSON files.

Left vertices are integers 0..left_size-1 (left_size <= 2^n, so each index
fits in n bits); right vertices are integers 0..right_size-1. Neighbor lists
keep construction order and may repeat a right vertex: the randomized
constructions draw with replacement, and the position of an edge inside a
list is meaningful (decoders address neighbors by ordinal).
"""

import json
from dataclasses import dataclass, field


class GraphError(Exception):
    pass


class GraphFormatError(GraphError):
    """The file does not parse into the expected fields."""


class GraphInvariantError(GraphError):
    """The parsed graph violates a structural invariant."""


@dataclass(frozen=True)
class Violation:
    rule: str
    vertex: int | None
    detail: str

    def __str__(self) -> str:
        where = f" at left vertex {self.vertex}" if self.vertex is not None else ""
        return f"{self.rule}{where}: {self.detail}"


@dataclass(frozen=True)
class BipartiteGraph:
    """Immutable bipartite graph with per-left-vertex ordered neighbor lists."""

    n: int                                   # left indices fit in n bits
    right_size: int
    max_degree: int
    neighbors: tuple[tuple[int, ...], ...] = field(default_factory=tuple)

    @staticmethod
    def build(n: int, right_size: int, max_degree: int,
              neighbors: list[list[int]]) -> "BipartiteGraph":
        g = BipartiteGraph(n, right_size, max_degree,
                           tuple(tuple(row) for row in neighbors))
        v = validate(g)
        if v is not None:
            raise GraphInvariantError(str(v))
        return g

    @property
    def left_size(self) -> int:
        return len(self.neighbors)

    def neighbors_of(self, left_index: int) -> tuple[int, ...]:
        """Stored neighbor list of a left vertex, order and multiplicity kept."""
        if not 0 <= left_index < self.left_size:
            raise IndexError(f"left index {left_index} out of range")
        return self.neighbors[left_index]

    def left_neighbors_of(self, right_index: int) -> list[int]:
        """Left vertices adjacent to a right vertex, in left-index order,
        one entry per incident edge."""
        if not 0 <= right_index < self.right_size:
            raise IndexError(f"right index {right_index} out of range")
        out = []
        for left, row in enumerate(self.neighbors):
            out.extend(left for r in row if r == right_index)
        return out

    def degree_of(self, left_index: int) -> int:
        return len(self.neighbors_of(left_index))


def validate(g: BipartiteGraph) -> Violation | None:
    """First violated invariant with the offending vertex, or None if valid."""
    if g.n < 0:
        return Violation("n_nonnegative", None, f"n = {g.n}")
    if g.right_size < 1:
        return Violation("right_size_positive", None, f"right_size = {g.right_size}")
    if g.max_degree < 0:
        return Violation("max_degree_nonnegative", None, f"max_degree = {g.max_degree}")
    if g.left_size > 2 ** g.n:
        return Violation("left_size_bound", None,
                         f"{g.left_size} left vertices exceed 2^{g.n}")
    for left, row in enumerate(g.neighbors):
        if len(row) > g.max_degree:
            return Violation("degree_bound", left,
                             f"degree {len(row)} > max_degree {g.max_degree}")
        for r in row:
            if not 0 <= r < g.right_size:
                return Violation("neighbor_range", left,
                                 f"neighbor {r} not in [0, {g.right_size})")
    return None


def to_json(g: BipartiteGraph) -> str:
    """Canonical serialized form: stable key order, no whitespace, one newline."""
    doc = {
        "n": g.n,
        "right_size": g.right_size,
        "max_degree": g.max_degree,
        "neighbors": [list(row) for row in g.neighbors],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def from_json(text: str) -> BipartiteGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphFormatError(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise GraphFormatError("top level must be an object")
    for key in ("n", "right_size", "max_degree", "neighbors"):
        if key not in doc:
            raise GraphFormatError(f"missing field {key!r}")
    for key in ("n", "right_size", "max_degree"):
        if not isinstance(doc[key], int) or isinstance(doc[key], bool):
            raise GraphFormatError(f"field {key!r} must be an integer")
    rows = doc["neighbors"]
    if not isinstance(rows, list):
        raise GraphFormatError("field 'neighbors' must be an array of arrays")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or any(
                not isinstance(r, int) or isinstance(r, bool) for r in row):
            raise GraphFormatError(f"neighbors[{i}] must be an array of integers")
    g = BipartiteGraph(doc["n"], doc["right_size"], doc["max_degree"],
                       tuple(tuple(row) for row in rows))
    v = validate(g)
    if v is not None:
        raise GraphInvariantError(str(v))
    return g


def save(g: BipartiteGraph, path) -> None:
    v = validate(g)
    if v is not None:
        raise GraphInvariantError(str(v))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_json(g))


def load(path) -> BipartiteGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return from_json(fh.read())


def complete_graph(n: int, right_size: int) -> BipartiteGraph:
    """Every left vertex adjacent to every right vertex, in right-index order."""
    row = tuple(range(right_size))
    return BipartiteGraph(n, right_size, right_size, tuple(row for _ in range(2 ** n)))
