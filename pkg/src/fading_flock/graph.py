"""Undirected graph topology: connectivity, neighborhoods, induced subgraphs,
and vertex-set partitions.

Vertices are dense 0-based integers; user-facing labels live in the CLI layer.
All objects here are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Sequence


class Graph:
    """Undirected simple graph on vertices ``0 .. vertex_count - 1``.

    Edges are stored both as a sorted pair list (deterministic iteration) and
    as adjacency sets (O(deg) neighbor queries); both access patterns are hot.
    """

    __slots__ = ("vertex_count", "edges", "_adjacency")

    def __init__(self, vertex_count: int, edges: Iterable[Sequence[int]]):
        if vertex_count < 1:
            raise ValueError("graph needs at least one vertex")
        normalized = set()
        for edge in edges:
            i, j = int(edge[0]), int(edge[1])
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < vertex_count and 0 <= j < vertex_count):
                raise ValueError(f"edge ({i}, {j}) out of range for {vertex_count} vertices")
            normalized.add((min(i, j), max(i, j)))
        self.vertex_count = vertex_count
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(normalized))
        adjacency = [set() for _ in range(vertex_count)]
        for i, j in self.edges:
            adjacency[i].add(j)
            adjacency[j].add(i)
        self._adjacency = tuple(frozenset(s) for s in adjacency)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    def neighbors(self, v: int) -> frozenset[int]:
        """Set of vertices sharing an edge with ``v``."""
        if not 0 <= v < self.vertex_count:
            raise ValueError(f"vertex {v} out of range")
        return self._adjacency[v]

    def has_edge(self, i: int, j: int) -> bool:
        if not 0 <= i < self.vertex_count:
            raise ValueError(f"vertex {i} out of range")
        return j in self._adjacency[i]

    def is_connected(self) -> bool:
        """True iff every vertex pair is joined by a path."""
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in self._adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.vertex_count

    def induced_subgraph(self, subset: Iterable[int]) -> "Graph":
        """Subgraph keeping exactly the edges with both endpoints in ``subset``.

        Vertices are relabeled canonically: new index k corresponds to the
        k-th smallest original vertex in ``subset`` (see ``sorted(subset)``).
        """
        members = sorted(set(subset))
        if not members:
            raise ValueError("empty vertex set")
        if members[0] < 0 or members[-1] >= self.vertex_count:
            raise ValueError("subset contains out-of-range vertices")
        index = {v: k for k, v in enumerate(members)}
        kept = [
            (index[i], index[j])
            for i, j in self.edges
            if i in index and j in index
        ]
        return Graph(len(members), kept)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges))

    def __repr__(self) -> str:
        return f"Graph({self.vertex_count}, {list(self.edges)})"


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(n: int) -> Graph:
    """Star with center 0 and leaves 1 .. n-1."""
    return Graph(n, [(0, i) for i in range(1, n)])


class VertexPartition:
    """Partition of ``{0 .. vertex_count - 1}`` into disjoint nonempty blocks.

    Blocks are kept in canonical order (sorted by smallest member), so equal
    partitions compare equal and the object is usable as a dict key.
    """

    __slots__ = ("vertex_count", "blocks")

    def __init__(self, vertex_count: int, blocks: Iterable[Iterable[int]]):
        frozen = [frozenset(int(v) for v in block) for block in blocks]
        if any(not block for block in frozen):
            raise ValueError("empty block")
        total = 0
        union = set()
        for block in frozen:
            total += len(block)
            union |= block
        if len(union) != total:
            raise ValueError("blocks are not disjoint")
        if union != set(range(vertex_count)):
            raise ValueError("blocks do not cover the vertex set")
        self.vertex_count = vertex_count
        self.blocks: tuple[frozenset[int], ...] = tuple(sorted(frozen, key=min))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "VertexPartition":
        """Build from a block label per vertex (labels need not be dense)."""
        groups: dict[int, list[int]] = {}
        for v, lab in enumerate(labels):
            groups.setdefault(lab, []).append(v)
        return cls(len(labels), groups.values())

    @classmethod
    def trivial(cls, vertex_count: int) -> "VertexPartition":
        return cls(vertex_count, [range(vertex_count)])

    @classmethod
    def singletons(cls, vertex_count: int) -> "VertexPartition":
        return cls(vertex_count, [[v] for v in range(vertex_count)])

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def is_trivial(self) -> bool:
        return len(self.blocks) == 1

    def block_of(self, v: int) -> int:
        """Index of the block containing ``v``."""
        for k, block in enumerate(self.blocks):
            if v in block:
                return k
        raise ValueError(f"vertex {v} out of range")

    def is_coarser_than(self, other: "VertexPartition") -> bool:
        """Strictly coarser: fewer blocks, and every block of ``other`` is
        contained in some block of ``self``.

        This is a strict partial order (irreflexive and transitive).
        """
        if self.vertex_count != other.vertex_count:
            raise ValueError("partitions are over different vertex sets")
        if self.block_count >= other.block_count:
            return False
        return all(
            any(block <= mine for mine in self.blocks) for block in other.blocks
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexPartition):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.blocks))

    def __repr__(self) -> str:
        shown = [sorted(block) for block in self.blocks]
        return f"VertexPartition({self.vertex_count}, {shown})"


def iter_vertex_partitions(vertex_count: int) -> Iterator[VertexPartition]:
    """All set partitions of the vertex set, in restricted-growth order.

    The count is the Bell number, which explodes quickly; callers guard size.
    """
    labels = [0] * vertex_count

    def rec(v: int, used: int) -> Iterator[VertexPartition]:
        if v == vertex_count:
            yield VertexPartition.from_labels(labels)
            return
        for lab in range(used + 1):
            labels[v] = lab
            yield from rec(v + 1, max(used, lab + 1))

    yield from rec(0, 0)
