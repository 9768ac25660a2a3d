"""Partitions of frameworks (graph plus configuration): intra/inter-cluster
distances, dilute-partition checks, constructive coarsening, brute-force
enumeration, and extraction of diluting subsequences from snapshot series.

A partition is *dilute* with respect to a threshold l when every block's
induced subgraph is connected and every adjacent block pair is separated by
more than l and by more than either block's diameter.  The trivial partition
always qualifies; the interesting question is whether a nontrivial one does.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .dynamics import Configuration, is_valid_configuration
from .graph import Graph, VertexPartition, iter_vertex_partitions

_ENUMERATION_LIMIT = 10


class _UnionFind:
    """Union-find keeping the smallest member as representative, so merge
    results are deterministic regardless of edge order."""

    __slots__ = ("parent",)

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb

    def labels(self) -> list[int]:
        return [self.find(a) for a in range(len(self.parent))]


class FrameworkPartition:
    """A vertex partition applied to a framework, with per-block geometry.

    Caches block diameters, block adjacency (does any graph edge cross the
    pair), and block separations (minimum distance over all vertex pairs of
    the two blocks, edges or not).
    """

    __slots__ = ("graph", "configuration", "vp", "blocks",
                 "block_diameters", "_block_of", "_adjacent", "_separation",
                 "_connected")

    def __init__(self, graph: Graph, configuration: Configuration,
                 vp: VertexPartition):
        if vp.vertex_count != graph.vertex_count:
            raise ValueError("partition does not match the graph")
        if configuration.agent_count != graph.vertex_count:
            raise ValueError("configuration does not match the graph")
        self.graph = graph
        self.configuration = configuration
        self.vp = vp
        self.blocks: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(block)) for block in vp.blocks)

        x = configuration.positions
        gaps = x[:, None, :] - x[None, :, :]
        pair_dist = np.sqrt((gaps * gaps).sum(axis=2))

        block_of = np.empty(graph.vertex_count, dtype=int)
        for k, block in enumerate(self.blocks):
            block_of[list(block)] = k
        self._block_of = block_of

        diameters = []
        for block in self.blocks:
            idx = list(block)
            diameters.append(
                0.0 if len(idx) == 1 else float(pair_dist[np.ix_(idx, idx)].max()))
        self.block_diameters = tuple(diameters)

        m = len(self.blocks)
        adjacent = np.zeros((m, m), dtype=bool)
        for i, j in graph.edges:
            bi, bj = block_of[i], block_of[j]
            if bi != bj:
                adjacent[bi, bj] = adjacent[bj, bi] = True
        self._adjacent = adjacent

        separation = np.full((m, m), np.inf)
        for a in range(m):
            for b in range(a + 1, m):
                d = float(pair_dist[np.ix_(list(self.blocks[a]),
                                           list(self.blocks[b]))].min())
                separation[a, b] = separation[b, a] = d
        self._separation = separation
        self._connected: tuple[bool, ...] | None = None

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def is_trivial(self) -> bool:
        return len(self.blocks) == 1

    def block_of(self, v: int) -> int:
        return int(self._block_of[v])

    def block_subgraph(self, i: int) -> Graph:
        return self.graph.induced_subgraph(self.blocks[i])

    def block_configuration(self, i: int) -> Configuration:
        return Configuration(self.configuration.positions[list(self.blocks[i])])

    def _check_block(self, i: int) -> None:
        if not 0 <= i < self.block_count:
            raise ValueError(f"block index {i} out of range")

    def cluster_distance(self, i: int, j: int) -> float:
        """Minimum distance between any member of block i and any of block j."""
        self._check_block(i)
        self._check_block(j)
        if i == j:
            raise ValueError("cluster distance needs two distinct blocks")
        return float(self._separation[i, j])

    def are_adjacent(self, i: int, j: int) -> bool:
        """True iff some graph edge crosses the two blocks."""
        self._check_block(i)
        self._check_block(j)
        if i == j:
            raise ValueError("adjacency needs two distinct blocks")
        return bool(self._adjacent[i, j])

    def adjacent_pairs(self) -> Iterator[tuple[int, int]]:
        m = self.block_count
        for a in range(m):
            for b in range(a + 1, m):
                if self._adjacent[a, b]:
                    yield a, b

    def intra_distance(self) -> float:
        """Largest block diameter; zero for the agent-wise partition."""
        return max(self.block_diameters)

    def inter_distance(self) -> float:
        """Smallest separation over adjacent block pairs."""
        best = np.inf
        found = False
        for a, b in self.adjacent_pairs():
            found = True
            best = min(best, self._separation[a, b])
        if not found:
            raise ValueError("no adjacent block pairs")
        return float(best)

    def blocks_connected(self) -> tuple[bool, ...]:
        if self._connected is None:
            self._connected = tuple(
                self.block_subgraph(i).is_connected()
                for i in range(self.block_count))
        return self._connected

    def is_dilute(self, l: float) -> bool:
        """Every block connected; adjacent blocks separated by more than l
        and by more than either block's diameter."""
        if l <= 0:
            raise ValueError("threshold must be positive")
        if not all(self.blocks_connected()):
            return False
        for a, b in self.adjacent_pairs():
            d = self._separation[a, b]
            if d <= l:
                return False
            if max(self.block_diameters[a], self.block_diameters[b]) >= d:
                return False
        return True

    def __repr__(self) -> str:
        return f"FrameworkPartition({[list(b) for b in self.blocks]})"


def threshold_components(g: Graph, p: Configuration, l: float) -> FrameworkPartition:
    """Blocks are the connected components of the graph keeping only edges of
    length at most l.  Every block's induced subgraph is connected, and block
    diameters stay below (N - 1) * l."""
    if l <= 0:
        raise ValueError("threshold must be positive")
    if not is_valid_configuration(g, p):
        raise ValueError("coincident neighboring agents")
    uf = _UnionFind(g.vertex_count)
    x = p.positions
    for i, j in g.edges:
        if float(np.linalg.norm(x[j] - x[i])) <= l:
            uf.union(i, j)
    vp = VertexPartition.from_labels(uf.labels())
    return FrameworkPartition(g, p, vp)


def coarsen(fp: FrameworkPartition, threshold: float) -> FrameworkPartition:
    """Merge blocks along the transitive closure of "adjacent and separated
    by at most the threshold".  The result is coarser or equal, and merging
    adjacent connected blocks keeps each new block connected."""
    m = fp.block_count
    uf = _UnionFind(m)
    for a, b in fp.adjacent_pairs():
        if fp.cluster_distance(a, b) <= threshold:
            uf.union(a, b)
    label_per_vertex = [uf.find(fp.block_of(v)) for v in range(fp.graph.vertex_count)]
    vp = VertexPartition.from_labels(label_per_vertex)
    return FrameworkPartition(fp.graph, fp.configuration, vp)


def find_nontrivial_dilute(g: Graph, p: Configuration,
                           l: float) -> FrameworkPartition | None:
    """Search for a nontrivial dilute partition by constructive coarsening.

    Start from the threshold components at l and repeatedly merge exactly the
    adjacent block pairs that violate the dilute conditions (separation at
    most l, or separation not exceeding a block diameter), rechecking after
    every pass and returning the first nontrivial success; None once the
    chain collapses to the trivial partition.

    This decides existence exactly.  Edges no longer than l can never cross
    blocks of a dilute partition, so the threshold components refine every
    dilute partition; and for any refinement, block separations only grow
    and diameters only shrink, so a violating pair must be intra-block in
    every dilute partition.  The chain therefore stays a refinement of every
    dilute partition: if a nontrivial one exists the chain stops at or
    before it (at the finest dilute partition), and reaching the trivial
    partition proves none exists.
    """
    result, _ = _coarsening_search(g, p, l)
    return result


def _coarsening_search(g: Graph, p: Configuration,
                       l: float) -> tuple[FrameworkPartition | None, float]:
    """Run the coarsening chain; also report a terminal diameter bound.

    Each pass merges chains of blocks whose diameters and gaps sit below the
    running bound, so the bound grows by a factor (2 m - 1) per pass with m
    the block count before the pass.  When the chain collapses to the
    trivial partition the whole configuration's diameter is below the
    terminal bound; equivalently, a configuration wider than it always
    yields a nontrivial dilute partition.
    """
    if g.vertex_count < 2:
        raise ValueError("need at least two vertices")
    if not g.is_connected():
        raise ValueError("graph not connected")
    current = threshold_components(g, p, l)
    threshold = (g.vertex_count - 1) * l
    while True:
        if not current.is_trivial and current.is_dilute(l):
            return current, threshold
        if current.is_trivial:
            return None, threshold
        before = current.block_count
        merged = _merge_violating_pairs(current, l)
        if merged.block_count == before:
            # Unreachable: a failing dilute check on a connected-block
            # partition always exhibits a violating adjacent pair.
            return None, threshold
        current = merged
        threshold = (2 * before - 1) * threshold


def _merge_violating_pairs(fp: FrameworkPartition, l: float) -> FrameworkPartition:
    """Merge the transitive closure of adjacent block pairs violating the
    dilute conditions at threshold l."""
    uf = _UnionFind(fp.block_count)
    for a, b in fp.adjacent_pairs():
        d = fp.cluster_distance(a, b)
        if d <= l or max(fp.block_diameters[a], fp.block_diameters[b]) >= d:
            uf.union(a, b)
    labels = [uf.find(fp.block_of(v)) for v in range(fp.graph.vertex_count)]
    return FrameworkPartition(fp.graph, fp.configuration,
                              VertexPartition.from_labels(labels))


def _partition_sort_key(vp: VertexPartition):
    return (vp.block_count, tuple(tuple(sorted(b)) for b in vp.blocks))


def enumerate_dilute(g: Graph, p: Configuration, l: float) -> list[FrameworkPartition]:
    """All dilute partitions by exhaustive enumeration, in canonical order.

    Brute-force oracle for the constructive search; the partition count is
    the Bell number, so instances are capped at ten vertices.
    """
    if g.vertex_count > _ENUMERATION_LIMIT:
        raise ValueError("instance too large for enumeration")
    found = []
    for vp in iter_vertex_partitions(g.vertex_count):
        fp = FrameworkPartition(g, p, vp)
        if fp.is_dilute(l):
            found.append(fp)
    found.sort(key=lambda fp: _partition_sort_key(fp.vp))
    return found


@dataclass(frozen=True)
class DilutingWitness:
    """Snapshot indices sharing one nontrivial dilute vertex partition, with
    the largest intra-cluster distance seen across them."""

    indices: tuple[int, ...]
    vertex_partition: VertexPartition
    intra_bound: float
    partitions: tuple[FrameworkPartition, ...]


def diluting_subsequence(g: Graph, configurations: Sequence[Configuration],
                         thresholds: Sequence[float]) -> DilutingWitness | None:
    """Group snapshots by the nontrivial dilute partition found at each
    snapshot's threshold and return the largest group.

    Thresholds must be strictly increasing.  Snapshots where the search comes
    up empty are skipped; if it fails everywhere the result is None.  Ties in
    group size resolve to the group seen first.  A finite snapshot series can
    only witness, never refute, the existence of a diluting subsequence.
    """
    if len(configurations) != len(thresholds):
        raise ValueError("one threshold per snapshot required")
    ls = [float(l) for l in thresholds]
    if any(b <= a for a, b in zip(ls, ls[1:])):
        raise ValueError("thresholds must be strictly increasing")
    groups: dict[VertexPartition, list[tuple[int, FrameworkPartition]]] = {}
    for idx, (p, l) in enumerate(zip(configurations, ls)):
        found = find_nontrivial_dilute(g, p, l)
        if found is not None:
            groups.setdefault(found.vp, []).append((idx, found))
    if not groups:
        return None
    best = max(groups.values(), key=lambda grp: (len(grp), -grp[0][0]))
    indices = tuple(idx for idx, _ in best)
    partitions = tuple(fp for _, fp in best)
    intra_bound = max(fp.intra_distance() for fp in partitions)
    return DilutingWitness(indices=indices,
                           vertex_partition=partitions[0].vp,
                           intra_bound=intra_bound,
                           partitions=partitions)
