import numpy as np
import pytest

import fading_flock as ff
from fading_flock.graph import Graph, VertexPartition, iter_vertex_partitions


class TestGraphBasics:
    def test_path_is_connected(self):
        assert ff.path_graph(3).is_connected()

    def test_isolated_vertex_disconnects(self):
        assert not Graph(3, [(0, 1)]).is_connected()

    def test_complete_graph_connected(self):
        assert ff.complete_graph(5).is_connected()

    def test_rejects_self_loops(self):
        with pytest.raises(ValueError):
            Graph(3, [(1, 1)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Graph(3, [(0, 3)])

    def test_duplicate_edges_collapse(self):
        g = Graph(3, [(0, 1), (1, 0), (0, 1)])
        assert g.edges == ((0, 1),)

    def test_equality_and_hash(self):
        assert Graph(3, [(0, 1), (1, 2)]) == ff.path_graph(3)
        assert hash(Graph(2, [(0, 1)])) == hash(ff.path_graph(2))


class TestNeighbors:
    def test_star_center(self):
        assert ff.star_graph(5).neighbors(0) == {1, 2, 3, 4}

    def test_star_leaf(self):
        assert ff.star_graph(5).neighbors(1) == {0}

    def test_triangle(self):
        assert ff.complete_graph(3).neighbors(2) == {0, 1}

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            ff.path_graph(3).neighbors(3)


class TestInducedSubgraph:
    def test_complete_drops_to_complete(self):
        sub = ff.complete_graph(4).induced_subgraph({0, 1, 2})
        assert sub == ff.complete_graph(3)

    def test_nonadjacent_pair(self):
        sub = ff.path_graph(3).induced_subgraph({0, 2})
        assert sub.vertex_count == 2 and sub.edges == ()

    def test_star_leaves_have_no_edges(self):
        sub = ff.star_graph(5).induced_subgraph({1, 2})
        assert sub.edges == ()

    def test_empty_subset_errors(self):
        with pytest.raises(ValueError, match="empty vertex set"):
            ff.path_graph(3).induced_subgraph(set())

    def test_idempotent(self):
        g = ff.complete_graph(5)
        once = g.induced_subgraph({1, 2, 4})
        twice = once.induced_subgraph(range(once.vertex_count))
        assert once == twice

    def test_relabeling_is_sorted_order(self):
        g = Graph(5, [(1, 4), (1, 2)])
        sub = g.induced_subgraph({4, 1})
        # members sorted: 1 -> 0, 4 -> 1
        assert sub.edges == ((0, 1),)


class TestVertexPartition:
    def test_canonical_block_order(self):
        vp = VertexPartition(4, [[3, 2], [0, 1]])
        assert vp.blocks == (frozenset({0, 1}), frozenset({2, 3}))

    def test_usable_as_dict_key(self):
        a = VertexPartition(3, [[0, 1], [2]])
        b = VertexPartition(3, [[1, 0], [2]])
        assert a == b and len({a: 1, b: 2}) == 1

    def test_rejects_overlap(self):
        with pytest.raises(ValueError):
            VertexPartition(3, [[0, 1], [1, 2]])

    def test_rejects_partial_cover(self):
        with pytest.raises(ValueError):
            VertexPartition(3, [[0, 1]])

    def test_rejects_empty_block(self):
        with pytest.raises(ValueError):
            VertexPartition(2, [[0, 1], []])

    def test_block_of(self):
        vp = VertexPartition(4, [[0, 3], [1, 2]])
        assert vp.block_of(3) == 0 and vp.block_of(2) == 1

    def test_trivial_and_singletons(self):
        assert VertexPartition.trivial(4).is_trivial
        assert VertexPartition.singletons(4).block_count == 4


class TestIsCoarser:
    def test_trivial_partition_is_coarsest(self):
        a = VertexPartition(3, [[0, 1, 2]])
        b = VertexPartition(3, [[0, 1], [2]])
        assert a.is_coarser_than(b)

    def test_strict_inequality_required(self):
        a = VertexPartition(2, [[0], [1]])
        assert not a.is_coarser_than(a)

    def test_non_nested_blocks(self):
        a = VertexPartition(4, [[0, 1], [2, 3]])
        b = VertexPartition(4, [[0, 2], [1, 3]])
        assert not a.is_coarser_than(b)
        assert not b.is_coarser_than(a)

    def test_mismatched_vertex_sets_error(self):
        with pytest.raises(ValueError):
            VertexPartition.trivial(3).is_coarser_than(VertexPartition.trivial(4))

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_strict_partial_order_by_enumeration(self, n):
        partitions = list(iter_vertex_partitions(n))
        count = len(partitions)
        coarser = np.zeros((count, count), dtype=bool)
        for i, a in enumerate(partitions):
            for j, b in enumerate(partitions):
                coarser[i, j] = a.is_coarser_than(b)
        # irreflexive and antisymmetric
        assert not coarser.diagonal().any()
        assert not (coarser & coarser.T).any()
        # transitive: two-hop coarseness implies direct coarseness
        two_hop = (coarser.astype(int) @ coarser.astype(int)) > 0
        assert coarser[two_hop].all()


class TestPartitionEnumeration:
    @pytest.mark.parametrize("n,bell", [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52)])
    def test_counts_are_bell_numbers(self, n, bell):
        assert sum(1 for _ in iter_vertex_partitions(n)) == bell

    def test_blocks_of_connected_graph_may_be_disconnected(self):
        # Blocks are arbitrary vertex sets; connectivity of a block is a
        # separate check on its induced subgraph, never a given.
        g = ff.star_graph(5)
        block = {1, 2}
        assert g.is_connected()
        assert not g.induced_subgraph(block).is_connected()
