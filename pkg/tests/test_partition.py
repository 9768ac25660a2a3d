import numpy as np
import pytest

import fading_flock as ff
from fading_flock.dynamics import Configuration
from fading_flock.graph import VertexPartition
from fading_flock.interaction import InteractionMap, LennardJones
from fading_flock.partition import (FrameworkPartition, _coarsening_search,
                                    _merge_violating_pairs, coarsen,
                                    diluting_subsequence, enumerate_dilute,
                                    find_nontrivial_dilute,
                                    threshold_components)

from .helpers import random_configuration, random_connected_graph

LJ43 = LennardJones(1, 1, 4, 3)


def framework(g, positions, blocks):
    return FrameworkPartition(g, Configuration(positions),
                              VertexPartition(g.vertex_count, blocks))


def two_clusters(separation: float, side: float = 0.3):
    """Two tight triangles joined by one cross edge."""
    g = ff.Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    tri = np.array([[0.0, 0.0], [side, 0.0], [side / 2, side]])
    pos = np.vstack([tri, tri + [separation, 0.0]])
    return g, Configuration(pos)


class TestClusterDistance:
    def test_singleton_blocks(self):
        g = ff.path_graph(2)
        fp = framework(g, [[0.0], [5.0]], [[0], [1]])
        assert fp.cluster_distance(0, 1) == 5.0

    def test_min_over_members(self):
        g = ff.path_graph(3)
        fp = framework(g, [[0.0], [1.0], [4.0]], [[0, 1], [2]])
        assert fp.cluster_distance(0, 1) == 3.0

    def test_unit_squares_ten_apart(self):
        g = ff.complete_graph(8)
        square = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        pos = np.vstack([square, square + [10.0, 0.0]])
        fp = framework(g, pos, [[0, 1, 2, 3], [4, 5, 6, 7]])
        # brute-force reference over the 4 x 4 member pairs
        ref = min(np.linalg.norm(pos[a] - pos[b])
                  for a in range(4) for b in range(4, 8))
        assert ref == 9.0
        assert fp.cluster_distance(0, 1) == pytest.approx(9.0)

    def test_invalid_block_index(self):
        g = ff.path_graph(2)
        fp = framework(g, [[0.0], [1.0]], [[0], [1]])
        with pytest.raises(ValueError):
            fp.cluster_distance(0, 2)
        with pytest.raises(ValueError):
            fp.cluster_distance(1, 1)


class TestAdjacency:
    def test_crossing_edge(self):
        g = ff.path_graph(3)
        fp = framework(g, [[0.0], [1.0], [2.0]], [[0, 1], [2]])
        assert fp.are_adjacent(0, 1)

    def test_star_leaves_not_adjacent(self):
        g = ff.star_graph(5)
        fp = framework(g, [[float(i)] for i in range(5)],
                       [[0], [1], [2], [3], [4]])
        assert not fp.are_adjacent(1, 2)
        assert fp.are_adjacent(0, 3)

    def test_complete_graph_all_adjacent(self):
        g = ff.complete_graph(4)
        fp = framework(g, [[float(i)] for i in range(4)], [[0, 1], [2], [3]])
        assert all(fp.are_adjacent(a, b)
                   for a in range(3) for b in range(3) if a != b)


class TestIntraInterDistance:
    def test_agent_wise_partition_has_zero_intra(self):
        g = ff.path_graph(3)
        fp = framework(g, [[0.0], [1.0], [2.0]], [[0], [1], [2]])
        assert fp.intra_distance() == 0.0

    def test_trivial_partition_intra_is_diameter(self):
        g = ff.path_graph(3)
        fp = framework(g, [[0.0], [1.0], [7.0]], [[0, 1, 2]])
        assert fp.intra_distance() == 7.0

    def test_segment_and_point(self):
        g = ff.path_graph(3)
        fp = framework(g, [[0.0], [1.0], [5.0]], [[0, 1], [2]])
        assert fp.intra_distance() == 1.0

    def test_inter_distance_path(self):
        g = ff.path_graph(3)
        fp = framework(g, [[0.0], [1.0], [5.0]], [[0, 1], [2]])
        assert fp.inter_distance() == 4.0

    def test_inter_distance_star_only_center_leaf_pairs(self):
        g = ff.star_graph(5)
        pos = [[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [-3.0, 0.0], [0.0, -4.0]]
        fp = framework(g, pos, [[0], [1], [2], [3], [4]])
        # leaves are mutually non-adjacent, so only center-leaf separations count
        assert fp.inter_distance() == 1.0

    def test_trivial_partition_has_no_adjacent_pairs(self):
        g = ff.path_graph(2)
        fp = framework(g, [[0.0], [1.0]], [[0, 1]])
        with pytest.raises(ValueError, match="no adjacent block pairs"):
            fp.inter_distance()


class TestIsDilute:
    def test_trivial_partition_always_dilute(self):
        g = ff.path_graph(4)
        fp = framework(g, [[0.0], [0.1], [5.0], [9.0]], [[0, 1, 2, 3]])
        for l in (0.01, 1.0, 100.0):
            assert fp.is_dilute(l)

    def test_agent_wise_when_edges_exceed_threshold(self):
        g = ff.path_graph(3)
        fp = framework(g, [[0.0], [2.0], [4.0]], [[0], [1], [2]])
        assert fp.is_dilute(1.0)
        assert not fp.is_dilute(2.0)  # separation must strictly exceed l

    def test_diameter_must_stay_below_separation(self):
        # two clusters of diameter 2 separated by 1.5
        g = ff.Graph(4, [(0, 1), (2, 3), (1, 2)])
        pos = [[0.0], [2.0], [3.5], [5.5]]
        fp = framework(g, pos, [[0, 1], [2, 3]])
        assert not fp.is_dilute(1.0)

    def test_disconnected_block_rejected(self):
        g = ff.star_graph(3)
        pos = [[0.0], [10.0], [20.0]]
        fp = framework(g, pos, [[1, 2], [0]])  # leaves only: disconnected block
        assert not fp.is_dilute(1.0)


class TestThresholdComponents:
    def test_all_edges_long_gives_agent_wise(self):
        g = ff.path_graph(3)
        fp = threshold_components(g, Configuration([[0.0], [2.0], [4.0]]), 1.0)
        assert fp.block_count == 3

    def test_all_edges_short_gives_trivial(self):
        g = ff.path_graph(3)
        fp = threshold_components(g, Configuration([[0.0], [0.5], [1.0]]), 1.0)
        assert fp.is_trivial

    def test_mixed(self):
        g = ff.path_graph(3)
        fp = threshold_components(g, Configuration([[0.0], [0.5], [10.0]]), 1.0)
        assert fp.blocks == ((0, 1), (2,))

    def test_diameter_bound(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            n = int(rng.integers(2, 8))
            g = random_connected_graph(rng, n)
            p = random_configuration(rng, g, 2, span=4.0, min_sep=0.01)
            l = float(rng.uniform(0.2, 3.0))
            fp = threshold_components(g, p, l)
            for i in range(fp.block_count):
                assert fp.block_diameters[i] < (n - 1) * l
                assert fp.block_subgraph(i).is_connected()


class TestCoarsen:
    def test_fixed_point_when_nothing_within_threshold(self):
        g = ff.path_graph(3)
        fp = framework(g, [[0.0], [5.0], [10.0]], [[0], [1], [2]])
        merged = coarsen(fp, 1.0)
        assert merged.blocks == fp.blocks

    def test_everything_merges_on_connected_graph(self):
        g = ff.path_graph(3)
        fp = framework(g, [[0.0], [1.0], [2.0]], [[0], [1], [2]])
        assert coarsen(fp, 2.0).is_trivial

    def test_transitive_merge_chain(self):
        # gaps 2, 2, 4 along a path of blocks with threshold 3: first three merge
        g = ff.path_graph(4)
        fp = framework(g, [[0.0], [2.0], [4.0], [8.0]], [[0], [1], [2], [3]])
        merged = coarsen(fp, 3.0)
        assert merged.blocks == ((0, 1, 2), (3,))

    def test_merged_blocks_stay_connected(self):
        rng = np.random.default_rng(29)
        for _ in range(50):
            g = random_connected_graph(rng, int(rng.integers(3, 8)))
            p = random_configuration(rng, g, 2, span=4.0, min_sep=0.01)
            fp = threshold_components(g, p, 0.5)
            merged = coarsen(fp, float(rng.uniform(0.5, 5.0)))
            assert all(merged.block_subgraph(i).is_connected()
                       for i in range(merged.block_count))
            assert merged.block_count <= fp.block_count


class TestFindNontrivialDilute:
    def test_two_distant_agents_yield_agent_wise(self):
        g = ff.path_graph(2)
        p = Configuration([[0.0], [5.0]])
        found = find_nontrivial_dilute(g, p, 1.0)
        assert found is not None and found.blocks == ((0,), (1,))

    def test_tight_cluster_has_no_nontrivial_partition(self):
        g = ff.complete_graph(4)
        p = Configuration(np.array([[0.0, 0.0], [0.05, 0.0],
                                    [0.0, 0.05], [0.05, 0.05]]))
        assert find_nontrivial_dilute(g, p, 1.0) is None
        nontrivial = [fp for fp in enumerate_dilute(g, p, 1.0)
                      if not fp.is_trivial]
        assert nontrivial == []

    def test_two_tight_clusters_split(self):
        g, p = two_clusters(100.0)
        found = find_nontrivial_dilute(g, p, 1.0)
        assert found is not None
        assert found.vp == VertexPartition(6, [[0, 1, 2], [3, 4, 5]])
        nontrivial = [fp for fp in enumerate_dilute(g, p, 1.0)
                      if not fp.is_trivial]
        assert nontrivial  # the oracle agrees one exists

    def test_every_result_is_dilute_and_nontrivial(self):
        rng = np.random.default_rng(37)
        for _ in range(100):
            g = random_connected_graph(rng, int(rng.integers(2, 8)))
            p = random_configuration(rng, g, 2, span=6.0, min_sep=0.01)
            l = float(rng.uniform(0.2, 3.0))
            found = find_nontrivial_dilute(g, p, l)
            if found is not None:
                assert not found.is_trivial
                assert found.is_dilute(l)
                assert all(found.block_subgraph(i).is_connected()
                           for i in range(found.block_count))

    def test_wide_configurations_always_split(self):
        # when the configuration is wider than the chain's terminal
        # threshold, the search must succeed
        rng = np.random.default_rng(41)
        for _ in range(50):
            g = random_connected_graph(rng, int(rng.integers(2, 7)))
            p = random_configuration(rng, g, 2, span=8.0, min_sep=0.01)
            l = float(rng.uniform(0.2, 2.0))
            found, terminal = _coarsening_search(g, p, l)
            if found is None:
                assert p.diameter() <= terminal

    def test_chain_shrinks_block_count_each_stage(self):
        rng = np.random.default_rng(43)
        for _ in range(50):
            n = int(rng.integers(3, 8))
            g = random_connected_graph(rng, n)
            p = random_configuration(rng, g, 2, span=5.0, min_sep=0.01)
            l = float(rng.uniform(0.2, 2.0))
            current = threshold_components(g, p, l)
            stages = 0
            while not (current.is_trivial or current.is_dilute(l)):
                before = current.block_count
                current = _merge_violating_pairs(current, l)
                stages += 1
                assert current.block_count < before
            assert stages <= n


class TestEnumerateDilute:
    def test_two_agents_far_apart(self):
        g = ff.path_graph(2)
        p = Configuration([[0.0], [5.0]])
        results = enumerate_dilute(g, p, 1.0)
        assert [fp.blocks for fp in results] == [((0, 1),), ((0,), (1,))]

    def test_two_agents_close(self):
        g = ff.path_graph(2)
        p = Configuration([[0.0], [0.5]])
        results = enumerate_dilute(g, p, 1.0)
        assert [fp.blocks for fp in results] == [((0, 1),)]

    def test_monotone_nesting_in_threshold(self):
        rng = np.random.default_rng(47)
        for _ in range(50):
            g = random_connected_graph(rng, int(rng.integers(2, 6)))
            p = random_configuration(rng, g, 2, span=5.0, min_sep=0.05)
            l_small = float(rng.uniform(0.2, 1.0))
            l_big = l_small * float(rng.uniform(1.5, 3.0))
            big = {fp.vp for fp in enumerate_dilute(g, p, l_big)}
            small = {fp.vp for fp in enumerate_dilute(g, p, l_small)}
            assert big <= small

    def test_size_guard(self):
        g = ff.path_graph(11)
        p = Configuration([[float(i)] for i in range(11)])
        with pytest.raises(ValueError, match="too large"):
            enumerate_dilute(g, p, 1.0)


class TestOracleConsistency:
    def test_search_succeeds_exactly_when_oracle_finds_one(self):
        rng = np.random.default_rng(53)
        for _ in range(60):
            n = int(rng.integers(2, 8))
            g = random_connected_graph(rng, n)
            p = random_configuration(rng, g, 2, span=5.0, min_sep=0.01)
            l = float(rng.uniform(0.2, 3.0))
            found = find_nontrivial_dilute(g, p, l)
            oracle = [fp for fp in enumerate_dilute(g, p, l)
                      if not fp.is_trivial]
            assert (found is not None) == bool(oracle)


class TestDilutingSubsequence:
    def test_static_two_cluster_series(self):
        g, p = two_clusters(1000.0)
        witness = diluting_subsequence(g, [p] * 10, list(range(1, 11)))
        assert witness is not None
        assert witness.indices == tuple(range(10))
        assert witness.vertex_partition == VertexPartition(6, [[0, 1, 2],
                                                               [3, 4, 5]])
        cluster_diameter = witness.partitions[0].block_diameters[0]
        assert witness.intra_bound == pytest.approx(cluster_diameter)

    def test_bounded_series_has_no_witness(self):
        g = ff.path_graph(2)
        p = Configuration([[0.0], [0.4]])  # diameter below every threshold
        assert diluting_subsequence(g, [p] * 5, [1, 2, 3, 4, 5]) is None

    def test_receding_clusters_partial_coverage(self):
        g, _ = two_clusters(10.0)
        snapshots = []
        separations = [10.0 + 5.0 * k for k in range(8)]
        for sep in separations:
            snapshots.append(two_clusters(sep)[1])
        thresholds = [4.0 + 6.0 * k for k in range(8)]
        witness = diluting_subsequence(g, snapshots, thresholds)
        assert witness is not None
        # a snapshot is covered exactly when its separation clears the
        # threshold used at its index
        for pos, (sep, l) in enumerate(zip(separations, thresholds)):
            gap = sep - 0.3  # cross-cluster distance of the layout
            if pos in witness.indices:
                assert gap > l
        assert witness.vertex_partition.block_count == 2

    def test_threshold_validation(self):
        g, p = two_clusters(10.0)
        with pytest.raises(ValueError, match="strictly increasing"):
            diluting_subsequence(g, [p, p], [2.0, 2.0])
        with pytest.raises(ValueError, match="one threshold per snapshot"):
            diluting_subsequence(g, [p, p], [1.0])
