import numpy as np
import pytest

from graphforge import (
    CoincidentPointsError,
    ConstructionConfig,
    ConstructionError,
    DataError,
    Graph,
    PointSet,
    build_graph,
    epsilon_graph,
    gabriel_graph,
    gabriel_pair_test,
    knn_graph,
    mnn_graph,
    snn_graph,
    snn_similarity,
)
from graphforge import oracles

THREE_ON_A_LINE = PointSet(features=np.array([[0.0, 0.0], [1.0, 0.0], [10.0, 0.0]]))


class TestKnnGraph:
    def test_directed_three_points(self):
        g = knn_graph(THREE_ON_A_LINE, 1, symmetrize="none")
        assert g.directed
        assert g.edge_set() == {(0, 1), (1, 0), (2, 1)}

    def test_union_three_points(self):
        g = knn_graph(THREE_ON_A_LINE, 1, symmetrize="union")
        assert not g.directed
        assert g.edge_set() == {(0, 1), (1, 2)}

    def test_k_capped_two_points(self):
        ps = PointSet(features=[[0.0], [1.0]])
        g = knn_graph(ps, 3, symmetrize="none")
        assert g.edge_set() == {(0, 1), (1, 0)}

    def test_out_degree_exactly_min_k_n1(self, rng):
        ps = PointSet(features=rng.random((40, 3)))
        for k in (1, 3, 39, 50):
            g = knn_graph(ps, k, symmetrize="none")
            out_deg = np.bincount(g.edges[:, 0], minlength=40)
            assert (out_deg == min(k, 39)).all()

    def test_union_has_no_isolated_nodes(self, rng):
        ps = PointSet(features=rng.random((60, 2)))
        g = knn_graph(ps, 1, symmetrize="union")
        assert np.union1d(g.edges[:, 0], g.edges[:, 1]).size == 60

    def test_needs_two_points(self):
        with pytest.raises(ConstructionError):
            knn_graph(PointSet(features=[[1.0]]), 1)


class TestMnnGraph:
    def test_three_points_unreciprocated_dropped(self):
        g = mnn_graph(THREE_ON_A_LINE, 1)
        assert g.edge_set() == {(0, 1)}

    def test_two_points_always_mutual(self):
        ps = PointSet(features=[[0.0], [4.0]])
        for k in (1, 2, 5):
            assert mnn_graph(ps, k).edge_set() == {(0, 1)}

    def test_subset_of_union_knn(self, rng):
        ps = PointSet(features=rng.random((100, 4)))
        for k in (1, 3, 7):
            mnn = mnn_graph(ps, k).edge_set()
            union = knn_graph(ps, k, symmetrize="union").edge_set()
            assert mnn <= union


class TestSnnSimilarity:
    COLLINEAR = PointSet(features=np.array([[0.0], [1.0], [2.0], [9.0]]))

    def test_hand_computed_neighbor_sets(self):
        # N2(0) = {1, 2}, N2(1) = {0, 2} -> shared = {2}
        assert snn_similarity(self.COLLINEAR, 0, 1, k=2) == 1

    def test_distant_clusters_share_nothing(self, rng):
        left = rng.random((10, 2))
        right = rng.random((10, 2)) + 100.0
        ps = PointSet(features=np.vstack([left, right]))
        assert snn_similarity(ps, 0, 15, k=3) == 0

    def test_symmetric_over_all_pairs(self, rng):
        ps = PointSet(features=rng.random((40, 3)))
        from graphforge import build_index

        idx = build_index(ps)
        for a in range(0, 40, 3):
            for b in range(a + 1, 40, 5):
                assert snn_similarity(ps, a, b, 4, idx) == snn_similarity(ps, b, a, 4, idx)

    def test_same_node_rejected(self):
        with pytest.raises(DataError):
            snn_similarity(self.COLLINEAR, 1, 1, k=2)


class TestSnnGraph:
    def test_collinear_theta_one(self):
        ps = TestSnnSimilarity.COLLINEAR
        g = snn_graph(ps, k=2, theta=1)
        assert (0, 1) in g.edge_set()

    def test_monotone_in_theta(self, rng):
        ps = PointSet(features=rng.random((80, 3)))
        k = 4
        edge_sets = [snn_graph(ps, k, theta).edge_set() for theta in range(1, k + 1)]
        for tighter, looser in zip(edge_sets[1:], edge_sets):
            assert tighter <= looser

    def test_matches_brute_force_oracle(self, rng):
        ps = PointSet(features=rng.random((300, 6)))
        g = snn_graph(ps, 3, 2, weighted=True)
        want, weights = oracles.snn_edges(ps.features, 3, 2)
        assert g.edge_set() == want
        got_w = {tuple(e): w for e, w in zip(g.edges.tolist(), g.edge_weights.tolist())}
        assert got_w == {pair: float(w) for pair, w in weights.items()}

    def test_weights_symmetric_and_bounded(self, rng):
        ps = PointSet(features=rng.random((60, 2)))
        g = snn_graph(ps, 5, 1, weighted=True)
        assert (g.edge_weights <= 5).all() and (g.edge_weights >= 1).all()

    def test_theta_above_k_rejected(self, rng):
        ps = PointSet(features=rng.random((10, 2)))
        with pytest.raises(ConstructionError):
            snn_graph(ps, 3, 4)


class TestEpsilonGraph:
    def test_edge_below_threshold(self):
        ps = PointSet(features=[[0.0], [0.4]])
        assert epsilon_graph(ps, 0.5).edge_set() == {(0, 1)}

    def test_boundary_excluded(self):
        ps = PointSet(features=[[0.0], [0.5]])
        assert epsilon_graph(ps, 0.5).edge_set() == set()

    def test_nested_and_oracle_exact(self, rng):
        ps = PointSet(features=rng.random((500, 3)))
        previous = set()
        for eps in (0.1, 0.5, 1.0):
            got = epsilon_graph(ps, eps).edge_set()
            assert got == oracles.epsilon_edges(ps.features, eps)
            assert previous <= got
            previous = got

    def test_non_positive_epsilon_rejected(self, rng):
        ps = PointSet(features=rng.random((5, 2)))
        with pytest.raises(ConstructionError):
            epsilon_graph(ps, 0.0)


class TestGabrielPairTest:
    PS = PointSet(features=np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [1.0, 1.0], [5.0, 5.0]]))

    def test_midpoint_blocks(self):
        # C=(1,0) sits at the center of the (0,0)-(2,0) disc
        assert gabriel_pair_test(self.PS, 0, 1) is False

    def test_boundary_point_does_not_block(self):
        # C=(1,1) lies exactly on the sphere: non-strict rule passes
        ps = PointSet(features=np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 1.0]]))
        assert gabriel_pair_test(ps, 0, 1) is True

    def test_boundary_point_blocks_in_closed_mode(self):
        ps = PointSet(features=np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 1.0]]))
        assert gabriel_pair_test(ps, 0, 1, boundary="closed") is False

    def test_distant_point_irrelevant(self):
        ps = PointSet(features=np.array([[0.0, 0.0], [2.0, 0.0], [5.0, 5.0]]))
        assert gabriel_pair_test(ps, 0, 1) is True

    def test_coincident_endpoints_rejected(self):
        ps = PointSet(features=np.array([[1.0, 1.0], [1.0, 1.0], [0.0, 0.0]]))
        with pytest.raises(CoincidentPointsError):
            gabriel_pair_test(ps, 0, 1)


class TestGabrielGraph:
    def test_three_collinear(self):
        ps = PointSet(features=np.array([[0.0], [1.0], [2.0]]))
        assert gabriel_graph(ps).edge_set() == {(0, 1), (1, 2)}

    def test_unit_square_nonstrict_keeps_diagonals(self):
        ps = PointSet(features=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]))
        got = gabriel_graph(ps, boundary="open").edge_set()
        assert got == {(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)}

    def test_unit_square_closed_mode_drops_diagonals(self):
        ps = PointSet(features=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]))
        got = gabriel_graph(ps, boundary="closed").edge_set()
        assert got == {(0, 1), (0, 2), (1, 3), (2, 3)}

    def test_contains_nearest_neighbor_edges_and_connected(self, rng):
        from graphforge import brute_force_knn, connected_components

        ps = PointSet(features=rng.random((200, 2)))
        g = gabriel_graph(ps)
        edges = g.edge_set()
        for i in range(ps.n):
            nn = brute_force_knn(ps, i, 1).indices()[0]
            assert (min(i, nn), max(i, nn)) in edges
        n_comp, _ = connected_components(g)
        assert n_comp == 1

    def test_matches_literal_oracle(self, rng):
        for d in (2, 6):
            ps = PointSet(features=rng.random((150, d)))
            for boundary in ("open", "closed"):
                got = gabriel_graph(ps, boundary=boundary).edge_set()
                assert got == oracles.gabriel_edges(ps.features, boundary)

    def test_candidate_mode_is_subset(self, rng):
        ps = PointSet(features=rng.random((250, 6)))
        exact = gabriel_graph(ps, mode="exact").edge_set()
        for cand_k in (3, 10, 40):
            cand = gabriel_graph(ps, mode="candidate", cand_k=cand_k).edge_set()
            assert cand <= exact

    def test_candidate_mode_converges_to_exact(self, rng):
        ps = PointSet(features=rng.random((80, 2)))
        exact = gabriel_graph(ps, mode="exact").edge_set()
        assert gabriel_graph(ps, mode="candidate", cand_k=79).edge_set() == exact

    def test_coincident_points_rejected(self):
        ps = PointSet(features=np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]]))
        with pytest.raises(CoincidentPointsError):
            gabriel_graph(ps)


class TestGraphInvariants:
    def test_no_self_loops_or_duplicates_any_method(self, rng):
        ps = PointSet(features=rng.random((70, 3)))
        graphs = [
            knn_graph(ps, 3, symmetrize="none"),
            knn_graph(ps, 3, symmetrize="union"),
            mnn_graph(ps, 3),
            snn_graph(ps, 3, 1),
            epsilon_graph(ps, 0.4),
            gabriel_graph(ps),
        ]
        for g in graphs:
            assert (g.edges[:, 0] != g.edges[:, 1]).all()
            codes = g.edges[:, 0] * g.n_nodes + g.edges[:, 1]
            assert np.unique(codes).size == codes.size
            if not g.directed:
                assert (g.edges[:, 0] < g.edges[:, 1]).all()
            # canonical: rows sorted lexicographically
            assert (np.diff(codes) > 0).all() if codes.size > 1 else True

    def test_determinism_across_thread_counts(self, rng):
        ps = PointSet(features=rng.random((120, 6)))
        cfgs = [
            ConstructionConfig(method="knn", k=3, symmetrize="union"),
            ConstructionConfig(method="mnn", k=3),
            ConstructionConfig(method="snn", k=3, theta=2),
            ConstructionConfig(method="epsilon", epsilon=0.4),
            ConstructionConfig(method="gabriel", gabriel_mode="candidate", gabriel_cand_k=10),
        ]
        for cfg in cfgs:
            a = build_graph(ps, cfg, threads=1)
            b = build_graph(ps, cfg, threads=8)
            np.testing.assert_array_equal(a.edges, b.edges)

    def test_provenance_records_config_and_checksum(self, rng):
        ps = PointSet(features=rng.random((20, 2)))
        g = knn_graph(ps, 3, symmetrize="union")
        assert g.provenance["config"]["method"] == "knn"
        assert g.provenance["config"]["k"] == 3
        assert len(g.provenance["dataset_checksum"]) == 64

    def test_graph_rejects_bad_edges(self):
        with pytest.raises(ConstructionError):
            Graph(n_nodes=3, edges=[[0, 0]])
        with pytest.raises(ConstructionError):
            Graph(n_nodes=3, edges=[[0, 3]])


class TestConstructionConfig:
    def test_unknown_method(self):
        with pytest.raises(ConstructionError):
            ConstructionConfig(method="voronoi")

    def test_metric_restricted_to_euclidean(self):
        with pytest.raises(ConstructionError, match="euclidean"):
            ConstructionConfig(method="knn", k=3, metric="cosine")

    def test_roundtrip_dict(self):
        cfg = ConstructionConfig(method="snn", k=5, theta=3, snn_weighted=True)
        assert ConstructionConfig.from_dict(cfg.to_dict()) == cfg

    def test_theta_defaults_to_two(self):
        cfg = ConstructionConfig(method="snn", k=3)
        assert cfg.resolved_theta() == 2
