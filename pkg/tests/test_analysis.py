import numpy as np
import pytest

from graphforge import (
    DataError,
    Graph,
    PointSet,
    connected_components,
    gabriel_graph,
    knn_graph,
    mnn_graph,
    topology_report,
)
from graphforge.analysis import format_report


def path_graph(n_nodes=3):
    edges = [(i, i + 1) for i in range(n_nodes - 1)]
    return Graph(n_nodes=n_nodes, edges=edges)


class TestConnectedComponents:
    def test_two_components_hand_traceable(self):
        g = Graph(n_nodes=4, edges=[(0, 1), (1, 2)])
        n_comp, ids = connected_components(g)
        assert n_comp == 2
        assert ids.tolist() == [0, 0, 0, 1]

    def test_empty_edge_set_all_isolated(self):
        g = Graph(n_nodes=5, edges=np.empty((0, 2), dtype=np.int64))
        n_comp, ids = connected_components(g)
        assert n_comp == 5
        assert ids.tolist() == [0, 1, 2, 3, 4]

    def test_gabriel_on_random_2d_is_connected(self, rng):
        ps = PointSet(features=rng.random((200, 2)))
        n_comp, _ = connected_components(gabriel_graph(ps))
        assert n_comp == 1

    def test_ids_ordered_by_smallest_member(self):
        g = Graph(n_nodes=6, edges=[(3, 5), (1, 2)])
        _, ids = connected_components(g)
        # components: {0}, {1,2}, {3,5}, {4} in smallest-member order
        assert ids.tolist() == [0, 1, 1, 2, 3, 2]

    def test_directed_graph_uses_underlying_undirected_form(self):
        g = Graph(n_nodes=3, edges=[(0, 1), (1, 0), (2, 1)], directed=True)
        n_comp, _ = connected_components(g)
        assert n_comp == 1


class TestTopologyReport:
    def test_path_graph_numbers(self):
        rep = topology_report(path_graph())
        assert rep.min_degree == 1 and rep.max_degree == 2
        assert rep.mean_degree == pytest.approx(4 / 3)
        assert rep.n_components == 1
        assert rep.isolated_count == 0
        assert rep.largest_component_fraction == 1.0

    def test_homophily_one_same_class_edge_of_two(self):
        rep = topology_report(path_graph(), labels=np.array(["A", "A", "B"]))
        assert rep.homophily == 0.5

    def test_mnn_no_denser_than_knn(self, rng):
        ps = PointSet(features=rng.random((500, 3)))
        knn_edges = knn_graph(ps, 3, symmetrize="union").n_edges
        mnn_edges = mnn_graph(ps, 3).n_edges
        assert mnn_edges <= knn_edges

    def test_degree_sum_is_twice_edges(self, rng):
        ps = PointSet(features=rng.random((90, 2)))
        g = mnn_graph(ps, 4)
        rep = topology_report(g)
        assert rep.mean_degree * rep.n_nodes == pytest.approx(2 * rep.n_edges)

    def test_isolated_equals_singleton_components(self):
        g = Graph(n_nodes=5, edges=[(0, 1)])
        rep = topology_report(g)
        assert rep.isolated_count == 3
        assert rep.n_components == 4

    def test_directed_degrees_are_out_degrees(self, rng):
        ps = PointSet(features=rng.random((30, 2)))
        g = knn_graph(ps, 3, symmetrize="none")
        rep = topology_report(g)
        assert rep.min_degree == rep.max_degree == 3.0

    def test_label_length_mismatch(self):
        with pytest.raises(DataError):
            topology_report(path_graph(), labels=np.array(["A"]))

    def test_homophily_in_unit_interval(self, rng):
        ps = PointSet(
            features=rng.random((80, 2)),
            labels=np.array([["x", "y", "z"][i % 3] for i in range(80)]),
        )
        g = knn_graph(ps, 3, symmetrize="union")
        rep = topology_report(g, labels=ps.labels)
        assert 0.0 <= rep.homophily <= 1.0
        for frac in rep.per_class_homophily.values():
            assert 0.0 <= frac <= 1.0

    def test_text_rendering_is_aligned(self):
        text = format_report(topology_report(path_graph()))
        lines = text.splitlines()
        assert any(line.startswith("n_nodes") for line in lines)
        assert len({line.index(line.split()[-1]) for line in lines if "n_" in line}) >= 1

    def test_report_is_deterministic(self, rng):
        ps = PointSet(features=rng.random((50, 2)))
        g = knn_graph(ps, 2, symmetrize="union")
        assert topology_report(g) == topology_report(g)
