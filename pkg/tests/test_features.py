import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from structrank import BATTERY, ConvergenceError, FeatureMatrix, ParseError, extended_battery, load_features
from structrank import features as F

import oracles
from conftest import complete_graph, cycle_graph, from_edges, path_graph, star_graph


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n_nodes))
    h.add_edges_from(map(tuple, g.edges.tolist()))
    return h


def k4_minus_edge():
    return from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)], 4)


def test_degree_examples():
    np.testing.assert_array_equal(F.degree(star_graph(5)), [5, 1, 1, 1, 1, 1])
    np.testing.assert_array_equal(F.degree(complete_graph(4)), [3, 3, 3, 3])


def test_isolated_node_has_degree_zero():
    g = from_edges([(0, 1)], 3)
    np.testing.assert_array_equal(F.degree(g), [1, 1, 0])


def test_local_clustering_examples():
    np.testing.assert_array_equal(F.local_clustering(complete_graph(3)), [1, 1, 1])
    assert F.local_clustering(path_graph(3))[1] == 0.0
    np.testing.assert_allclose(F.local_clustering(k4_minus_edge()), [2 / 3, 2 / 3, 1, 1], rtol=1e-15)


def test_betweenness_examples():
    np.testing.assert_allclose(F.betweenness(star_graph(5)), [1, 0, 0, 0, 0, 0])
    np.testing.assert_allclose(F.betweenness(path_graph(3)), [0, 1, 0])
    bc = F.betweenness(cycle_graph(5))
    np.testing.assert_allclose(bc, oracles.betweenness(5, [(i, (i + 1) % 5) for i in range(5)]), atol=1e-15)
    assert np.ptp(bc) == 0


def test_betweenness_pivots_all_sources_is_exact():
    g = cycle_graph(9)
    np.testing.assert_allclose(F.betweenness(g, n_pivots=9, seed=1), F.betweenness(g))


def test_betweenness_pivot_estimate_is_close(small_synthetic):
    g = small_synthetic.graph
    exact = F.betweenness(g)
    approx = F.betweenness(g, n_pivots=g.n_nodes // 2, seed=0)
    assert np.corrcoef(exact, approx)[0, 1] > 0.9


def test_closeness_and_harmonic_examples():
    assert F.closeness(star_graph(5))[0] == 1.0
    two = from_edges([(0, 1), (2, 3)], 4)
    np.testing.assert_array_equal(F.harmonic(two), [1, 1, 1, 1])
    np.testing.assert_allclose(F.harmonic(path_graph(4))[0], 1 + 1 / 2 + 1 / 3, rtol=1e-15)
    assert F.closeness(from_edges([(0, 1)], 3))[2] == 0.0


def test_two_hop_size():
    np.testing.assert_array_equal(F.two_hop_size(path_graph(5)), [2, 3, 4, 3, 2])


def test_pagerank_examples():
    np.testing.assert_allclose(F.pagerank(complete_graph(3)), [1 / 3] * 3, atol=1e-12)
    single = from_edges([], 1)
    np.testing.assert_array_equal(F.pagerank(single), [1.0])
    # stationary equations of P3 solved by hand: x_end = 19/74, x_mid = 36/74
    np.testing.assert_allclose(F.pagerank(path_graph(3)), [19 / 74, 36 / 74, 19 / 74], atol=1e-10)


def test_pagerank_non_convergence_names_iterations():
    with pytest.raises(ConvergenceError) as exc:
        F.pagerank(star_graph(10), max_iter=2)
    assert exc.value.n_iter == 2
    assert "2" in str(exc.value)


def test_burts_constraint_examples():
    np.testing.assert_allclose(F.burts_constraint(complete_graph(2)), [1, 1])
    assert F.burts_constraint(star_graph(5))[0] == pytest.approx(0.2, rel=1e-15)
    np.testing.assert_allclose(F.burts_constraint(complete_graph(3)), [1.125] * 3, rtol=1e-15)


def test_battery_examples():
    fm = extended_battery(complete_graph(4))
    assert fm.names == BATTERY and fm.shape == (4, 12)
    np.testing.assert_array_equal(fm.column("core_number"), [3, 3, 3, 3])
    star = extended_battery(star_graph(5))
    np.testing.assert_array_equal(star.column("avg_neighbor_degree")[1:], [5] * 5)


def test_battery_matches_single_kernels(small_synthetic):
    g = small_synthetic.graph
    fm = extended_battery(g)
    for name in BATTERY:
        np.testing.assert_allclose(fm.column(name), F.KERNELS[name](g), rtol=1e-12, atol=1e-15, err_msg=name)


def test_battery_custom_kernel():
    fm = extended_battery(path_graph(3), ["degree", "ones"], kernels={"ones": lambda g: np.ones(g.n_nodes)})
    np.testing.assert_array_equal(fm.column("ones"), [1, 1, 1])
    with pytest.raises(KeyError):
        extended_battery(path_graph(3), ["nope"])


def test_cross_check_with_networkx(small_synthetic):
    g = small_synthetic.graph
    h = to_nx(g)
    n = g.n_nodes
    ref = {
        "betweenness": nx.betweenness_centrality(h),
        "closeness": nx.closeness_centrality(h, wf_improved=False),
        "harmonic": nx.harmonic_centrality(h),
        "local_clustering": nx.clustering(h),
        "pagerank": nx.pagerank(h, tol=1e-13),
        "eigenvector": nx.eigenvector_centrality_numpy(h),
        "core_number": nx.core_number(h),
        "burts_constraint": nx.constraint(h),
        "avg_neighbor_degree": nx.average_neighbor_degree(h),
        "triangle_count": nx.triangles(h),
    }
    for name, d in ref.items():
        want = np.array([d[i] for i in range(n)], dtype=float)
        got = F.KERNELS[name](g)
        if name == "eigenvector":
            want = np.abs(want)
        np.testing.assert_allclose(got, want, rtol=1e-6, atol=1e-8, err_msg=name)


def test_eigenvector_zero_outside_largest_component():
    g = from_edges([(0, 1), (1, 2), (3, 4)], 6)
    ev = F.eigenvector(g)
    assert np.all(ev[3:] == 0)
    assert np.linalg.norm(ev) == pytest.approx(1.0)


def test_feature_matrix_validation():
    with pytest.raises(ValueError):
        FeatureMatrix(np.array([[1.0, np.nan]]), ("a", "b"), ("x",))
    with pytest.raises(ValueError):
        FeatureMatrix(np.ones((1, 2)), ("a", "a"), ("x",))
    with pytest.raises(ValueError):
        FeatureMatrix(np.ones((1, 0)), (), ("x",))


def test_features_csv_roundtrip(tmp_path, small_synthetic):
    g = small_synthetic.graph
    fm = extended_battery(g)
    fm.to_csv(tmp_path / "f.csv")
    assert (tmp_path / "f.csv").read_text().splitlines()[0] == "node_id," + ",".join(BATTERY)
    back = load_features(tmp_path / "f.csv", g)
    np.testing.assert_array_equal(back.values, fm.values)


def test_load_features_errors(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("node_id,x\n0,1\n1,oops\n")
    with pytest.raises(ParseError) as exc:
        load_features(p)
    assert (exc.value.line, exc.value.column) == (3, 2)
    p.write_text("node_id,x\n0,1\n")
    with pytest.raises(KeyError, match="'1'"):
        load_features(p, path_graph(2))


small_graphs = st.integers(3, 10).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), min_size=1, max_size=25),
        st.permutations(range(n)),
    )
)


@settings(max_examples=50, deadline=None)
@given(small_graphs)
def test_permutation_equivariance(data):
    n, edges, order = data
    g = from_edges(edges, n)
    fm = extended_battery(g)
    fp = extended_battery(g.permute(np.array(order)))
    np.testing.assert_allclose(fp.values, fm.values[list(order)], rtol=1e-9, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(small_graphs)
def test_analytic_ranges(data):
    n, edges, _ = data
    g = from_edges(edges, n)
    fm = extended_battery(g)
    clustering = fm.column("local_clustering")
    assert np.all((clustering >= 0) & (clustering <= 1))
    closeness = fm.column("closeness")
    assert np.all((closeness >= 0) & (closeness <= 1 + 1e-12))
    deg = fm.column("degree")
    assert np.all(fm.column("burts_constraint")[deg > 0] > 0)
    assert fm.column("pagerank").sum() == pytest.approx(1.0, abs=1e-8)
    assert np.all(fm.column("core_number") <= deg)


@settings(max_examples=40, deadline=None)
@given(small_graphs)
def test_brute_force_oracle_small(data):
    n, edges, _ = data
    g = from_edges(edges, n)
    e = g.edges.tolist()
    np.testing.assert_allclose(F.betweenness(g), oracles.betweenness(n, e), atol=1e-9)
    np.testing.assert_allclose(F.closeness(g), oracles.closeness(n, e), atol=1e-9)
    np.testing.assert_allclose(F.harmonic(g), oracles.harmonic(n, e), atol=1e-9)
    np.testing.assert_allclose(F.local_clustering(g), oracles.local_clustering(n, e), atol=1e-9)
