import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fxnet.errors import DegenerateInputError, UndefinedNormalizationError
from fxnet.metrics import (PathLengthMode, characteristic_path_length, node_degrees, topology_report,
                           tree_distances, weighted_clustering)
from fxnet.netcore import Edge, SpanningTree, WeightMatrix, build_mst, correlation_matrix, distance_matrix, \
    weight_matrix
from oracles import floyd_warshall, naive_clustering


def star(n, d=1.0):
    nodes = [f"N{i:02d}" for i in range(n)]
    return SpanningTree(nodes=nodes, edges=[Edge(nodes[0], v, d, 0.5) for v in nodes[1:]])


def path(n, d=1.0):
    nodes = [f"N{i:02d}" for i in range(n)]
    return SpanningTree(nodes=nodes, edges=[Edge(a, b, d, 0.5) for a, b in zip(nodes, nodes[1:])])


def random_tree(rng, n):
    """Random labeled tree: attach node k to a uniform earlier node."""
    nodes = [f"N{i:02d}" for i in range(n)]
    edges = [Edge(nodes[int(rng.integers(k))], nodes[k], float(rng.uniform(0.1, 2)), 0.5) for k in range(1, n)]
    edges = [Edge(*sorted((e.u, e.v)), e.distance, e.weight) for e in edges]
    return SpanningTree(nodes=nodes, edges=edges)


def _weights(vals, n):
    w = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    w[iu] = vals
    return WeightMatrix(labels=[f"N{i:02d}" for i in range(n)], values=w + w.T)


@pytest.mark.parametrize("mode", list(PathLengthMode))
def test_two_nodes(mode):
    assert characteristic_path_length(path(2), mode) == 1.0


def test_three_node_path_hop():
    assert characteristic_path_length(path(3), "hop") == pytest.approx(8 / 6)


def test_star_40():
    # 78 hub-leaf ordered pairs at 1, 1482 leaf-leaf pairs at 2
    assert (78 * 1 + 1482 * 2) / (40 * 39) == 1.95
    assert characteristic_path_length(star(40), "hop") == pytest.approx(1.95, abs=1e-12)
    assert characteristic_path_length(star(40), "weighted") == pytest.approx(1.95, abs=1e-12)


def test_path_length_degenerate():
    with pytest.raises(DegenerateInputError):
        characteristic_path_length(SpanningTree(nodes=["A"], edges=[]))


@pytest.mark.parametrize("n", [2, 5, 8, 12])
def test_tree_distances_match_floyd_warshall(n, rng):
    for _ in range(5):
        tree = random_tree(rng, n)
        idx = {name: i for i, name in enumerate(tree.nodes)}
        for mode in PathLengthMode:
            step = (lambda e: 1.0) if mode is PathLengthMode.HOP else (lambda e: e.distance)
            oracle = floyd_warshall(n, [(idx[e.u], idx[e.v], step(e)) for e in tree.edges])
            np.testing.assert_allclose(tree_distances(tree, mode), oracle, rtol=1e-12, atol=1e-12)


def test_hop_length_floor_star(rng):
    for _ in range(20):
        assert characteristic_path_length(random_tree(rng, 40), "hop") >= 1.95 - 1e-12


@given(st.integers(3, 20), st.floats(0.01, 100), st.integers(0, 2 ** 31))
def test_weighted_length_scales_linearly(n, s, seed):
    tree = random_tree(np.random.default_rng(seed), n)
    scaled = SpanningTree(nodes=tree.nodes, edges=[Edge(e.u, e.v, e.distance * s, e.weight) for e in tree.edges])
    assert characteristic_path_length(scaled) == pytest.approx(s * characteristic_path_length(tree), rel=1e-12)


@pytest.mark.parametrize("n", [3, 10, 40])
def test_uniform_weights_give_one(n):
    w = _weights(np.full(n * (n - 1) // 2, 0.37), n)
    assert weighted_clustering(w) == pytest.approx(1.0, abs=1e-12)


def test_three_node_fixture():
    w = WeightMatrix(labels=["A", "B", "C"], values=[[0, 0.9, 0.3], [0.9, 0, 0.6], [0.3, 0.6, 0]])
    hand = (1.0 * (0.6 / 0.9) * (0.3 / 0.9)) ** (1 / 3)
    assert hand == pytest.approx(0.6057, abs=1e-4)
    assert weighted_clustering(w) == pytest.approx(hand, abs=1e-12)


def test_isolated_node_pulls_below_one():
    n = 5
    w = np.ones((n, n)) - np.eye(n)
    w[0, :] = w[:, 0] = 0
    c = weighted_clustering(WeightMatrix(labels=list("ABCDE"), values=w), per_node=True)
    assert c[0] == 0
    assert c.mean() < 1


def test_clustering_errors():
    with pytest.raises(DegenerateInputError):
        weighted_clustering(_weights([0.5], 2))
    with pytest.raises(UndefinedNormalizationError):
        weighted_clustering(_weights(np.zeros(3), 3))


@given(st.integers(3, 9).flatmap(lambda n: arrays(float, n * (n - 1) // 2, elements=st.floats(0, 1))
                                  .map(lambda a: (n, a))))
def test_clustering_matches_naive(arg):
    n, vals = arg
    if vals.max() == 0:
        return
    w = _weights(vals, n)
    expected, per_node = naive_clustering(w.values)
    got = weighted_clustering(w, per_node=True)
    np.testing.assert_allclose(got, per_node, atol=1e-12)
    assert weighted_clustering(w) == pytest.approx(expected, abs=1e-12)
    assert np.all((got >= 0) & (got <= 1))


@given(st.integers(3, 12), st.floats(1e-3, 1e3), st.integers(0, 2 ** 31))
def test_clustering_scale_invariant(n, s, seed):
    vals = np.random.default_rng(seed).uniform(0, 1, n * (n - 1) // 2)
    assert weighted_clustering(_weights(vals * s, n)) == pytest.approx(weighted_clustering(_weights(vals, n)),
                                                                       rel=1e-12)


def test_degrees_star_and_path():
    d = node_degrees(star(7))
    assert d.hub == "N00" and d.hub_degree == 6
    assert all(d.degrees[k] == 1 for k in d.degrees if k != "N00")
    p = node_degrees(path(5)).degrees
    assert [p[k] for k in sorted(p)] == [1, 2, 2, 2, 1]


def test_degree_handshake(rng):
    for n in range(2, 30):
        tree = random_tree(rng, n)
        assert sum(node_degrees(tree).degrees.values()) == 2 * (n - 1)


def test_topology_report(rng):
    x = rng.normal(size=(10, 80))
    c = correlation_matrix(x, labels=[f"C{i:02d}" for i in range(10)], base="EUR", kind="sign")
    tree = build_mst(distance_matrix(c), weight_matrix(c), base="EUR", kind="sign")
    r = topology_report(tree, weight_matrix(c), "hop")
    assert r.base == "EUR" and r.kind == "sign" and r.path_mode == "hop"
    assert r.L > 0 and 0 <= r.C <= 1
    assert sum(r.degrees.values()) == 18
    assert r.degrees[r.hub] == max(r.degrees.values())
