import json

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings

from gbtree.tree import (
    DegreeSequence,
    InvalidDegreeSequence,
    TreeTooLarge,
    adjacency,
    bethe_degrees,
    build_tree,
    classify,
    counterexample_degrees,
    level_sizes,
    quasi_regular_degrees,
    vertex_count,
)

from conftest import small_sequences
from oracles import level_census, nx_bethe_tree


class TestDegreeSequence:
    def test_parse(self):
        assert DegreeSequence.parse("5,3,5,3,2").degrees == (5, 3, 5, 3, 2)
        assert DegreeSequence.parse(" 3 , 2 ").k == 3

    @pytest.mark.parametrize("text", ["", "3,,2", "a,b", "3,1", "0"])
    def test_parse_rejects(self, text):
        with pytest.raises(InvalidDegreeSequence):
            DegreeSequence.parse(text)

    def test_rejects_small_degree(self):
        with pytest.raises(InvalidDegreeSequence, match="below 2"):
            DegreeSequence((3, 1))

    def test_rejects_empty(self):
        with pytest.raises(InvalidDegreeSequence):
            DegreeSequence(())

    def test_str_roundtrip(self):
        ds = DegreeSequence((4, 2, 7))
        assert DegreeSequence.parse(str(ds)) == ds


@pytest.mark.parametrize("degrees, expected", [
    ((5, 3, 5, 3, 2), [1, 5, 10, 40, 80, 80]),
    ((3, 3, 2), [1, 3, 6, 6]),
    ((7,), [1, 7]),
])
def test_level_sizes_match_explicit_construction(degrees, expected):
    # expected values frozen from the networkx census
    assert level_census(nx_bethe_tree(degrees)) == expected
    assert level_sizes(DegreeSequence(degrees)) == expected


def test_counterexample_size():
    assert vertex_count(DegreeSequence((5, 3, 5, 3, 2))) == 216


@given(small_sequences())
@settings(max_examples=60, deadline=None)
def test_level_sizes_agree_with_census(ds):
    tree = build_tree(ds)
    assert level_sizes(ds) == level_census(nx_bethe_tree(ds.degrees))
    assert list(np.bincount(tree.level_of)) == level_sizes(ds)


@given(small_sequences())
@settings(max_examples=60, deadline=None)
def test_build_tree_is_a_tree_with_prescribed_degrees(ds):
    tree = build_tree(ds)
    g = nx.Graph()
    g.add_nodes_from(range(tree.vertex_count))
    g.add_edges_from(tree.edges.tolist())
    assert nx.is_tree(g)
    assert tree.edges.shape[0] == tree.vertex_count - 1
    deg = np.asarray(adjacency(tree).sum(axis=1)).ravel()
    for v in range(tree.vertex_count):
        level = tree.level_of[v]
        want = ds.degrees[level] if level < ds.k - 1 else 1
        assert deg[v] == want
    # isomorphic to the independently grown tree
    assert nx.is_isomorphic(g, nx_bethe_tree(ds.degrees))


def test_bfs_numbering():
    tree = build_tree(DegreeSequence((3, 3, 2)))
    assert tree.level_of.tolist() == [0] + [1] * 3 + [2] * 6 + [3] * 6
    # children of a vertex are contiguous and follow BFS order
    assert tree.edges[:5].tolist() == [[0, 1], [0, 2], [0, 3], [1, 4], [1, 5]]
    assert tree.level_offsets == [0, 1, 4, 10]


def test_star():
    tree = build_tree(DegreeSequence((3,)))
    assert tree.vertex_count == 4
    assert tree.edges.tolist() == [[0, 1], [0, 2], [0, 3]]
    A = adjacency(tree).toarray()
    assert A[0].tolist() == [0, 1, 1, 1]


def test_counterexample_tree():
    tree = build_tree(DegreeSequence((5, 3, 5, 3, 2)))
    assert tree.vertex_count == 216
    assert tree.edges.shape == (215, 2)


def test_adjacency_3_3_2():
    A = adjacency(build_tree(DegreeSequence((3, 3, 2))))
    assert A.shape == (16, 16)
    assert A.nnz == 2 * 15
    dense = A.toarray()
    assert (dense == dense.T).all()
    assert (np.diag(dense) == 0).all()


def test_size_cap():
    ds = DegreeSequence((10,) * 7)
    with pytest.raises(TreeTooLarge, match=str(vertex_count(ds))):
        build_tree(ds)
    with pytest.raises(TreeTooLarge):
        build_tree(DegreeSequence((3, 3, 2)), cap=10)


def test_size_cap_env(monkeypatch):
    monkeypatch.setenv("GBT_MAX_VERTICES", "20")
    build_tree(DegreeSequence((3, 3, 2)))
    with pytest.raises(TreeTooLarge):
        build_tree(DegreeSequence((3, 3, 3)))


@pytest.mark.parametrize("k, expected", [
    (6, (5, 3, 5, 3, 2)),
    (8, (5, 5, 5, 3, 2, 2, 2)),
    (10, (5, 7, 5, 3, 2, 2, 2, 2, 2)),
])
def test_counterexample_degrees(k, expected):
    ds = counterexample_degrees(k)
    assert ds.degrees == expected
    assert ds.k == k


@pytest.mark.parametrize("k", [5, 7, 4, 2, 0])
def test_counterexample_degrees_rejects(k):
    with pytest.raises(ValueError):
        counterexample_degrees(k)


def test_classify():
    assert str(classify(bethe_degrees(2, 5))) == "bethe(2)"
    assert bethe_degrees(2, 5).degrees == (2, 3, 3, 3)
    assert str(classify(quasi_regular_degrees(3, 4))) == "quasi-regular(3)"
    assert str(classify(DegreeSequence((4,)))) == "star(4)"
    assert str(classify(DegreeSequence((3, 3, 2)))) == "general"


def test_exports():
    tree = build_tree(DegreeSequence((2, 2)))
    assert tree.edge_list_text() == "0 1\n0 2\n1 3\n2 4\n"
    data = json.loads(tree.to_json())
    assert data == {"degrees": [2, 2], "level_sizes": [1, 2, 2],
                    "edges": [[0, 1], [0, 2], [1, 3], [2, 4]]}
