import pytest
from hypothesis import given

from omex import (BipartiteGraph, GraphFormatError, GraphInvariantError,
                  complete_graph, load, save, validate)
from omex.graph import from_json, to_json

from conftest import small_graphs


def test_empty_graph_is_valid():
    g = BipartiteGraph(0, 1, 0, ((),))
    assert validate(g) is None


def test_neighbor_index_at_right_size_is_violation():
    g = BipartiteGraph(1, 2, 1, ((2,), ()))
    v = validate(g)
    assert v is not None
    assert v.rule == "neighbor_range"
    assert v.vertex == 0


def test_complete_graph_valid():
    g = complete_graph(2, 4)
    assert validate(g) is None
    assert all(g.degree_of(v) == 4 for v in range(4))


def test_degree_bound_violation_reports_vertex():
    g = BipartiteGraph(1, 3, 2, ((0,), (0, 1, 2)))
    v = validate(g)
    assert v.rule == "degree_bound"
    assert v.vertex == 1


def test_left_size_cannot_exceed_index_space():
    g = BipartiteGraph(1, 2, 1, ((), (), ()))
    assert validate(g).rule == "left_size_bound"


def test_save_load_roundtrip(tmp_path):
    g = BipartiteGraph(2, 5, 3, ((0, 1), (4, 4), (2,), ()))
    path = tmp_path / "g.json"
    save(g, path)
    assert load(path) == g


def test_serialization_is_byte_deterministic(tmp_path):
    g = complete_graph(2, 3)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save(g, p1)
    save(g, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_malformed_file_missing_field():
    with pytest.raises(GraphFormatError, match="neighbors"):
        from_json('{"n": 1, "right_size": 2, "max_degree": 1}')


def test_malformed_file_bad_json():
    with pytest.raises(GraphFormatError):
        from_json("{not json")


def test_load_refuses_invariant_violation():
    text = '{"n": 1, "right_size": 2, "max_degree": 2, "neighbors": [[0, 1, 1], [0]]}'
    with pytest.raises(GraphInvariantError, match="degree"):
        from_json(text)


def test_neighbors_of_complete():
    g = complete_graph(1, 2)
    assert g.neighbors_of(0) == (0, 1)


def test_multi_edge_kept_with_multiplicity():
    g = BipartiteGraph(0, 4, 2, ((3, 3),))
    assert g.neighbors_of(0) == (3, 3)
    assert g.left_neighbors_of(3) == [0, 0]


def test_left_neighbors_in_left_index_order():
    g = BipartiteGraph(2, 2, 2, ((1,), (0, 1), (1,)))
    assert g.left_neighbors_of(1) == [0, 1, 2]
    assert g.left_neighbors_of(0) == [1]


def test_out_of_range_indices_raise():
    g = complete_graph(1, 2)
    with pytest.raises(IndexError):
        g.neighbors_of(2)
    with pytest.raises(IndexError):
        g.left_neighbors_of(2)


def test_build_raises_on_invalid():
    with pytest.raises(GraphInvariantError):
        BipartiteGraph.build(1, 2, 1, [[5], []])


@given(small_graphs())
def test_reverse_adjacency_preserves_edge_count(g):
    forward = sum(len(row) for row in g.neighbors)
    backward = sum(len(g.left_neighbors_of(r)) for r in range(g.right_size))
    assert forward == backward


@given(small_graphs())
def test_json_roundtrip_identity(g):
    assert from_json(to_json(g)) == g
