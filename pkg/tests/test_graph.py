import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from blockfactor.graph import (
    Graph,
    GraphDomainError,
    GraphFormatError,
    adjacency,
    bipartite_embed,
    bipartite_graph,
    load_edge_list,
    loads_edge_list,
    read_labels,
    split_signed,
    write_edge_list,
    write_labels,
)
from blockfactor.models import sbm_loglik


def test_undirected_path():
    g = loads_edge_list("0 1\n1 2")
    expected = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)
    np.testing.assert_array_equal(g.matrix, expected)
    assert g.kind == "undirected" and g.n == 3


def test_self_edge_counts_twice():
    g = loads_edge_list("0 0")
    assert g.matrix[0, 0] == 2.0
    # one node, one self-edge, w = 1: m_00 = A_00 = 2 so loglik = 2 log 1 - 1 = -1
    assert sbm_loglik(g.matrix, [0], [[1.0]]) == pytest.approx(-1.0)
    # at the MLE w = m/n^2 = 2 the value is 2 log 2 - 2
    assert sbm_loglik(g.matrix, [0], [[2.0]]) == pytest.approx(2 * np.log(2) - 2)


def test_signed_negative_weight():
    g = loads_edge_list("0 1 -1", kind="signed")
    assert g.matrix[0, 1] == g.matrix[1, 0] == -1.0


def test_directed_is_not_symmetrised():
    g = loads_edge_list("0 1\n0 1\n2 0 0.5", kind="directed")
    assert g.matrix[0, 1] == 2.0 and g.matrix[1, 0] == 0.0
    assert g.matrix[2, 0] == 0.5


def test_comments_blank_lines_and_duplicates():
    g = loads_edge_list("# header\n\n0 1\n  # indented comment\n1 0 2\n")
    assert g.matrix[0, 1] == 3.0


def test_bipartite_edge_list_uses_separate_id_ranges():
    g = loads_edge_list("0 0\n1 2", kind="bipartite")
    assert (g.n1, g.n2) == (2, 3)
    assert g.matrix[0, 2] == 1.0 and g.matrix[1, 4] == 1.0


@pytest.mark.parametrize("text, line", [("0 1\nfoo bar\n", 2), ("0 1 2 3", 1), ("0\n", 1), ("0 -1", 1), ("0 1 nan", 1)])
def test_malformed_lines_report_line_number(text, line):
    with pytest.raises(GraphFormatError, match=f"line {line}"):
        loads_edge_list(text)


def test_negative_weight_outside_signed_kind():
    with pytest.raises(GraphDomainError):
        loads_edge_list("0 1 -2")


def test_unknown_kind():
    with pytest.raises(GraphDomainError):
        loads_edge_list("0 1", kind="hyper")


def test_empty_input_gives_empty_graph():
    assert loads_edge_list("# nothing\n").n == 0


def test_missing_file():
    with pytest.raises(OSError):
        load_edge_list("/nonexistent/edges.txt")


def test_adjacency_examples():
    np.testing.assert_array_equal(adjacency(Graph.from_edges(2, [(0, 1)])), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(adjacency(Graph.from_edges(3, [])), np.zeros((3, 3)))
    np.testing.assert_array_equal(adjacency(Graph.from_edges(2, [(0, 1), (0, 1)])), [[0, 2], [2, 0]])


def test_adjacency_is_a_copy_and_graph_is_frozen():
    g = Graph.from_edges(2, [(0, 1)])
    a = adjacency(g)
    a[0, 1] = 9
    assert g.matrix[0, 1] == 1
    with pytest.raises(ValueError):
        g.matrix[0, 1] = 5


def test_graph_validation():
    with pytest.raises(GraphDomainError):
        Graph("undirected", np.array([[0, 1], [0, 0]]))
    with pytest.raises(GraphDomainError):
        Graph("undirected", np.zeros((2, 3)))
    with pytest.raises(GraphDomainError):
        Graph("bipartite", np.ones((2, 2)), n1=1)
    with pytest.raises(GraphDomainError):
        Graph.from_edges(2, [(0, 1)], kind="bipartite")


def test_bipartite_embed_examples():
    np.testing.assert_array_equal(bipartite_embed([[1]]), [[0, 1], [1, 0]])
    a = bipartite_embed(np.eye(2))
    assert a.shape == (4, 4) and a[0, 2] == a[2, 0] == a[1, 3] == a[3, 1] == 1 and a.sum() == 4
    np.testing.assert_array_equal(bipartite_embed(np.zeros((2, 3))), np.zeros((5, 5)))
    with pytest.raises(GraphDomainError):
        bipartite_embed([[-1.0]])


@given(hnp.arrays(np.float64, hnp.array_shapes(min_dims=2, max_dims=2, max_side=6),
                  elements=st.floats(0, 10, allow_nan=False)))
def test_bipartite_embed_blocks(b):
    n1, n2 = b.shape
    a = bipartite_embed(b)
    assert not a[:n1, :n1].any() and not a[n1:, n1:].any()
    np.testing.assert_array_equal(a[:n1, n1:], b)
    np.testing.assert_array_equal(a, a.T)


def test_split_signed_examples():
    p, m = split_signed(Graph("signed", np.array([[0, -1], [-1, 0]])))
    assert not p.any()
    np.testing.assert_array_equal(m, [[0, 1], [1, 0]])
    p, m = split_signed(Graph("signed", np.array([[0, 2], [2, 0]])))
    np.testing.assert_array_equal(p, [[0, 2], [2, 0]])
    assert not m.any()
    with pytest.raises(GraphDomainError):
        split_signed(Graph.from_edges(2, [(0, 1)]))


@given(hnp.arrays(np.int64, (5, 5), elements=st.integers(-3, 3)))
def test_split_signed_reconstructs(raw):
    a = np.triu(raw) + np.triu(raw, 1).T
    p, m = split_signed(Graph("signed", a))
    np.testing.assert_array_equal(p - m, a)
    assert not (p * m).any()
    assert (p >= 0).all() and (m >= 0).all()


edge_lists = st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7), st.integers(1, 3)), min_size=1, max_size=20)


@given(edge_lists)
def test_loaded_undirected_graphs_are_symmetric(edges):
    text = "\n".join(f"{i} {j} {w}" for i, j, w in edges)
    a = loads_edge_list(text).matrix
    np.testing.assert_array_equal(a, a.T)
    # every listed edge adds 2w to the total (both orientations, or twice on the diagonal)
    assert a.sum() == 2 * sum(w for _, _, w in edges)


@pytest.mark.parametrize("kind", ["undirected", "directed", "signed"])
def test_edge_list_round_trip(tmp_path, rng, kind):
    a = rng.integers(-2 if kind == "signed" else 0, 3, size=(6, 6)).astype(float)
    if kind != "directed":
        a = np.triu(a) + np.triu(a, 1).T
        np.fill_diagonal(a, 2 * np.abs(np.diag(a)))
    a[-1, 0] = a[0, -1] = 1.0
    g = Graph(kind, a)
    path = tmp_path / "g.txt"
    write_edge_list(g, path)
    np.testing.assert_array_equal(load_edge_list(path, kind).matrix, a)


def test_bipartite_round_trip(tmp_path):
    g = bipartite_graph(np.array([[1, 0, 2], [0, 1, 1]]))
    write_edge_list(g, tmp_path / "b.txt")
    h = load_edge_list(tmp_path / "b.txt", "bipartite")
    np.testing.assert_array_equal(h.matrix, g.matrix)
    assert h.n1 == 2


def test_stream_source():
    assert load_edge_list(io.StringIO("0 1\n")).n == 2


def test_labels_round_trip(tmp_path):
    write_labels([2, 0, 1], tmp_path / "l.txt")
    np.testing.assert_array_equal(read_labels(tmp_path / "l.txt"), [2, 0, 1])


def test_bad_label_files(tmp_path):
    (tmp_path / "empty.txt").write_text("")
    (tmp_path / "bad.txt").write_text("0\nx\n")
    with pytest.raises(GraphFormatError, match="empty"):
        read_labels(tmp_path / "empty.txt")
    with pytest.raises(GraphFormatError, match=":2:"):
        read_labels(tmp_path / "bad.txt")
