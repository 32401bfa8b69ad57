import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings

from conftest import digraphs
from qflag.digraph import Digraph, load_adjacency_matrix, load_digraph, load_edge_list, sniff_format
from qflag.errors import DigraphFormatError


def test_cycle_edge_list():
    g = load_edge_list("0 1\n1 2\n2 0")
    assert g.num_vertices == 3
    assert g.edges == {(0, 1), (1, 2), (2, 0)}


def test_reciprocal_pair_kept():
    g = load_edge_list("0 1\n1 0")
    assert g.num_edges == 2
    assert g.reciprocal_pairs() == 1


def test_self_loop_rejected_with_line():
    with pytest.raises(DigraphFormatError) as err:
        load_edge_list("0 1\n\n0 0\n")
    assert err.value.line == 3
    assert "line 3" in str(err.value)


@pytest.mark.parametrize("text,line", [("0 x\n", 1), ("0 1\n1 2 3\n", 2), ("-1 2\n", 1)])
def test_malformed_tokens(text, line):
    with pytest.raises(DigraphFormatError) as err:
        load_edge_list(text)
    assert err.value.line == line


def test_duplicates_and_comments():
    g = load_edge_list("# a comment\n0 1\n0 1  # again\n\n2 1\n")
    assert g.edges == {(0, 1), (2, 1)}


def test_vertex_header_and_override():
    assert load_edge_list("# vertices 5\n0 1\n").num_vertices == 5
    assert load_edge_list("0 1\n", num_vertices=4).num_vertices == 4
    with pytest.raises(DigraphFormatError):
        load_edge_list("0 7\n", num_vertices=3)


def test_remap_sparse_ids():
    g = load_edge_list("100 7\n7 42\n", remap=True)
    assert g.labels == [7, 42, 100]
    assert g.edges == {(2, 0), (0, 1)}


@pytest.mark.parametrize(
    "text,edges",
    [("0 1\n0 0\n", {(0, 1)}), ("0,1\n1,0\n", {(0, 1), (1, 0)})],
)
def test_adjacency(text, edges):
    g = load_adjacency_matrix(text)
    assert g.num_vertices == 2 and g.edges == edges


@pytest.mark.parametrize(
    "text,fragment",
    [("1 0\n0 0\n", "diagonal"), ("0 1 0\n0 0\n", "square"), ("0 2\n0 0\n", "non-binary")],
)
def test_adjacency_errors(text, fragment):
    with pytest.raises(DigraphFormatError, match=fragment):
        load_adjacency_matrix(text)


def test_digraph_validation():
    with pytest.raises(ValueError):
        Digraph(2, [(0, 0)])
    with pytest.raises(ValueError):
        Digraph(2, [(0, 2)])


def test_from_sparse_adjacency():
    m = sp.csr_matrix(np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]]))
    assert Digraph.from_adjacency(m).edges == {(0, 1), (1, 2), (2, 0)}


def test_load_digraph_files(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("0,1,1\n0,0,1\n0,0,0\n")
    assert load_digraph(p).edges == {(0, 1), (0, 2), (1, 2)}
    q = tmp_path / "h.txt"
    q.write_text("0 5\n5 3\n")
    assert load_digraph(q).num_vertices == 6
    assert load_digraph(q, fmt="edgelist", remap=True).num_vertices == 3


def test_sniff():
    assert sniff_format("0 1\n1 0\n0 1\n") == "edgelist"
    assert sniff_format("0,1\n0,0\n") == "adjacency"


def test_celegans_dataset(request):
    path = request.path.parent / "data" / "celegans_chemical.edges"
    g = load_edge_list(open(path))
    assert (g.num_vertices, g.num_edges) == (279, 2194)


@settings(max_examples=60, deadline=None)
@given(digraphs(max_vertices=8))
def test_loaders_agree_and_round_trip(data):
    n, edges = data
    g = Digraph(n, edges)
    text_adj = "\n".join(" ".join(map(str, row)) for row in g.adjacency_matrix().tolist())
    assert load_adjacency_matrix(text_adj) == g
    assert load_edge_list(g.to_edge_list()) == g
