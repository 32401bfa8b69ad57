import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings

import oracles
from conftest import digraphs
from qflag.digraph import Digraph
from qflag.errors import CeilingExceeded, InvariantViolation
from qflag.flagcomplex import build_complex
from qflag.qclassic import face_poset
from qflag.qdirected import build_connectivity_digraph, condense
from qflag.simplicial import SimplicialComplexView as View
from qflag.topology import (
    ChainComplexZ2,
    Poset,
    betti_z2,
    euler_from_betti,
    gf2_rank_sparse,
    order_complex,
    poset_height,
)

SPHERE = build_complex(Digraph(4, [(0, 1), (0, 2), (1, 2), (2, 1), (1, 3), (2, 3)]))
NWES = build_complex(Digraph(4, [(0, 2), (0, 3), (2, 3), (3, 2), (1, 2), (1, 3)]))


def test_antichain_and_chain():
    anti = Poset(3)
    assert order_complex(anti).counts == [3] and poset_height(anti) == 0
    chain = Poset(3, [(0, 1), (1, 2)])
    assert order_complex(chain).simplices(2) == [(0, 1, 2)]
    assert poset_height(Poset(4, [(0, 1), (1, 2), (2, 3)])) == 3


def test_poset_rejects_cycles_and_loops():
    with pytest.raises(InvariantViolation):
        Poset(2, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Poset(1, [(0, 0)])


def test_reachability():
    p = Poset(4, [(0, 1), (1, 2)])
    assert p.less_than(0, 2) and not p.less_than(2, 0) and not p.less_than(0, 0)
    assert p.comparable_pairs() == 3


def test_chain_ceiling():
    p = Poset(6, [(a, b) for a in range(6) for b in range(a + 1, 6)])
    assert len(order_complex(p)) == 63
    assert order_complex(p, max_dim=1).counts == [6, 15]
    with pytest.raises(CeilingExceeded):
        order_complex(p, ceiling=20)


def test_face_poset_height():
    assert poset_height(face_poset(View.from_simplices([(0, 1, 2)]))) == 2


def test_sphere_betti():
    assert betti_z2(SPHERE) == [1, 0, 1]
    assert betti_z2(NWES) == [1, 0, 1]


def _condensed_order_complex(k, spec):
    return order_complex(Poset.from_condensation(condense(build_connectivity_digraph(k, spec))))


def test_condensed_posets():
    left = _condensed_order_complex(SPHERE, (1, 1, 2))
    assert left.counts == [9, 10]
    assert betti_z2(left) == [1, 2]
    assert betti_z2(_condensed_order_complex(NWES, (1, 1, 2))) == [1, 1]


def test_single_edge_poset():
    k = build_complex(Digraph(2, [(0, 1)]))
    assert betti_z2(_condensed_order_complex(k, (0, 0, 1))) == [1, 0]


def test_empty_and_ranks():
    assert betti_z2(View.from_simplices([])) == [0]
    import scipy.sparse as sp

    m = sp.csc_matrix(np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=np.uint8))
    assert gf2_rank_sparse(m) == 2


def _views(data):
    n, edges = data
    c = build_complex(Digraph(n, edges))
    return c, View.from_directed(c)


@settings(max_examples=80, deadline=None)
@given(digraphs(max_vertices=7))
def test_boundary_squares_to_zero_and_euler(data):
    for k in _views(data):
        assert ChainComplexZ2.from_complex(k).composition_vanishes()
        b = betti_z2(k)
        chi = sum((-1) ** d * n for d, n in enumerate(k.counts))
        assert euler_from_betti(b) == chi


@settings(max_examples=80, deadline=None)
@given(digraphs(max_vertices=7))
def test_betti_matches_oracle_and_components(data):
    n, edges = data
    _, view = _views(data)
    assert betti_z2(view) == oracles.betti_unordered(view.all_simplices())
    und = nx.Graph()
    und.add_nodes_from(range(n))
    und.add_edges_from(edges)
    assert betti_z2(view)[0] == nx.number_connected_components(und)


@settings(max_examples=80, deadline=None)
@given(digraphs(max_vertices=6))
def test_face_poset_preserves_homology(data):
    for k in _views(data):
        if len(list(k)) > 50:
            continue
        assert betti_z2(order_complex(face_poset(k))) == betti_z2(k)
