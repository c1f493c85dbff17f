
import numpy as np
import pytest

from octalab import graphs
from octalab.graphs import Graph, GraphError, IntersectionArray

from shapes import complete, cycle, petersen


def test_complete_graph_order():
    assert graphs.automorphism_group(complete(4)).order == 24


def test_cycle_parameters():
    C5 = cycle(5)
    assert graphs.srg_params(C5) == (5, 2, 0, 1)
    assert graphs.automorphism_group(C5).order == 10


def test_path_is_not_regular():
    with pytest.raises(GraphError):
        graphs.srg_params(Graph.from_edges(3, [(0, 1), (1, 2)]))


def test_petersen():
    P = petersen()
    assert graphs.srg_params(P) == (10, 3, 0, 1)
    arr = graphs.drg_params(P)
    assert (arr.b, arr.c) == ((3, 2), (1, 1))
    assert graphs.automorphism_group(P).order == 120


def test_drg_witness_on_non_drg():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    with pytest.raises(GraphError) as exc:
        graphs.drg_params(g)
    assert exc.value.witness is not None


def test_array_arithmetic():
    arr = IntersectionArray((32, 27, 8, 1), (1, 4, 27, 32))
    assert arr.distribution() == (1, 32, 216, 64, 2)
    assert sum(arr.distribution()) == 315
    assert str(arr) == "{32,27,8,1;1,4,27,32}"


def test_gewirtz_parameters(gw):
    assert graphs.srg_params(gw.graph) == (56, 10, 0, 2)
    arr = graphs.drg_params(gw.graph)
    assert (arr.b, arr.c) == ((10, 9), (1, 2))


def test_order_invariant_under_relabeling(gw):
    rng = np.random.default_rng(3)
    for _ in range(5):
        h = gw.graph.relabel(rng.permutation(56))
        search = graphs.automorphism_search(h)
        assert search.order == 80640
        assert all(h.is_automorphism(g) for g in search.generators)


def test_isomorphism_relabeled(gw):
    perm = np.random.default_rng(1).permutation(56)
    h = gw.graph.relabel(perm)
    m = graphs.isomorphism(gw.graph, h)
    assert m is not None
    assert np.array_equal(h.adj[np.ix_(m, m)], gw.graph.adj)


def test_isomorphism_rejects_size_mismatch(gw):
    assert graphs.isomorphism(gw.graph, petersen()) is None


def test_non_isomorphic_same_size():
    assert graphs.isomorphism(cycle(6), Graph.from_edges(6, [(0, 1), (1, 2), (2, 0),
                                                             (3, 4), (4, 5), (5, 3)])) is None


def test_colours_restrict_automorphisms():
    assert graphs.automorphism_group(cycle(6), colors=[1, 0, 0, 0, 0, 0]).order == 2


def test_graph_io(tmp_path):
    P = petersen()
    graphs.write_graph(P, tmp_path / "p.txt")
    assert np.array_equal(graphs.read_graph(tmp_path / "p.txt").adj, P.adj)
    graphs.write_dimacs(P, tmp_path / "p.dimacs")
    assert np.array_equal(graphs.read_dimacs(tmp_path / "p.dimacs").adj, P.adj)


def test_collinearity_graphs_from_both_groups_isomorphic(octo, link):
    o_g, _ = link
    assert graphs.isomorphism(octo.geometry.collinearity, o_g.geometry.collinearity) is not None
