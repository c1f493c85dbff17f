
import numpy as np
import pytest
from hypothesis import given, settings, HealthCheck, strategies as st

from octalab import geometry as geo, octagon
from octalab.geometry import Geometry, NotASpread, VerificationError

from shapes import grid, w2


def test_single_line():
    assert geo.verify_near_polygon(Geometry(3, [[0, 1, 2]])) == 1


def test_grid():
    g = grid()
    assert geo.verify_near_polygon(g) == 2
    assert geo.order_of(g) == (2, 1)
    assert geo.find_quads(g) == [tuple(range(9))]


def test_grid_spread_is_ambiguous():
    g = grid()
    with pytest.raises(NotASpread):
        geo.spread_from_quads(g, geo.find_quads(g))


def test_w2():
    g = w2()
    assert geo.order_of(g) == (2, 2)
    assert geo.verify_gq(g) == (2, 2)
    geo.verify_generalized_polygon(g, 4)


def test_not_partial_linear():
    with pytest.raises(VerificationError):
        geo.verify_near_polygon(Geometry(4, [[0, 1, 2], [0, 1, 3]]))


def test_disconnected():
    with pytest.raises(VerificationError):
        geo.verify_near_polygon(Geometry(4, [[0, 1], [2, 3]]))


def test_triangle_fails_near_polygon_axiom():
    with pytest.raises(VerificationError) as exc:
        geo.verify_near_polygon(Geometry(3, [[0, 1], [1, 2], [0, 2]]))
    assert exc.value.witness is not None


def test_order_witness():
    g = Geometry(4, [[0, 1, 2], [2, 3]])
    assert geo.order_of(g) is None
    assert "line" in geo.order_witness(g)


def test_fano_flags_form_hexagon():
    from octalab.family import fano_flag_geometry
    h = fano_flag_geometry()
    assert (h.npoints, geo.order_of(h)) == (21, (2, 1))
    geo.verify_generalized_polygon(h, 6)


def test_w2_is_not_a_hexagon():
    with pytest.raises(VerificationError):
        geo.verify_generalized_polygon(w2(), 6)


def test_isomorphism_basics():
    h, _ = octagon.h41()
    assert geo.geometry_isomorphism(h, w2()) is None
    m = geo.geometry_isomorphism(w2(), w2())
    assert m is not None and w2().is_automorphism(m)


def test_closure_of_line_is_line(octo):
    L = octo.geometry.lines[0]
    assert geo.convex_closure(octo.geometry, L) == L


def test_closure_of_quad_pair(octo):
    g = octo.geometry
    A = g.collinearity.adj.astype(int)
    D, C = g.distances, A @ A
    u, v = map(int, np.argwhere((D == 2) & (C >= 2))[0])
    assert len(geo.convex_closure(g, (u, v))) == 15
    u, v = map(int, np.argwhere((D == 2) & (C == 1))[0])
    w = int(np.flatnonzero(A[u] & A[v])[0])
    lines = set(g.lines[g.line_through(u, w)]) | set(g.lines[g.line_through(w, v)])
    assert set(geo.convex_closure(g, (u, v))) == lines  # no quad arises


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.lists(st.integers(0, 314), min_size=1, max_size=3), st.integers(0, 314))
def test_closure_idempotent_and_monotone(octo, seed, extra):
    g = octo.geometry
    c = geo.convex_closure(g, seed)
    assert geo.convex_closure(g, c) == c
    assert set(c) <= set(geo.convex_closure(g, list(seed) + [extra]))


def test_quads(octo, quads):
    assert len(quads.quads) == 42
    assert sum(len(Q) for Q in quads.quads) == 315 * 2
    assert all(len(Q) == 15 for Q in quads.quads)


def test_point_quad_pairs(octo, quads):
    g = octo.geometry
    Q = quads.quads[0]
    assert geo.classify_point_quad(g, Q[0], Q) == geo.PointQuad("classical", 0, (Q[0],))
    kinds = {geo.classify_point_quad(g, x, Q).kind for x in range(g.npoints)}
    assert kinds == {"classical"}
    near = next(x for x in range(g.npoints) if x not in Q and g.distances[x, list(Q)].min() == 1)
    assert geo.classify_point_quad(g, near, Q).kind == "classical"


def test_spread_and_quotient(octo, quads):
    g = octo.geometry
    assert len(quads.spread) == 105 and geo.is_spread(g, quads.spread)
    for Q in quads.quads:
        inside = [j for j in geo.lines_in(g, Q) if j in set(quads.spread)]
        assert len(inside) == 5
    h = quads.quotient
    assert (h.npoints, h.nlines, geo.order_of(h)) == (105, 42, (4, 1))


def test_triangles_lie_on_lines(octo):
    assert geo.triangles_in_lines(octo.geometry) is None
    assert geo.triangles_in_lines(Geometry(3, [[0, 1], [1, 2], [0, 2]])) is not None


def test_geometry_io_round_trip(tmp_path, octo):
    path = tmp_path / "octo.txt"
    text = geo.write_geometry(octo.geometry, path)
    assert text.startswith("points 315\n")
    back = geo.read_geometry(path)
    assert back.lines == octo.geometry.lines


def test_suborbit_exports(octo):
    d = octagon.suborbits(octo)
    doc = d.to_json()
    assert [o["size"] for o in doc["orbits"]] == [1, 2, 8, 16, 32, 64, 64, 128]
    assert d.to_dot().count("[label=\"O") == 8
    assert d.lines_from(d.names.index("O0")) == {d.names.index("O1a"): 1, d.names.index("O1b"): 4}
    o4 = d.names.index("O4")
    assert d.lines_from(o4) == {d.names.index("O3a"): 2, d.names.index("O3b"): 3}


def test_suborbit_diagram_rejects_non_automorphism(octo):
    from octalab.perm import PermGroup
    bad = np.arange(315)
    bad[[0, 1]] = [1, 0]
    bad[[1, 5]] = bad[[5, 1]]
    G = PermGroup.closure([bad], degree=315)
    with pytest.raises(VerificationError):
        geo.suborbit_diagram(octo.geometry, G, 0)


def test_each_quad_is_w2(octo, quads):
    g = octo.geometry
    for Q in quads.quads[:6]:
        relabel = {p: i for i, p in enumerate(Q)}
        sub = Geometry(15, [[relabel[p] for p in g.lines[j]] for j in geo.lines_in(g, Q)])
        assert geo.geometry_isomorphism(sub, w2()) is not None
