"""Randomized laws for permutations, geometries, graphs and the octagon."""

import numpy as np
from hypothesis import HealthCheck, given, settings, strategies as st

from octalab import family, geometry as geo, graphs, octagon, perm, pg24
from octalab.perm import SemilinearDatum, compose_semilinear, semilinear_to_perm

from shapes import petersen, w2

fixture_ok = settings(max_examples=30, deadline=None,
                      suppress_health_check=[HealthCheck.function_scoped_fixture])


def perms(n):
    return st.permutations(range(n)).map(np.array)


@st.composite
def data(draw):
    A = draw(st.tuples(*[st.sampled_from(pg24.ELEMENTS)] * 9).filter(lambda A: pg24.det(A) == 1))
    return SemilinearDatum(A, draw(st.integers(0, 1)), draw(st.integers(0, 1)))


@settings(max_examples=60, deadline=None)
@given(data(), data())
def test_semilinear_composition(d1, d2):
    lhs = semilinear_to_perm(compose_semilinear(d1, d2))
    assert np.array_equal(lhs, perm.mul(semilinear_to_perm(d1), semilinear_to_perm(d2)))


@given(perms(12), perms(12), perms(12))
def test_permutation_group_laws(a, b, c):
    assert np.array_equal(perm.mul(perm.mul(a, b), c), perm.mul(a, perm.mul(b, c)))
    assert perm.is_identity(perm.mul(a, perm.inv(a)))
    assert np.array_equal(perm.mul(a, perm.identity(12)), a)
    assert perm.order_of(perm.conj(a, b)) == perm.order_of(a)


@fixture_ok
@given(st.integers(0, 20159), st.integers(0, 20159))
def test_enumerated_group_is_closed(L34, i, j):
    E = L34.elements
    assert perm.mul(E[i], E[j]) in L34
    assert perm.inv(E[i]) in L34


@given(st.integers(0, 20), st.integers(0, 20))
def test_plane_incidence(p, q):
    plane = pg24.enumerate_plane()
    assert len(plane.points_on_line[p]) == 5 and len(plane.lines_on_point[p]) == 5
    if p != q:
        common = set(plane.lines_on_point[p]) & set(plane.lines_on_point[q])
        assert len(common) == 1


@settings(max_examples=20, deadline=None)
@given(perms(15))
def test_geometry_text_round_trip_and_relabeling(p):
    g = w2()
    h = geo.Geometry(15, [[int(p[x]) for x in L] for L in g.lines])
    back = geo.parse_geometry(geo.write_geometry(h))
    assert sorted(back.lines) == sorted(h.lines)
    assert geo.order_of(back) == (2, 2)
    iso = geo.geometry_isomorphism(g, back)
    assert iso is not None
    assert {tuple(sorted(int(iso[x]) for x in L)) for L in g.lines} == set(back.lines)


@settings(max_examples=20, deadline=None)
@given(perms(10))
def test_isomorphism_finds_relabelings(p):
    g = petersen()
    h = g.relabel(p)
    m = graphs.isomorphism(g, h)
    assert m is not None
    assert np.array_equal(h.adj[np.ix_(m, m)], g.adj)
    assert graphs.automorphism_search(h).order == 120


@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 6))
def test_intersection_array_distribution(k, b1, c2):
    arr = graphs.IntersectionArray((k, b1), (1, c2))
    try:
        ks = arr.distribution()
    except graphs.GraphError:
        assert (k * b1) % c2
    else:
        assert ks == (1, k, k * b1 // c2)


@fixture_ok
@given(st.integers(0, 314))
def test_point_classes_partition(octo, quads, x):
    g = octo.geometry
    spread_of = np.empty(g.npoints, dtype=np.int64)
    for j in quads.spread:
        spread_of[list(g.lines[j])] = j
    cls = family.point_classes(g, spread_of, x)
    sizes = tuple(int((cls == c).sum()) for c in range(8))
    assert sizes == family.Params(2, 4, 2).class_sizes()
    assert sum(sizes) == g.npoints and cls[x] == 0


@fixture_ok
@given(st.integers(0, 314))
def test_suborbit_diagram_consistent_from_any_point(octo, x):
    d = octagon.suborbits(octo, x)
    d.check_consistency()
    assert d.sizes == [1, 2, 8, 16, 32, 64, 64, 128]


@fixture_ok
@given(st.integers(0, 80639), st.integers(0, 314))
def test_elation_flag_is_equivariant(G, octo, k, i):
    n = 21
    h = G.elements[k]
    index = {s.tobytes(): j for j, s in enumerate(octo.involutions)}
    d = octagon.elation_data(octo.involutions[i], i)
    j = index[perm.conj(octo.involutions[i], h).tobytes()]
    img = octagon.elation_data(octo.involutions[j], j)
    a, b = int(h[d.center]), int(h[n + d.axis])
    want = (a, b - n) if a < n else (b, a - n)
    assert img.flag == want
