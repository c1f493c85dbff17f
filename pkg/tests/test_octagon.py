import numpy as np
import pytest

from octalab import geometry as geo, octagon, pg24
from octalab.perm import mul


def test_shape(octo):
    assert octo.observed_sizes == [105, 420, 840]
    assert octo.admissible == (105, 420)
    assert (octo.geometry.npoints, octo.geometry.nlines) == (315, 525)
    assert len(octo.lines_of_size(105)) == 105 and len(octo.lines_of_size(420)) == 420


def test_line_products(octo):
    for j in range(0, 525, 7):
        x, y, z = (octo.involutions[i] for i in octo.geometry.lines[j])
        assert np.array_equal(mul(x, y), z) and np.array_equal(mul(y, x), z)


def test_distribution_matches_closed_forms(octo):
    s, t, tp = 2, 4, 2
    closed = (1, s + s * t, s * s * t + s * s * t * (t - tp),
              s ** 3 * t * (t - tp) + s ** 3 * tp * (t - tp) ** 2, s ** 4 * tp * (t - tp) ** 2)
    assert octagon.distance_distribution(octo.geometry) == closed == octagon.DISTRIBUTION


def test_near_octagon_report(octo):
    r = octagon.verify_near_octagon(octo)
    assert r.passed, r.to_text()


def test_smallest_orbit_alone_is_disconnected(octo):
    with pytest.raises(geo.VerificationError):
        geo.check_connected(octo.with_admissible([105]).geometry)


def test_all_triples_break_the_axiom(octo):
    with pytest.raises(geo.VerificationError) as exc:
        geo.verify_near_polygon(octo.with_admissible([105, 420, 840]).geometry)
    assert exc.value.witness is not None


def test_unknown_admissible_size(G):
    with pytest.raises(octagon.BuildError):
        octagon.build_octagon(G, admissible=[105, 421])


def test_line_transitive_classes(octo):
    labels = {octo.triple_orbit[n] for n in octo.line_triples}
    assert len(labels) == 2


def test_elations(octo):
    r = octagon.verify_elations(octo)
    assert r.passed, r.to_text()
    d = octagon.elation_data(octo.involutions[0], 0)
    assert d.center in pg24.enumerate_plane().points_on_line[d.axis]


def test_elation_rejects_duality():
    from octalab.perm import DUALITY, semilinear_to_perm
    with pytest.raises(geo.VerificationError):
        octagon.elation_data(semilinear_to_perm(DUALITY))


def test_quotient_report(octo, quads):
    r = octagon.verify_quotient(octo, quads)
    assert r.passed, r.to_text()
    assert r.data["isomorphism"] == "flag map"


def test_flag_map_is_a_bijection(octo, quads):
    fm = octagon.flag_map(octo, quads.spread)
    assert sorted(fm) == list(range(105))


def test_suborbit_fixture(octo):
    d, r = octagon.suborbit_report(octo)
    assert r.passed, r.data["diff"]
    name = d.names.index
    o1b, o2b = name("O1b"), name("O2b")
    assert d.lines_from(o1b) == {name("O0"): 1, name("O2a"): 2, name("O2b"): 2}
    assert d.lines_from(o2b)[o1b] == 1
    x = octo.involutions[0]
    from octalab.perm import dihedral_type
    assert dihedral_type(x, octo.involutions[d.orbits[name("O3b")][0]]) == "S3"


def test_suborbit_diff_reports_cells(octo, monkeypatch):
    fixture = octagon.load_suborbit_fixture()
    fixture["line_classes"][0]["lines_per_point"]["O0"] = 2
    monkeypatch.setattr(octagon, "load_suborbit_fixture", lambda: fixture)
    d = octagon.suborbits(octo)
    diffs = octagon.compare_suborbits(octo, d)
    assert diffs == [{"cell": "O0-O1a.lines_per_point", "expected": {"O0": 2, "O1a": 1},
                      "got": {"O0": 1, "O1a": 1}}]


def test_automorphisms(octo):
    A, r = octagon.verify_automorphisms(octo)
    assert r.passed, r.to_text()
    assert A.order == 80640
