import pytest

from octalab import family, geometry as geo


@pytest.fixture(scope="module")
def product():
    return family.build_product(family.fano_flag_geometry(), 3)


def test_octagon_passes(octo, quads):
    r = family.check_family(octo.geometry, quads.spread, 2, quads=quads.quads)
    assert r.passed, r.to_text()
    assert r.data["quotient_order"] == [4, 1]


def test_wrong_divisor_fails_first_property(octo, quads):
    r = family.check_family(octo.geometry, quads.spread, 1, quads=quads.quads)
    failed = {c.tag: c.witness for c in r.failed()}
    x, y, count = failed["family:lines 2'->1''"]
    assert count == 2  # two lines into the second class, not one


def test_threads_give_identical_report(octo, quads):
    a = family.check_family(octo.geometry, quads.spread, 2, jobs=1, quads=quads.quads)
    b = family.check_family(octo.geometry, quads.spread, 2, jobs=3, quads=quads.quads)
    assert a.to_json() == b.to_json()


def test_partition_sizes(octo, quads):
    spread_of = [0] * 315
    for j in quads.spread:
        for p in octo.geometry.lines[j]:
            spread_of[p] = j
    import numpy as np
    cls = family.point_classes(octo.geometry, np.array(spread_of), 5)
    sizes = [int((cls == c).sum()) for c in range(8)]
    assert sizes == [1, 2, 8, 16, 32, 64, 64, 128]
    assert sum(sizes) == 315


def test_closed_forms():
    p = family.Params(2, 4, 2)
    assert p.class_sizes() == (1, 2, 8, 16, 32, 64, 64, 128)
    assert sum(p.spread_census().values()) == 105
    assert family.Params(2, 10, 2).class_sizes()[-1] == 2 ** 4 * 2 * 64


def test_product_shape(product):
    g, S = product
    assert (g.npoints, geo.order_of(g), len(S)) == (63, (2, 2), 21)
    assert geo.verify_near_polygon(g) == 4


def test_product_passes(product):
    g, S = product
    r = family.check_family(g, S, 1)
    assert r.passed, r.to_text()
    assert r.data["quotient_order"] == [2, 1]


def test_product_quads_are_grids(product):
    g, _ = product
    for Q in geo.find_quads(g):
        assert len(Q) == 9 and geo.order_of(g.induced(Q)[0]) == (2, 1)


def test_recognize_product(product):
    g, S = product
    d = family.recognize_product(g, S)
    assert [len(f) for f in d.fibers] == [21, 21, 21]
    assert geo.order_of(d.hexagon) == (2, 1)
    assert geo.geometry_isomorphism(d.hexagon, family.fano_flag_geometry()) is not None


def test_recognize_needs_grids(octo, quads):
    with pytest.raises(family.NotApplicable):
        family.recognize_product(octo.geometry, quads.spread)


def test_preconditions(octo, quads):
    with pytest.raises(family.NotApplicable):
        family.check_family(octo.geometry, quads.spread, 4)
    with pytest.raises(family.NotApplicable):
        family.check_family(octo.geometry, quads.spread, 3)


def test_product_rejects_mismatched_line():
    with pytest.raises(ValueError):
        family.build_product(family.fano_flag_geometry(), 4)
