import numpy as np

from octalab import gewirtz, graphs, pg24


def test_hyperoval_orbits(L34, frozen):
    orbits = gewirtz.hyperoval_orbits(L34)
    assert [len(o) for o in orbits] == frozen["hyperoval_orbit_sizes"]
    assert sorted(h for o in orbits for h in o) == list(pg24.enumerate_hyperovals())


def test_construction(gw, frozen):
    assert list(graphs.srg_params(gw.graph)) == frozen["gewirtz_srg"]
    assert gw.metadata()["orbit"] == 0


def test_three_choices_isomorphic(gw, L34):
    for k in (1, 2):
        assert graphs.isomorphism(gw.graph, gewirtz.build_gewirtz(k, L34).graph) is not None


def test_special_eight_sets(eight):
    data, r = eight
    assert r.passed, r.to_text()
    assert len(data.sets) == 315
    assert data.group.order == 80640


def test_fixed_sets_are_square_pairs(gw, eight):
    data, _ = eight
    for s in data.sets[:20]:
        sub = gw.graph.induced(list(s.vertices))
        assert (sub.degrees() == 2).all() and sub.adj.sum() == 16


def test_link(link):
    o, r = link
    assert r.passed, r.to_text()
    assert o.observed_sizes == [105, 420, 840]


def test_intersection_table(link, eight):
    o, r = link
    rows = {row["suborbit"]: row for row in r.data["table"]}
    assert {k: v["fixed_set_intersection"] for k, v in rows.items()} == gewirtz.INTERSECTION_COLUMN
    weighted = sum(v["size"] * v["fixed_set_intersection"] for v in rows.values())
    assert weighted == 8 * 45
    M = eight[0].intersections
    assert set(M.sum(axis=1).tolist()) == {weighted}


def test_surrogate(link):
    o, _ = link
    sur = gewirtz.surrogate_graph(o)
    arr = graphs.drg_params(sur)
    assert (arr.b, arr.c) == gewirtz.SURROGATE_ARRAY
    assert np.array_equal(sur.adj, sur.adj.T)


def test_table_text(link):
    text = gewirtz.table_text(link[1].data["table"])
    assert text.splitlines()[1].split() == ["O0", "1", "C2", "8"]
