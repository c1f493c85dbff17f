"""The Gewirtz graph from hyperovals, its special 8-sets and the octagon they carry.

The 168 hyperovals of PG(2,4) split into three orbits of 56 under L3(4).
Taking one orbit and joining disjoint hyperovals gives srg(56,10,0,2).  Each
central involution of the automorphism group fixes exactly 8 vertices; the
octagon built from these involutions is compared with the matrix model, and
the intersection sizes of fixed sets are tabulated per suborbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import geometry as geo
from . import graphs, octagon, pg24
from .perm import DEFAULT_BUDGET, PermGroup, build_group_L34
from .report import Report

INTERSECTION_COLUMN = {"O0": 8, "O1a": 0, "O1b": 4, "O2a": 0, "O2b": 2, "O3a": 0, "O3b": 2, "O4": 1}
SURROGATE_ARRAY = ((32, 27, 8, 1), (1, 4, 27, 32))


def _act(h: tuple[int, ...], g: np.ndarray) -> tuple[int, ...]:
    return tuple(sorted(int(g[p]) for p in h))


def hyperoval_orbits(L: PermGroup | None = None) -> list[list[tuple[int, ...]]]:
    """Orbits of L3(4) on hyperovals, each sorted, ordered by least member."""
    L = L or build_group_L34()
    remaining = set(pg24.enumerate_hyperovals())
    out = []
    while remaining:
        orb = sorted(L.orbit(min(remaining), _act))
        remaining.difference_update(orb)
        out.append(orb)
    return sorted(out)


def disjointness_graph(hyperovals: list[tuple[int, ...]]) -> graphs.Graph:
    M = np.zeros((len(hyperovals), 21), dtype=np.int32)
    for i, h in enumerate(hyperovals):
        M[i, list(h)] = 1
    adj = (M @ M.T) == 0
    return graphs.Graph(adj)


@dataclass
class Gewirtz:
    graph: graphs.Graph
    hyperovals: list[tuple[int, ...]]
    orbit_sizes: list[int]
    choice: int  # index of the orbit used, in least-member order

    def metadata(self) -> dict:
        return {"orbit_sizes": self.orbit_sizes, "orbit": self.choice,
                "first_vertex": list(self.hyperovals[0])}


def build_gewirtz(choice: int = 0, L: PermGroup | None = None) -> Gewirtz:
    orbits = hyperoval_orbits(L)
    sizes = [len(o) for o in orbits]
    if sizes != [56, 56, 56]:
        raise geo.VerificationError("unexpected hyperoval orbits", sizes)
    g = disjointness_graph(orbits[choice])
    params = graphs.srg_params(g)
    if params != (56, 10, 0, 2):
        raise geo.VerificationError("disjointness graph is not srg(56,10,0,2)", params)
    return Gewirtz(g, orbits[choice], sizes, choice)


# ---------------------------------------------------------------- special 8-sets

@dataclass(frozen=True)
class SpecialEightSet:
    involution: int  # row in the sorted central involutions
    vertices: tuple[int, ...]


def _two_squares(g: graphs.Graph, X) -> bool:
    sub = g.induced(list(X))
    if sub.n != 8 or not (sub.degrees() == 2).all():
        return False
    D = sub.distances
    comps = {tuple(np.flatnonzero(D[v] >= 0).tolist()) for v in range(8)}
    return sorted(len(c) for c in comps) == [4, 4]


@dataclass
class EightSetData:
    group: PermGroup
    involutions: np.ndarray
    sets: list[SpecialEightSet]

    @cached_property
    def indicator(self) -> np.ndarray:
        F = np.zeros((len(self.sets), self.group.degree), dtype=np.int32)
        for i, s in enumerate(self.sets):
            F[i, list(s.vertices)] = 1
        return F

    @cached_property
    def intersections(self) -> np.ndarray:
        F = self.indicator
        return F @ F.T


def special_eight_sets(g: graphs.Graph, A: PermGroup | None = None,
                       budget: int = DEFAULT_BUDGET) -> tuple[EightSetData, Report]:
    r = Report("special 8-sets")
    A = A or graphs.automorphism_group(g, budget=budget)
    r.expect("gewirtz:aut-order", A.order, 80640)
    invs = A.central_involutions()
    r.expect("eightsets:count", len(invs), 315)
    sets = [SpecialEightSet(i, tuple(np.flatnonzero(s == np.arange(g.n)).tolist()))
            for i, s in enumerate(invs)]
    bad = next((s for s in sets if len(s.vertices) != 8), None)
    r.add("eightsets:size", bad is None, "every fixed set has 8 vertices", bad)
    bad = next((s for s in sets if not _two_squares(g, s.vertices)), None)
    r.add("eightsets:two-4-cycles", bad is None, "every fixed set induces two 4-cycles", bad)
    E = A.elements
    stab = []
    for s in sets:
        X = list(s.vertices)
        stab.append(int(np.all(E[:, X] == np.array(X), axis=1).sum()))
    bad_i = next((i for i, k in enumerate(stab) if k != 2), None)
    r.add("eightsets:pointwise-stabilizer", bad_i is None, "order 2, generated by the involution",
          None if bad_i is None else (bad_i, stab[bad_i]))
    r.add("eightsets:injective", len({s.vertices for s in sets}) == len(sets),
          "distinct involutions fix distinct sets")
    return EightSetData(A, invs, sets), r


# ---------------------------------------------------------------- octagon link

def surrogate_graph(o: octagon.InvolutionGeometry) -> graphs.Graph:
    """Points at distance 2 with a single common neighbour."""
    A = o.geometry.collinearity.adj.astype(np.int32)
    D = o.geometry.distances
    return graphs.Graph((D == 2) & ((A @ A) == 1))


def intersection_table(o: octagon.InvolutionGeometry, data: EightSetData, base: int = 0) -> list[dict]:
    d = octagon.suborbits(o, base)
    M = data.intersections
    types = octagon.orbit_types(o, d)
    rows = []
    for i, orb in enumerate(d.orbits):
        vals = sorted(set(M[base, list(orb)].tolist()))
        rows.append({"suborbit": d.name(i), "size": len(orb), "group": types[i],
                     "fixed_set_intersection": vals[0] if len(vals) == 1 else vals})
    return rows


def table_text(rows: list[dict]) -> str:
    head = f"{'suborbit':<9}{'size':>6}  {'<x,w>':<7}{'|X cap X|':>10}"
    out = [head]
    for r in rows:
        out.append(f"{r['suborbit']:<9}{r['size']:>6}  {r['group']:<7}{str(r['fixed_set_intersection']):>10}")
    return "\n".join(out) + "\n"


def link_suite(o_matrix: octagon.InvolutionGeometry, data: EightSetData) -> tuple[octagon.InvolutionGeometry, Report]:
    r = Report("octagon from the Gewirtz graph")
    o = octagon.build_octagon(data.group)
    g = o.geometry
    r.add("link:octagon-shape", (g.npoints, g.nlines) == (315, 525) and geo.order_of(g) == (2, 4),
          f"{g.npoints} points, {g.nlines} lines, order {geo.order_of(g)}")
    r.expect("link:conjugation-faithful", o.action.order, data.group.order)
    iso = geo.geometry_isomorphism(g, o_matrix.geometry)
    r.add("link:isomorphic-to-matrix-model", iso is not None, "point map carrying lines to lines")
    giso = graphs.isomorphism(g.collinearity, o_matrix.geometry.collinearity)
    r.add("link:collinearity-isomorphic", giso is not None, "collinearity graphs isomorphic")

    sur = surrogate_graph(o)
    r.data["surrogate_edges"] = int(sur.adj.sum()) // 2
    arr = r.attempt("link:surrogate-distance-regular", lambda: graphs.drg_params(sur), str)
    if arr is not None:
        r.expect("link:surrogate-array", (tuple(arr.b), tuple(arr.c)), SURROGATE_ARRAY)
        r.expect("link:surrogate-distribution", arr.distribution(), (1, 32, 216, 64, 2))
    d = octagon.suborbits(o, 0)
    names = [d.name(i) for i in range(len(d.orbits))]
    O2b = d.orbits[names.index("O2b")] if "O2b" in names else ()
    r.add("link:surrogate-is-O2b", sorted(np.flatnonzero(sur.adj[0]).tolist()) == sorted(O2b),
          "neighbours of a point form its 32-suborbit of type D8")
    near = sorted(p for n, orb in zip(names, d.orbits) if n in ("O1a", "O1b") for p in orb)
    r.add("link:collinear-is-O1", sorted(np.flatnonzero(g.collinearity.adj[0]).tolist()) == near,
          "collinear points are the suborbits of sizes 2 and 8")

    rows = intersection_table(o, data)
    got = {row["suborbit"]: row["fixed_set_intersection"] for row in rows}
    diffs = {k: (v, got.get(k)) for k, v in INTERSECTION_COLUMN.items() if got.get(k) != v}
    r.add("link:intersection-column", not diffs,
          " ".join(f"{k}={got.get(k)}" for k in INTERSECTION_COLUMN), diffs or None)
    sums = set(data.intersections.sum(axis=1).tolist())
    r.add("link:intersection-sum-invariant", len(sums) == 1, f"row sums {sorted(sums)}")
    r.data["table"] = rows
    return o, r
