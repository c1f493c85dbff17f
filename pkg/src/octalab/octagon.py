"""The near octagon on the central involutions of a group of type L3(4):2^2.

Points are the central involutions of an enumerated permutation group.  Two
distinct commuting points ``x, y`` span the triple ``{x, y, xy}``; the triples
fall into conjugation orbits, and the lines are the triples whose orbit size
is admissible (by default the two smallest sizes).  The builder never looks
at how the group was obtained, so the same code runs on the matrix model and
on any other faithful copy.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import Sequence

import numpy as np

from . import geometry as geo
from . import pg24
from .perm import DEFAULT_BUDGET, PermGroup, dihedral_type, inv, mul
from .report import Report

DISTRIBUTION = (1, 10, 48, 128, 128)


class BuildError(ValueError):
    pass


@dataclass
class InvolutionGeometry:
    group: PermGroup
    involutions: np.ndarray  # (n, degree), lexicographically sorted
    triples: list[tuple[int, int, int]]  # every commuting triple of points
    triple_orbit: np.ndarray  # orbit id of each triple
    orbit_sizes: list[int]  # size of each triple orbit, by orbit id
    admissible: tuple[int, ...]
    conj_generators: np.ndarray  # generator conjugation on point indices
    geometry: geo.Geometry
    line_triples: list[int] = field(default_factory=list)  # line j -> triple index

    @property
    def npoints(self) -> int:
        return len(self.involutions)

    @property
    def observed_sizes(self) -> list[int]:
        return sorted(set(self.orbit_sizes))

    def line_orbit_size(self, j: int) -> int:
        return self.orbit_sizes[self.triple_orbit[self.line_triples[j]]]

    def lines_of_size(self, size: int) -> list[int]:
        return [j for j in range(self.geometry.nlines) if self.line_orbit_size(j) == size]

    @cached_property
    def action(self) -> PermGroup:
        """The source group acting on points by conjugation."""
        return PermGroup.closure(self.conj_generators, degree=self.npoints)

    def with_admissible(self, admissible: Sequence[int]) -> "InvolutionGeometry":
        """Same points and triples, different admissible orbit sizes."""
        return _assemble(self.group, self.involutions, self.triples, self.triple_orbit,
                         self.orbit_sizes, tuple(sorted(admissible)), self.conj_generators)


def conjugation_images(involutions: np.ndarray, h: np.ndarray, index: dict[bytes, int]) -> np.ndarray:
    """Index of ``h^-1 x h`` for every row ``x``."""
    hi = inv(h)
    imgs = h[involutions[:, hi]]
    try:
        return np.array([index[r.tobytes()] for r in imgs], dtype=np.int64)
    except KeyError:
        raise BuildError("generator does not normalize the involution set") from None


def commuting_triples(involutions: np.ndarray, index: dict[bytes, int]) -> tuple[list, int]:
    """Triples ``{x, y, xy}`` with all members in ``index``.

    Also returns the number of commuting pairs whose product falls outside
    the set; those pairs span no triple.
    """
    out = set()
    stray = 0
    for i, x in enumerate(involutions):
        xy = involutions[:, x]  # row j: x then y
        yx = x[involutions]
        hits = np.flatnonzero(np.all(xy == yx, axis=1))
        for j in hits.tolist():
            if j <= i:
                continue
            k = index.get(xy[j].tobytes())
            if k is None:
                stray += 1
            else:
                out.add(tuple(sorted((i, j, k))))
    return sorted(out), stray


def _triple_orbits(triples, conj) -> tuple[np.ndarray, list[int]]:
    pos = {t: n for n, t in enumerate(triples)}
    label = np.full(len(triples), -1, dtype=np.int64)
    sizes = []
    for start in range(len(triples)):
        if label[start] >= 0:
            continue
        oid = len(sizes)
        label[start] = oid
        queue = deque([start])
        count = 1
        while queue:
            t = triples[queue.popleft()]
            for c in conj:
                img = pos[tuple(sorted(int(c[p]) for p in t))]
                if label[img] < 0:
                    label[img] = oid
                    count += 1
                    queue.append(img)
        sizes.append(count)
    return label, sizes


def _assemble(group, invs, triples, label, sizes, admissible, conj) -> InvolutionGeometry:
    if not set(admissible) <= set(sizes):
        raise BuildError(f"admissible sizes {admissible} not among observed {sorted(set(sizes))}")
    keep = [n for n in range(len(triples)) if sizes[label[n]] in admissible]
    g = geo.Geometry(len(invs), [triples[n] for n in keep])
    # Geometry keeps line order, so line j is triple keep[j]
    return InvolutionGeometry(group, invs, triples, label, sizes, admissible, conj, g, keep)


def build_octagon(G: PermGroup, admissible: Sequence[int] | None = None) -> InvolutionGeometry:
    invs = G.central_involutions()
    if len(invs) == 0:
        raise BuildError("group has no central involutions")
    index = {r.tobytes(): i for i, r in enumerate(invs)}
    conj = np.array([conjugation_images(invs, h, index) for h in G.generators])
    triples, _ = commuting_triples(invs, index)
    label, sizes = _triple_orbits(triples, conj)
    if admissible is None:
        admissible = sorted(set(sizes))[:2]
    return _assemble(G, invs, triples, label, sizes, tuple(sorted(admissible)), conj)


# ---------------------------------------------------------------- near octagon checks

def distance_distribution(g: geo.Geometry) -> tuple[int, ...] | None:
    """Common row of distance counts, or None if rows differ."""
    D = g.distances
    d = int(D.max())
    rows = np.stack([(D == i).sum(axis=1) for i in range(d + 1)], axis=1)
    if not (rows == rows[0]).all():
        return None
    return tuple(int(c) for c in rows[0])


def verify_near_octagon(o: InvolutionGeometry) -> Report:
    r = Report("near octagon")
    g = o.geometry
    r.expect("octagon:points", g.npoints, 315)
    r.expect("octagon:lines", g.nlines, 525)
    r.expect("octagon:triple-orbit-sizes", o.observed_sizes, [105, 420, 840])
    r.expect("octagon:line-orbit-sizes", sorted(set(o.line_orbit_size(j) for j in range(g.nlines))),
             list(o.admissible))
    bad = next((t for t in (o.triples[n] for n in o.line_triples) if not _well_formed(o, t)), None)
    r.add("octagon:lines-well-formed", bad is None, "z = xy = yx on every line", bad)
    d = r.attempt("octagon:near-polygon", lambda: geo.verify_near_polygon(g), lambda d: f"diameter {d}")
    if d is not None:
        r.expect("octagon:diameter", d, 4)
    r.add("octagon:order", geo.order_of(g) == (2, 4), f"order {geo.order_of(g)}", geo.order_witness(g))
    r.expect("octagon:distance-distribution", distance_distribution(g), DISTRIBUTION)
    r.data["distribution"] = list(distance_distribution(g) or [])
    return r


def _well_formed(o: InvolutionGeometry, t) -> bool:
    x, y, z = (o.involutions[i] for i in t)
    return (np.array_equal(mul(x, y), z) and np.array_equal(mul(y, x), z)
            and np.array_equal(mul(x, z), y) and np.array_equal(mul(y, z), x))


# ---------------------------------------------------------------- elations

@dataclass(frozen=True)
class ElationDatum:
    involution: int  # point index in the octagon
    center: int
    axis: int

    @property
    def flag(self) -> tuple[int, int]:
        return self.center, self.axis


def elation_data(sigma: np.ndarray, index: int = -1) -> ElationDatum:
    """Center and axis of an elation given on the 42 points and lines."""
    plane = pg24.enumerate_plane()
    n = len(plane.points)
    sigma = np.asarray(sigma)
    if len(sigma) != 2 * n or int(sigma[0]) >= n:
        raise geo.VerificationError("not a collineation of the plane", index)
    axes = [j for j in range(n) if all(sigma[p] == p for p in plane.points_on_line[j])]
    centers = [p for p in range(n) if all(sigma[n + j] == n + j for j in plane.lines_on_point[p])]
    if len(axes) != 1 or len(centers) != 1 or centers[0] not in plane.points_on_line[axes[0]]:
        raise geo.VerificationError("fixed structure is not that of an elation",
                                    (index, axes, centers))
    return ElationDatum(index, centers[0], axes[0])


def h41() -> tuple[geo.Geometry, list[tuple[int, int]]]:
    """The flag geometry of PG(2,4): 105 flags, 42 pencils."""
    plane = pg24.enumerate_plane()
    return geo.flag_geometry(len(plane.points), plane.points_on_line)


@dataclass
class QuadData:
    quads: list[tuple[int, ...]]
    spread: tuple[int, ...]
    quotient: geo.Geometry


def quads_and_spread(o: InvolutionGeometry) -> QuadData:
    g = o.geometry
    quads = geo.find_quads(g)
    spread = geo.spread_from_quads(g, quads)
    return QuadData(quads, spread, geo.quotient_geometry(g, spread, quads))


def flag_map(o: InvolutionGeometry, spread: Sequence[int]) -> list[int] | None:
    """Spread line -> index of the flag shared by its three elations, if any."""
    _, flags = h41()
    pos = {f: i for i, f in enumerate(flags)}
    out = []
    for j in spread:
        fl = {elation_data(o.involutions[p], p).flag for p in o.geometry.lines[j]}
        if len(fl) != 1:
            return None
        out.append(pos[fl.pop()])
    return out


def verify_quotient(o: InvolutionGeometry, qd: QuadData | None = None) -> Report:
    r = Report("quads, spread and quotient hexagon")
    g = o.geometry
    if qd is None:
        try:
            qd = quads_and_spread(o)
        except geo.VerificationError as exc:
            r.add("quads:spread", False, str(exc), exc.witness)
            return r
    r.expect("quads:count", len(qd.quads), 42)
    orders = {geo.verify_gq(g.induced(Q)[0]) for Q in qd.quads}
    r.expect("quads:order", sorted(orders), [(2, 2)])
    per_point = np.zeros(g.npoints, dtype=int)
    for Q in qd.quads:
        per_point[list(Q)] += 1
    r.expect("quads:per-point", sorted(set(per_point.tolist())), [2])
    spread_line = {p: j for j in qd.spread for p in g.lines[j]}
    meet_ok = all(_two_quads_meet_in(g, qd.quads, p, g.lines[spread_line[p]]) for p in range(g.npoints))
    r.add("quads:meet-in-spread-line", meet_ok, "the two quads through x meet in the spread line on x")
    r.expect("spread:size", len(qd.spread), 105)
    smallest = tuple(sorted(o.lines_of_size(min(o.admissible))))
    r.add("spread:equals-smallest-orbit", smallest == tuple(qd.spread),
          f"{len(smallest)} lines in the smallest line orbit")
    per_quad = {len([j for j in geo.lines_in(g, Q) if j in set(qd.spread)]) for Q in qd.quads}
    r.expect("spread:lines-per-quad", sorted(per_quad), [5])
    h = qd.quotient
    r.add("quotient:order", geo.order_of(h) == (4, 1), f"order {geo.order_of(h)}")
    r.attempt("quotient:hexagon", lambda: geo.verify_generalized_polygon(h, 6),
              lambda _: "incidence graph diameter 6, girth 12")

    target, _ = h41()
    fm = flag_map(o, qd.spread)
    if fm is not None and len(set(fm)) == len(fm) and set(h.permute(fm).lines) == set(target.lines):
        r.add("quotient:flag-isomorphism", True, "shared elation flag map is an isomorphism")
        r.data["isomorphism"] = "flag map"
    else:
        iso = geo.geometry_isomorphism(h, target)
        r.add("quotient:flag-isomorphism", iso is not None, "generic isomorphism search")
        r.data["isomorphism"] = "search"
    return r


def _two_quads_meet_in(g, quads, p, line) -> bool:
    on = [set(Q) for Q in quads if p in Q]
    return len(on) == 2 and on[0] & on[1] == set(line)


# ---------------------------------------------------------------- suborbit diagram

def load_suborbit_fixture() -> dict:
    return json.loads(resources.files("octalab").joinpath("data/suborbits.json").read_text())


def suborbits(o: InvolutionGeometry, base: int = 0) -> geo.SuborbitDiagram:
    """Suborbit diagram with orbits named by (size, dihedral type) from the fixture."""
    d = geo.suborbit_diagram(o.geometry, o.action, base)
    fixture = load_suborbit_fixture()
    key = {(f["size"], f["group"]): f["name"] for f in fixture["orbits"]}
    x = o.involutions[base]
    names = []
    for i, orb in enumerate(d.orbits):
        k = (len(orb), dihedral_type(x, o.involutions[orb[0]]))
        names.append(key.get(k, f"?{i}:{k[0]}:{k[1]}"))
    if len(set(names)) == len(names):
        d.names = names
        rank = {f["name"]: k for k, f in enumerate(fixture["orbits"])}
        if set(names) <= set(rank):
            d = d.reordered(sorted(range(len(names)), key=lambda i: rank[names[i]]))
    return d


def orbit_types(o: InvolutionGeometry, d: geo.SuborbitDiagram) -> list[str]:
    x = o.involutions[d.base]
    return [dihedral_type(x, o.involutions[orb[0]]) for orb in d.orbits]


def compare_suborbits(o: InvolutionGeometry, d: geo.SuborbitDiagram) -> list[dict]:
    """Cell-by-cell differences between the computed diagram and the fixture."""
    fixture = load_suborbit_fixture()
    diffs = []

    def miss(cell, want, got):
        if want != got:
            diffs.append({"cell": cell, "expected": want, "got": got})

    types = orbit_types(o, d)
    got_orbits = {d.name(i): (len(orb), types[i]) for i, orb in enumerate(d.orbits)}
    miss("orbit-count", len(fixture["orbits"]), len(d.orbits))
    for f in fixture["orbits"]:
        size, typ = got_orbits.get(f["name"], (None, None))
        miss(f"{f['name']}.size", f["size"], size)
        miss(f"{f['name']}.group", f["group"], typ)
    got_classes = {}
    for lc in d.classes:
        split = {d.name(i): a for i, a in lc.split}
        got_classes[tuple(sorted(split))] = (split, {d.name(i): c for i, c in lc.per_point})
    want_keys = set()
    for f in fixture["line_classes"]:
        k = tuple(sorted(f["split"]))
        want_keys.add(k)
        split, per = got_classes.get(k, (None, None))
        label = "-".join(k)
        miss(f"{label}.split", f["split"], split)
        miss(f"{label}.lines_per_point", f["lines_per_point"], per)
    for k in sorted(set(got_classes) - want_keys):
        miss("-".join(k), None, {"split": got_classes[k][0], "lines_per_point": got_classes[k][1]})
    return diffs


def suborbit_report(o: InvolutionGeometry, base: int = 0) -> tuple[geo.SuborbitDiagram, Report]:
    r = Report("suborbit diagram")
    d = suborbits(o, base)
    r.expect("suborbits:sizes", d.sizes, [1, 2, 8, 16, 32, 64, 64, 128])
    r.attempt("suborbits:double-count", d.check_consistency, lambda _: "every line class balances")
    diffs = compare_suborbits(o, d)
    r.add("suborbits:fixture", not diffs, f"{len(diffs)} differing cells", diffs or None)
    r.data["diagram"] = {k: v for k, v in d.to_json().items() if k != "orbits"}
    r.data["diagram"]["orbits"] = [{"name": d.name(i), "size": len(orb), "group": t}
                                   for i, (orb, t) in enumerate(zip(d.orbits, orbit_types(o, d)))]
    r.data["diff"] = diffs
    return d, r


def build_matrix_model(budget: int = DEFAULT_BUDGET) -> InvolutionGeometry:
    from .perm import build_group_G
    return build_octagon(build_group_G(budget))


# ---------------------------------------------------------------- automorphisms

def verify_automorphisms(o: InvolutionGeometry, budget: int = DEFAULT_BUDGET) -> tuple[PermGroup, Report]:
    """Automorphisms of the collinearity graph against the conjugation action."""
    from . import graphs

    r = Report("automorphism group")
    g = o.geometry
    tri = geo.triangles_in_lines(g)
    r.add("aut:triangles-in-lines", tri is None, "every collinearity triangle lies on a line", tri)
    A = graphs.automorphism_group(g.collinearity, budget=budget)
    r.expect("aut:order", A.order, 80640)
    bad = next((h.tolist() for h in A.generators if not g.is_automorphism(h)), None)
    r.add("aut:preserves-lines", bad is None, "graph automorphisms preserve the lines", bad)
    act = o.action
    r.expect("aut:conjugation-injective", act.order, o.group.order)
    inside = all(h in A for h in act.generators)
    r.add("aut:conjugation-onto", inside and act.order == A.order,
          "conjugation action equals the full automorphism group")
    return A, r


def verify_elations(o: InvolutionGeometry) -> Report:
    """Center/axis data of every point of the matrix model."""
    r = Report("elations")
    try:
        data = [elation_data(s, i) for i, s in enumerate(o.involutions)]
    except geo.VerificationError as exc:
        r.add("elations:shape", False, str(exc), exc.witness)
        return r
    r.add("elations:shape", True, f"{len(data)} involutions fix one axis pointwise and one center linewise")
    fibers: dict[tuple[int, int], list[int]] = {}
    for d in data:
        fibers.setdefault(d.flag, []).append(d.involution)
    r.expect("elations:flags", len(fibers), 105)
    r.expect("elations:fiber-sizes", sorted({len(v) for v in fibers.values()}), [3])
    bad = None
    for flag, members in fibers.items():
        sub = PermGroup.closure([o.involutions[i] for i in members])
        if sub.order != 4:
            bad = (flag, sub.order)
            break
    r.add("elations:fiber-group", bad is None, "each fiber with the identity is a group of order 4", bad)
    plane = pg24.enumerate_plane()
    n = len(plane.points)
    bad = None
    for h, c in zip(o.group.generators, o.conj_generators):
        for d in data:
            img = data[int(c[d.involution])]
            a, b = int(h[d.center]), int(h[n + d.axis])
            # a correlation swaps the roles of center and axis
            want = (a, b - n) if a < n else (b, a - n)
            if img.flag != want:
                bad = (d.involution, d.flag, img.flag)
                break
        if bad:
            break
    r.add("elations:equivariant", bad is None, "conjugation moves the flag by the group element", bad)
    return r
