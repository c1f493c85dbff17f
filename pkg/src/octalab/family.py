"""Near octagons with a line spread satisfying four local counting properties.

Given a near octagon of order ``(s, t)``, a line spread and a proper divisor
``t'`` of ``t``, :func:`check_family` splits the points around every base
point ``x`` into the classes

    0, 1', 1'', 2', 2'', 3', 3'', 4

where ``1'`` is the rest of the spread line on ``x`` and, for i = 2, 3, the
primed class collects points of distance ``i`` that are collinear with the
primed class one step closer.  It then checks the four properties, every
closed-form class size, the allowed line types, the per-point line-type
multiplicities, the spread-line census and the quotient hexagon.

The trivial members (``t' = 1``) are products of a generalized hexagon with
a line; :func:`build_product` makes one and :func:`recognize_product`
recovers the factors.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import geometry as geo
from .report import Report

CLASSES = ("0", "1'", "1''", "2'", "2''", "3'", "3''", "4")
C0, C1P, C1PP, C2P, C2PP, C3P, C3PP, C4 = range(8)

# line types (unique point class, class of the other s points)
LINE_TYPES = ((C0, C1P), (C0, C1PP), (C1P, C2P), (C1PP, C2P), (C1PP, C2PP),
              (C2P, C3P), (C2PP, C3P), (C2PP, C3PP), (C3P, C4), (C3PP, C4))
SPREAD_TYPES = ((C0, C1P), (C1PP, C2P), (C2PP, C3P), (C3PP, C4))


def type_name(t: tuple[int, int]) -> str:
    return f"({CLASSES[t[0]]},{CLASSES[t[1]]})"


class NotApplicable(ValueError):
    pass


@dataclass(frozen=True)
class Params:
    s: int
    t: int
    tp: int

    @property
    def q(self) -> int:
        """t / t', the number of quads through a point."""
        return self.t // self.tp

    def class_sizes(self) -> tuple[int, ...]:
        s, t, tp = self.s, self.t, self.tp
        return (1, s, s * t, s * s * t, s * s * t * (t - tp), s ** 3 * t * (t - tp),
                s ** 3 * tp * (t - tp) ** 2, s ** 4 * tp * (t - tp) ** 2)

    def spread_census(self) -> dict[tuple[int, int], int]:
        s, t, tp = self.s, self.t, self.tp
        return {(C0, C1P): 1, (C1PP, C2P): s * t, (C2PP, C3P): s * s * t * (t - tp),
                (C3PP, C4): s ** 3 * tp * (t - tp) ** 2}

    def multiplicities(self) -> dict[int, dict[tuple[int, int], int]]:
        """Point class -> line type -> lines of that type through such a point."""
        t, tp, q = self.t, self.tp, self.q
        return {
            C0: {(C0, C1P): 1, (C0, C1PP): t},
            C1P: {(C0, C1P): 1, (C1P, C2P): t},
            C1PP: {(C0, C1PP): 1, (C1PP, C2P): tp, (C1PP, C2PP): t - tp},
            C2P: {(C1P, C2P): 1, (C1PP, C2P): tp, (C2P, C3P): t - tp},
            C2PP: {(C1PP, C2PP): 1, (C2PP, C3P): tp, (C2PP, C3PP): t - tp},
            C3P: {(C2P, C3P): 1, (C2PP, C3P): tp, (C3P, C4): t - tp},
            C3PP: {(C2PP, C3PP): q, (C3PP, C4): t + 1 - q},
            C4: {(C3P, C4): q, (C3PP, C4): t + 1 - q},
        }


def point_classes(g: geo.Geometry, spread_of: np.ndarray, x: int) -> np.ndarray:
    """Class code of every point relative to base point ``x``.

    ``spread_of[p]`` is the index of the spread line on ``p``.
    """
    D = g.distances[x]
    A = g.collinearity.adj
    cls = np.full(g.npoints, -1, dtype=np.int64)
    cls[x] = C0
    on_line = np.zeros(g.npoints, dtype=bool)
    on_line[list(g.lines[spread_of[x]])] = True
    cls[(D == 1) & on_line] = C1P
    cls[(D == 1) & ~on_line] = C1PP
    prev = cls == C1P
    for i, (p, pp) in ((2, (C2P, C2PP)), (3, (C3P, C3PP))):
        near = A[:, prev].any(axis=1)
        cls[(D == i) & near] = p
        cls[(D == i) & ~near] = pp
        prev = cls == p
    cls[D == 4] = C4
    return cls


def line_types(lines: np.ndarray, cls: np.ndarray) -> list[tuple[int, int] | None]:
    """Type of each line: one point of the first class, the rest of the second."""
    out = []
    for row in cls[lines]:
        lo = row.min()
        rest = row[row != lo]
        if (row == lo).sum() == 1 and len(set(rest.tolist())) == 1:
            out.append((int(lo), int(rest[0])))
        else:
            out.append(None)
    return out


@dataclass
class _BaseResult:
    x: int
    sizes: tuple[int, ...]
    failures: list[tuple[str, object]]  # (tag, witness)
    census: dict


def _lines_meeting(N: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Per point: number of incident lines meeting the point set ``mask``."""
    hit = N[mask].any(axis=0)
    return N[:, hit].sum(axis=1)


def _check_base(g, lines, spread, spread_of, prm: Params, x: int) -> _BaseResult:
    N = g.incidence
    cls = point_classes(g, spread_of, x)
    fails: list[tuple[str, object]] = []

    def fail(tag, witness):
        fails.append((tag, witness))

    sizes = tuple(int((cls == c).sum()) for c in range(8))
    if (cls < 0).any():
        fail("partition", (x, int(np.flatnonzero(cls < 0)[0])))
    for c, (got, want) in enumerate(zip(sizes, prm.class_sizes())):
        if got != want:
            fail(f"size {CLASSES[c]}", (x, got, want))

    props = ((C2P, C1PP, prm.tp), (C2PP, C1PP, 1), (C3P, C2PP, prm.tp), (C3PP, C2PP, prm.q))
    for tag, (where, into, want) in zip(PROPERTY_TAGS, props):
        cnt = _lines_meeting(N, cls == into)
        bad = np.flatnonzero((cls == where) & (cnt != want))
        if len(bad):
            y = int(bad[0])
            fail(tag, (x, y, int(cnt[y])))

    meets3p = N[cls == C3P].any(axis=0) & N[cls == C3PP].any(axis=0)
    if meets3p.any():
        fail("no 3'-3'' lines", (x, g.lines[int(np.flatnonzero(meets3p)[0])]))

    types = line_types(lines, cls)
    allowed = set(LINE_TYPES)
    bad_line = next((j for j, ty in enumerate(types) if ty not in allowed), None)
    if bad_line is not None:
        fail("line types", (x, g.lines[bad_line], types[bad_line]))

    census = {}
    for j in spread:
        census[types[j]] = census.get(types[j], 0) + 1
    if census != prm.spread_census():
        fail("spread census", (x, {type_name(k) if k else "?": v for k, v in census.items()}))

    tid = np.array([LINE_TYPES.index(ty) if ty in allowed else -1 for ty in types])
    counts = np.stack([N[:, tid == k].sum(axis=1) for k in range(len(LINE_TYPES))], axis=1)
    for c, row in prm.multiplicities().items():
        want = np.array([row.get(ty, 0) for ty in LINE_TYPES])
        bad = np.flatnonzero((cls == c) & ~(counts == want).all(axis=1))
        if len(bad):
            y = int(bad[0])
            got = {type_name(ty): int(counts[y, k]) for k, ty in enumerate(LINE_TYPES) if counts[y, k]}
            fail(f"multiplicities {CLASSES[c]}", (x, y, got))
    return _BaseResult(x, sizes, fails, census)


PROPERTY_TAGS = ("lines 2'->1''", "lines 2''->1''", "lines 3'->2''", "lines 3''->2''")
BASE_TAGS = (["partition"] + [f"size {c}" for c in CLASSES] + list(PROPERTY_TAGS)
             + ["no 3'-3'' lines", "line types", "spread census"]
             + [f"multiplicities {c}" for c in CLASSES])


def check_family(g: geo.Geometry, spread: Sequence[int], t_prime: int, jobs: int = 1,
                 quads: Sequence[Sequence[int]] | None = None) -> Report:
    """Check every property and count at every base point.

    Failures do not stop the run; each tag keeps its first witness.
    """
    r = Report("spread family")
    order = geo.order_of(g)
    if order is None:
        raise NotApplicable(f"geometry has no order: {geo.order_witness(g)}")
    s, t = order
    if s < 2 or t_prime < 1 or t % t_prime or t_prime == t:
        raise NotApplicable(f"need s >= 2 and t' a proper divisor of t; got s={s}, t={t}, t'={t_prime}")
    prm = Params(s, t, t_prime)
    r.data["parameters"] = {"s": s, "t": t, "t'": t_prime}

    d = r.attempt("family:near-octagon", lambda: geo.verify_near_polygon(g), lambda d: f"diameter {d}")
    if d != 4:
        if d is not None:
            r.add("family:diameter", False, f"diameter {d}, expected 4")
        return r
    spread = tuple(sorted(spread))
    r.add("family:spread", geo.is_spread(g, spread), f"{len(spread)} lines partition the points")
    if not r.passed:
        return r
    spread_of = np.empty(g.npoints, dtype=np.int64)
    for j in spread:
        spread_of[list(g.lines[j])] = j
    lines = np.array(g.lines)

    def run(x):
        return _check_base(g, lines, spread, spread_of, prm, x)

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            results = list(pool.map(run, range(g.npoints)))
    else:
        results = [run(x) for x in range(g.npoints)]

    first: dict[str, object] = {}
    nfail: dict[str, int] = {}
    for res in results:  # already in point order
        for tag, w in res.failures:
            first.setdefault(tag, w)
            nfail[tag] = nfail.get(tag, 0) + 1
    for tag in BASE_TAGS:
        ok = tag not in first
        detail = f"all {g.npoints} base points" if ok else f"fails at {nfail[tag]} base points"
        r.add(f"family:{tag}", ok, detail, first.get(tag))

    r.data["class_sizes"] = {c: v for c, v in zip(CLASSES, prm.class_sizes())}
    r.data["spread_census"] = {type_name(k): v for k, v in prm.spread_census().items()}
    r.data["multiplicities"] = {CLASSES[c]: {type_name(k): v for k, v in row.items()}
                         for c, row in prm.multiplicities().items()}
    _double_counts(r, prm)
    _global_checks(r, g, spread, prm, quads)
    return r


def _double_counts(r: Report, prm: Params) -> None:
    """Lines of each type counted from both ends must agree."""
    sizes = prm.class_sizes()
    fig = prm.multiplicities()
    bad = []
    for a, b in LINE_TYPES:
        from_a = sizes[a] * fig[a][(a, b)]
        from_b = Fraction(sizes[b] * fig[b][(a, b)], prm.s)
        if from_a != from_b:
            bad.append(type_name((a, b)))
    r.add("family:double-count", not bad, "line counts agree from both point classes", bad or None)


def _global_checks(r: Report, g: geo.Geometry, spread, prm: Params, quads) -> None:
    if quads is None:
        quads = geo.find_quads(g)
    per_point = np.zeros(g.npoints, dtype=int)
    for Q in quads:
        per_point[list(Q)] += 1
    bad = np.flatnonzero(per_point != prm.q)
    r.add("family:quads-per-point", not len(bad), f"{prm.q} quads through every point",
          (int(bad[0]), int(per_point[bad[0]])) if len(bad) else None)
    orders = sorted({geo.order_of(g.induced(Q)[0]) for Q in quads})
    r.expect("family:quad-order", orders, [(prm.s, prm.tp)])

    nonclassical = None
    for Q in quads:
        for y in range(g.npoints):
            if geo.classify_point_quad(g, y, Q).kind != "classical":
                nonclassical = (y, Q)
                break
        if nonclassical:
            break
    r.add("family:classical", nonclassical is None,
          f"{g.npoints * len(quads)} point-quad pairs", nonclassical)

    D = g.distances
    S = np.array([g.lines[j] for j in spread])  # (m, s+1)
    block = D[S[:, :, None, None], S[None, None, :, :]]  # (m, s+1, m, s+1)
    to_line = block.min(axis=3)  # d(k, L) for k in K
    line_dist = to_line.min(axis=1)  # d(K, L)
    par = (to_line == line_dist[:, None, :]).all(axis=1)
    bad = np.argwhere(~par)
    r.add("family:parallel", not len(bad), f"{len(spread)} spread lines pairwise parallel",
          tuple(bad[0].tolist()) if len(bad) else None)

    try:
        h = geo.quotient_geometry(g, spread, quads)
    except geo.VerificationError as exc:
        r.add("family:quotient", False, str(exc), exc.witness)
        return
    qd = h.distances
    bad = np.argwhere(qd != line_dist)
    r.add("family:quotient-distance", not len(bad), "quotient distance equals line distance",
          tuple(bad[0].tolist()) if len(bad) else None)
    want = (prm.s * prm.tp, prm.q - 1)
    r.add("family:quotient-order", geo.order_of(h) == want, f"order {geo.order_of(h)}, expected {want}")
    r.attempt("family:quotient-hexagon", lambda: geo.verify_generalized_polygon(h, 6),
              lambda _: "generalized hexagon")
    r.data["quotient_order"] = list(geo.order_of(h) or [])


# ---------------------------------------------------------------- trivial members

FANO_LINES = ((0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (0, 4, 5), (1, 5, 6), (0, 2, 6))


def fano_flag_geometry() -> geo.Geometry:
    """H(2,1): the 21 flags of the Fano plane with point and line pencils."""
    return geo.flag_geometry(7, FANO_LINES)[0]


def build_product(h: geo.Geometry, ell: int) -> tuple[geo.Geometry, tuple[int, ...]]:
    """Hexagon times a line of ``ell`` points; returns the geometry and the fiber spread.

    Point ``(p, i)`` has index ``i * n + p``, so each copy of the hexagon is a
    contiguous block.
    """
    order = geo.order_of(h)
    if order is None or order[0] + 1 != ell:
        raise ValueError(f"line size {ell} does not match hexagon order {order}")
    geo.verify_generalized_polygon(h, 6)
    n = h.npoints
    lines = [[i * n + p for p in L] for i in range(ell) for L in h.lines]
    first_fiber = len(lines)
    lines += [[i * n + p for i in range(ell)] for p in range(n)]
    g = geo.Geometry(n * ell, lines)
    return g, tuple(range(first_fiber, first_fiber + n))


@dataclass
class ProductDecomposition:
    base_line: tuple[int, ...]
    fibers: list[tuple[int, ...]]  # one hexagon copy per point of the base line
    hexagon: geo.Geometry
    point_map: np.ndarray  # point -> (level, index in hexagon) flattened as level * n + index


def recognize_product(g: geo.Geometry, spread: Sequence[int]) -> ProductDecomposition:
    """Recover the hexagon copies through the points of one spread line."""
    quads = geo.find_quads(g)
    if any(geo.order_of(g.induced(Q)[0])[1] != 1 for Q in quads):
        raise NotApplicable("quads are not grids, so t' != 1")
    spread = sorted(spread)
    base = g.lines[spread[0]]
    D = g.distances[:, list(base)]
    nearest = D.argmin(axis=1)
    if not ((D == D.min(axis=1, keepdims=True)).sum(axis=1) == 1).all():
        raise geo.VerificationError("point without a unique nearest point on the base line")
    fibers = [tuple(np.flatnonzero(nearest == i).tolist()) for i in range(len(base))]
    for H in fibers:
        if geo.convex_closure(g, H) != H:
            raise geo.VerificationError("fiber is not a convex subspace", H[:2])
    for j in spread:
        if sorted(nearest[list(g.lines[j])].tolist()) != list(range(len(base))):
            raise geo.VerificationError("spread line does not meet every fiber once", g.lines[j])
    hexagon, pts = g.induced(fibers[0])
    geo.verify_generalized_polygon(hexagon, 6)
    pos = {p: k for k, p in enumerate(pts)}
    spread_of = {p: j for j in spread for p in g.lines[j]}
    n = hexagon.npoints
    pmap = np.empty(g.npoints, dtype=np.int64)
    for y in range(g.npoints):
        foot = next(p for p in g.lines[spread_of[y]] if nearest[p] == 0)
        pmap[y] = int(nearest[y]) * n + pos[foot]
    model, _ = build_product(hexagon, len(base))
    if len(set(pmap.tolist())) != g.npoints or set(g.permute(pmap).lines) != set(model.lines):
        raise geo.VerificationError("fibers do not assemble into a product")
    return ProductDecomposition(base, fibers, hexagon, pmap)
