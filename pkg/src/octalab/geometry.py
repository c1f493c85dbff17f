"""Finite point-line geometries.

A :class:`Geometry` has points ``0..n-1`` and lines given as sorted tuples of
points.  Everything else (incidence matrix, collinearity graph, distances) is
derived and cached.  Verification routines return the computed value on
success and raise :class:`VerificationError` carrying a witness otherwise.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from . import graphs
from .perm import PermGroup


class VerificationError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message}: witness {witness}")
        self.witness = witness


class NotASpread(VerificationError):
    pass


class Geometry:
    def __init__(self, npoints: int, lines: Sequence[Sequence[int]]):
        self.npoints = int(npoints)
        self.lines = tuple(tuple(sorted(int(p) for p in L)) for L in lines)
        for L in self.lines:
            if len(L) < 2 or len(set(L)) != len(L):
                raise ValueError(f"line {L} needs at least two distinct points")
            if L[0] < 0 or L[-1] >= self.npoints:
                raise ValueError(f"line {L} has points out of range")

    def __repr__(self) -> str:
        return f"Geometry({self.npoints} points, {len(self.lines)} lines)"

    @property
    def nlines(self) -> int:
        return len(self.lines)

    @cached_property
    def incidence(self) -> np.ndarray:
        N = np.zeros((self.npoints, self.nlines), dtype=bool)
        for j, L in enumerate(self.lines):
            N[list(L), j] = True
        return N

    @cached_property
    def lines_through(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.npoints)]
        for j, L in enumerate(self.lines):
            for p in L:
                out[p].append(j)
        return tuple(tuple(x) for x in out)

    @cached_property
    def line_index(self) -> dict[tuple[int, ...], int]:
        return {L: j for j, L in enumerate(self.lines)}

    @cached_property
    def collinearity(self) -> graphs.Graph:
        N = self.incidence.astype(np.int32)
        adj = (N @ N.T) > 0
        np.fill_diagonal(adj, False)
        return graphs.Graph(adj)

    @property
    def distances(self) -> np.ndarray:
        return self.collinearity.distances

    def line_through(self, p: int, q: int) -> int | None:
        common = set(self.lines_through[p]) & set(self.lines_through[q])
        return common.pop() if common else None

    def incidence_graph(self) -> tuple[graphs.Graph, np.ndarray]:
        """Bipartite point-line graph (points first) and its 0/1 side colouring."""
        n, m = self.npoints, self.nlines
        adj = np.zeros((n + m, n + m), dtype=bool)
        adj[:n, n:] = self.incidence
        adj[n:, :n] = self.incidence.T
        return graphs.Graph(adj), np.array([0] * n + [1] * m)

    def induced(self, points: Sequence[int]) -> tuple["Geometry", list[int]]:
        """Subgeometry on ``points`` with the lines fully inside; relabelled 0..k-1."""
        pts = sorted(points)
        pos = {p: i for i, p in enumerate(pts)}
        inside = [[pos[p] for p in L] for L in self.lines if all(p in pos for p in L)]
        return Geometry(len(pts), inside), pts

    def permute(self, perm: Sequence[int]) -> "Geometry":
        """Image geometry under the point map ``p -> perm[p]``."""
        return Geometry(self.npoints, [[perm[p] for p in L] for L in self.lines])

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        return set(self.permute(perm).lines) == set(self.lines)


# ---------------------------------------------------------------- basic checks

def check_partial_linear(g: Geometry) -> None:
    N = g.incidence.astype(np.int32)
    shared = N @ N.T
    np.fill_diagonal(shared, 0)
    bad = np.argwhere(shared > 1)
    if len(bad):
        raise VerificationError("two points share more than one line", tuple(bad[0].tolist()))


def check_connected(g: Geometry) -> None:
    if not g.collinearity.is_connected():
        far = int(np.flatnonzero(g.distances[0] < 0)[0])
        raise VerificationError("collinearity graph is disconnected", (0, far))


def verify_near_polygon(g: Geometry) -> int:
    """Check the near-polygon axiom for every point-line pair; return the diameter."""
    check_partial_linear(g)
    check_connected(g)
    D = g.distances
    for j, L in enumerate(g.lines):
        sub = D[:, list(L)]
        nearest = (sub == sub.min(axis=1, keepdims=True)).sum(axis=1)
        bad = np.flatnonzero(nearest != 1)
        if len(bad):
            raise VerificationError("point without a unique nearest point on a line",
                                    (int(bad[0]), L))
    return int(D.max())


def order_of(g: Geometry) -> tuple[int, int] | None:
    """(s, t) if every line has s+1 points and every point is on t+1 lines."""
    sizes = {len(L) for L in g.lines}
    degrees = {len(x) for x in g.lines_through}
    if len(sizes) != 1 or len(degrees) != 1:
        return None
    return sizes.pop() - 1, degrees.pop() - 1


def order_witness(g: Geometry) -> str | None:
    """Describe an element violating uniform order, or None."""
    if order_of(g) is not None:
        return None
    size = Counter(len(L) for L in g.lines).most_common(1)[0][0]
    for L in g.lines:
        if len(L) != size:
            return f"line {L} has {len(L)} points, expected {size}"
    deg = Counter(len(x) for x in g.lines_through).most_common(1)[0][0]
    for p, x in enumerate(g.lines_through):
        if len(x) != deg:
            return f"point {p} is on {len(x)} lines, expected {deg}"
    return None


def triangles_in_lines(g: Geometry) -> tuple[int, int, int] | None:
    """First triangle of the collinearity graph not contained in a line, or None."""
    A = g.collinearity.adj
    for u in range(g.npoints):
        for v in np.flatnonzero(A[u]):
            v = int(v)
            if v <= u:
                continue
            j = g.line_through(u, v)
            for w in np.flatnonzero(A[u] & A[v]):
                w = int(w)
                if w > v and w not in g.lines[j]:
                    return u, v, w
    return None


# ---------------------------------------------------------------- quads & spreads

def convex_closure(g: Geometry, seed: Sequence[int]) -> tuple[int, ...]:
    """Least set containing ``seed`` closed under lines and geodesics."""
    D = g.distances
    X = np.zeros(g.npoints, dtype=bool)
    X[list(seed)] = True
    N = g.incidence
    while True:
        before = int(X.sum())
        # full lines through two members
        hits = N[X].sum(axis=0)
        X |= N[:, hits >= 2].any(axis=1)
        M = np.flatnonzero(X)
        sub = D[M]  # (k, n)
        between = np.zeros(g.npoints, dtype=bool)
        for a in M:
            between |= ((D[a] + sub) == D[a, M][:, None]).any(axis=0)
        X |= between
        if int(X.sum()) == before:
            return tuple(np.flatnonzero(X).tolist())


def verify_gq(g: Geometry) -> tuple[int, int]:
    """Check the generalized quadrangle axiom directly; return the order."""
    order = order_of(g)
    if order is None:
        raise VerificationError("not of uniform order", order_witness(g))
    s, t = order
    if s < 1 or t < 1:
        raise VerificationError("degenerate quadrangle", order)
    A = g.collinearity.adj
    for j, L in enumerate(g.lines):
        on = np.zeros(g.npoints, dtype=bool)
        on[list(L)] = True
        cnt = A[:, list(L)].sum(axis=1)
        bad = np.flatnonzero(~on & (cnt != 1))
        if len(bad):
            raise VerificationError("point-line pair violating the GQ axiom", (int(bad[0]), L))
    return order


def find_quads(g: Geometry) -> list[tuple[int, ...]]:
    """All quads, as sorted point tuples in lexicographic order."""
    if any(len(L) < 3 for L in g.lines):
        raise ValueError("quad detection needs at least three points per line")
    D = g.distances
    A = g.collinearity.adj.astype(np.int32)
    common = A @ A
    member = np.zeros((0, g.npoints), dtype=bool)
    quads = []
    us, vs = np.nonzero(np.triu((D == 2) & (common >= 2)))
    for u, v in zip(us.tolist(), vs.tolist()):
        if len(member) and (member[:, u] & member[:, v]).any():
            continue
        Q = convex_closure(g, (u, v))
        sub, _ = g.induced(Q)
        try:
            verify_gq(sub)
        except VerificationError as exc:
            raise VerificationError(f"convex closure of {u},{v} is not a quadrangle ({exc})",
                                    (u, v)) from None
        row = np.zeros(g.npoints, dtype=bool)
        row[list(Q)] = True
        member = np.vstack([member, row])
        quads.append(Q)
    return sorted(quads)


class PointQuad(NamedTuple):
    kind: str  # "classical" or "ovoidal"
    distance: int
    nearest: tuple[int, ...]

    @property
    def gate(self) -> int | None:
        return self.nearest[0] if self.kind == "classical" else None


def classify_point_quad(g: Geometry, x: int, quad: Sequence[int]) -> PointQuad:
    D = g.distances
    Q = np.asarray(sorted(quad))
    dq = D[x, Q]
    m = int(dq.min())
    nearest = Q[dq == m]
    if len(nearest) == 1:
        gate = int(nearest[0])
        if np.array_equal(D[x, Q], m + D[gate, Q]):
            return PointQuad("classical", m, (gate,))
    qset = set(Q.tolist())
    nset = set(nearest.tolist())
    qlines = [L for L in g.lines if qset.issuperset(L)]
    if all(len(nset.intersection(L)) == 1 for L in qlines):
        return PointQuad("ovoidal", m, tuple(sorted(nset)))
    raise VerificationError("point is neither classical nor ovoidal", (x, tuple(Q.tolist())))


def is_spread(g: Geometry, spread: Sequence[int]) -> bool:
    cover = np.zeros(g.npoints, dtype=np.int32)
    for j in spread:
        cover[list(g.lines[j])] += 1
    return bool((cover == 1).all())


def lines_in(g: Geometry, points: Sequence[int]) -> list[int]:
    s = set(points)
    return [j for j, L in enumerate(g.lines) if s.issuperset(L)]


def spread_from_quads(g: Geometry, quads: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Lines lying in two or more quads, checked to partition the points."""
    count = Counter(j for Q in quads for j in lines_in(g, Q))
    cand = tuple(sorted(j for j, c in count.items() if c >= 2))
    if not is_spread(g, cand):
        cover = Counter(p for j in cand for p in g.lines[j])
        bad = next((p for p in range(g.npoints) if cover[p] != 1), None)
        raise NotASpread("lines in two or more quads do not partition the points; "
                         "the quads do not single out a spread", bad)
    return cand


def quotient_geometry(g: Geometry, spread: Sequence[int],
                      quads: Sequence[Sequence[int]]) -> Geometry:
    """Points: spread lines (by position in ``spread``); lines: quads."""
    pos = {j: i for i, j in enumerate(spread)}
    qlines = []
    for Q in quads:
        inside = [j for j in lines_in(g, Q) if j in pos]
        covered = sorted(p for j in inside for p in g.lines[j])
        if covered != sorted(Q):
            raise VerificationError("spread lines in a quad do not form a spread of it", tuple(Q))
        qlines.append([pos[j] for j in inside])
    return Geometry(len(spread), qlines)


def verify_generalized_polygon(g: Geometry, n: int) -> None:
    """Incidence graph must have diameter n and girth 2n."""
    if order_of(g) is None:
        raise VerificationError("no uniform order", order_witness(g))
    ig, _ = g.incidence_graph()
    if not ig.is_connected():
        raise VerificationError("incidence graph is disconnected")
    D = ig.distances
    diam = int(D.max())
    if diam != n:
        far = tuple(int(a) for a in np.argwhere(D == diam)[0])
        raise VerificationError(f"incidence graph diameter {diam} != {n}", far)
    girth, cyc = _girth(ig)
    if girth != 2 * n:
        raise VerificationError(f"incidence graph girth {girth} != {2 * n}", cyc)


def _girth(G: graphs.Graph) -> tuple[float, tuple | None]:
    """Shortest cycle length via BFS from every vertex, with a witness edge."""
    nbrs = [G.neighbors(v).tolist() for v in range(G.n)]
    best: float = float("inf")
    witness = None
    for r in range(G.n):
        dist = {r: 0}
        parent = {r: -1}
        queue = deque([r])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in nbrs[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    length = dist[u] + dist[w] + 1
                    if length < best:
                        best, witness = length, (r, u, w)
    return best, witness


def geometry_isomorphism(g1: Geometry, g2: Geometry) -> np.ndarray | None:
    """A point bijection carrying lines of ``g1`` onto lines of ``g2``, or None."""
    if (g1.npoints, g1.nlines) != (g2.npoints, g2.nlines):
        return None
    ig1, c1 = g1.incidence_graph()
    ig2, c2 = g2.incidence_graph()
    m = graphs.isomorphism(ig1, ig2, c1, c2)
    if m is None:
        return None
    pmap = m[:g1.npoints]
    if set(g1.permute(pmap).lines) != set(g2.lines):
        raise AssertionError("incidence isomorphism does not carry lines to lines")
    return pmap


def flag_geometry(npoints: int, lines: Sequence[Sequence[int]]) -> tuple[Geometry, list[tuple[int, int]]]:
    """Flags of a plane as points; point pencils and line pencils as lines.

    Returns the geometry and its flag list ``(point, line)`` in point-major order.
    The point pencils come first, then the line pencils.
    """
    flags = sorted((p, j) for j, L in enumerate(lines) for p in L)
    pos = {f: i for i, f in enumerate(flags)}
    pencils = [[pos[f] for f in flags if f[0] == p] for p in range(npoints)]
    pencils += [[pos[(p, j)] for p in L] for j, L in enumerate(lines)]
    return Geometry(len(flags), pencils), flags


# ---------------------------------------------------------------- suborbits

@dataclass
class LineClass:
    """Lines meeting a fixed set of orbits with fixed intersection sizes."""

    split: tuple[tuple[int, int], ...]  # (orbit, points of the line in it)
    per_point: tuple[tuple[int, int], ...]  # (orbit, such lines through a point of it)
    count: int


@dataclass
class SuborbitDiagram:
    base: int
    orbits: list[tuple[int, ...]]
    classes: list[LineClass]
    names: list[str] = field(default_factory=list)

    @property
    def sizes(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def name(self, i: int) -> str:
        return self.names[i] if self.names else f"O{i}"

    def lines_from(self, i: int) -> dict[int, int]:
        """Orbit j -> number of lines through a point of orbit i meeting orbit j."""
        out: Counter = Counter()
        for lc in self.classes:
            per = dict(lc.per_point)
            if i in per:
                for j, _ in lc.split:
                    if j != i:
                        out[j] += per[i]
        return dict(out)

    def reordered(self, order: Sequence[int]) -> "SuborbitDiagram":
        """Same diagram with orbit ``order[k]`` moved to position ``k``."""
        new = {old: k for k, old in enumerate(order)}
        classes = [LineClass(tuple(sorted((new[i], a) for i, a in lc.split)),
                             tuple(sorted((new[i], c) for i, c in lc.per_point)), lc.count)
                   for lc in self.classes]
        classes.sort(key=lambda lc: lc.split)
        names = [self.names[i] for i in order] if self.names else []
        return SuborbitDiagram(self.base, [self.orbits[i] for i in order], classes, names)

    def check_consistency(self) -> None:
        total = sum(self.sizes)
        pts = sorted(p for o in self.orbits for p in o)
        if pts != list(range(total)):
            raise VerificationError("orbits do not partition the points")
        for lc in self.classes:
            for (i, a), (_, c) in zip(lc.split, lc.per_point):
                if len(self.orbits[i]) * c != lc.count * a:
                    raise VerificationError("line double count fails", (i, lc.split))

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "orbits": [{"name": self.name(i), "size": len(o), "points": list(o)}
                       for i, o in enumerate(self.orbits)],
            "line_classes": [
                {"split": {self.name(i): a for i, a in lc.split},
                 "lines_per_point": {self.name(i): c for i, c in lc.per_point},
                 "lines": lc.count}
                for lc in self.classes
            ],
        }

    def to_dot(self) -> str:
        out = ["graph suborbits {", "  node [shape=circle];"]
        for i, o in enumerate(self.orbits):
            out.append(f'  "{self.name(i)}" [label="{self.name(i)}\\n{len(o)}"];')
        for k, lc in enumerate(self.classes):
            per = dict(lc.per_point)
            if len(lc.split) == 1:
                (i, a), = lc.split
                out.append(f'  "{self.name(i)}" -- "{self.name(i)}" [label="{a}"];')
                continue
            out.append(f'  l{k} [shape=point, label=""];')
            for i, a in lc.split:
                out.append(f'  "{self.name(i)}" -- l{k} [taillabel="{per[i]}", label="{a}"];')
        out.append("}")
        return "\n".join(out) + "\n"


def suborbit_diagram(g: Geometry, G: PermGroup, x: int) -> SuborbitDiagram:
    """Orbits of the stabilizer of ``x`` and how lines meet them.

    Orbits are ordered by distance from ``x``, then size, then least point.
    """
    if G.degree != g.npoints:
        raise ValueError("group must act on the points of the geometry")
    for h in G.generators:
        if not g.is_automorphism(h):
            raise VerificationError("generator does not preserve the lines", h.tolist())
    stab = G.stabilizer_elements(x)
    label = np.full(g.npoints, -1)
    raw = []
    for p in range(g.npoints):
        if label[p] < 0:
            orb = np.unique(stab[:, p])
            label[orb] = len(raw)
            raw.append(tuple(orb.tolist()))
    D = g.distances
    order = sorted(range(len(raw)), key=lambda i: (int(D[x, raw[i][0]]), len(raw[i]), raw[i][0]))
    remap = {old: new for new, old in enumerate(order)}
    orbits = [raw[i] for i in order]
    label = np.array([remap[int(c)] for c in label])

    groups: dict[tuple, list[int]] = {}
    for j, L in enumerate(g.lines):
        key = tuple(sorted(Counter(int(label[p]) for p in L).items()))
        groups.setdefault(key, []).append(j)
    classes = []
    for split, js in sorted(groups.items()):
        per_point = []
        for i, _ in split:
            rep = orbits[i][0]
            per_point.append((i, sum(1 for j in g.lines_through[rep] if j in set(js))))
        classes.append(LineClass(split, tuple(per_point), len(js)))
    return SuborbitDiagram(x, orbits, classes)


# ---------------------------------------------------------------- I/O

def write_geometry(g: Geometry, path: str | Path | None = None) -> str:
    """Text format: ``points N`` then one sorted point list per line."""
    text = "\n".join([f"points {g.npoints}"] + [" ".join(map(str, L)) for L in g.lines]) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def parse_geometry(text: str) -> Geometry:
    rows = [r for r in text.splitlines() if r.strip()]
    head = rows[0].split()
    if len(head) != 2 or head[0] != "points":
        raise ValueError("expected 'points N' header")
    return Geometry(int(head[1]), [[int(p) for p in r.split()] for r in rows[1:]])


def read_geometry(path: str | Path) -> Geometry:
    return parse_geometry(Path(path).read_text())


def diagram_json(d: SuborbitDiagram) -> str:
    return json.dumps(d.to_json(), indent=2, sort_keys=True)
