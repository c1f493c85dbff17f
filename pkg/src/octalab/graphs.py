"""Undirected graphs: automorphisms, isomorphism, SRG/DRG parameters.

Automorphisms and isomorphisms use individualization-refinement: colour
partitions are refined to equitable ones, the first smallest non-singleton
cell is the branching cell, and leaves (discrete partitions) are checked
directly.  Generators of ``Aut`` are collected level by level along the
leftmost path, so the product of the basic orbit lengths is the group order;
the order is cross-checked by enumerating the group from the generators.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from math import prod
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .perm import DEFAULT_BUDGET, PermGroup


class GraphError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message}: {witness}")
        self.witness = witness


class Graph:
    """Simple undirected graph on ``0..n-1`` with a boolean adjacency matrix."""

    def __init__(self, adj: np.ndarray):
        adj = np.asarray(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency matrix must be symmetric")
        if adj.diagonal().any():
            raise ValueError("graph must be loopless")
        self.adj = adj
        self.n = adj.shape[0]
        self._dist: np.ndarray | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            adj[u, v] = adj[v, u] = True
        return cls(adj)

    def neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adj[v])

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def edges(self) -> list[tuple[int, int]]:
        u, v = np.nonzero(np.triu(self.adj))
        return list(zip(u.tolist(), v.tolist()))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph in which vertex ``perm[i]`` plays the role of ``i``."""
        p = np.asarray(perm)
        adj = np.zeros_like(self.adj)
        adj[np.ix_(p, p)] = self.adj
        return Graph(adj)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        v = np.asarray(vertices)
        return Graph(self.adj[np.ix_(v, v)])

    @property
    def distances(self) -> np.ndarray:
        """All-pairs distance matrix; -1 marks unreachable pairs."""
        if self._dist is None:
            self._dist = bfs_distances(self.adj)
        return self._dist

    def is_connected(self) -> bool:
        return self.n == 0 or bool((self.distances[0] >= 0).all())

    def diameter(self) -> int:
        if not self.is_connected():
            raise GraphError("graph is disconnected")
        return int(self.distances.max())

    def is_automorphism(self, g: Sequence[int]) -> bool:
        g = np.asarray(g)
        return bool(np.array_equal(self.adj[np.ix_(g, g)], self.adj))


def bfs_distances(adj: np.ndarray) -> np.ndarray:
    """Breadth-first distances from every vertex at once."""
    n = adj.shape[0]
    A = adj.astype(np.float32)
    dist = np.full((n, n), -1, dtype=np.int32)
    np.fill_diagonal(dist, 0)
    frontier = np.eye(n, dtype=np.float32)
    seen = np.eye(n, dtype=bool)
    d = 0
    while frontier.any():
        d += 1
        nxt = (frontier @ A > 0) & ~seen
        dist[nxt] = d
        seen |= nxt
        frontier = nxt.astype(np.float32)
    return dist


# ---------------------------------------------------------------- parameters

def srg_params(g: Graph) -> tuple[int, int, int, int]:
    """(v, k, lambda, mu), or GraphError naming the first violating vertex/pair."""
    deg = g.degrees()
    if len(set(deg.tolist())) > 1:
        v = int(np.flatnonzero(deg != deg[0])[0])
        raise GraphError("graph is not regular", (0, v))
    common = g.adj.astype(np.int32) @ g.adj.astype(np.int32)
    lam = mu = None
    for u in range(g.n):
        for v in range(u + 1, g.n):
            c = int(common[u, v])
            if g.adj[u, v]:
                lam = c if lam is None else lam
                if c != lam:
                    raise GraphError("adjacent pairs differ in common neighbours", (u, v))
            else:
                mu = c if mu is None else mu
                if c != mu:
                    raise GraphError("non-adjacent pairs differ in common neighbours", (u, v))
    return g.n, int(deg[0]) if g.n else 0, lam or 0, mu or 0


@dataclass(frozen=True)
class IntersectionArray:
    b: tuple[int, ...]
    c: tuple[int, ...]

    @property
    def diameter(self) -> int:
        return len(self.c)

    def distribution(self) -> tuple[int, ...]:
        """Sizes k_0..k_d of the distance classes around any vertex."""
        ks = [1]
        for i in range(self.diameter):
            num = ks[-1] * self.b[i]
            if num % self.c[i]:
                raise GraphError("non-integral distance class size", i + 1)
            ks.append(num // self.c[i])
        return tuple(ks)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c)) + "}"


def drg_params(g: Graph) -> IntersectionArray:
    """Intersection array, verified at every vertex and every distance."""
    if not g.is_connected():
        raise GraphError("graph is disconnected")
    D = g.distances
    d = int(D.max())
    A = g.adj.astype(np.int32)
    b: list[int | None] = [None] * d
    c: list[int | None] = [None] * d
    for u in range(g.n):
        # cnt[j, v] = neighbours of v at distance j from u
        layers = np.stack([D[u] == j for j in range(d + 1)]).astype(np.int32)
        cnt = layers @ A
        for i in range(d + 1):
            at_i = np.flatnonzero(D[u] == i)
            if i < d:
                vals = cnt[i + 1, at_i]
                if b[i] is None:
                    b[i] = int(vals[0])
                bad = np.flatnonzero(vals != b[i])
                if len(bad):
                    raise GraphError(f"b_{i} not constant", (u, int(at_i[bad[0]]), i))
            if i > 0:
                vals = cnt[i - 1, at_i]
                if c[i - 1] is None:
                    c[i - 1] = int(vals[0])
                bad = np.flatnonzero(vals != c[i - 1])
                if len(bad):
                    raise GraphError(f"c_{i} not constant", (u, int(at_i[bad[0]]), i))
    return IntersectionArray(tuple(b), tuple(c))  # type: ignore[arg-type]


# ---------------------------------------------------------------- refinement

class _Refiner:
    def __init__(self, g: Graph, colors: Sequence[int] | None):
        self.n = g.n
        self.A = g.adj.astype(np.float32)
        base = np.zeros(g.n, dtype=np.int64) if colors is None else np.asarray(colors)
        _, inv = np.unique(base, return_inverse=True)
        self.colors0 = inv.ravel()

    def refine(self, colors: np.ndarray) -> tuple[np.ndarray, bytes]:
        n = self.n
        _, colors = np.unique(colors, return_inverse=True)
        colors = colors.ravel()
        trace = hashlib.blake2b(digest_size=16)
        k = int(colors.max()) + 1 if n else 0
        rows = np.arange(n)
        while True:
            M = np.zeros((n, k), dtype=np.float32)
            M[rows, colors] = 1.0
            key = np.empty((n, k + 1), dtype=np.int32)
            key[:, 0] = colors
            key[:, 1:] = self.A @ M
            uniq, new = np.unique(key, axis=0, return_inverse=True)
            new = new.ravel()
            trace.update(uniq.tobytes())
            if len(uniq) == k:
                trace.update(np.bincount(new).tobytes())
                return new, trace.digest()
            colors, k = new, len(uniq)

    def individualize(self, colors: np.ndarray, v: int) -> tuple[np.ndarray, bytes]:
        c = colors * 2 + 1
        c[v] -= 1
        return self.refine(c)


def _target(colors: np.ndarray) -> int | None:
    sizes = np.bincount(colors)
    big = np.flatnonzero(sizes > 1)
    if not len(big):
        return None
    return int(big[np.argmin(sizes[big])])


class _Path:
    """Leftmost search path: partitions, traces, base points, target cells."""

    def __init__(self, R: _Refiner):
        c, tr = R.refine(R.colors0)
        self.colors = [c]
        self.traces = [tr]
        self.base: list[int] = []
        self.targets: list[int] = []
        while (t := _target(c)) is not None:
            b = int(np.flatnonzero(c == t)[0])
            self.base.append(b)
            self.targets.append(t)
            c, tr = R.individualize(c, b)
            self.colors.append(c)
            self.traces.append(tr)

    @property
    def depth(self) -> int:
        return len(self.base)


def _leaf_map(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    g = np.empty(len(left), dtype=np.int64)
    g[np.argsort(left)] = np.argsort(right)
    return g


def _match(path: _Path, R_left: _Refiner, R_right: _Refiner, level: int,
           rc: np.ndarray) -> np.ndarray | None:
    """Extend a right-hand partition compatible with ``path`` at ``level`` to a
    leaf whose induced map is an isomorphism left -> right."""
    if level == path.depth:
        g = _leaf_map(path.colors[level], rc)
        if (np.array_equal(R_right.A[np.ix_(g, g)], R_left.A)
                and np.array_equal(R_right.colors0[g], R_left.colors0)):
            return g
        return None
    for w in np.flatnonzero(rc == path.targets[level]):
        rc2, tr = R_right.individualize(rc, int(w))
        if tr != path.traces[level + 1]:
            continue
        g = _match(path, R_left, R_right, level + 1, rc2)
        if g is not None:
            return g
    return None


def _orbit(point: int, gens: list[np.ndarray]) -> set[int]:
    seen = {point}
    queue = deque([point])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = int(g[p])
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


@dataclass
class AutSearch:
    generators: list[np.ndarray]
    base: list[int]
    orbit_sizes: list[int]

    @property
    def order(self) -> int:
        return prod(self.orbit_sizes)


def automorphism_search(g: Graph, colors: Sequence[int] | None = None) -> AutSearch:
    """Generators of the colour-preserving automorphism group plus basic orbits."""
    R = _Refiner(g, colors)
    path = _Path(R)
    gens: list[np.ndarray] = []
    sizes = [1] * path.depth
    for i in reversed(range(path.depth)):
        b = path.base[i]
        orbit = _orbit(b, gens)
        for v in np.flatnonzero(path.colors[i] == path.targets[i]):
            v = int(v)
            if v in orbit:
                continue
            rc, tr = R.individualize(path.colors[i], v)
            if tr != path.traces[i + 1]:
                continue
            h = _match(path, R, R, i + 1, rc)
            if h is not None:
                gens.append(h)
                orbit = _orbit(b, gens)
        sizes[i] = len(orbit)
    return AutSearch(gens, path.base, sizes)


def automorphism_group(g: Graph, colors: Sequence[int] | None = None,
                       budget: int = DEFAULT_BUDGET) -> PermGroup:
    """Full automorphism group, enumerated.

    The enumerated order must agree with the product of basic orbit lengths
    from the search; a mismatch is an internal error.
    """
    search = automorphism_search(g, colors)
    for h in search.generators:
        if not g.is_automorphism(h):
            raise AssertionError("search returned a non-automorphism")
    group = PermGroup.closure(search.generators, degree=g.n, budget=budget)
    if group.order != search.order:
        raise AssertionError(
            f"enumerated order {group.order} != basic-orbit product {search.order}")
    return group


def isomorphism(g1: Graph, g2: Graph, colors1: Sequence[int] | None = None,
                colors2: Sequence[int] | None = None) -> np.ndarray | None:
    """A vertex map ``m`` with ``g1 ~ g2`` via ``u -> m[u]``, or ``None``."""
    if g1.n != g2.n or g1.adj.sum() != g2.adj.sum():
        return None
    R1, R2 = _Refiner(g1, colors1), _Refiner(g2, colors2)
    if colors1 is not None or colors2 is not None:
        c1 = np.unique(np.zeros(g1.n, int) if colors1 is None else colors1, return_counts=True)
        c2 = np.unique(np.zeros(g2.n, int) if colors2 is None else colors2, return_counts=True)
        if not (np.array_equal(c1[0], c2[0]) and np.array_equal(c1[1], c2[1])):
            return None
    path = _Path(R1)
    rc, tr = R2.refine(R2.colors0)
    if tr != path.traces[0]:
        return None
    return _match(path, R1, R2, 0, rc)


# ---------------------------------------------------------------- I/O

def write_graph(g: Graph, path: str | Path) -> None:
    """Adjacency-list text: ``v N`` then one neighbour list per vertex."""
    lines = [f"v {g.n}"]
    lines += [" ".join(map(str, g.neighbors(v).tolist())) for v in range(g.n)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_graph(path: str | Path) -> Graph:
    rows = Path(path).read_text().splitlines()
    head = rows[0].split()
    if len(head) != 2 or head[0] != "v":
        raise ValueError("expected 'v N' header")
    n = int(head[1])
    if len(rows) - 1 < n:
        raise ValueError(f"expected {n} adjacency rows")
    edges = [(u, int(w)) for u, row in enumerate(rows[1:n + 1]) for w in row.split()]
    return Graph.from_edges(n, edges)


def read_dimacs(path: str | Path) -> Graph:
    """DIMACS ``p edge N M`` / ``e u v`` format, 1-based vertices."""
    n = None
    edges = []
    for raw in Path(path).read_text().splitlines():
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            n = int(parts[2])
        elif parts[0] == "e":
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
    if n is None:
        raise ValueError("missing 'p edge' line")
    return Graph.from_edges(n, edges)


def write_dimacs(g: Graph, path: str | Path) -> None:
    es = g.edges()
    lines = [f"p edge {g.n} {len(es)}"] + [f"e {u + 1} {v + 1}" for u, v in es]
    Path(path).write_text("\n".join(lines) + "\n")
