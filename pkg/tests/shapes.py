"""Small standard geometries and graphs shared by the tests."""

from itertools import combinations

from octalab.geometry import Geometry
from octalab.graphs import Graph


def grid(n=3):
    rows = [[i * n + j for j in range(n)] for i in range(n)]
    cols = [[i * n + j for i in range(n)] for j in range(n)]
    return Geometry(n * n, rows + cols)


def w2():
    """Pairs from a 6-set, lines are partitions into three pairs."""
    pairs = list(combinations(range(6), 2))
    idx = {p: i for i, p in enumerate(pairs)}
    lines = set()
    for a, b in pairs:
        rest = [x for x in range(6) if x not in (a, b)]
        for c, d in combinations(rest, 2):
            e, f = [x for x in rest if x not in (c, d)]
            lines.add(frozenset((idx[(a, b)], idx[(c, d)], idx[(e, f)])))
    return Geometry(15, lines)


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def petersen():
    V = list(combinations(range(5), 2))
    return Graph.from_edges(10, [(i, j) for i, a in enumerate(V) for j, b in enumerate(V)
                                 if i < j and not set(a) & set(b)])


def complete(n):
    return Graph.from_edges(n, combinations(range(n), 2))
