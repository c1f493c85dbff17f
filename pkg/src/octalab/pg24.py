"""Arithmetic in GF(4) and the combinatorics of the projective plane PG(2,4).

Field elements are 2-bit codes: ``0``, ``1``, ``W = 2`` and ``W2 = 3``, where
``W`` is a root of ``x^2 + x + 1``.  Addition is XOR.  Vectors and 3x3 matrices
are plain tuples of codes (matrices row-major, length 9).

Points are normalized vectors of ``V`` (first nonzero coordinate 1) and lines
are normalized vectors of the dual space; a point lies on a line iff the dot
product of their coordinates vanishes.  Both lists are sorted
lexicographically once, and every permutation domain in the package indexes
into that order.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from typing import NamedTuple, Sequence

ZERO, ONE, W, W2 = 0, 1, 2, 3
ELEMENTS = (ZERO, ONE, W, W2)
NAMES = ("0", "1", "w", "w2")

# log/exp tables for the cyclic group <w> of order 3
_LOG = {ONE: 0, W: 1, W2: 2}
_EXP = (ONE, W, W2)

Vec3 = tuple[int, int, int]
Mat3 = tuple[int, ...]


def gf4_add(a: int, b: int) -> int:
    return a ^ b


def gf4_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return _EXP[(_LOG[a] + _LOG[b]) % 3]


def gf4_inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(4)")
    return _EXP[(-_LOG[a]) % 3]


def gf4_frob(a: int) -> int:
    """The Frobenius map x -> x^2, the only nontrivial automorphism of GF(4)."""
    return gf4_mul(a, a)


# ---------------------------------------------------------------- vectors

def dot(u: Sequence[int], v: Sequence[int]) -> int:
    acc = 0
    for a, b in zip(u, v):
        acc ^= gf4_mul(a, b)
    return acc


def frob_vec(v: Sequence[int]) -> Vec3:
    return tuple(gf4_frob(a) for a in v)  # type: ignore[return-value]


def scale(c: int, v: Sequence[int]) -> Vec3:
    return tuple(gf4_mul(c, a) for a in v)  # type: ignore[return-value]


def normalize(v: Sequence[int]) -> Vec3:
    """Scale ``v`` so that its first nonzero coordinate is 1."""
    for a in v:
        if a:
            return scale(gf4_inv(a), v)
    raise ValueError("the zero vector is not a projective point")


# ---------------------------------------------------------------- matrices

def mat(rows: Sequence[Sequence[int]]) -> Mat3:
    return tuple(a for row in rows for a in row)


IDENTITY: Mat3 = mat([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def mat_vec(A: Mat3, v: Sequence[int]) -> Vec3:
    return tuple(dot(A[3 * i:3 * i + 3], v) for i in range(3))  # type: ignore[return-value]


def mat_mul(A: Mat3, B: Mat3) -> Mat3:
    out = []
    for i in range(3):
        for j in range(3):
            acc = 0
            for k in range(3):
                acc ^= gf4_mul(A[3 * i + k], B[3 * k + j])
            out.append(acc)
    return tuple(out)


def transpose(A: Mat3) -> Mat3:
    return tuple(A[3 * j + i] for i in range(3) for j in range(3))


def frob_mat(A: Mat3) -> Mat3:
    return tuple(gf4_frob(a) for a in A)


def det(A: Mat3) -> int:
    a, b, c, d, e, f, g, h, i = A
    m = gf4_mul
    # characteristic 2: all signs are +
    return (m(a, m(e, i)) ^ m(a, m(f, h)) ^ m(b, m(d, i))
            ^ m(b, m(f, g)) ^ m(c, m(d, h)) ^ m(c, m(e, g)))


def inverse(A: Mat3) -> Mat3:
    d = det(A)
    if d == 0:
        raise ValueError("singular matrix")
    a, b, c, dd, e, f, g, h, i = A
    m = gf4_mul
    adj = (
        m(e, i) ^ m(f, h), m(b, i) ^ m(c, h), m(b, f) ^ m(c, e),
        m(dd, i) ^ m(f, g), m(a, i) ^ m(c, g), m(a, f) ^ m(c, dd),
        m(dd, h) ^ m(e, g), m(a, h) ^ m(b, g), m(a, e) ^ m(b, dd),
    )
    inv_d = gf4_inv(d)
    return tuple(m(inv_d, x) for x in adj)


def transvection(i: int, j: int, c: int) -> Mat3:
    """Identity plus ``c`` in position (i, j), i != j."""
    if i == j:
        raise ValueError("transvection needs an off-diagonal position")
    A = list(IDENTITY)
    A[3 * i + j] = c
    return tuple(A)


# ---------------------------------------------------------------- the plane

class Flag(NamedTuple):
    point: int
    line: int


class Plane(NamedTuple):
    points: tuple[Vec3, ...]
    lines: tuple[Vec3, ...]
    flags: tuple[Flag, ...]
    point_index: dict
    line_index: dict
    points_on_line: tuple[tuple[int, ...], ...]
    lines_on_point: tuple[tuple[int, ...], ...]


def _projective_points() -> tuple[Vec3, ...]:
    return tuple(sorted({normalize(v) for v in product(ELEMENTS, repeat=3) if any(v)}))


@lru_cache(maxsize=None)
def enumerate_plane() -> Plane:
    """All 21 points, 21 lines and 105 flags of PG(2,4), canonically sorted."""
    pts = _projective_points()
    lns = pts  # dual coordinates range over the same normalized vectors
    pon = tuple(tuple(p for p, x in enumerate(pts) if dot(x, y) == 0) for y in lns)
    lop = tuple(tuple(l for l, y in enumerate(lns) if dot(x, y) == 0) for x in pts)
    flags = tuple(Flag(p, l) for p in range(len(pts)) for l in lop[p])
    return Plane(
        points=pts,
        lines=lns,
        flags=flags,
        point_index={v: i for i, v in enumerate(pts)},
        line_index={v: i for i, v in enumerate(lns)},
        points_on_line=pon,
        lines_on_point=lop,
    )


def line_through(p: int, q: int) -> int:
    plane = enumerate_plane()
    common = set(plane.lines_on_point[p]) & set(plane.lines_on_point[q])
    if p == q or len(common) != 1:
        raise ValueError(f"points {p}, {q} do not span a unique line")
    return common.pop()


@lru_cache(maxsize=None)
def _collinear_triples() -> frozenset:
    plane = enumerate_plane()
    return frozenset(frozenset(t) for pts in plane.points_on_line for t in combinations(pts, 3))


@lru_cache(maxsize=None)
def enumerate_hyperovals() -> tuple[tuple[int, ...], ...]:
    """All 6-arcs (hyperovals) of PG(2,4) as sorted point-index tuples.

    Found by depth-first arc extension in increasing index order, so each
    arc is produced exactly once.
    """
    plane = enumerate_plane()
    n = len(plane.points)
    # third point of the line through p, q is forbidden once p, q are chosen
    on_line = [[0] * n for _ in range(n)]
    for p in range(n):
        for q in range(n):
            if p != q:
                on_line[p][q] = sum(1 << r for r in plane.points_on_line[line_through(p, q)])

    out = []

    def extend(arc: list[int], blocked: int) -> None:
        if len(arc) == 6:
            out.append(tuple(arc))
            return
        for r in range(arc[-1] + 1 if arc else 0, n):
            if blocked >> r & 1:
                continue
            new_block = blocked | (1 << r)
            for p in arc:
                new_block |= on_line[p][r]
            arc.append(r)
            extend(arc, new_block)
            arc.pop()

    extend([], 0)
    return tuple(out)


def is_arc(points: Sequence[int]) -> bool:
    triples = _collinear_triples()
    return not any(frozenset(t) in triples for t in combinations(points, 3))
