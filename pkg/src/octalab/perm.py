"""Permutation groups by full enumeration.

A permutation of ``{0..n-1}`` is a 1-d integer array ``p`` with ``p[i]`` the
image of ``i``.  Products act on the right: ``mul(a, b)`` applies ``a`` first,
then ``b``, and conjugation is ``x^g = g^-1 x g``.

Groups in scope have order at most ~10^5 on at most a few hundred points, so a
:class:`PermGroup` simply holds every element in a 2-d array, in the order the
breadth-first closure discovered them.  No stabilizer chains.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from . import pg24

DEFAULT_BUDGET = 10**6
FORMAT_VERSION = 1


class BudgetExceeded(RuntimeError):
    """Closure produced more elements than the configured budget."""


class NotInGroup(ValueError):
    pass


def _dtype(n: int):
    return np.uint8 if n <= 256 else np.uint16


def as_perm(p: Sequence[int], n: int | None = None) -> np.ndarray:
    arr = np.asarray(p, dtype=np.int64)
    n = len(arr) if n is None else n
    if arr.shape != (n,) or sorted(arr.tolist()) != list(range(n)):
        raise ValueError("not a permutation")
    return arr.astype(_dtype(n))


def identity(n: int) -> np.ndarray:
    return np.arange(n, dtype=_dtype(n))


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a`` then ``b``."""
    return b[a]


def inv(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[a] = np.arange(len(a), dtype=a.dtype)
    return out


def conj(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """``g^-1 x g``."""
    return g[x[inv(g)]]


def is_identity(a: np.ndarray) -> bool:
    return bool(np.all(a == np.arange(len(a))))


def order_of(a: np.ndarray) -> int:
    k, p = 1, a
    while not is_identity(p):
        p = mul(p, a)
        k += 1
    return k


def cycle_type(a: np.ndarray) -> tuple[int, ...]:
    seen = np.zeros(len(a), dtype=bool)
    lengths = []
    for i in range(len(a)):
        if seen[i]:
            continue
        j, k = i, 0
        while not seen[j]:
            seen[j] = True
            j = int(a[j])
            k += 1
        lengths.append(k)
    return tuple(sorted(lengths))


def two_adic(n: int) -> int:
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v


def dihedral_type(x: np.ndarray, y: np.ndarray) -> str:
    """Name of the dihedral group generated by two involutions."""
    n = order_of(mul(x, y))
    if n == 1:
        return "C2"
    if n == 2:
        return "C2xC2"
    if n == 3:
        return "S3"
    return f"D{2 * n}"


class PermGroup:
    """A fully enumerated permutation group.

    ``elements[0]`` is the identity; the rest follow breadth-first discovery
    order from ``generators``.
    """

    def __init__(self, generators: np.ndarray, elements: np.ndarray,
                 labels: Sequence[str] | None = None):
        self.generators = np.asarray(generators)
        self.elements = np.asarray(elements)
        self.degree = self.elements.shape[1]
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(self.degree))
        if len(self.labels) != self.degree or len(set(self.labels)) != self.degree:
            raise ValueError("domain labels must be distinct, one per point")
        self._index: dict[bytes, int] | None = None

    # -- construction
    @classmethod
    def closure(cls, generators: Iterable[Sequence[int]], degree: int | None = None,
                labels: Sequence[str] | None = None, budget: int = DEFAULT_BUDGET) -> "PermGroup":
        gens = [np.asarray(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("need a degree for the trivial group")
            degree = len(gens[0])
        gens = [as_perm(g, degree) for g in gens]
        if budget <= 0:
            raise ValueError("budget must be positive")
        e = identity(degree)
        index = {e.tobytes(): 0}
        found = [e]
        frontier = np.array([e])
        while len(frontier):
            fresh = []
            for g in gens:
                for row in g[frontier]:
                    key = row.tobytes()
                    if key not in index:
                        index[key] = len(found)
                        found.append(row)
                        fresh.append(row)
                        if len(found) > budget:
                            raise BudgetExceeded(
                                f"closure exceeded {budget} elements; check the generators")
            frontier = np.array(fresh) if fresh else np.empty((0, degree), dtype=e.dtype)
        gen_arr = np.array(gens) if gens else np.empty((0, degree), dtype=e.dtype)
        group = cls(gen_arr, np.array(found), labels)
        group._index = index
        return group

    # -- basic queries
    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.order

    @property
    def index(self) -> dict[bytes, int]:
        if self._index is None:
            self._index = {row.tobytes(): i for i, row in enumerate(self.elements)}
        return self._index

    def index_of(self, g: np.ndarray) -> int:
        try:
            return self.index[np.asarray(g, dtype=self.elements.dtype).tobytes()]
        except KeyError:
            raise NotInGroup("element is not in the group") from None

    def __contains__(self, g) -> bool:
        g = np.asarray(g)
        return g.shape == (self.degree,) and g.astype(self.elements.dtype).tobytes() in self.index

    def identity(self) -> np.ndarray:
        return self.elements[0]

    # -- conjugacy
    def conjugacy_class(self, g: np.ndarray) -> np.ndarray:
        """All conjugates of ``g``, in discovery order."""
        g = np.asarray(g, dtype=self.elements.dtype)
        if g not in self:
            raise NotInGroup("element is not in the group")
        gens = [(h, inv(h)) for h in self.generators]
        seen = {g.tobytes()}
        out = [g]
        queue = deque([g])
        while queue:
            x = queue.popleft()
            for h, hi in gens:
                y = h[x[hi]]
                key = y.tobytes()
                if key not in seen:
                    seen.add(key)
                    out.append(y)
                    queue.append(y)
        return np.array(out)

    def centralizer_order(self, g: np.ndarray) -> int:
        return self.order // len(self.conjugacy_class(g))

    def centralizer(self, g: np.ndarray) -> np.ndarray:
        g = np.asarray(g)
        E = self.elements
        # g*h == h*g  <=>  h[g] == g[h]
        mask = np.all(E[:, g] == g[E], axis=1)
        return E[mask]

    def involutions(self) -> np.ndarray:
        E = self.elements
        sq = np.take_along_axis(E, E.astype(np.intp), axis=1)
        ident = np.arange(self.degree)
        mask = np.all(sq == ident, axis=1) & ~np.all(E == ident, axis=1)
        return E[mask]

    def central_involutions(self) -> np.ndarray:
        """Involutions whose centralizer has full 2-part, sorted lexicographically.

        An involution centralizes a Sylow 2-subgroup exactly when the 2-part of
        its centralizer order equals that of the group order.
        """
        target = two_adic(self.order)
        done: set[bytes] = set()
        keep = []
        for g in self.involutions():
            if g.tobytes() in done:
                continue
            cls = self.conjugacy_class(g)
            done.update(c.tobytes() for c in cls)
            if two_adic(self.order // len(cls)) == target:
                keep.extend(cls)
        keep.sort(key=lambda a: a.tolist())
        return np.array(keep) if keep else np.empty((0, self.degree), dtype=self.elements.dtype)

    def triple_orbit_size(self, x: np.ndarray, y: np.ndarray) -> int:
        """``[G : N_G(<x,y>)]`` for distinct commuting involutions ``x``, ``y``.

        Computed as the orbit length of ``{x, y, xy}`` under conjugation.
        """
        x = np.asarray(x, dtype=self.elements.dtype)
        y = np.asarray(y, dtype=self.elements.dtype)
        if not (order_of(x) == 2 and order_of(y) == 2) or np.array_equal(x, y):
            raise ValueError("need two distinct involutions")
        xy = mul(x, y)
        if not np.array_equal(xy, mul(y, x)):
            raise ValueError("involutions do not commute")
        gens = [(h, inv(h)) for h in self.generators]

        def key(trip):
            return frozenset(t.tobytes() for t in trip)

        start = (x, y, xy)
        seen = {key(start)}
        queue = deque([start])
        while queue:
            trip = queue.popleft()
            for h, hi in gens:
                img = tuple(h[t[hi]] for t in trip)
                k = key(img)
                if k not in seen:
                    seen.add(k)
                    queue.append(img)
        return len(seen)

    # -- actions
    def orbit(self, point: Hashable, act: Callable | None = None) -> list:
        """Orbit of ``point`` under the generators.

        Without ``act`` the natural action on ``{0..degree-1}`` is used;
        otherwise ``act(point, g)`` must return the image of ``point`` under ``g``.
        """
        if act is None:
            act = lambda p, g: int(g[p])  # noqa: E731
        seen = {point}
        out = [point]
        queue = deque([point])
        while queue:
            p = queue.popleft()
            for g in self.generators:
                q = act(p, g)
                if q not in seen:
                    seen.add(q)
                    out.append(q)
                    queue.append(q)
        return out

    def orbits(self) -> list[list[int]]:
        seen = set()
        out = []
        for p in range(self.degree):
            if p not in seen:
                orb = sorted(self.orbit(p))
                seen.update(orb)
                out.append(orb)
        return out

    def stabilizer_elements(self, point: int) -> np.ndarray:
        E = self.elements
        return E[E[:, point] == point]

    def induced(self, objects: Sequence, act: Callable, labels: Sequence[str] | None = None,
                budget: int = DEFAULT_BUDGET) -> "PermGroup":
        """Image of the group acting on ``objects`` (closed under ``act``)."""
        pos = {o: i for i, o in enumerate(objects)}
        gens = [[pos[act(o, g)] for o in objects] for g in self.generators]
        return PermGroup.closure(gens, degree=len(objects), labels=labels, budget=budget)

    # -- serialization
    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(json.dumps(self.labels).encode())
        h.update(np.ascontiguousarray(self.generators, dtype=np.uint16).tobytes())
        return h.hexdigest()

    def save(self, path: str | Path) -> None:
        path = Path(path)
        with open(path, "wb") as fh:
            np.savez(fh, version=np.array(FORMAT_VERSION),
                     labels=np.array(self.labels), generators=self.generators,
                     elements=self.elements)

    @classmethod
    def load(cls, path: str | Path) -> "PermGroup":
        with np.load(Path(path), allow_pickle=False) as data:
            version = int(data["version"])
            if version != FORMAT_VERSION:
                raise ValueError(f"unsupported permgroup format version {version}")
            return cls(data["generators"], data["elements"], [str(s) for s in data["labels"]])


# ---------------------------------------------------------------- the plane group

@dataclass(frozen=True)
class SemilinearDatum:
    """A collineation (``delta=0``) or correlation (``delta=1``) of PG(2,4).

    ``A`` is a row-major 3x3 matrix with determinant 1; ``tau`` says whether
    the Frobenius map is applied to coordinates first.
    """

    A: pg24.Mat3 = pg24.IDENTITY
    tau: int = 0
    delta: int = 0

    def __post_init__(self):
        d = pg24.det(self.A)
        if d == 0:
            raise ValueError("singular matrix")
        if d != 1:
            raise ValueError(f"determinant must be 1, got {pg24.NAMES[d]}")
        if self.tau not in (0, 1) or self.delta not in (0, 1):
            raise ValueError("tau and delta are 0/1 flags")


def plane_labels() -> tuple[str, ...]:
    plane = pg24.enumerate_plane()
    sym = "01wW"
    return (tuple("p" + "".join(sym[a] for a in v) for v in plane.points)
            + tuple("L" + "".join(sym[a] for a in v) for v in plane.lines))


def semilinear_to_perm(d: SemilinearDatum) -> np.ndarray:
    """The permutation of the 42 points-then-lines induced by ``d``."""
    plane = pg24.enumerate_plane()
    n = len(plane.points)
    A = d.A
    AinvT = pg24.transpose(pg24.inverse(A))
    f = pg24.frob_vec if d.tau else (lambda v: tuple(v))
    out = np.empty(2 * n, dtype=np.uint8)
    for i, x in enumerate(plane.points):
        img = pg24.normalize(pg24.mat_vec(A, f(x)))
        out[i] = (plane.line_index[img] + n) if d.delta else plane.point_index[img]
    for i, y in enumerate(plane.lines):
        img = pg24.normalize(pg24.mat_vec(AinvT, f(y)))
        out[n + i] = plane.point_index[img] if d.delta else (plane.line_index[img] + n)
    return out


def compose_semilinear(d1: SemilinearDatum, d2: SemilinearDatum) -> SemilinearDatum:
    """Datum of ``d1`` followed by ``d2``."""
    A1 = pg24.frob_mat(d1.A) if d2.tau else d1.A
    # after a correlation the second map acts on line coordinates
    M2 = pg24.transpose(pg24.inverse(d2.A)) if d1.delta else d2.A
    return SemilinearDatum(pg24.mat_mul(M2, A1), d1.tau ^ d2.tau, d1.delta ^ d2.delta)


def sl3_generators() -> list[SemilinearDatum]:
    return [SemilinearDatum(pg24.transvection(i, j, c))
            for i in range(3) for j in range(3) if i != j for c in (pg24.ONE, pg24.W)]


FROBENIUS = SemilinearDatum(tau=1)
DUALITY = SemilinearDatum(delta=1)


def build_group_L34(budget: int = DEFAULT_BUDGET) -> PermGroup:
    gens = [semilinear_to_perm(d) for d in sl3_generators()]
    return PermGroup.closure(gens, labels=plane_labels(), budget=budget)


def build_group_G(budget: int = DEFAULT_BUDGET) -> PermGroup:
    """All collineations and correlations of PG(2,4) with det 1 (type L3(4):2^2)."""
    data = sl3_generators() + [FROBENIUS, DUALITY]
    return PermGroup.closure([semilinear_to_perm(d) for d in data],
                             labels=plane_labels(), budget=budget)


def flag_key(f: pg24.Flag) -> frozenset:
    n = len(pg24.enumerate_plane().points)
    return frozenset((f.point, f.line + n))


def act_on_flag(key: frozenset, g: np.ndarray) -> frozenset:
    return frozenset(int(g[i]) for i in key)
