"""Exact rational cones and tailed polyhedra.

Both classes are V-represented and canonical: a cone keeps the primitive
generators of its extreme rays (plus both signs of a fixed lineality basis),
a polyhedron keeps its sorted vertex list and its tail cone. Structural
equality therefore coincides with set equality. H-representations are derived
on demand by a naive double description (enumeration of tight constraint
sets), which is plenty at the dimensions the library works in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence, Tuple, Union

from .errors import EmptyPolyhedron, NotPointed, RankMismatch, TailMismatch, TailViolation
from .exact_linalg import Matrix, Scalar, _norm, nullspace, primitive_vector

QVector = Tuple[Scalar, ...]


def qvec(v: Iterable) -> QVector:
    return tuple(_norm(Fraction(x)) for x in v)


def dot(a: Sequence, b: Sequence) -> Scalar:
    return _norm(sum(Fraction(x) * y for x, y in zip(a, b)))


def _neg(v):
    return tuple(-x for x in v)


def _generators_of(halfspaces: Sequence[Sequence[Scalar]], n: int):
    """Generators of ``{x in Q^n : a.x >= 0 for all a}``.

    Returns ``(rays, lineality)``: primitive extreme rays of the cone cut with
    the orthogonal complement of its lineality space, and a primitive basis of
    that lineality space. Both are sorted.
    """
    A = [tuple(a) for a in dict.fromkeys(tuple(a) for a in halfspaces) if any(a)]
    lin = nullspace(A, n) if A else [tuple(int(i == j) for j in range(n)) for i in range(n)]
    d = n - len(lin)
    rays = set()
    if d > 0:
        for T in combinations(range(len(A)), d - 1):
            stack = [A[t] for t in T] + list(lin)
            ns = nullspace(stack, n)
            if len(ns) != 1:
                continue
            r = ns[0]
            for cand in (r, _neg(r)):
                if all(dot(a, cand) >= 0 for a in A):
                    rays.add(cand)
    return sorted(rays), sorted(lin)


@dataclass(frozen=True, eq=False)
class Cone:
    """A rational polyhedral cone in ``Q^ambient_rank``.

    ``generators`` lists the extreme rays followed by ``+-b`` for each vector
    ``b`` of the lineality basis, all primitive and sorted.
    """

    ambient_rank: int
    generators: Tuple[Tuple[int, ...], ...]
    lineality: Tuple[Tuple[int, ...], ...]
    _hrep: list = field(default_factory=list, repr=False, compare=False)

    def __init__(self, generators: Iterable[Sequence[Scalar]], ambient_rank: Optional[int] = None):
        gens = [tuple(g) for g in generators]
        if ambient_rank is None:
            if not gens:
                raise ValueError("ambient_rank is required for an empty generator list")
            ambient_rank = len(gens[0])
        if any(len(g) != ambient_rank for g in gens):
            raise RankMismatch("generator of the wrong length")
        gens = [primitive_vector(g) for g in gens if any(g)]
        n = ambient_rank
        # canonicalize by a double dual
        facets = _facets_of(gens, n)
        rays, lin = _generators_of(facets, n)
        self._set(n, rays, lin, facets)

    def _set(self, n, rays, lin, facets):
        object.__setattr__(self, "ambient_rank", n)
        object.__setattr__(self, "lineality", tuple(lin))
        object.__setattr__(self, "generators",
                           tuple(sorted(set(rays) | set(lin) | {_neg(b) for b in lin})))
        object.__setattr__(self, "_hrep", list(facets))

    @classmethod
    def from_halfspaces(cls, halfspaces: Iterable[Sequence[Scalar]], ambient_rank: int) -> "Cone":
        """The cone ``{x : a.x >= 0}`` cut out by the given linear forms."""
        hs = [tuple(a) for a in halfspaces]
        rays, lin = _generators_of(hs, ambient_rank)
        gens = list(rays) + list(lin) + [_neg(b) for b in lin]
        return cls(gens, ambient_rank)

    @classmethod
    def zero(cls, n: int) -> "Cone":
        return cls([], n)

    @classmethod
    def orthant(cls, n: int) -> "Cone":
        return cls([tuple(int(i == j) for j in range(n)) for i in range(n)], n)

    @classmethod
    def full(cls, n: int) -> "Cone":
        return cls.from_halfspaces([], n)

    @property
    def halfspaces(self) -> Tuple[Tuple[int, ...], ...]:
        """Primitive integral forms ``a`` with ``cone == {x : a.x >= 0}``.

        Equations show up as a pair ``a, -a``.
        """
        return tuple(self._hrep)

    @property
    def rays(self) -> Tuple[Tuple[int, ...], ...]:
        lin = set(self.lineality) | {_neg(b) for b in self.lineality}
        return tuple(g for g in self.generators if g not in lin)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def contains_point(self, x: Sequence[Scalar]) -> bool:
        if len(x) != self.ambient_rank:
            raise RankMismatch("point of the wrong rank")
        return all(dot(a, x) >= 0 for a in self._hrep)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains_point(g) for g in other.generators)

    def image(self, F: Matrix) -> "Cone":
        return Cone([F @ g for g in self.generators], F.nrows)

    def __eq__(self, other):
        return (isinstance(other, Cone) and self.ambient_rank == other.ambient_rank
                and self.generators == other.generators)

    def __hash__(self):
        return hash((self.ambient_rank, self.generators))

    def __repr__(self):
        return f"Cone({list(self.generators)}, rank={self.ambient_rank})"


def _facets_of(gens, n):
    rays, lin = _generators_of(gens, n)
    return sorted(set(rays) | set(lin) | {_neg(b) for b in lin})


def dual_cone(c: Cone) -> Cone:
    """``{u : <u, v> >= 0 for all v in c}``."""
    return Cone(c.halfspaces, c.ambient_rank)


# ---------------------------------------------------------------------------
# Polyhedra


class _MinusInfinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-oo"

    __str__ = __repr__

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self


MINUS_INFINITY = _MinusInfinity()
SupportValue = Union[Scalar, _MinusInfinity]


def _canonical_vertices(points, tail: Cone):
    n = tail.ambient_rank
    if n == 0:
        return [()]
    if n == 1:
        vals = [p[0] for p in points]
        rays = set(tail.rays)
        if rays == {(1,)}:
            return [(min(vals),)]
        if rays == {(-1,)}:
            return [(max(vals),)]
        return sorted({(min(vals),), (max(vals),)})
    hom = [tuple(p) + (1,) for p in points] + [tuple(r) + (0,) for r in tail.rays]
    cone = Cone(hom, n + 1)
    out = [tuple(Fraction(x) / g[-1] for x in g[:-1]) for g in cone.rays if g[-1] > 0]
    return sorted(qvec(v) for v in out)


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """``conv(vertices) + tail`` in ``Q^ambient_rank`` with a pointed tail."""

    ambient_rank: int
    vertices: Tuple[QVector, ...]
    tail: Cone
    _hrep: list = field(default_factory=list, repr=False, compare=False)

    def __init__(self, points: Iterable[Sequence], tail: Union[Cone, Iterable, None] = None,
                 ambient_rank: Optional[int] = None):
        pts = [qvec(p) for p in points]
        if not pts:
            raise EmptyPolyhedron("a polyhedron needs at least one vertex")
        if ambient_rank is None:
            ambient_rank = len(pts[0])
        if any(len(p) != ambient_rank for p in pts):
            raise RankMismatch("vertex of the wrong rank")
        if tail is None:
            tail = Cone.zero(ambient_rank)
        elif not isinstance(tail, Cone):
            tail = Cone(list(tail), ambient_rank)
        if tail.ambient_rank != ambient_rank:
            raise RankMismatch("tail cone of the wrong rank")
        if not tail.is_pointed:
            raise NotPointed("tail cone contains a line")
        object.__setattr__(self, "ambient_rank", ambient_rank)
        object.__setattr__(self, "tail", tail)
        object.__setattr__(self, "vertices", tuple(_canonical_vertices(pts, tail)))
        object.__setattr__(self, "_hrep", [])

    @classmethod
    def point(cls, v: Sequence, tail: Optional[Cone] = None) -> "Polyhedron":
        return cls([v], tail)

    @classmethod
    def interval(cls, a, b) -> "Polyhedron":
        return cls([(a,), (b,)])

    @classmethod
    def trivial(cls, tail: Cone) -> "Polyhedron":
        return cls([(0,) * tail.ambient_rank], tail)

    @classmethod
    def from_halfspaces(cls, ineqs: Iterable[Tuple[Sequence, Scalar]], ambient_rank: int) -> "Polyhedron":
        """``{x : a.x + c >= 0}`` for the given pairs ``(a, c)``."""
        n = ambient_rank
        hom = [tuple(a) + (c,) for a, c in ineqs]
        hom.append((0,) * n + (1,))
        rays, lin = _generators_of([tuple(Fraction(x) for x in h) for h in hom], n + 1)
        if lin:
            raise NotPointed("polyhedron contains a line")
        verts = [tuple(Fraction(x) / g[-1] for x in g[:-1]) for g in rays if g[-1] > 0]
        if not verts:
            raise EmptyPolyhedron("inequalities are infeasible")
        tail = Cone([g[:-1] for g in rays if g[-1] == 0], n)
        return cls(verts, tail)

    @property
    def halfspaces(self) -> Tuple[Tuple[QVector, Scalar], ...]:
        """Pairs ``(a, c)`` with ``self == {x : a.x + c >= 0}``."""
        if not self._hrep:
            n = self.ambient_rank
            hom = [tuple(v) + (1,) for v in self.vertices] + [tuple(r) + (0,) for r in self.tail.rays]
            facets = _facets_of([tuple(Fraction(x) for x in h) for h in hom], n + 1)
            self._hrep.extend((f[:-1], f[-1]) for f in facets if any(f[:-1]))
        return tuple(self._hrep)

    @property
    def is_trivial(self) -> bool:
        """True for ``{0} + tail``, the neutral element of Minkowski addition."""
        return self.vertices == ((0,) * self.ambient_rank,)

    @property
    def is_point(self) -> bool:
        return len(self.vertices) == 1 and self.tail.is_zero

    def contains_point(self, x: Sequence) -> bool:
        return all(dot(a, x) + c >= 0 for a, c in self.halfspaces)

    def __eq__(self, other):
        return (isinstance(other, Polyhedron) and self.ambient_rank == other.ambient_rank
                and self.vertices == other.vertices and self.tail == other.tail)

    def __hash__(self):
        return hash((self.ambient_rank, self.vertices, self.tail))

    def __str__(self):
        return format_polyhedron(self)

    def __repr__(self):
        return f"Polyhedron({format_polyhedron(self)})"


def _fmt_vec(v):
    return "(" + ",".join(str(x) for x in v) + ")"


def format_polyhedron(d: Polyhedron) -> str:
    """Compact notation: ``{1/2}``, ``[0,1/6]``, ``[0,+oo)`` in rank one."""
    if d.ambient_rank == 1:
        rays = set(d.tail.rays)
        lo, hi = d.vertices[0][0], d.vertices[-1][0]
        if rays == {(1,)}:
            return f"[{lo},+oo)"
        if rays == {(-1,)}:
            return f"(-oo,{hi}]"
        if lo == hi:
            return f"{{{lo}}}"
        return f"[{lo},{hi}]"
    if len(d.vertices) == 1 and d.tail.is_zero:
        return "{" + _fmt_vec(d.vertices[0]) + "}"
    verts = ",".join(_fmt_vec(v) for v in d.vertices)
    rays = ",".join(_fmt_vec(r) for r in d.tail.rays)
    return f"<vertices=[{verts}] rays=[{rays}]>"


def _check_rank(a: Polyhedron, b: Polyhedron):
    if a.ambient_rank != b.ambient_rank:
        raise RankMismatch(f"ranks {a.ambient_rank} and {b.ambient_rank} differ")


def minkowski_sum(a: Polyhedron, b: Polyhedron) -> Polyhedron:
    _check_rank(a, b)
    if a.tail != b.tail:
        raise TailMismatch(f"tails {a.tail} and {b.tail} differ")
    pts = [tuple(x + y for x, y in zip(p, q)) for p in a.vertices for q in b.vertices]
    return Polyhedron(pts, a.tail)


def minkowski_difference(a: Polyhedron, b: Polyhedron) -> Polyhedron:
    """The largest ``x`` with ``x + b`` inside ``a`` (Pontryagin difference).

    Raises EmptyPolyhedron when no translate of ``b`` fits in ``a``.
    """
    _check_rank(a, b)
    if a.tail != b.tail:
        raise TailMismatch(f"tails {a.tail} and {b.tail} differ")
    ineqs = [(f, c + min(dot(f, v) for v in b.vertices)) for f, c in a.halfspaces]
    if not ineqs:
        return Polyhedron.trivial(a.tail)
    res = Polyhedron.from_halfspaces(ineqs, a.ambient_rank)
    return Polyhedron(res.vertices, a.tail)


def support_min(d: Polyhedron, u: Sequence) -> SupportValue:
    """``min <u, v>`` over ``v`` in ``d``, or MINUS_INFINITY if unbounded."""
    if len(u) != d.ambient_rank:
        raise RankMismatch("linear form of the wrong rank")
    if any(dot(u, r) < 0 for r in d.tail.generators):
        return MINUS_INFINITY
    return min(dot(u, v) for v in d.vertices)


def contains(outer: Polyhedron, inner: Polyhedron) -> bool:
    _check_rank(outer, inner)
    return (all(outer.contains_point(v) for v in inner.vertices)
            and outer.tail.contains_cone(inner.tail))


def scale(d: Polyhedron, r) -> Polyhedron:
    r = Fraction(r)
    if r <= 0:
        raise ValueError("scale factor must be positive")
    return Polyhedron([tuple(r * x for x in v) for v in d.vertices], d.tail)


def translate(d: Polyhedron, t: Sequence) -> Polyhedron:
    if len(t) != d.ambient_rank:
        raise RankMismatch("translation of the wrong rank")
    return Polyhedron([tuple(x + Fraction(y) for x, y in zip(v, t)) for v in d.vertices], d.tail)


def linear_image(d: Polyhedron, F: Matrix, target_tail: Cone) -> Polyhedron:
    """``F(d) + target_tail``; requires ``F(tail) ⊆ target_tail``."""
    if F.ncols != d.ambient_rank or F.nrows != target_tail.ambient_rank:
        raise RankMismatch(f"map of shape {F.shape} does not fit")
    if not target_tail.contains_cone(d.tail.image(F)):
        raise TailViolation("F does not map the tail into the target tail")
    return Polyhedron([F @ v for v in d.vertices], target_tail)
