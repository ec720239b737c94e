"""Downgrading a linear torus action on affine space.

A faithful action of a k-torus on ``A^m`` is a weight matrix ``F`` (``m x k``).
Completing it to ``0 -> Z^k -F-> Z^m -P-> Z^(m-k) -> 0`` with a section ``s``
gives the combinatorial data of the quotient: the columns of ``P`` are the
rays of the quotient fan, and each ray ``v_j`` carries the polytope
``s({x >= 0 : P x == v_j})``. The tail cone is ``s(Q^m_>=0 ∩ F(Q^k))``,
which is ``{l : F l >= 0}`` because ``s`` inverts ``F`` on its image.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import List, Mapping, Optional, Sequence, Tuple

from .convex import Cone, Polyhedron, qvec
from .divisors import QDivisor, YModel
from .errors import EmptyInterval, MissingLabel
from .exact_linalg import ExactSequence, Matrix, cokernel_presentation, primitive_vector
from .ppdiv import PPDivisor, add

Row = Tuple[Fraction, ...]


@dataclass(frozen=True)
class WeightData:
    """Weights of a linear torus action; row ``j`` of ``F`` is the weight of
    the coordinate ``x_j``. ``ray_labels`` names the prime divisor each
    coordinate hyperplane restricts to, keyed by column index of ``P``."""

    F: Matrix
    ray_labels: Mapping[int, str] = field(default_factory=dict)

    @classmethod
    def single(cls, weights: Sequence[int], ray_labels: Optional[Mapping[int, str]] = None) -> "WeightData":
        return cls(Matrix.column(weights), dict(ray_labels or {}))

    @property
    def k(self) -> int:
        return self.F.ncols

    @property
    def m(self) -> int:
        return self.F.nrows


@dataclass(frozen=True)
class DowngradeResult:
    seq: ExactSequence
    sigma: Cone
    columns: Tuple[int, ...]      # coordinate index each ray comes from
    rays: Tuple[Tuple[int, ...], ...]
    polytopes: Tuple[Polyhedron, ...]

    def polytope_of(self, column: int) -> Polyhedron:
        return self.polytopes[self.columns.index(column)]

    def summary(self) -> List[str]:
        lines = [f"F = {self.seq.F.rows}", f"P = {self.seq.P.rows}", f"s = {self.seq.s.rows}",
                 f"sigma = {self.sigma}"]
        for j, v, pi in zip(self.columns, self.rays, self.polytopes):
            lines.append(f"x{j + 1}: ray {v} polytope {pi}")
        return lines


# ---------------------------------------------------------------------------
# Fourier-Motzkin projection


def _scale_row(r: Sequence[Fraction]) -> Row:
    """Normalize an inequality row by its leading nonzero absolute value."""
    lead = next((abs(x) for x in r if x != 0), None)
    if lead is None:
        return tuple(r)
    return tuple(Fraction(x) / lead for x in r)


def project(eqs: List[Row], ineqs: List[Row], n_elim: int, n_keep: int) -> List[Row]:
    """Eliminate the first ``n_elim`` variables from a system in
    ``n_elim + n_keep`` unknowns.

    Rows are ``(a_1, ..., a_n, c)`` meaning ``a.x + c == 0`` (``eqs``) or
    ``a.x + c >= 0`` (``ineqs``). Equalities are used for substitution first;
    the remaining variables go through Fourier-Motzkin. The returned rows
    constrain only the kept variables (their leading ``n_elim`` entries are
    dropped). Exact but not minimal: callers canonicalize afterwards.
    """
    eqs = [tuple(Fraction(x) for x in r) for r in eqs]
    ineqs = [tuple(Fraction(x) for x in r) for r in ineqs]
    for j in range(n_elim):
        piv = next((r for r in eqs if r[j] != 0), None)
        if piv is not None:
            def subst(r, piv=piv):
                if r[j] == 0:
                    return r
                q = r[j] / piv[j]
                return tuple(a - q * b for a, b in zip(r, piv))

            eqs = [subst(r) for r in eqs if r is not piv]
            ineqs = [subst(r) for r in ineqs]
            continue
        pos = [r for r in ineqs if r[j] > 0]
        neg = [r for r in ineqs if r[j] < 0]
        rest = [r for r in ineqs if r[j] == 0]
        for p in pos:
            for q in neg:
                rest.append(tuple(a * -q[j] + b * p[j] for a, b in zip(p, q)))
        ineqs = list(dict.fromkeys(_scale_row(r) for r in rest))
    out = []
    for r in eqs:
        tail = r[n_elim:]
        out.append(tail)
        out.append(tuple(-x for x in tail))
    out.extend(r[n_elim:] for r in ineqs)
    return out


def _fiber_polytope(seq: ExactSequence, v: Sequence[int], sigma: Cone) -> Polyhedron:
    """``s({x >= 0 : P x == v})`` by projecting away ``x``."""
    m, k = seq.m, seq.k
    n = m + k
    eqs = []
    for i in range(seq.P.nrows):
        eqs.append(tuple(seq.P[i, j] for j in range(m)) + (0,) * k + (-v[i],))
    for i in range(k):
        # y_i - (s x)_i == 0
        eqs.append(tuple(-seq.s[i, j] for j in range(m)) + tuple(int(a == i) for a in range(k)) + (0,))
    ineqs = [tuple(int(a == j) for a in range(n)) + (0,) for j in range(m)]
    rows = project(eqs, ineqs, m, k)
    if any(all(x == 0 for x in r[:-1]) and r[-1] < 0 for r in rows):
        raise ValueError(f"empty fiber over {v}")  # impossible for a column of P
    proj = Polyhedron.from_halfspaces([(r[:-1], r[-1]) for r in rows if any(r[:-1])], k)
    return Polyhedron(proj.vertices, sigma)


def downgrade(w: WeightData, section: Optional[Matrix] = None) -> DowngradeResult:
    """Tail cone, rays and ray polytopes of the downgraded action.

    Rays come in the column order of ``P``; a zero column (a coordinate of
    weight zero relative to the rest) spans no ray and is skipped, and a ray
    already produced by an earlier column is reported once, under its first
    column. ``section`` overrides the normalized section.
    """
    seq = cokernel_presentation(w.F, section)
    k = seq.k
    sigma = Cone.from_halfspaces([w.F.row(j) for j in range(w.m)], k)
    cols, rays, polys = [], [], []
    for j in range(seq.m):
        col = seq.P.col(j)
        if not any(col):
            continue
        v = primitive_vector(col)
        if v in rays:
            continue
        cols.append(j)
        rays.append(v)
        polys.append(_fiber_polytope(seq, v, sigma))
    return DowngradeResult(seq, sigma, tuple(cols), tuple(rays), tuple(polys))


def column_content(P: Matrix, j: int) -> int:
    g = 0
    for x in P.col(j):
        g = gcd(g, int(x))
    return g


def assemble(r: DowngradeResult, labels: Mapping[int, str], model: YModel) -> PPDivisor:
    """The pp-divisor ``sum Pi_j (x) label(j)``; trivial polytopes are dropped.

    Two rays with the same label add up (Minkowski sum).
    """
    out = PPDivisor.empty(model, r.sigma)
    for j, pi in zip(r.columns, r.polytopes):
        if pi.is_trivial:
            continue
        if j not in labels:
            raise MissingLabel(f"ray from coordinate {j + 1} has polytope {pi} but no label")
        out = add(out, PPDivisor(model, {labels[j]: pi}, r.sigma))
    return out


def from_pm_divisors(d_plus: QDivisor, d_minus: QDivisor, model: YModel) -> PPDivisor:
    """Rank-one pp-divisor with coefficient ``[a_i, b_i]`` from ``D_+`` and ``D_-``.

    ``a_i`` is the coefficient in ``D_+`` and ``b_i`` minus the coefficient in
    ``D_-``, so that evaluating at ``m > 0`` gives ``m D_+`` and at ``m < 0``
    gives ``|m| D_-``.
    """
    terms = {}
    for label in set(d_plus) | set(d_minus):
        model.check_label(label)
        a, b = d_plus.coeff(label), -d_minus.coeff(label)
        if a > b:
            raise EmptyInterval(f"D_+ + D_- is positive on {label}: [{a},{b}] is empty")
        terms[label] = Polyhedron([qvec((a,)), qvec((b,))])
    return PPDivisor(model, terms, Cone.zero(1))


__all__ = ["WeightData", "DowngradeResult", "downgrade", "assemble", "from_pm_divisors",
           "project", "column_content"]
