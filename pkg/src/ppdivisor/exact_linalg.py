"""Exact integer and rational linear algebra.

Matrices hold Python ``int`` or :class:`fractions.Fraction` entries; nothing
here ever touches floating point. The main entry points are
:func:`smith_normal_form` and :func:`cokernel_presentation`, which realize
an injective weight matrix ``F`` as the first map of a short exact sequence
``0 -> Z^k -> Z^m -> Z^(m-k) -> 0`` together with a section ``s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence, Tuple, Union

from .errors import NotInjective, TorsionCokernel, ZeroVector

Scalar = Union[int, Fraction]
Vector = Tuple[Scalar, ...]


def _norm(x: Scalar) -> Scalar:
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    # numpy ints, bools and friends
    return int(x)


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix over Z or Q.

    ``ncols`` is stored explicitly so that matrices with zero rows (such as
    the projection of the identity action) keep their shape.
    """

    rows: Tuple[Tuple[Scalar, ...], ...]
    ncols: int

    def __init__(self, rows: Iterable[Iterable[Scalar]], ncols: Optional[int] = None):
        rows = tuple(tuple(_norm(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def column(cls, entries: Sequence[Scalar]) -> "Matrix":
        return cls([[x] for x in entries], 1)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def entries(self) -> Tuple[Scalar, ...]:
        """Row-major entries."""
        return tuple(x for r in self.rows for x in r)

    @property
    def T(self) -> "Matrix":
        return Matrix([[self.rows[i][j] for i in range(self.nrows)]
                       for j in range(self.ncols)], self.nrows)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for x in self.entries)

    def __getitem__(self, ij: Tuple[int, int]) -> Scalar:
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> Vector:
        return self.rows[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = [other.col(j) for j in range(other.ncols)]
            return Matrix([[sum(a * b for a, b in zip(r, c)) for c in cols]
                           for r in self.rows], other.ncols)
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(v)}")
        return tuple(_norm(sum(a * b for a, b in zip(r, v))) for r in self.rows)

    def __neg__(self) -> "Matrix":
        return Matrix([[-x for x in r] for r in self.rows], self.ncols)

    def submatrix(self, row_idx: Sequence[int], col_idx: Optional[Sequence[int]] = None) -> "Matrix":
        if col_idx is None:
            col_idx = range(self.ncols)
        col_idx = list(col_idx)
        return Matrix([[self.rows[i][j] for j in col_idx] for i in row_idx], len(col_idx))

    def det(self) -> Scalar:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        a = [[Fraction(x) for x in r] for r in self.rows]
        n = len(a)
        det = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if a[i][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                det = -det
            det *= a[c][c]
            for i in range(c + 1, n):
                f = a[i][c] / a[c][c]
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return _norm(det)

    def rank(self) -> int:
        return len(rref(self.rows, self.ncols)[1])

    def inverse(self) -> "Matrix":
        """Inverse over Q."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(self.rows)]
        red, piv = rref(aug, 2 * n)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return Matrix([r[n:] for r in red[:n]], n)

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in r) for r in self.rows) + "]"


IntMatrix = Matrix


def rref(rows: Sequence[Sequence[Scalar]], ncols: int):
    """Reduced row echelon form over Q.

    Returns ``(rows, pivot_columns)`` with zero rows dropped.
    """
    a = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return [tuple(_norm(x) for x in row) for row in a[:r]], pivots


def nullspace(rows: Sequence[Sequence[Scalar]], ncols: int) -> list:
    """Basis of ``{x : A x = 0}`` over Q, as primitive integer vectors.

    The basis is read off the reduced row echelon form, one vector per free
    column, so it is a deterministic function of the row space of ``A``.
    """
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(red, pivots):
            v[p] = -Fraction(r[f])
        basis.append(primitive_vector(v))
    return basis


def primitive_vector(v: Sequence[Scalar]) -> Tuple[int, ...]:
    """Return the first lattice point on the ray spanned by ``v``.

    >>> primitive_vector((-4, 6))
    (-2, 3)
    """
    v = [Fraction(x) for x in v]
    if all(x == 0 for x in v):
        raise ZeroVector("the zero vector spans no ray")
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNFResult:
    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> Tuple[int, ...]:
        n = min(self.D.shape)
        return tuple(self.D[i, i] for i in range(n))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _pick_pivot(D, t):
    best = None
    for j in range(t, len(D[0]) if D else 0):
        for i in range(t, len(D)):
            x = D[i][j]
            if x != 0 and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
    return best


def smith_normal_form(A: Matrix) -> SNFResult:
    """Smith normal form ``U @ A @ V == D`` with unimodular ``U`` and ``V``.

    Pivots are chosen as the smallest nonzero absolute value in the remaining
    block, ties broken leftmost column first and then topmost row, so the
    transforms are a deterministic function of ``A``. Diagonal entries are
    non-negative and form a divisibility chain.
    """
    if not A.is_integral:
        raise ValueError("Smith normal form needs an integer matrix")
    r, c = A.shape
    D = [list(row) for row in A.rows]
    U = [[int(i == j) for j in range(r)] for i in range(r)]
    V = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        D[dst] = [a - q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in D:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(r, c)):
        while True:
            best = _pick_pivot(D, t)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = D[t][t]
            clean = True
            for i in range(t + 1, r):
                if D[i][t]:
                    add_row(i, t, D[i][t] // p)
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, c):
                if D[t][j]:
                    add_col(j, t, D[t][j] // p)
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, r)
                        if any(D[i][j] % p for j in range(t + 1, c))), None)
            if bad is None:
                break
            add_row(t, bad, -1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]

    res = SNFResult(Matrix(U, r), Matrix(D, c), Matrix(V, c))
    assert res.U @ A @ res.V == res.D
    return res


def solve_integer(A: Matrix, b: Sequence[Scalar]) -> Optional[Tuple[int, ...]]:
    """An integer solution of ``A x == b``, or ``None`` if there is none."""
    b = [Fraction(x) for x in b]
    if any(x.denominator != 1 for x in b):
        return None
    b = [int(x) for x in b]
    if A.ncols == 0:
        return () if all(x == 0 for x in b) else None
    snf = smith_normal_form(A)
    ub = snf.U @ b
    y = [0] * A.ncols
    for i in range(A.nrows):
        d = snf.D[i, i] if i < A.ncols else 0
        if d == 0:
            if ub[i] != 0:
                return None
        elif ub[i] % d:
            return None
        else:
            y[i] = ub[i] // d
    x = snf.V @ y
    assert A @ x == tuple(b)
    return tuple(int(v) for v in x)


def hermite_basis(vectors: Sequence[Sequence[int]], ncols: int) -> list:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Rows are upper triangular with positive pivots and the entries above each
    pivot reduced into ``[0, pivot)``; zero rows are dropped.
    """
    a = [list(v) for v in vectors]
    m = len(a)
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, m) if a[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(a[i][c]), i))
            a[r], a[piv] = a[piv], a[r]
            done = True
            for i in range(r + 1, m):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    done = done and a[i][c] == 0
            if done:
                break
        if r < m and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
    return [tuple(row) for row in a[:r]]


# ---------------------------------------------------------------------------
# Exact sequences


@dataclass(frozen=True)
class ExactSequence:
    """``0 -> Z^k --F--> Z^m --P--> Z^(m-k) -> 0`` with a rational section ``s``."""

    F: Matrix
    P: Matrix
    s: Matrix

    @property
    def k(self) -> int:
        return self.F.ncols

    @property
    def m(self) -> int:
        return self.F.nrows

    def check(self) -> None:
        k, m = self.k, self.m
        assert self.P.shape == (m - k, m)
        assert self.s.shape == (k, m)
        assert self.P @ self.F == Matrix.zeros(m - k, k)
        assert self.s @ self.F == Matrix.identity(k)


def normalized_section(F: Matrix, fallback: Matrix) -> Matrix:
    """Pick the section of ``F`` used by :func:`cokernel_presentation`.

    If some ``k`` rows of ``F`` form a unimodular block ``F_J`` the section is
    ``F_J^{-1}`` on the coordinates ``J`` and zero elsewhere; the latest such
    block (lexicographically largest ``J``) wins. For a single weight vector
    this selects the last coordinate of weight +-1. Otherwise ``fallback``
    (the integral section read off the Smith form) is returned.
    """
    m, k = F.shape
    for J in reversed(list(combinations(range(m), k))):
        block = F.submatrix(J)
        if abs(block.det()) == 1:
            inv = block.inverse()
            rows = [[0] * m for _ in range(k)]
            for a, j in enumerate(J):
                for i in range(k):
                    rows[i][j] = inv[i, a]
            return Matrix(rows, m)
    return fallback


def cokernel_presentation(F: Matrix, section: Optional[Matrix] = None) -> ExactSequence:
    """Complete an injective ``m x k`` weight matrix to an exact sequence.

    ``P`` is the last ``m - k`` rows of the left Smith transform of ``F``;
    the section is :func:`normalized_section` unless ``section`` is given,
    in which case it is only validated.

    Raises:
        NotInjective: ``F`` has rank below ``k``.
        TorsionCokernel: the image of ``F`` is not saturated in ``Z^m``.
    """
    if not F.is_integral:
        raise ValueError("weight matrix must be integral")
    m, k = F.shape
    snf = smith_normal_form(F)
    if snf.rank < k:
        raise NotInjective(f"weight matrix has rank {snf.rank} < {k}")
    if any(d != 1 for d in snf.diagonal):
        raise TorsionCokernel(
            f"invariant factors {snf.diagonal}: image of F is not saturated")
    U, V = snf.U, snf.V
    P = Matrix(U.rows[k:], m)
    snf_section = V @ Matrix(U.rows[:k], m)
    if section is None:
        s = normalized_section(F, snf_section)
    else:
        s = section
        if s.shape != (k, m) or s @ F != Matrix.identity(k):
            raise ValueError("supplied section does not satisfy s @ F == id")
    seq = ExactSequence(F, P, s)
    seq.check()
    return seq
