"""Quotients of pp-divisor presentations by finite abelian groups.

Two kinds of stage are supported and can be chained:

* a finite subgroup of the torus, ``mu_order`` acting on the degree ``u``
  piece by ``zeta^(u.w)``. Invariants live in degrees
  ``M' = {u : u.w == 0 mod order}``, so the divisor is pushed forward along
  the dual ``N -> N'`` of ``M' -> M``. The surface model does not change.
* a group acting effectively on the surface, encoded by a :class:`CoverData`
  ``Y -> Y//G``. The divisor must be invariant and descends by dividing each
  coefficient by the ramification index.

Each stage is realized by a map triple ``(cover, F, 1)`` which the pipeline
checks with :func:`~ppdivisor.ppdiv.is_valid_map`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import convex
from .convex import Polyhedron
from .divisors import CoverData
from .errors import ChainMismatch, MixedRamification, NotDivisible, NotInvariant, RankMismatch
from .exact_linalg import Matrix, hermite_basis, smith_normal_form
from .ppdiv import (PPDivisor, PPMap, Plurifunction, add, compose, is_valid_map, pullback,
                    pushforward, subtract)


def invariant_sublattice(order: int, weight: Sequence[int]) -> Matrix:
    """Rows form a Hermite basis of ``{u in Z^k : u.weight == 0 mod order}``."""
    k = len(weight)
    if order < 1:
        raise ValueError("group order must be positive")
    if k == 0:
        return Matrix([], 0)
    A = Matrix([list(weight) + [order]])
    snf = smith_normal_form(A)
    kernel = [snf.V.col(j)[:k] for j in range(snf.rank, k + 1)]
    basis = hermite_basis(kernel, k)
    assert len(basis) == k
    return Matrix(basis, k)


def transported_weight(basis: Matrix, weight: Sequence[int]) -> Tuple[int, ...]:
    """The same character data written in the coordinates of the sublattice."""
    return tuple(int(x) for x in basis @ tuple(weight))


def torus_subgroup_map(order: int, weight: Sequence[int]) -> Matrix:
    """``F: N -> N'``, dual to the inclusion of invariant degrees."""
    return invariant_sublattice(order, weight)


def quotient_torus_subgroup(D: PPDivisor, order: int, weight: Optional[Sequence[int]] = None) -> PPDivisor:
    """Quotient by ``mu_order`` acting through the torus with ``weight``.

    ``weight`` defaults to ``(1, 0, ..., 0)``; in rank one the result is
    ``D`` with every coefficient scaled by ``order``.
    """
    if weight is None:
        weight = (1,) + (0,) * (D.lattice_rank - 1)
    if len(weight) != D.lattice_rank:
        raise RankMismatch(f"weight of length {len(weight)} on a rank {D.lattice_rank} divisor")
    return pushforward(torus_subgroup_map(order, weight), D)


def descend_fiber(D: PPDivisor, c: CoverData, t: str) -> Optional[Polyhedron]:
    fib = c.fiber(t)
    if not fib:
        return None
    indices = {r for _, r in fib}
    if len(indices) > 1:
        raise MixedRamification(f"fiber over {t} mixes ramification indices {sorted(indices)}")
    polys = {s: D.coefficient(s) for s, _ in fib}
    if len(set(polys.values())) > 1:
        shown = ", ".join(f"{s}: {p}" for s, p in polys.items())
        raise NotInvariant(f"fiber over {t} carries different coefficients ({shown})")
    (r,) = indices
    delta = next(iter(polys.values()))
    return convex.scale(delta, Fraction(1, r))


def quotient_effective(D: PPDivisor, c: CoverData) -> PPDivisor:
    """The divisor ``D'`` on ``c.target`` with ``pullback(c, D') == D``.

    Raises:
        ChainMismatch: ``D`` does not live on the cover's source.
        MixedRamification: a fiber has primes with different indices.
        NotInvariant: primes in one fiber carry different polyhedra.
    """
    if D.model != c.source:
        raise ChainMismatch(f"divisor lives on {D.model.name}, cover starts at {c.source.name}")
    terms = {}
    for t in c.target.primes:
        delta = descend_fiber(D, c, t)
        if delta is not None:
            terms[t] = delta
    out = PPDivisor(c.target, terms, D.tail)
    if pullback(c, out) != D:
        # Over Q the scaled coefficient always pulls back correctly; a failure
        # here means the cover data and the divisor disagree.
        raise NotDivisible(f"descended divisor {out} does not pull back to {D}")
    return out


# ---------------------------------------------------------------------------
# Pipelines


class StageKind(enum.Enum):
    TORUS_SUBGROUP = "torus"
    EFFECTIVE = "effective"


@dataclass(frozen=True)
class QuotientStage:
    """One cyclic quotient step; exactly one payload is set."""

    kind: StageKind
    order: int = 1
    weight: Optional[Tuple[int, ...]] = None
    cover: Optional[CoverData] = None

    def __post_init__(self):
        if self.kind is StageKind.TORUS_SUBGROUP:
            if self.cover is not None or self.order < 1:
                raise ValueError("a torus stage takes a positive order and a weight, no cover")
        elif self.cover is None:
            raise ValueError("an effective stage needs a cover")

    @classmethod
    def torus(cls, order: int, weight: Optional[Sequence[int]] = None) -> "QuotientStage":
        return cls(StageKind.TORUS_SUBGROUP, order, None if weight is None else tuple(weight))

    @classmethod
    def effective(cls, cover: CoverData) -> "QuotientStage":
        return cls(StageKind.EFFECTIVE, cover.group_order, None, cover)

    def describe(self) -> str:
        if self.kind is StageKind.TORUS_SUBGROUP:
            w = "" if self.weight is None else f" weight {list(self.weight)}"
            return f"torus subgroup of order {self.order}{w}"
        return f"effective quotient {self.cover.name or 'cover'} of order {self.order}"


# Alias matching the vocabulary of group actions.
DiagonalGroupAction = QuotientStage


@dataclass
class StageRecord:
    stage: QuotientStage
    source: PPDivisor
    result: PPDivisor
    map: PPMap
    valid: bool


@dataclass
class PipelineReport:
    start: PPDivisor
    records: List[StageRecord] = field(default_factory=list)

    @property
    def result(self) -> PPDivisor:
        return self.records[-1].result if self.records else self.start

    @property
    def all_valid(self) -> bool:
        return all(r.valid for r in self.records)

    @property
    def total_map(self) -> PPMap:
        """Composite triple from the start divisor to the result."""
        m = PPMap.identity(self.start.lattice_rank)
        for r in self.records:
            m = compose(r.map, m)
        return m

    def lines(self) -> List[str]:
        out = [f"start: {self.start}"]
        for i, r in enumerate(self.records, 1):
            ok = "valid" if r.valid else "INVALID"
            out.append(f"stage {i}: {r.stage.describe()} -> {r.result}  map {r.map} [{ok}]")
        return out


def apply_stage(D: PPDivisor, stage: QuotientStage) -> StageRecord:
    if stage.kind is StageKind.TORUS_SUBGROUP:
        weight = stage.weight or (1,) + (0,) * (D.lattice_rank - 1)
        F = torus_subgroup_map(stage.order, weight)
        out = pushforward(F, D)
        m = PPMap(None, F, Plurifunction.trivial(F.nrows))
    else:
        out = quotient_effective(D, stage.cover)
        m = PPMap(stage.cover, Matrix.identity(D.lattice_rank), Plurifunction.trivial(D.lattice_rank))
    return StageRecord(stage, D, out, m, is_valid_map(m, D, out))


def run_pipeline(D: PPDivisor, stages: Sequence[QuotientStage]) -> PipelineReport:
    """Fold the stages over ``D``, recording every intermediate divisor and
    the triple that realizes it. An empty stage list returns ``D``."""
    report = PipelineReport(D)
    current = D
    for stage in stages:
        rec = apply_stage(current, stage)
        report.records.append(rec)
        current = rec.result
    return report


def compare_orders(D: PPDivisor, torus: QuotientStage, effective: QuotientStage
                   ) -> Tuple[PPDivisor, PPDivisor, bool]:
    """Apply a torus stage and an effective stage in both orders.

    Returns both results and whether they agree.
    """
    a = run_pipeline(D, [torus, effective]).result
    b = run_pipeline(D, [effective, torus]).result
    return a, b, a == b


# ---------------------------------------------------------------------------
# Reconstruction from cyclic quotients


def bezout_reconstruct(parts: Sequence[Tuple[int, PPDivisor]]) -> PPDivisor:
    """``sum c_j D_j`` for integers ``c_j``.

    Positive multiples are added with Minkowski sums; negative multiples are
    removed with the Minkowski (Pontryagin) difference, so an interval part
    shrinks instead of growing. Zero coefficients are ignored.
    """
    parts = [(int(c), D) for c, D in parts if c]
    if not parts:
        raise ValueError("nothing to combine")
    first = parts[0][1]
    out = PPDivisor.empty(first.model, first.tail)
    for c, D in parts:
        if c > 0:
            for _ in range(c):
                out = add(out, D)
    for c, D in parts:
        if c < 0:
            for _ in range(-c):
                out = subtract(out, D)
    return out


__all__ = [
    "invariant_sublattice", "transported_weight", "torus_subgroup_map", "quotient_torus_subgroup",
    "quotient_effective", "StageKind", "QuotientStage", "DiagonalGroupAction", "StageRecord",
    "PipelineReport", "run_pipeline", "compare_orders", "bezout_reconstruct",
]
