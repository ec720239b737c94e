"""Polyhedral divisors and the maps between them.

A :class:`PPDivisor` is a formal sum ``sum Delta_i (x) D_i`` of tailed
polyhedra against prime labels of a :class:`~ppdivisor.divisors.YModel`.
The calculus implemented here is the one needed to compare presentations:
evaluation at a weight, push-forward along a lattice map, pull-back along a
cover, Minkowski addition, translation by the divisor of a plurifunction,
linear equivalence, and the morphism triples ``(cover, F, f)`` with their
comparison inequality and composition law.

The partial order on polyhedral divisors is ``D <= D''`` iff
``D(u) <= D''(u)`` for every weight ``u`` in the dual of the tail. By convex
duality this is termwise *reverse* containment of coefficients,
``Delta''_i ⊆ Delta_i``, and that is how it is checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import convex
from .convex import Cone, Polyhedron, dual_cone, support_min
from .divisors import (CoverData, QDivisor, YModel, add_combos, format_combo,
                       function_combination_divisor)
from .errors import (ChainMismatch, EmptyFiber, OutsideWeightCone, RankMismatch,
                     TailMismatch)
from .exact_linalg import Matrix, solve_integer


class PPDivisor:
    """A tailed polyhedral divisor on a surface model.

    Coefficients equal to the trivial polyhedron ``{0} + tail`` are dropped.
    Pass ``validate=False`` to build a structurally broken divisor (for
    instance one whose coefficients disagree on the tail) so that
    :func:`validity_report` can describe what is wrong with it.
    """

    __slots__ = ("model", "lattice_rank", "tail", "terms")

    def __init__(self, model: YModel, terms: Mapping[str, Polyhedron],
                 tail: Optional[Cone] = None, lattice_rank: Optional[int] = None,
                 validate: bool = True):
        terms = dict(terms)
        if tail is None:
            if terms:
                tail = next(iter(terms.values())).tail
            elif lattice_rank is not None:
                tail = Cone.zero(lattice_rank)
            else:
                raise ValueError("need a tail cone or a lattice rank for an empty divisor")
        if lattice_rank is None:
            lattice_rank = tail.ambient_rank
        if validate:
            if tail.ambient_rank != lattice_rank:
                raise RankMismatch("tail cone rank differs from lattice rank")
            if not tail.is_pointed:
                raise convex.NotPointed("tail cone must be pointed")
            for label, delta in terms.items():
                model.check_label(label)
                if delta.ambient_rank != lattice_rank:
                    raise RankMismatch(f"coefficient of {label} has rank {delta.ambient_rank}")
                if delta.tail != tail:
                    raise TailMismatch(f"coefficient of {label} has tail {delta.tail}, expected {tail}")
            terms = {k: v for k, v in terms.items() if not v.is_trivial}
        self.model = model
        self.lattice_rank = lattice_rank
        self.tail = tail
        self.terms = terms

    @classmethod
    def empty(cls, model: YModel, tail: Cone) -> "PPDivisor":
        return cls(model, {}, tail)

    def coefficient(self, label: str) -> Polyhedron:
        self.model.check_label(label)
        return self.terms.get(label) or Polyhedron.trivial(self.tail)

    @property
    def support(self) -> Tuple[str, ...]:
        return tuple(p for p in self.model.primes if p in self.terms)

    def scaled(self, r) -> "PPDivisor":
        """``r * D`` for a positive rational ``r`` (coefficientwise scaling)."""
        return PPDivisor(self.model, {k: convex.scale(v, r) for k, v in self.terms.items()}, self.tail)

    def with_model(self, model: YModel, relabel: Optional[Mapping[str, str]] = None) -> "PPDivisor":
        relabel = relabel or {}
        return PPDivisor(model, {relabel.get(k, k): v for k, v in self.terms.items()}, self.tail)

    def __eq__(self, other):
        return (isinstance(other, PPDivisor) and self.model == other.model
                and self.lattice_rank == other.lattice_rank and self.tail == other.tail
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.model.name, self.tail, frozenset(self.terms.items())))

    def __str__(self):
        return format_ppdivisor(self)

    def __repr__(self):
        return f"PPDivisor[{self.model.name}]({format_ppdivisor(self)})"


def format_ppdivisor(D: PPDivisor) -> str:
    """Bracket notation, e.g. ``{1/2}D3 + {-1/3}D2 + [0,1/6]E``.

    Terms follow the model's prime order; the empty divisor prints as ``0``.
    """
    keys = [p for p in D.model.primes if p in D.terms] + sorted(set(D.terms) - set(D.model.primes))
    if not keys:
        return "0"
    return " + ".join(f"{convex.format_polyhedron(D.terms[k])}{k}" for k in keys)


def _same_frame(D1: PPDivisor, D2: PPDivisor) -> None:
    if D1.model != D2.model:
        raise ChainMismatch(f"models {D1.model.name} and {D2.model.name} differ")
    if D1.tail != D2.tail:
        raise TailMismatch(f"tails {D1.tail} and {D2.tail} differ")


# ---------------------------------------------------------------------------
# Plurifunctions


@dataclass(frozen=True)
class Plurifunction:
    """An element of ``N ⊗ C(Y)*``: one formal product of known functions per
    basis direction of the lattice ``N``."""

    components: Tuple[Dict[str, int], ...]

    def __init__(self, components: Sequence[Mapping[str, int]]):
        object.__setattr__(self, "components", tuple(add_combos(c) for c in components))

    def __hash__(self):
        return hash(tuple(tuple(c.items()) for c in self.components))

    @classmethod
    def trivial(cls, rank: int) -> "Plurifunction":
        return cls([{}] * rank)

    @property
    def rank(self) -> int:
        return len(self.components)

    @property
    def is_trivial(self) -> bool:
        return all(not c for c in self.components)

    def divisors(self, model: YModel) -> List[QDivisor]:
        return [function_combination_divisor(model, c) for c in self.components]

    def translation(self, model: YModel, label: str) -> Tuple[Fraction, ...]:
        """``(ord_label f_j)_j``, the shift applied to the coefficient of ``label``."""
        return tuple(d.coeff(label) for d in self.divisors(model))

    def pushed(self, F: Matrix) -> "Plurifunction":
        """``F_*(f)``: component ``l`` is ``prod_j f_j^(F[l, j])``."""
        if F.ncols != self.rank:
            raise ChainMismatch("plurifunction rank does not match the lattice map")
        return Plurifunction([
            add_combos(*({k: v * F[l, j] for k, v in self.components[j].items()}
                         for j in range(self.rank)))
            for l in range(F.nrows)])

    def __mul__(self, other: "Plurifunction") -> "Plurifunction":
        if other.rank != self.rank:
            raise ChainMismatch("plurifunctions of different rank")
        return Plurifunction([add_combos(a, b) for a, b in zip(self.components, other.components)])

    def __str__(self):
        parts = [format_combo(c) for c in self.components]
        return parts[0] if len(parts) == 1 else "(" + ", ".join(parts) + ")"


# ---------------------------------------------------------------------------
# Evaluation, push-forward, pull-back


def in_weight_cone(D: PPDivisor, u: Sequence) -> bool:
    return all(convex.dot(u, g) >= 0 for g in D.tail.generators)


def evaluate(D: PPDivisor, u: Sequence) -> QDivisor:
    """The Q-divisor ``D(u) = sum_i min_{v in Delta_i} <u, v> D_i``."""
    u = tuple(u)
    if len(u) != D.lattice_rank:
        raise RankMismatch(f"weight of rank {len(u)} for a rank {D.lattice_rank} divisor")
    if not in_weight_cone(D, u):
        shown = ", ".join(str(x) for x in u)
        gens = ", ".join(str(g) for g in dual_cone(D.tail).generators)
        raise OutsideWeightCone(f"({shown}) is not in the weight cone spanned by {gens}")
    return QDivisor({k: support_min(v, u) for k, v in D.terms.items()})


def pushforward(F: Matrix, D: PPDivisor, target_tail: Optional[Cone] = None) -> PPDivisor:
    """``F_*(D) = sum (F(Delta_i) + target_tail) (x) D_i``.

    ``target_tail`` defaults to the image of the tail.
    """
    if F.ncols != D.lattice_rank:
        raise RankMismatch(f"lattice map of shape {F.shape} on a rank {D.lattice_rank} divisor")
    if target_tail is None:
        target_tail = D.tail.image(F)
    return PPDivisor(D.model, {k: convex.linear_image(v, F, target_tail) for k, v in D.terms.items()},
                     target_tail)


def pullback(c: CoverData, D: PPDivisor) -> PPDivisor:
    """Polyhedral pull-back along a cover.

    The coefficient of a source prime ``s`` is the Minkowski sum, over the
    target primes ``t`` it lies over, of ``r(s, t) * Delta'_t``; with the
    shipped covers each source prime lies over exactly one target prime.
    """
    if D.model != c.target:
        raise ChainMismatch(f"divisor lives on {D.model.name}, cover targets {c.target.name}")
    out: Dict[str, Polyhedron] = {}
    for t, delta in D.terms.items():
        fib = c.fiber(t)
        if not fib:
            raise EmptyFiber(f"{t} carries {delta} but has no preimage")
        for s, r in fib:
            piece = convex.scale(delta, r)
            out[s] = convex.minkowski_sum(out[s], piece) if s in out else piece
    return PPDivisor(c.source, out, D.tail)


def add(D1: PPDivisor, D2: PPDivisor) -> PPDivisor:
    """Termwise Minkowski sum; absent terms count as trivial."""
    _same_frame(D1, D2)
    out = dict(D1.terms)
    for k, v in D2.terms.items():
        out[k] = convex.minkowski_sum(out[k], v) if k in out else v
    return PPDivisor(D1.model, out, D1.tail)


def subtract(D1: PPDivisor, D2: PPDivisor) -> PPDivisor:
    """Termwise Minkowski (Pontryagin) difference, the largest ``X`` with
    ``D2 + X`` below ``D1`` coefficientwise by containment."""
    _same_frame(D1, D2)
    trivial = Polyhedron.trivial(D1.tail)
    keys = set(D1.terms) | set(D2.terms)
    return PPDivisor(D1.model, {k: convex.minkowski_difference(D1.terms.get(k, trivial),
                                                               D2.terms.get(k, trivial))
                                for k in keys}, D1.tail)


def translate_by_div(D: PPDivisor, f: Plurifunction) -> PPDivisor:
    """``D + div(f)``: each coefficient moves by ``(ord_{D_i} f_j)_j``."""
    if f.rank != D.lattice_rank:
        raise RankMismatch(f"plurifunction of rank {f.rank} on a rank {D.lattice_rank} divisor")
    divs = f.divisors(D.model)
    labels = set(D.terms).union(*(set(d) for d in divs))
    out = {}
    for k in labels:
        shift = tuple(d.coeff(k) for d in divs)
        out[k] = convex.translate(D.coefficient(k), shift)
    return PPDivisor(D.model, out, D.tail)


# ---------------------------------------------------------------------------
# Linear equivalence


def linear_equivalence_shift(D1: PPDivisor, D2: PPDivisor) -> Optional[List[QDivisor]]:
    """Per-direction divisors ``T_j`` with ``D2 == D1 + sum_j e_j (x) T_j``.

    ``None`` when some coefficient of ``D2`` is not a translate of the
    corresponding coefficient of ``D1``.
    """
    _same_frame(D1, D2)
    k = D1.lattice_rank
    shifts: List[Dict[str, Fraction]] = [{} for _ in range(k)]
    for label in set(D1.terms) | set(D2.terms):
        a, b = D1.coefficient(label), D2.coefficient(label)
        if len(a.vertices) != len(b.vertices):
            return None
        t = tuple(Fraction(y) - Fraction(x) for x, y in zip(a.vertices[0], b.vertices[0]))
        if convex.translate(a, t) != b:
            return None
        for j in range(k):
            shifts[j][label] = t[j]
    return [QDivisor(s) for s in shifts]


def solve_witness(model: YModel, target: QDivisor) -> Optional[Dict[str, int]]:
    """Integer combination of known functions whose divisor is ``target``."""
    if not target:
        return {}
    names = list(model.known_functions)
    if not names:
        return None
    labels = list(model.primes)
    A = Matrix([[model.known_functions[n].coeff(p) for n in names] for p in labels], len(names))
    sol = solve_integer(A, [target.coeff(p) for p in labels])
    if sol is None:
        return None
    return add_combos({n: c for n, c in zip(names, sol)})


def linearly_equivalent(D1: PPDivisor, D2: PPDivisor) -> Tuple[bool, Optional[Plurifunction]]:
    """Decide ``D2 == D1 + div(f)`` for some plurifunction ``f``.

    Returns ``(equivalent, witness)``. The witness is built from the model's
    known functions and may be ``None`` even when the answer is True (the
    principality test passes but no registered function realizes it).
    Structural mismatches (different model or tail) give ``(False, None)``.
    """
    try:
        shifts = linear_equivalence_shift(D1, D2)
    except (ChainMismatch, TailMismatch):
        return False, None
    if shifts is None:
        return False, None
    for T in shifts:
        if not T.is_integral or not D1.model.is_principal(T):
            return False, None
    combos = [solve_witness(D1.model, T) for T in shifts]
    if any(c is None for c in combos):
        return True, None
    return True, Plurifunction(combos)


# ---------------------------------------------------------------------------
# Morphism triples


@dataclass(frozen=True)
class PPMap:
    """A triple ``(cover, F, f)``; ``cover=None`` stands for the identity of Y."""

    cover: Optional[CoverData]
    F: Matrix
    f: Plurifunction

    def __post_init__(self):
        if self.f.rank != self.F.nrows:
            raise ChainMismatch("plurifunction must live in the target lattice")

    @classmethod
    def identity(cls, rank: int) -> "PPMap":
        return cls(None, Matrix.identity(rank), Plurifunction.trivial(rank))

    @property
    def source_rank(self) -> int:
        return self.F.ncols

    @property
    def target_rank(self) -> int:
        return self.F.nrows

    def __str__(self):
        cover = "id" if self.cover is None else (self.cover.name or "cover")
        f = "1" if self.f.is_trivial else str(self.f)
        return f"({cover}, {self.F}, {f})"


def _check_chain(m: PPMap, D: PPDivisor, Dp: PPDivisor) -> None:
    if m.cover is None:
        if D.model != Dp.model:
            raise ChainMismatch("identity cover between different models")
    elif m.cover.source != D.model or m.cover.target != Dp.model:
        raise ChainMismatch("cover does not join the divisors' models")
    if m.F.shape != (Dp.lattice_rank, D.lattice_rank):
        raise ChainMismatch(f"lattice map of shape {m.F.shape} between ranks "
                            f"{D.lattice_rank} and {Dp.lattice_rank}")


def is_valid_map(m: PPMap, D: PPDivisor, Dp: PPDivisor) -> bool:
    """Check ``cover^*(Dp) <= F_*(D) + div(f)`` (and ``F(tail) ⊆ tail'``)."""
    _check_chain(m, D, Dp)
    if not Dp.tail.contains_cone(D.tail.image(m.F)):
        return False
    lhs = Dp if m.cover is None else pullback(m.cover, Dp)
    rhs = translate_by_div(pushforward(m.F, D, Dp.tail), m.f)
    for label in set(lhs.terms) | set(rhs.terms):
        if not convex.contains(lhs.coefficient(label), rhs.coefficient(label)):
            return False
    return True


def compose(m2: PPMap, m1: PPMap) -> PPMap:
    """``m2 ∘ m1 = (cover2 ∘ cover1, F2 F1, F2_*(f1) · cover1^*(f2))``."""
    if m2.F.ncols != m1.F.nrows:
        raise ChainMismatch(f"cannot compose F of shapes {m2.F.shape} and {m1.F.shape}")
    c1, c2 = m1.cover, m2.cover
    if c1 is None:
        cover = c2
        pulled = m2.f
    else:
        if c2 is not None and c1.target != c2.source:
            raise ChainMismatch("covers do not chain")
        cover = c1 if c2 is None else c1.then(c2)
        pulled = Plurifunction([c1.pull_function(c) for c in m2.f.components])
    f = m1.f.pushed(m2.F) * pulled
    return PPMap(cover, m2.F @ m1.F, f)


# ---------------------------------------------------------------------------
# Properness bookkeeping


@dataclass
class ValidityReport:
    """Mechanical part of the pp-divisor conditions.

    ``semiample`` and ``big`` are ``None`` (unknown) unless the model makes
    them automatic.
    """

    pointed: bool
    shared_tail: bool
    labels_known: bool
    effective_primes: bool
    q_cartier: Optional[bool]
    semiample: Optional[bool]
    big: Optional[bool]
    notes: List[str] = field(default_factory=list)

    @property
    def structural_ok(self) -> bool:
        return self.pointed and self.shared_tail and self.labels_known

    def as_dict(self) -> dict:
        def flag(v):
            return "UNKNOWN" if v is None else v

        return {"pointed": self.pointed, "shared_tail": self.shared_tail,
                "labels_known": self.labels_known, "effective": self.effective_primes,
                "q_cartier": flag(self.q_cartier), "semiample": flag(self.semiample),
                "big": flag(self.big), "notes": list(self.notes)}


def validity_report(D: PPDivisor) -> ValidityReport:
    from .divisors import ModelKind

    notes = []
    pointed = D.tail.is_pointed
    if not pointed:
        notes.append("tail cone contains a line")
    shared = all(v.tail == D.tail for v in D.terms.values())
    if not shared:
        bad = sorted(k for k, v in D.terms.items() if v.tail != D.tail)
        notes.append(f"coefficients of {', '.join(bad)} do not have the divisor's tail cone")
    labels_known = all(k in D.model.primes for k in D.terms)
    if not labels_known:
        notes.append("some coefficients sit on labels outside the model")
    kind = D.model.kind
    if kind is ModelKind.AFFINE_PLANE:
        semiample = big = q_cartier = True
        notes.append("affine plane: trivial class group, every D(u) is principal, "
                     "hence Q-Cartier, semi-ample and big")
    else:
        q_cartier = True
        semiample = big = None
        notes.append("semi-ampleness and bigness are NOT CHECKED on this model")
        if kind is ModelKind.QUOT_BLOWUP:
            notes.append("Q-Cartier because the surface has at most cyclic quotient singularities")
    return ValidityReport(pointed, shared, labels_known, True, q_cartier, semiample, big, notes)
