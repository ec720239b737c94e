"""Worked examples: the Russell cubic and the two Koras-Russell families.

Every family member is built the same way. The hypersurface ``x + x^d y +
z^p + t^q`` is a cyclic cover of a building block ``X_p`` (weights
``(p, p, -p, 1)``), whose downgrade is ``{1/p}D + [0,1/p]E`` on the blow-up of
the plane. Two building blocks, for ``p = alpha2`` and ``p = alpha3``, are
combined along a Bezout relation ``a*alpha3 + b*alpha2 == 1`` into the
presentation upstairs; effective cyclic quotients of the surface then give
the presentations of the threefolds.

Model conventions (all curves below pass once through the blown-up origin):

* ``{u = 0}`` and ``{u + v + v^d = 0}`` for the first kind and the cubic,
  ``{u = 0}`` and ``{v + (v^d + u^d)^l = 0}`` for the second kind;
* quotient surfaces carry fixture-supplied principality weights, derived
  by pulling the known invariant functions back to the cover.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Tuple

from .convex import Polyhedron
from .divisors import CoverData, ModelKind, YModel
from .downgrade import DowngradeResult, WeightData, assemble, downgrade
from .errors import InvalidParameters, NoBezoutWithDivisibility
from .exact_linalg import Matrix
from .ppdiv import PPDivisor, PPMap, Plurifunction, add, is_valid_map, linearly_equivalent, pullback
from .quotients import (PipelineReport, QuotientStage, bezout_reconstruct, quotient_torus_subgroup,
                        run_pipeline)

BEZOUT_WINDOW = 200


def bezout_pair(alpha3: int, alpha2: int, divisible_by: int = 1, window: int = BEZOUT_WINDOW
                ) -> Tuple[int, int]:
    """``(a, b)`` with ``a*alpha3 + b*alpha2 == 1`` and ``divisible_by | a``.

    Picks the smallest ``|a|``, then the smallest ``|b|``, then positive
    ``a``. Only ``|a| <= window`` is searched.
    """
    best = None
    for a in range(-window, window + 1):
        if a % divisible_by:
            continue
        rest = 1 - a * alpha3
        if rest % alpha2:
            continue
        b = rest // alpha2
        key = (abs(a), abs(b), -a)
        if best is None or key < best[0]:
            best = (key, (a, b))
    if best is None:
        raise NoBezoutWithDivisibility(
            f"no a with {divisible_by} | a and a*{alpha3} + b*{alpha2} == 1 for |a| <= {window}")
    return best[1]


def bezout_pairs(alpha3: int, alpha2: int, bound: int) -> List[Tuple[int, int]]:
    """All ``(a, b)`` with ``a*alpha3 + b*alpha2 == 1`` and ``|a|, |b| <= bound``."""
    out = []
    for a in range(-bound, bound + 1):
        rest = 1 - a * alpha3
        if rest % alpha2 == 0 and abs(rest // alpha2) <= bound:
            out.append((a, rest // alpha2))
    return out


# ---------------------------------------------------------------------------
# Surface models


def blowup_model(name: str, label_u: str, label_other: str, other_fn: str, exceptional: str = "E",
                 extra: Tuple[str, ...] = (), u_first: bool = False) -> YModel:
    """Blow-up of the plane at the origin with the strict transforms of
    ``{u = 0}`` (``label_u``) and of a second smooth curve through the origin
    (``label_other``, cut out by ``other_fn``)."""
    pair = (label_u, label_other) if u_first else (label_other, label_u)
    primes = pair + (exceptional,) + extra
    weights = {label_other: 1, label_u: 1}
    fns = {"u": {label_u: 1, exceptional: 1}, other_fn: {label_other: 1, exceptional: 1}}
    if "Dv" in extra:
        weights["Dv"] = 1
        fns["v"] = {"Dv": 1, exceptional: 1}
    return YModel(name, ModelKind.BLOWUP_A2, primes, weights, exceptional, fns)


def russell_model() -> YModel:
    """The blown-up plane for the cubic, with labels ``D3``, ``D2``, ``E``.

    ``Dv`` (strict transform of ``{v = 0}``) is where the ray of the ``x``
    coordinate lands; its polytope is trivial so it never shows up in a
    divisor.
    """
    return blowup_model("A2tilde", "D2", "D3", "u+v+v^2", extra=("Dv",))


def block_model() -> YModel:
    """Blown-up plane with a single curve ``D`` through the origin."""
    return YModel("A2tilde_block", ModelKind.BLOWUP_A2, ("D", "E"), {"D": 1}, "E",
                  {"u": {"D": 1, "E": 1}})


BLOCK_E_COLUMN = 2   # coordinate of weight -p
BLOCK_D_COLUMN = 3   # coordinate of weight 1


def block_weights(p: int) -> WeightData:
    return WeightData.single([p, p, -p, 1])


def building_block(p: int, label: str, model: YModel, exceptional: str = "E") -> PPDivisor:
    """``{1/p} label + [0,1/p] E`` read off the downgrade of ``(p, p, -p, 1)``."""
    r = downgrade(block_weights(p))
    return assemble(r, {BLOCK_E_COLUMN: exceptional, BLOCK_D_COLUMN: label}, model)


def point(q) -> Polyhedron:
    return Polyhedron.point([Fraction(q)])


def interval(a, b) -> Polyhedron:
    return Polyhedron.interval(Fraction(a), Fraction(b))


def bezout_divisor(model: YModel, a: int, b: int, alpha2: int, alpha3: int,
                   label_a: str, label_b: str, exceptional: str = "E") -> PPDivisor:
    """Closed form ``{a/alpha2} label_a + {b/alpha3} label_b + [0, 1/(alpha2 alpha3)] E``."""
    return PPDivisor(model, {label_a: point(Fraction(a, alpha2)), label_b: point(Fraction(b, alpha3)),
                             exceptional: interval(0, Fraction(1, alpha2 * alpha3))})


@dataclass
class Reconstruction:
    """A presentation rebuilt from two building blocks and checked against
    the two cyclic torus quotients it must cover."""

    divisor: PPDivisor
    block_a: PPDivisor          # p = alpha2, on the label carrying a/alpha2
    block_b: PPDivisor          # p = alpha3, on the label carrying b/alpha3
    checks: Dict[str, bool] = field(default_factory=dict)
    witnesses: Dict[str, Optional[Plurifunction]] = field(default_factory=dict)


def reconstruct(model: YModel, alpha2: int, alpha3: int, a: int, b: int,
                label_a: str, label_b: str) -> Reconstruction:
    block_a = building_block(alpha2, label_a, model)
    block_b = building_block(alpha3, label_b, model)
    D = bezout_reconstruct([(a, block_a), (b, block_b)])
    rec = Reconstruction(D, block_a, block_b)
    for order, block, key in ((alpha2, block_b, f"{alpha2}D ~ block({alpha3})"),
                              (alpha3, block_a, f"{alpha3}D ~ block({alpha2})")):
        ok, w = linearly_equivalent(quotient_torus_subgroup(D, order), block)
        rec.checks[key] = ok and w is not None
        rec.witnesses[key] = w
        if w is not None:
            rec.checks[key + " map"] = is_valid_map(PPMap(None, Matrix([[order]]), w), D, block)
    return rec


# ---------------------------------------------------------------------------
# Russell cubic


RUSSELL_WEIGHTS = (6, -6, 3, 2)
RUSSELL_LABELS = {0: "Dv", 1: "E", 2: "D3", 3: "D2"}


@dataclass
class RussellFixture:
    model: YModel
    expected: PPDivisor
    pipeline: PPDivisor
    reconstruction: Reconstruction
    direct: DowngradeResult
    direct_divisor: PPDivisor
    D_2: PPDivisor
    D_3: PPDivisor

    @property
    def checks(self) -> Dict[str, bool]:
        out = {"pipeline == expected": self.pipeline == self.expected,
               "direct downgrade == expected": self.direct_divisor == self.expected,
               "D_2 + D == D_3": add(self.D_2, self.expected) == self.D_3}
        out.update(self.reconstruction.checks)
        return out


def russell_expected(model: Optional[YModel] = None, a: int = 1, b: int = -1) -> PPDivisor:
    """``{a/2}D3 + {b/3}D2 + [0,1/6]E``."""
    return bezout_divisor(model or russell_model(), a, b, 2, 3, "D3", "D2")


def russell_cubic() -> RussellFixture:
    model = russell_model()
    a, b = bezout_pair(3, 2)
    rec = reconstruct(model, 2, 3, a, b, "D3", "D2")
    direct = downgrade(WeightData.single(RUSSELL_WEIGHTS, RUSSELL_LABELS))
    return RussellFixture(model, russell_expected(model, a, b), rec.divisor, rec, direct,
                          assemble(direct, RUSSELL_LABELS, model), rec.block_b, rec.block_a)


# ---------------------------------------------------------------------------
# First kind


@dataclass(frozen=True)
class KRFirstKind:
    """``x + x^d y + z^alpha2 + t^alpha3 = 0``."""

    d: int
    alpha2: int
    alpha3: int

    def __post_init__(self):
        if self.d < 2 or self.alpha2 < 2 or self.alpha3 <= self.alpha2:
            raise InvalidParameters(f"need d >= 2 and 2 <= alpha2 < alpha3, got {self}")
        if gcd(self.alpha2, self.alpha3) != 1:
            raise InvalidParameters(f"alpha2 = {self.alpha2} and alpha3 = {self.alpha3} are not coprime")

    @property
    def bezout(self) -> Tuple[int, int]:
        return bezout_pair(self.alpha3, self.alpha2)

    @property
    def weights(self) -> Tuple[int, int, int, int]:
        a2, a3 = self.alpha2, self.alpha3
        return (a2 * a3, -(self.d - 1) * a2 * a3, a3, a2)


def first_kind_models(d: int) -> Tuple[YModel, YModel, CoverData]:
    fn = f"u+v+v^{d}"
    up = blowup_model(f"A2tilde_d{d}", "D_alpha2", "D_alpha3", fn)
    w = Fraction(1, d - 1)
    down = YModel(f"A2tilde_d{d}/mu{d - 1}", ModelKind.QUOT_BLOWUP, ("D'_alpha3", "D'_alpha2", "E'"),
                  {"D'_alpha3": w, "D'_alpha2": w}, "E'",
                  {f"u/({fn})": {"D'_alpha2": 1, "D'_alpha3": -1},
                   f"u^{d - 1}": {"D'_alpha2": d - 1, "E'": 1}})
    cover = CoverData(up, down, {"D'_alpha3": (("D_alpha3", 1),), "D'_alpha2": (("D_alpha2", 1),),
                                 "E'": (("E", d - 1),)}, d - 1,
                      {f"u/({fn})": {"u": 1, fn: -1}, f"u^{d - 1}": {"u": d - 1}},
                      name=f"first_d{d}_mu{d - 1}")
    return up, down, cover


@dataclass
class FirstKindFixture:
    params: KRFirstKind
    bezout: Tuple[int, int]
    cover: CoverData
    upstairs: PPDivisor
    reconstruction: Reconstruction
    descended: PPDivisor
    expected: PPDivisor
    report: PipelineReport

    @property
    def checks(self) -> Dict[str, bool]:
        out = {"upstairs == closed form": self.reconstruction.divisor == self.upstairs,
               "descended == expected": self.descended == self.expected,
               "pullback round trip": pullback(self.cover, self.descended) == self.upstairs,
               "stage map valid": self.report.all_valid}
        out.update(self.reconstruction.checks)
        return out


def first_kind(p: KRFirstKind) -> FirstKindFixture:
    a, b = p.bezout
    up, down, cover = first_kind_models(p.d)
    upstairs = bezout_divisor(up, a, b, p.alpha2, p.alpha3, "D_alpha3", "D_alpha2")
    rec = reconstruct(up, p.alpha2, p.alpha3, a, b, "D_alpha3", "D_alpha2")
    report = run_pipeline(rec.divisor, [QuotientStage.effective(cover)])
    expected = PPDivisor(down, {
        "D'_alpha3": point(Fraction(a, p.alpha2)), "D'_alpha2": point(Fraction(b, p.alpha3)),
        "E'": interval(0, Fraction(1, (p.d - 1) * p.alpha2 * p.alpha3))})
    return FirstKindFixture(p, (a, b), cover, upstairs, rec, report.result, expected, report)


# ---------------------------------------------------------------------------
# Second kind


@dataclass(frozen=True)
class KRSecondKind:
    """``x + y(x^d + z^alpha2)^l + t^alpha3 = 0``."""

    d: int
    l: int
    alpha2: int
    alpha3: int

    def __post_init__(self):
        if self.d < 2 or self.l < 1 or self.alpha2 < 2 or self.alpha3 < 2:
            raise InvalidParameters(f"need d >= 2, l >= 1, alpha2, alpha3 >= 2, got {self}")
        if gcd(self.alpha2, self.d) != 1:
            raise InvalidParameters(f"alpha2 = {self.alpha2} and d = {self.d} are not coprime")
        if gcd(self.alpha2, self.alpha3) != 1:
            raise InvalidParameters(f"alpha2 = {self.alpha2} and alpha3 = {self.alpha3} are not coprime")

    @property
    def bezout(self) -> Tuple[int, int]:
        return bezout_pair(self.alpha3, self.alpha2, divisible_by=self.d)

    @property
    def top_order(self) -> int:
        return self.d * self.l - 1


def second_kind_models(d: int, l: int) -> Tuple[YModel, YModel, YModel, CoverData, Optional[CoverData]]:
    """Upstairs surface, its ``mu_d`` quotient, the final ``mu_(dl-1)``
    quotient, and the two covers (the second is ``None`` when ``dl - 1 == 1``)."""
    fn = f"v+(v^{d}+u^{d})^{l}"
    fn_d = f"v'+(u'+v'^{d})^{l}"
    up = blowup_model(f"A2tilde_d{d}_l{l}", "D_alpha3", "D_alpha2", fn, u_first=True)
    mid = YModel(f"{up.name}/mu{d}", ModelKind.QUOT_BLOWUP, ("Dd_alpha3", "Dd_alpha2", "E_d"),
                 {"Dd_alpha3": d, "Dd_alpha2": 1}, "E_d",
                 {"u'": {"Dd_alpha3": 1, "E_d": d}, fn_d: {"Dd_alpha2": 1, "E_d": 1}})
    c1 = CoverData(up, mid, {"Dd_alpha3": (("D_alpha3", d),), "Dd_alpha2": (("D_alpha2", 1),),
                             "E_d": (("E", 1),)}, d, {"u'": {"u": d}, fn_d: {fn: 1}}, name=f"second_d{d}_l{l}_mu{d}")
    n = d * l - 1
    if n == 1:
        return up, mid, mid, c1, None
    low = YModel(f"{mid.name}/mu{n}", ModelKind.QUOT_BLOWUP, ("Dx_alpha3", "Dx_alpha2", "E_x"),
                 {"Dx_alpha3": Fraction(d, n), "Dx_alpha2": Fraction(1, n)}, "E_x",
                 {f"u'^{n}": {"Dx_alpha3": n, "E_x": d}, f"({fn_d})^{n}": {"Dx_alpha2": n, "E_x": 1},
                  f"u'/({fn_d})^{d}": {"Dx_alpha3": 1, "Dx_alpha2": -d}})
    c2 = CoverData(mid, low, {"Dx_alpha3": (("Dd_alpha3", 1),), "Dx_alpha2": (("Dd_alpha2", 1),),
                              "E_x": (("E_d", n),)}, n,
                   {f"u'^{n}": {"u'": n}, f"({fn_d})^{n}": {fn_d: n}, f"u'/({fn_d})^{d}": {"u'": 1, fn_d: -d}},
                   name=f"second_d{d}_l{l}_mu{n}")
    return up, mid, low, c1, c2


@dataclass
class SecondKindFixture:
    params: KRSecondKind
    bezout: Tuple[int, int]
    primed: Tuple[Fraction, int]
    covers: Tuple[CoverData, Optional[CoverData]]
    upstairs: PPDivisor
    reconstruction: Reconstruction
    intermediate: PPDivisor
    final: PPDivisor
    expected_intermediate: PPDivisor
    expected_final: PPDivisor
    report: PipelineReport

    @property
    def checks(self) -> Dict[str, bool]:
        p = self.params
        a, b = self.bezout
        out = {"upstairs == closed form": self.reconstruction.divisor == self.upstairs,
               "d | a": a % p.d == 0,
               "intermediate == expected": self.intermediate == self.expected_intermediate,
               "final == expected": self.final == self.expected_final,
               "stage maps valid": self.report.all_valid}
        out.update(self.reconstruction.checks)
        return out


def second_kind(p: KRSecondKind) -> SecondKindFixture:
    a, b = p.bezout
    a_p, b_p = Fraction(a, p.d), b
    up, mid, low, c1, c2 = second_kind_models(p.d, p.l)
    upstairs = bezout_divisor(up, a, b, p.alpha2, p.alpha3, "D_alpha3", "D_alpha2")
    rec = reconstruct(up, p.alpha2, p.alpha3, a, b, "D_alpha3", "D_alpha2")
    stages = [QuotientStage.effective(c1)] + ([QuotientStage.effective(c2)] if c2 else [])
    report = run_pipeline(rec.divisor, stages)
    intermediate = report.records[0].result
    exp_mid = PPDivisor(mid, {"Dd_alpha3": point(a_p / p.alpha2), "Dd_alpha2": point(Fraction(b_p, p.alpha3)),
                              "E_d": interval(0, Fraction(1, p.alpha2 * p.alpha3))})
    if c2 is None:
        exp_final = exp_mid
    else:
        exp_final = PPDivisor(low, {
            "Dx_alpha3": point(a_p / p.alpha2), "Dx_alpha2": point(Fraction(b_p, p.alpha3)),
            "E_x": interval(0, Fraction(1, p.top_order * p.alpha2 * p.alpha3))})
    return SecondKindFixture(p, (a, b), (a_p, b_p), (c1, c2), upstairs, rec, intermediate,
                             report.result, exp_mid, exp_final, report)


__all__ = [
    "bezout_pair", "bezout_pairs", "russell_model", "block_model", "building_block", "russell_expected",
    "russell_cubic", "RussellFixture", "KRFirstKind", "first_kind", "first_kind_models",
    "FirstKindFixture", "KRSecondKind", "second_kind", "second_kind_models", "SecondKindFixture",
    "reconstruct", "Reconstruction", "bezout_divisor", "block_weights",
]
