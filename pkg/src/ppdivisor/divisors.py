"""Q-divisors on explicit surface models and cyclic covers between them.

The varieties Y that carry polyhedral divisors are never built from an
algebra here. A :class:`YModel` is a catalogue of prime divisors together with
the one piece of geometry needed to decide principality:

* ``AFFINE_PLANE``: trivial class group, every integral divisor is principal.
* ``BLOWUP_A2``: blow-up of the plane at the origin. Writing ``C_i`` for the
  strict transform of a curve with multiplicity ``m_i`` at the origin, the
  total transform ``C_i + m_i E`` is principal, so ``sum a_i C_i + b E`` is
  principal iff ``b == sum a_i m_i`` (standard blow-up bookkeeping).
* ``QUOT_BLOWUP``: a cyclic quotient of such a model (or a weighted blow-up).
  The same test runs with rational weights supplied by the fixture, since the
  class groups of these surfaces are not computed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .errors import NonIntegral, UnknownFunction, UnknownLabel


class QDivisor(Mapping[str, Fraction]):
    """Finitely supported map ``prime label -> rational coefficient``."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Optional[Mapping[str, object]] = None, **kw):
        c = {}
        for k, v in list((coefficients or {}).items()) + list(kw.items()):
            v = Fraction(v)
            c[k] = c.get(k, Fraction(0)) + v
        self._c = {k: v for k, v in c.items() if v != 0}

    def __getitem__(self, key):
        return self._c[key]

    def coeff(self, key: str) -> Fraction:
        return self._c.get(key, Fraction(0))

    def __iter__(self):
        return iter(self._c)

    def __len__(self):
        return len(self._c)

    def __eq__(self, other):
        if isinstance(other, QDivisor):
            return self._c == other._c
        if isinstance(other, Mapping):
            return self._c == QDivisor(other)._c
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other: "QDivisor") -> "QDivisor":
        out = dict(self._c)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
        return QDivisor(out)

    def __neg__(self) -> "QDivisor":
        return QDivisor({k: -v for k, v in self._c.items()})

    def __sub__(self, other: "QDivisor") -> "QDivisor":
        return self + (-other)

    def __mul__(self, scalar) -> "QDivisor":
        scalar = Fraction(scalar)
        return QDivisor({k: scalar * v for k, v in self._c.items()})

    __rmul__ = __mul__

    def __le__(self, other: "QDivisor") -> bool:
        keys = set(self) | set(other)
        return all(self.coeff(k) <= other.coeff(k) for k in keys)

    @property
    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._c.values())

    def format(self, order: Sequence[str] = ()) -> str:
        keys = [k for k in order if k in self._c] + sorted(k for k in self._c if k not in order)
        if not keys:
            return "0"
        parts = []
        for k in keys:
            v = self._c[k]
            if v == 1:
                term = k
            elif v == -1:
                term = f"-{k}"
            else:
                term = f"{v}*{k}"
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"QDivisor({self.format()})"


class ModelKind(enum.Enum):
    AFFINE_PLANE = "AFFINE_PLANE"
    BLOWUP_A2 = "BLOWUP_A2"
    QUOT_BLOWUP = "QUOT_BLOWUP"


@dataclass(frozen=True)
class YModel:
    """An explicit surface model: prime labels plus principality data.

    ``weights`` holds the multiplicity at the blown-up point for
    ``BLOWUP_A2`` models and the fixture-supplied rational weights for
    ``QUOT_BLOWUP`` models; labels without a weight count as 0.
    ``known_functions`` maps a function name to its (principal) divisor.
    """

    name: str
    kind: ModelKind
    primes: Tuple[str, ...]
    weights: Mapping[str, Fraction] = field(default_factory=dict)
    exceptional: Optional[str] = None
    known_functions: Mapping[str, QDivisor] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(self.primes))
        object.__setattr__(self, "weights", {k: Fraction(v) for k, v in self.weights.items()})
        object.__setattr__(self, "known_functions",
                           {k: QDivisor(v) for k, v in self.known_functions.items()})
        if len(set(self.primes)) != len(self.primes):
            raise ValueError(f"duplicate prime labels in model {self.name}")
        if self.kind is not ModelKind.AFFINE_PLANE and self.exceptional not in self.primes:
            raise ValueError(f"model {self.name} needs an exceptional prime")
        for k in self.weights:
            self.check_label(k)
        for fname, div in self.known_functions.items():
            if not self.is_principal(div):
                raise ValueError(f"function {fname} on {self.name} has a non-principal divisor {div}")

    def __hash__(self):
        return hash((self.name, self.kind, self.primes))

    def check_label(self, label: str) -> None:
        if label not in self.primes:
            raise UnknownLabel(f"{label!r} is not a prime divisor of {self.name}")

    def weight(self, label: str) -> Fraction:
        return self.weights.get(label, Fraction(0))

    def is_principal(self, d: QDivisor) -> bool:
        return is_principal(self, d)

    def function_divisor(self, name: str) -> QDivisor:
        try:
            return self.known_functions[name]
        except KeyError:
            raise UnknownFunction(f"{name!r} is not a known function on {self.name}") from None


def is_principal(m: YModel, d: QDivisor) -> bool:
    """Decide whether the integral divisor ``d`` is principal on ``m``."""
    for k in d:
        m.check_label(k)
    if not d.is_integral:
        raise NonIntegral(f"principality is tested on integral divisors, got {d}")
    if m.kind is ModelKind.AFFINE_PLANE:
        return True
    expected = sum((v * m.weight(k) for k, v in d.items() if k != m.exceptional), Fraction(0))
    return d.coeff(m.exceptional) == expected


def function_combination_divisor(m: YModel, combo: Mapping[str, int]) -> QDivisor:
    """Divisor of the formal product ``prod f^e`` over ``combo``."""
    out = QDivisor()
    for name, e in combo.items():
        out = out + m.function_divisor(name) * e
    return out


def _clean_combo(combo: Mapping[str, int]) -> Dict[str, int]:
    return {k: int(v) for k, v in sorted(combo.items()) if v}


def add_combos(*combos: Mapping[str, int]) -> Dict[str, int]:
    out: Dict[str, int] = {}
    for c in combos:
        for k, v in c.items():
            out[k] = out.get(k, 0) + v
    return _clean_combo(out)


@dataclass(frozen=True)
class CoverData:
    """A finite quotient map ``source -> target`` of surface models.

    ``prime_map`` sends each target prime to its fiber, a tuple of
    ``(source prime, ramification index)``. ``function_map`` records how
    target functions pull back, as formal products of source functions.
    """

    source: YModel
    target: YModel
    prime_map: Mapping[str, Tuple[Tuple[str, int], ...]]
    group_order: int = 1
    function_map: Mapping[str, Mapping[str, int]] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        pm = {t: tuple((s, int(r)) for s, r in fib) for t, fib in self.prime_map.items()}
        object.__setattr__(self, "prime_map", pm)
        object.__setattr__(self, "function_map",
                           {k: _clean_combo(v) for k, v in self.function_map.items()})
        if self.group_order < 1:
            raise ValueError("group order must be positive")
        seen = {}
        for t, fib in pm.items():
            self.target.check_label(t)
            for s, r in fib:
                self.source.check_label(s)
                if r < 1:
                    raise ValueError(f"ramification index of {s} must be positive")
                if s in seen:
                    raise ValueError(f"source prime {s} lies over both {seen[s]} and {t}")
                seen[s] = t
        missing = set(self.source.primes) - set(seen)
        if missing:
            raise ValueError(f"source primes {sorted(missing)} are in no fiber")
        for tf, combo in self.function_map.items():
            self.target.function_divisor(tf)
            for sf in combo:
                self.source.function_divisor(sf)

    def __hash__(self):
        return hash((self.name, self.source, self.target))

    @classmethod
    def identity(cls, model: YModel) -> "CoverData":
        return cls(model, model, {p: ((p, 1),) for p in model.primes}, 1,
                   {f: {f: 1} for f in model.known_functions}, name=f"id_{model.name}")

    @property
    def is_identity(self) -> bool:
        return (self.source == self.target and self.group_order == 1
                and all(fib == ((t, 1),) for t, fib in self.prime_map.items())
                and len(self.prime_map) == len(self.target.primes))

    def fiber(self, target_label: str) -> Tuple[Tuple[str, int], ...]:
        self.target.check_label(target_label)
        return self.prime_map.get(target_label, ())

    def image(self, source_label: str) -> Tuple[str, int]:
        self.source.check_label(source_label)
        for t, fib in self.prime_map.items():
            for s, r in fib:
                if s == source_label:
                    return t, r
        raise UnknownLabel(source_label)  # unreachable: every source prime is in a fiber

    def pull_function(self, combo: Mapping[str, int]) -> Dict[str, int]:
        """Pull back a formal product of target functions."""
        parts = []
        for name, e in combo.items():
            if name not in self.function_map:
                raise UnknownFunction(f"no pull-back recorded for {name!r} along {self.name or 'cover'}")
            parts.append({k: v * e for k, v in self.function_map[name].items()})
        return add_combos(*parts)

    def then(self, other: "CoverData") -> "CoverData":
        """The composite ``other ∘ self`` (first ``self``, then ``other``)."""
        if self.target != other.source:
            raise ValueError("covers do not chain")
        pm = {}
        for t2, fib2 in other.prime_map.items():
            fib = []
            for s1, r2 in fib2:
                for s0, r1 in self.prime_map.get(s1, ()):
                    fib.append((s0, r1 * r2))
            pm[t2] = tuple(fib)
        fm = {}
        for f2, combo in other.function_map.items():
            try:
                fm[f2] = self.pull_function(combo)
            except UnknownFunction:
                continue
        return CoverData(self.source, other.target, pm, self.group_order * other.group_order, fm,
                         name=f"{other.name}∘{self.name}")


def pullback_qdivisor(c: CoverData, d: QDivisor) -> QDivisor:
    """Pull a target divisor back: the coefficient on ``s`` is ``r(s)`` times
    the coefficient of its image."""
    out = {}
    for t, v in d.items():
        for s, r in c.fiber(t):
            out[s] = out.get(s, 0) + r * v
    return QDivisor(out)


def parse_combo(items: Iterable[Tuple[str, int]]) -> Dict[str, int]:
    return add_combos(*({k: v} for k, v in items))


def format_combo(combo: Mapping[str, int]) -> str:
    """``{'u': 1, 'u+v+v^2': -1}`` -> ``u/(u+v+v^2)``."""

    def atom(name, e):
        base = name if name.replace("_", "").replace("'", "").isalnum() else f"({name})"
        return base if e == 1 else f"{base}^{e}"

    num = [atom(k, v) for k, v in combo.items() if v > 0]
    den = [atom(k, -v) for k, v in combo.items() if v < 0]
    top = "*".join(num) if num else "1"
    if not den:
        return top
    bottom = "*".join(den)
    if len(den) > 1:
        bottom = f"({bottom})"
    return f"{top}/{bottom}"


__all__ = [
    "QDivisor", "ModelKind", "YModel", "CoverData", "is_principal", "pullback_qdivisor",
    "function_combination_divisor", "add_combos", "format_combo",
]
