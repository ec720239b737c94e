"""Line-oriented session files: models, covers, weights, divisors, pipelines.

The grammar is documented in ``docs/session-format.md``. In short, one
declaration per line, ``#`` starts a comment, tokens are split shell-style
so names with spaces or operators can be quoted::

    model A2tilde BLOWUP_A2 exceptional=E
    prime A2tilde D3 weight=1
    function A2tilde "u+v+v^2" = D3 + E
    cover mu2 UP DOWN order=2
    fiber mu2 "E'" E:2
    pullfn mu2 "u^2" u:2
    weights russell "6;-6;3;2" labels=2:E,3:D3,4:D2
    divisor cubic A2tilde = {1/2}D3 + {-1/3}D2 + [0,1/6]E
    pipeline cubic_mu2 cubic torus:2

Divisors are written in the same notation :func:`format_ppdivisor` prints, so
``parse(serialize(s))`` reproduces ``s``.
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .convex import Cone, Polyhedron
from .divisors import CoverData, ModelKind, QDivisor, YModel
from .downgrade import WeightData
from .errors import DomainError, SessionParseError
from .exact_linalg import Matrix
from .ppdiv import PPDivisor, format_ppdivisor
from .quotients import QuotientStage

FIXTURE_PACKAGE = "ppdivisor.fixtures"


@dataclass
class PipelineDecl:
    name: str
    divisor: str
    stages: List[Tuple[str, str]]   # ("torus", "2" or "2:1,0") or ("effective", cover name)


@dataclass
class Session:
    models: Dict[str, YModel] = field(default_factory=dict)
    covers: Dict[str, CoverData] = field(default_factory=dict)
    weights: Dict[str, WeightData] = field(default_factory=dict)
    weight_models: Dict[str, str] = field(default_factory=dict)
    divisors: Dict[str, PPDivisor] = field(default_factory=dict)
    pipelines: Dict[str, PipelineDecl] = field(default_factory=dict)

    def merge(self, other: "Session") -> "Session":
        for name in ("models", "covers", "weights", "weight_models", "divisors", "pipelines"):
            getattr(self, name).update(getattr(other, name))
        return self

    def _get(self, table: str, name: str):
        try:
            return getattr(self, table)[name]
        except KeyError:
            kind = table.rstrip("s")
            raise SessionParseError(f"unknown {kind} {name!r}") from None

    def model(self, name: str) -> YModel:
        return self._get("models", name)

    def cover(self, name: str) -> CoverData:
        return self._get("covers", name)

    def divisor(self, name: str) -> PPDivisor:
        return self._get("divisors", name)

    def weight_data(self, name: str) -> WeightData:
        return self._get("weights", name)

    def stages(self, decl: PipelineDecl) -> List[QuotientStage]:
        return [build_stage(self, kind, arg) for kind, arg in decl.stages]


# ---------------------------------------------------------------------------
# Scalars, vectors, matrices


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise SessionParseError(f"not a rational number: {text!r}") from None


def parse_vector(text: str) -> Tuple[Fraction, ...]:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    if not text:
        return ()
    return tuple(parse_rational(x) for x in text.split(","))


def parse_int_vector(text: str) -> Tuple[int, ...]:
    v = parse_vector(text)
    if any(x.denominator != 1 for x in v):
        raise SessionParseError(f"expected integers: {text!r}")
    return tuple(int(x) for x in v)


def parse_matrix(text: str) -> Matrix:
    """``"6;-6;3;2"`` (a column) or ``"1,0;0,1"`` (rows separated by ``;``)."""
    rows = [parse_int_vector(r) for r in text.split(";")]
    if len({len(r) for r in rows}) != 1:
        raise SessionParseError(f"ragged matrix {text!r}")
    return Matrix(rows)


def format_matrix(M: Matrix) -> str:
    return ";".join(",".join(str(x) for x in row) for row in M.rows)


def _split_top(text: str, sep: str = ",") -> List[str]:
    """Split on ``sep`` outside parentheses and brackets."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{<":
            depth += 1
        elif ch in ")]}>":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s.strip() for s in out if s.strip()]


# ---------------------------------------------------------------------------
# Polyhedra and divisors


_CLOSE = {"{": "}", "[": None, "(": None, "<": ">"}


def _poly_end(text: str, i: int) -> int:
    """Index just past the polyhedron starting at ``text[i]``."""
    ch = text[i]
    if ch in "{<":
        depth = 0
        for j in range(i, len(text)):
            if text[j] == ch:
                depth += 1
            elif text[j] == _CLOSE[ch]:
                depth -= 1
                if depth == 0:
                    return j + 1
        raise SessionParseError(f"unterminated polyhedron in {text!r}")
    m = re.compile(r"[\[(][^\])]*[\])]").match(text, i)
    if not m:
        raise SessionParseError(f"unterminated interval in {text!r}")
    return m.end()


def parse_polyhedron(text: str, tail: Optional[Cone] = None) -> Polyhedron:
    """Read ``{q}``, ``[a,b]``, ``[a,+oo)``, ``(-oo,b]``, ``{(q1,q2)}`` or
    ``<vertices=[...] rays=[...]>``. A given ``tail`` overrides the one
    implied by the notation only when the notation implies none."""
    t = text.strip()
    try:
        if t.startswith("<") and t.endswith(">"):
            m = re.fullmatch(r"<\s*vertices=\[(.*)\]\s*rays=\[(.*)\]\s*>", t)
            if not m:
                raise SessionParseError(f"bad polyhedron {text!r}")
            verts = [parse_vector(v) for v in _split_top(m.group(1))]
            rays = [parse_int_vector(r) for r in _split_top(m.group(2))]
            n = len(verts[0]) if verts else 0
            return Polyhedron(verts, Cone(rays, n) if rays else (tail or Cone.zero(n)))
        if t.startswith("{") and t.endswith("}"):
            inner = t[1:-1].strip()
            v = parse_vector(inner) if inner.startswith("(") else (parse_rational(inner),)
            return Polyhedron([v], tail or Cone.zero(len(v)))
        if t[0] in "[(" and t[-1] in "])":
            lo, hi = (s.strip() for s in t[1:-1].split(","))
            if lo == "-oo" and t[0] == "(" and t[-1] == "]":
                return Polyhedron([(parse_rational(hi),)], Cone([(-1,)], 1))
            if hi == "+oo" and t[0] == "[" and t[-1] == ")":
                return Polyhedron([(parse_rational(lo),)], Cone([(1,)], 1))
            if t[0] == "[" and t[-1] == "]":
                a, b = parse_rational(lo), parse_rational(hi)
                if a > b:
                    raise SessionParseError(f"empty interval {text!r}")
                return Polyhedron([(a,), (b,)], tail or Cone.zero(1))
    except DomainError as e:
        raise SessionParseError(f"bad polyhedron {text!r}: {e}") from None
    except ValueError:
        pass
    raise SessionParseError(f"bad polyhedron {text!r}")


def parse_terms(text: str) -> List[Tuple[str, str]]:
    """Split ``{1/2}D3 + [0,1/6]E`` into ``[("{1/2}", "D3"), ("[0,1/6]", "E")]``."""
    text = text.strip()
    if text == "0":
        return []
    out = []
    i = 0
    while i < len(text):
        while i < len(text) and text[i].isspace():
            i += 1
        if text[i] not in "{[(<":
            raise SessionParseError(f"expected a polyhedron at {text[i:]!r}")
        j = _poly_end(text, i)
        poly = text[i:j]
        m = re.compile(r"\s*([^\s+]+)").match(text, j)
        if not m:
            raise SessionParseError(f"missing prime label after {poly!r}")
        out.append((poly, m.group(1)))
        i = m.end()
        m = re.compile(r"\s*\+\s*").match(text, i)
        if m:
            i = m.end()
        elif i < len(text) and text[i:].strip():
            raise SessionParseError(f"expected '+' at {text[i:]!r}")
        else:
            break
    return out


def parse_divisor(text: str, model: YModel, tail: Optional[Cone] = None,
                  rank: Optional[int] = None) -> PPDivisor:
    terms = {}
    for poly, label in parse_terms(text):
        p = parse_polyhedron(poly, tail)
        if label in terms:
            raise SessionParseError(f"label {label} appears twice")
        terms[label] = p
    if tail is None and terms:
        tail = next(iter(terms.values())).tail
    if tail is None:
        tail = Cone.zero(rank or 1)
    try:
        return PPDivisor(model, terms, tail)
    except DomainError as e:
        raise SessionParseError(f"bad divisor {text!r}: {e.name}: {e}") from None


def parse_qdivisor(text: str) -> QDivisor:
    """``2*D2 - D3 + 1/2*E`` (or ``0``)."""
    text = text.replace(" ", "")
    if text in ("", "0"):
        return QDivisor()
    out = {}
    for sign, body in re.findall(r"([+-]?)([^+-]+)", text):
        coef, _, label = body.rpartition("*")
        c = parse_rational(coef) if coef else Fraction(1)
        out[label] = out.get(label, 0) + (-c if sign == "-" else c)
    return QDivisor(out)


# ---------------------------------------------------------------------------
# Declarations


def _kv(tokens: Sequence[str]) -> Tuple[List[str], Dict[str, str]]:
    pos, opts = [], {}
    for t in tokens:
        if "=" in t and not t.startswith("="):
            k, _, v = t.partition("=")
            opts[k] = v
        else:
            pos.append(t)
    return pos, opts


def _split_eq(line: str) -> Tuple[str, str]:
    head, sep, rhs = line.partition(" = ")
    if not sep:
        raise SessionParseError(f"expected ' = ' in {line!r}")
    return head, rhs


def build_stage(session: Session, kind: str, arg: str) -> QuotientStage:
    if kind == "torus":
        order, _, w = arg.partition(":")
        return QuotientStage.torus(int(order), parse_int_vector(w) if w else None)
    if kind == "effective":
        return QuotientStage.effective(session.cover(arg))
    raise SessionParseError(f"unknown stage kind {kind!r}")


def parse_stage_token(tok: str) -> Tuple[str, str]:
    kind, sep, arg = tok.partition(":")
    if not sep or kind not in ("torus", "effective") or not arg:
        raise SessionParseError(f"bad stage {tok!r}; expected torus:<order>[:<weight>] or effective:<cover>")
    return kind, arg


def parse_session(text: str, base: Optional[Session] = None) -> Session:
    """Parse session text. Names from ``base`` can be referenced."""
    session = Session().merge(base) if base else Session()
    lines = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("#") else ""
        if line:
            lines.append((n, line))

    def fail(n, msg):
        raise SessionParseError(f"line {n}: {msg}")

    model_decl: Dict[str, dict] = {}
    try:
        for n, line in lines:
            word = line.split(None, 1)[0]
            if word == "model":
                pos, opts = _kv(shlex.split(line)[1:])
                if len(pos) != 2 or pos[1] not in ModelKind.__members__:
                    fail(n, "expected: model <name> <AFFINE_PLANE|BLOWUP_A2|QUOT_BLOWUP> [exceptional=<label>]")
                model_decl[pos[0]] = {"kind": ModelKind[pos[1]], "exceptional": opts.get("exceptional"),
                                      "primes": [], "weights": {}, "functions": {}}
            elif word == "prime":
                pos, opts = _kv(shlex.split(line)[1:])
                if len(pos) != 2 or pos[0] not in model_decl:
                    fail(n, "expected: prime <declared model> <label> [weight=<q>]")
                decl = model_decl[pos[0]]
                decl["primes"].append(pos[1])
                w = opts.get("weight", opts.get("mult"))
                if w is not None:
                    decl["weights"][pos[1]] = parse_rational(w)
            elif word == "function":
                head, rhs = _split_eq(line)
                pos = shlex.split(head)[1:]
                if len(pos) != 2 or pos[0] not in model_decl:
                    fail(n, "expected: function <declared model> <name> = <divisor>")
                model_decl[pos[0]]["functions"][pos[1]] = parse_qdivisor(rhs)
        for name, decl in model_decl.items():
            try:
                session.models[name] = YModel(name, decl["kind"], tuple(decl["primes"]), decl["weights"],
                                              decl["exceptional"], decl["functions"])
            except (ValueError, DomainError) as e:
                raise SessionParseError(f"model {name}: {e}") from None

        cover_decl: Dict[str, dict] = {}
        for n, line in lines:
            word = line.split(None, 1)[0]
            if word == "cover":
                pos, opts = _kv(shlex.split(line)[1:])
                if len(pos) != 3:
                    fail(n, "expected: cover <name> <source model> <target model> order=<n>")
                cover_decl[pos[0]] = {"source": session.model(pos[1]), "target": session.model(pos[2]),
                                      "order": int(opts.get("order", 1)), "fibers": {}, "functions": {}}
            elif word in ("fiber", "pullfn"):
                pos = shlex.split(line)[1:]
                if len(pos) < 2 or pos[0] not in cover_decl:
                    fail(n, f"expected: {word} <declared cover> <target> <source>:<n> ...")
                pairs = []
                for tok in pos[2:]:
                    s, sep, r = tok.rpartition(":")
                    if not sep:
                        fail(n, f"expected <name>:<integer>, got {tok!r}")
                    pairs.append((s, int(r)))
                key = "fibers" if word == "fiber" else "functions"
                cover_decl[pos[0]][key][pos[1]] = tuple(pairs) if word == "fiber" else dict(pairs)
        for name, decl in cover_decl.items():
            try:
                session.covers[name] = CoverData(decl["source"], decl["target"], decl["fibers"], decl["order"],
                                                 decl["functions"], name=name)
            except (ValueError, DomainError) as e:
                raise SessionParseError(f"cover {name}: {e}") from None

        for n, line in lines:
            word = line.split(None, 1)[0]
            if word == "weights":
                pos, opts = _kv(shlex.split(line)[1:])
                if len(pos) != 2:
                    fail(n, "expected: weights <name> <matrix> [labels=<col>:<label>,...] [model=<name>]")
                labels = {}
                if opts.get("labels"):
                    for item in opts["labels"].split(","):
                        col, _, lab = item.partition(":")
                        labels[int(col) - 1] = lab
                session.weights[pos[0]] = WeightData(parse_matrix(pos[1]), labels)
                if "model" in opts:
                    session.model(opts["model"])
                    session.weight_models[pos[0]] = opts["model"]
            elif word == "divisor":
                head, rhs = _split_eq(line)
                pos, opts = _kv(shlex.split(head)[1:])
                if len(pos) != 2:
                    fail(n, "expected: divisor <name> <model> [rank=<k>] [tail=<rays>] = <terms>")
                rank = int(opts["rank"]) if "rank" in opts else None
                tail = None
                if "tail" in opts:
                    rays = [parse_int_vector(r) for r in _split_top(opts["tail"])]
                    tail = Cone(rays, rank if rank is not None else len(rays[0]))
                session.divisors[pos[0]] = parse_divisor(rhs, session.model(pos[1]), tail, rank)
            elif word == "pipeline":
                pos = shlex.split(line)[1:]
                if len(pos) < 2:
                    fail(n, "expected: pipeline <name> <divisor> <stage> ...")
                session.divisor(pos[1])
                decl = PipelineDecl(pos[0], pos[1], [parse_stage_token(t) for t in pos[2:]])
                for kind, arg in decl.stages:
                    build_stage(session, kind, arg)
                session.pipelines[pos[0]] = decl
            elif word not in ("model", "prime", "function", "cover", "fiber", "pullfn"):
                fail(n, f"unknown declaration {word!r}")
    except ValueError as e:
        raise SessionParseError(str(e)) from None
    return session


def load_session(paths: Iterable[Path], base: Optional[Session] = None) -> Session:
    session = base or Session()
    for p in paths:
        session = parse_session(Path(p).read_text(), session)
    return session


def fixture_paths() -> List[Path]:
    root = resources.files(FIXTURE_PACKAGE)
    return sorted((Path(str(p)) for p in root.iterdir() if p.name.endswith(".session")),
                  key=lambda p: p.name)


def load_fixtures() -> Session:
    return load_session(fixture_paths())


# ---------------------------------------------------------------------------
# Serialization


def _q(name: str) -> str:
    if re.fullmatch(r"[\w./:-]+", name):
        return name
    if '"' in name or "\\" in name:
        return shlex.quote(name)
    return f'"{name}"'


def serialize_model(m: YModel) -> List[str]:
    ex = f" exceptional={_q(m.exceptional)}" if m.exceptional else ""
    out = [f"model {m.name} {m.kind.value}{ex}"]
    for p in m.primes:
        w = f" weight={m.weights[p]}" if p in m.weights else ""
        out.append(f"prime {m.name} {_q(p)}{w}")
    for fname, div in m.known_functions.items():
        out.append(f"function {m.name} {_q(fname)} = {div.format(m.primes)}")
    return out


def serialize_cover(c: CoverData) -> List[str]:
    out = [f"cover {c.name} {c.source.name} {c.target.name} order={c.group_order}"]
    for t, fib in c.prime_map.items():
        out.append(f"fiber {c.name} {_q(t)} " + " ".join(_q(f"{s}:{r}") for s, r in fib))
    for tf, combo in c.function_map.items():
        out.append(f"pullfn {c.name} {_q(tf)} " + " ".join(_q(f"{s}:{e}") for s, e in combo.items()))
    return out


def serialize_divisor(name: str, D: PPDivisor) -> str:
    opts = f" rank={D.lattice_rank}"
    if not D.tail.is_zero:
        opts += " tail=" + ",".join("(" + ",".join(str(x) for x in g) + ")" for g in D.tail.generators)
    return f"divisor {name} {D.model.name}{opts} = {format_ppdivisor(D)}"


def serialize(session: Session) -> str:
    lines: List[str] = []
    for m in session.models.values():
        lines += serialize_model(m)
    for c in session.covers.values():
        lines += serialize_cover(c)
    for name, w in session.weights.items():
        extra = ""
        if w.ray_labels:
            extra += " labels=" + ",".join(f"{j + 1}:{lab}" for j, lab in sorted(w.ray_labels.items()))
        if name in session.weight_models:
            extra += f" model={session.weight_models[name]}"
        lines.append(f"weights {name} {_q(format_matrix(w.F))}{extra}")
    for name, D in session.divisors.items():
        lines.append(serialize_divisor(name, D))
    for decl in session.pipelines.values():
        stages = " ".join(f"{k}:{a}" for k, a in decl.stages)
        lines.append(f"pipeline {decl.name} {decl.divisor} {stages}".rstrip())
    return "\n".join(lines) + "\n"


__all__ = [
    "Session", "PipelineDecl", "parse_session", "load_session", "load_fixtures", "fixture_paths",
    "serialize", "parse_divisor", "parse_polyhedron", "parse_qdivisor", "parse_matrix",
    "parse_vector", "parse_rational", "format_matrix", "serialize_divisor", "build_stage",
]
