"""Command-line front end.

Every subcommand reads named objects from session files (the bundled
fixtures are always loaded first, ``--session`` adds more), runs one library
operation and prints a report. ``--format json`` prints the same content as
``{operation, inputs, result, checks}``.

Exit status: 0 on success, 1 on a domain error or a failed check, 2 on a
malformed session file or argument.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .convex import Cone
from .divisors import QDivisor
from .downgrade import WeightData, assemble, downgrade, from_pm_divisors
from .errors import DomainError, SessionParseError
from .fixtures_kr import KRFirstKind, KRSecondKind, first_kind, russell_cubic, second_kind
from .ppdiv import (PPDivisor, evaluate, format_ppdivisor, linearly_equivalent, pullback,
                    pushforward, validity_report)
from .quotients import quotient_effective, quotient_torus_subgroup, run_pipeline
from .session import (Session, build_stage, load_fixtures, load_session, parse_divisor,
                      parse_int_vector, parse_matrix, parse_qdivisor, parse_stage_token, parse_vector)

# Bundled divisors that record the expected output of a worked example.
GOLDEN = {
    ("cubic",): {"expected": "cubic"},
    ("first", 3, 2, 3): {"upstairs": "first_up", "descended": "first_down"},
    ("second", 2, 2, 3, 5): {"upstairs": "second_up", "intermediate": "second_mid", "final": "second_final"},
}


@dataclass
class Outcome:
    operation: str
    inputs: Dict[str, str]
    value: str
    details: Dict[str, object] = field(default_factory=dict)
    checks: List[Tuple[str, bool]] = field(default_factory=list)

    def as_json(self) -> dict:
        result = {"value": self.value}
        result.update(self.details)
        return {"operation": self.operation, "inputs": self.inputs, "result": result,
                "checks": [{"name": n, "passed": ok} for n, ok in self.checks]}

    def as_text(self) -> str:
        lines = [self.value]
        for k, v in self.details.items():
            if isinstance(v, list):
                lines.append(f"{k}:")
                lines.extend(f"  {x}" for x in v)
            else:
                lines.append(f"{k}: {v}")
        lines.extend(f"{'PASS' if ok else 'FAIL'} {n}" for n, ok in self.checks)
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Argument resolution


def resolve_divisor(session: Session, arg: str, model: Optional[str]) -> PPDivisor:
    if arg in session.divisors:
        return session.divisors[arg]
    if model is None:
        if arg.strip()[:1] in "{[(<" or arg.strip() == "0":
            raise SessionParseError("an inline divisor needs --model")
        raise SessionParseError(f"unknown divisor {arg!r}")
    return parse_divisor(arg, session.model(model))


def resolve_weights(session: Session, arg: str) -> WeightData:
    if arg in session.weights:
        return session.weights[arg]
    return WeightData(parse_matrix(arg))


def parse_labels(text: str) -> Dict[int, str]:
    out = {}
    for item in text.split(","):
        col, sep, lab = item.partition(":")
        if not sep:
            raise SessionParseError(f"bad label {item!r}; expected <column>:<label>")
        out[int(col) - 1] = lab
    return out


def fmt_q(model, d: QDivisor) -> str:
    return d.format(model.primes)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_downgrade(session: Session, a) -> Outcome:
    w = resolve_weights(session, a.weights)
    labels = parse_labels(a.labels) if a.labels else dict(w.ray_labels)
    model_name = a.model or session.weight_models.get(a.weights)
    r = downgrade(w)
    details: Dict[str, object] = {"P": str(r.seq.P), "s": str(r.seq.s), "sigma": _cone(r.sigma),
                                  "rays": [f"x{j + 1}: {v} -> {pi}" for j, v, pi in
                                           zip(r.columns, r.rays, r.polytopes)]}
    checks = [("P F == 0", r.seq.P @ r.seq.F == type(r.seq.F).zeros(r.seq.P.nrows, r.seq.k)),
              ("s F == id", r.seq.s @ r.seq.F == type(r.seq.F).identity(r.seq.k))]
    value = f"{len(r.rays)} rays, tail cone {_cone(r.sigma)}"
    if model_name and labels:
        D = assemble(r, labels, session.model(model_name))
        value = format_ppdivisor(D)
    return Outcome("downgrade", {"weights": a.weights}, value, details, checks)


def _cone(c: Cone) -> str:
    if c.is_zero:
        return "{0}"
    return "cone(" + ", ".join("(" + ",".join(str(x) for x in g) + ")" for g in c.generators) + ")"


def cmd_eval(session: Session, a) -> Outcome:
    D = resolve_divisor(session, a.divisor, a.model)
    u = parse_vector(a.u)
    return Outcome("eval", {"divisor": format_ppdivisor(D), "u": a.u}, fmt_q(D.model, evaluate(D, u)))


def cmd_push(session: Session, a) -> Outcome:
    D = resolve_divisor(session, a.divisor, a.model)
    F = parse_matrix(a.F)
    tail = None
    if a.tail:
        tail = Cone([parse_int_vector(r) for r in a.tail.split(";")], F.nrows)
    out = pushforward(F, D, tail)
    return Outcome("push", {"divisor": format_ppdivisor(D), "F": a.F}, format_ppdivisor(out))


def cmd_pull(session: Session, a) -> Outcome:
    c = session.cover(a.cover)
    D = resolve_divisor(session, a.divisor, a.model)
    return Outcome("pull", {"cover": a.cover, "divisor": format_ppdivisor(D)},
                   format_ppdivisor(pullback(c, D)))


def cmd_descend(session: Session, a) -> Outcome:
    c = session.cover(a.cover)
    D = resolve_divisor(session, a.divisor, a.model)
    out = quotient_effective(D, c)
    return Outcome("descend", {"cover": a.cover, "divisor": format_ppdivisor(D)}, format_ppdivisor(out),
                   checks=[("pullback round trip", pullback(c, out) == D)])


def cmd_quotient_torus(session: Session, a) -> Outcome:
    D = resolve_divisor(session, a.divisor, a.model)
    w = parse_int_vector(a.weight) if a.weight else None
    out = quotient_torus_subgroup(D, a.order, w)
    return Outcome("quotient-torus", {"divisor": format_ppdivisor(D), "order": str(a.order),
                                      "weight": a.weight or "default"}, format_ppdivisor(out))


def cmd_equiv(session: Session, a) -> Outcome:
    D1 = resolve_divisor(session, a.d1, a.model)
    D2 = resolve_divisor(session, a.d2, a.model)
    ok, w = linearly_equivalent(D1, D2)
    if not ok:
        value = "NOT EQUIVALENT"
    elif w is None:
        value = "EQUIVALENT, witness: none among the known functions"
    else:
        value = f"EQUIVALENT, witness: div({w})"
    return Outcome("equiv", {"d1": format_ppdivisor(D1), "d2": format_ppdivisor(D2)}, value)


def cmd_pipeline(session: Session, a) -> Outcome:
    head, rest = a.stages[0], a.stages[1:]
    if head in session.pipelines and not rest:
        decl = session.pipelines[head]
        D, stages = session.divisor(decl.divisor), session.stages(decl)
        tokens = [f"{k}:{v}" for k, v in decl.stages]
    else:
        D = resolve_divisor(session, head, a.model)
        tokens = rest
        stages = [build_stage(session, *parse_stage_token(t)) for t in rest]
    report = run_pipeline(D, stages)
    checks = [(f"stage {i} map valid", r.valid) for i, r in enumerate(report.records, 1)]
    return Outcome("pipeline", {"divisor": format_ppdivisor(D), "stages": " ".join(tokens)},
                   format_ppdivisor(report.result), {"stages": report.lines()[1:],
                                                     "total map": str(report.total_map)}, checks)


def _golden_checks(session: Session, key: tuple, produced: Dict[str, PPDivisor]) -> List[Tuple[str, bool]]:
    out = []
    for role, name in GOLDEN.get(key, {}).items():
        if name in session.divisors:
            out.append((f"golden {name}", produced[role] == session.divisors[name]))
    return out


def cmd_kr(session: Session, a) -> Outcome:
    params = list(a.params)
    if a.family == "cubic":
        if params:
            raise SessionParseError("kr cubic takes no parameters")
        fx = russell_cubic()
        checks = _golden_checks(session, ("cubic",), {"expected": fx.pipeline})
        checks += list(fx.checks.items())
        w2 = fx.reconstruction.witnesses
        return Outcome("kr cubic", {}, format_ppdivisor(fx.pipeline),
                       {"D_2": format_ppdivisor(fx.D_2), "D_3": format_ppdivisor(fx.D_3),
                        "witnesses": [f"{k}: div({v})" for k, v in w2.items()]}, checks)
    if a.family == "first":
        if len(params) != 3:
            raise SessionParseError("kr first takes d alpha2 alpha3")
        fx = first_kind(KRFirstKind(*params))
        checks = _golden_checks(session, ("first", *params),
                                {"upstairs": fx.reconstruction.divisor, "descended": fx.descended})
        checks += list(fx.checks.items())
        return Outcome("kr first", dict(zip(("d", "alpha2", "alpha3"), map(str, params))),
                       format_ppdivisor(fx.descended),
                       {"bezout": f"a = {fx.bezout[0]}, b = {fx.bezout[1]}",
                        "upstairs": format_ppdivisor(fx.reconstruction.divisor)}, checks)
    if len(params) != 4:
        raise SessionParseError("kr second takes d l alpha2 alpha3")
    fx = second_kind(KRSecondKind(*params))
    checks = _golden_checks(session, ("second", *params),
                            {"upstairs": fx.reconstruction.divisor, "intermediate": fx.intermediate,
                             "final": fx.final})
    checks += list(fx.checks.items())
    return Outcome("kr second", dict(zip(("d", "l", "alpha2", "alpha3"), map(str, params))),
                   format_ppdivisor(fx.final),
                   {"bezout": f"a = {fx.bezout[0]}, b = {fx.bezout[1]}",
                    "primed": f"a' = {fx.primed[0]}, b' = {fx.primed[1]}",
                    "upstairs": format_ppdivisor(fx.reconstruction.divisor),
                    "intermediate": format_ppdivisor(fx.intermediate)}, checks)


def cmd_check(session: Session, a) -> Outcome:
    D = resolve_divisor(session, a.divisor, a.model)
    rep = validity_report(D).as_dict()
    notes = rep.pop("notes")
    flags = {k: ("UNKNOWN" if v == "UNKNOWN" else str(v).lower()) for k, v in rep.items()}
    value = "structural: ok" if validity_report(D).structural_ok else "structural: FAILED"
    return Outcome("check", {"divisor": format_ppdivisor(D)}, value, {**flags, "notes": notes})


def cmd_pm(session: Session, a) -> Outcome:
    m = session.model(a.model_name)
    D = from_pm_divisors(parse_qdivisor(a.d_plus), parse_qdivisor(a.d_minus), m)
    checks = [("evaluate(+1) == D+", evaluate(D, (1,)) == parse_qdivisor(a.d_plus)),
              ("evaluate(-1) == D-", evaluate(D, (-1,)) == parse_qdivisor(a.d_minus))]
    return Outcome("pm", {"model": a.model_name, "D+": a.d_plus, "D-": a.d_minus},
                   format_ppdivisor(D), checks=checks)


# ---------------------------------------------------------------------------
# Driver


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ppdivisor", description="Exact polyhedral divisor calculus.")
    p.add_argument("--session", action="append", default=[], help="extra session file (repeatable)")
    p.add_argument("--no-fixtures", action="store_true", help="do not load the bundled fixtures")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--model", help="model for inline divisors")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("downgrade", help="downgrade a linear torus action")
    s.add_argument("weights", help="session weights name or a matrix such as '6;-6;3;2'")
    s.add_argument("--labels", help="column:label pairs, e.g. 2:E,3:D3,4:D2 (columns from 1)")
    s.set_defaults(func=cmd_downgrade)

    s = sub.add_parser("eval", help="evaluate a divisor at a weight")
    s.add_argument("divisor")
    s.add_argument("u", help="weight, e.g. 6 or 1,2")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("push", help="push forward along a lattice map")
    s.add_argument("divisor")
    s.add_argument("F", help="matrix, rows separated by ';'")
    s.add_argument("--tail", help="target tail rays separated by ';'")
    s.set_defaults(func=cmd_push)

    for name, func, help_ in (("pull", cmd_pull, "pull back along a cover"),
                              ("descend", cmd_descend, "descend along a cover")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("cover")
        s.add_argument("divisor")
        s.set_defaults(func=func)

    s = sub.add_parser("quotient-torus", help="quotient by a finite subgroup of the torus")
    s.add_argument("divisor")
    s.add_argument("order", type=int)
    s.add_argument("weight", nargs="?")
    s.set_defaults(func=cmd_quotient_torus)

    s = sub.add_parser("equiv", help="test linear equivalence")
    s.add_argument("d1")
    s.add_argument("d2")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("pipeline", help="run quotient stages")
    s.add_argument("stages", nargs="+", metavar="pipeline", help="pipeline name, or divisor followed by torus:<n>[:<w>] / effective:<cover>")
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("kr", help="worked examples")
    s.add_argument("family", choices=("cubic", "first", "second"))
    s.add_argument("params", nargs="*", type=int)
    s.set_defaults(func=cmd_kr)

    s = sub.add_parser("check", help="validity report")
    s.add_argument("divisor")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("pm", help="rank-one divisor from D+ and D-")
    s.add_argument("model_name")
    s.add_argument("d_plus")
    s.add_argument("d_minus")
    s.set_defaults(func=cmd_pm)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        session = Session() if args.no_fixtures else load_fixtures()
        session = load_session(args.session, session)
        outcome = args.func(session, args)
    except SessionParseError as e:
        print(f"SessionParseError: {e}", file=sys.stderr)
        return 2
    except (DomainError, ValueError) as e:
        name = e.name if isinstance(e, DomainError) else type(e).__name__
        print(f"{name}: {e}", file=sys.stderr)
        return 1
    if args.format == "json":
        print(json.dumps(outcome.as_json(), indent=2))
    else:
        print(outcome.as_text())
    if not all(ok for _, ok in outcome.checks):
        print("CheckFailed: " + ", ".join(n for n, ok in outcome.checks if not ok), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
