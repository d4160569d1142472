"""Command-line entry point.

Exit codes: 0 success / found, 1 semantically negative result, 2 usage error,
3 input-format error, 4 budget truncation.  Errors print one line
``error:<class>: message`` on standard error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import algebra as alg
from .calculus import check_derivation, derivation_text, parse_sequent, prove_bounded
from .kripke import ModelError, check_frame_conditions, extension_mask, load_model
from .schemes import SCHEMES, get_scheme
from .search import (CounterexampleReport, SearchBudgetExceeded, SearchConfig,
                     find_countermodel, probe_dne, report_to_json, to_dot)
from .syntax import ParseError, atoms, parse, to_text

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _worlds(m, mask):
    return [m.name(w) for w in range(m.n) if mask >> w & 1]


def _set_text(m, mask):
    return "{" + ", ".join(_worlds(m, mask)) + "}"


def describe_model(m) -> list[str]:
    nm = m.name

    def rel(pairs):
        return ", ".join(f"({nm(a)},{nm(b)})" for a, b in sorted(pairs)) or "-"

    lines = [f"worlds: {', '.join(nm(w) for w in range(m.n))}",
             f"leq:    {rel([(a, b) for a, b in m.leq if a != b])}",
             f"frown:  {rel(m.frown)}",
             f"smile:  {rel(m.smile)}"]
    for atom, mask in m.valuation:
        lines.append(f"val {atom}: {_set_text(m, mask)}")
    return lines


class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []
        self.doc: dict = {}

    def say(self, *lines):
        self.lines.extend(lines)

    def flush(self):
        if self.as_json:
            sys.stdout.write(json.dumps(self.doc, indent=2, sort_keys=True) + "\n")
        elif self.lines:
            sys.stdout.write("\n".join(self.lines) + "\n")


# -- commands ------------------------------------------------------------------

def cmd_parse(args, out):
    f = parse(args.formula)
    out.say(to_text(f))
    out.doc = {"formula": to_text(f)}
    return EXIT_OK


def cmd_eval(args, out):
    m = load_model(args.model)
    f = parse(args.formula)
    mask = extension_mask(m, f)
    if args.world is not None:
        w = m.world_index(args.world)
        truth = bool(mask >> w & 1)
        out.say("true" if truth else "false")
        out.doc = {"formula": to_text(f), "world": m.name(w), "value": truth}
    else:
        out.say(_set_text(m, mask))
        out.doc = {"formula": to_text(f), "extension": _worlds(m, mask)}
    return EXIT_OK


def cmd_valid(args, out):
    m = load_model(args.model)
    f = parse(args.formula)
    mask = extension_mask(m, f)
    failing = _worlds(m, m.full & ~mask)
    out.doc = {"formula": to_text(f), "valid": not failing, "failing_worlds": failing}
    if failing:
        out.say(f"invalid (fails at: {', '.join(failing)})")
        return EXIT_NEGATIVE
    out.say("valid")
    return EXIT_OK


def _config(args, atom_list, strict, scheme=SCHEMES["heyting"]):
    if args.max_worlds < 1:
        raise UsageError("--max-worlds must be at least 1")
    return SearchConfig(max_worlds=args.max_worlds, atoms=atom_list, require_strict=strict,
                        negation_scheme=scheme, max_models=args.budget)


def cmd_countermodel(args, out):
    f = parse(args.formula)
    atom_list = args.atoms.split(",") if args.atoms else atoms(f)
    cfg = _config(args, atom_list, args.strict)
    rep = find_countermodel(f, cfg)
    doc = report_to_json(rep)
    out.doc = doc
    if isinstance(rep, CounterexampleReport):
        m = rep.model
        out.say(f"countermodel for {to_text(f)} (model #{rep.index}, "
                f"{rep.stats.frames} frames, {rep.stats.models} models examined)",
                *describe_model(m),
                f"fails at: {m.name(rep.world)}")
        if args.dot:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(to_dot(m))
        if args.json_path:
            with open(args.json_path, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, indent=2, sort_keys=True)
                fh.write("\n")
        return EXIT_OK
    out.say(f"no countermodel with at most {cfg.max_worlds} worlds "
            f"({rep.stats.frames} frames, {rep.stats.models} models examined)")
    return EXIT_NEGATIVE


def cmd_probe(args, out):
    scheme = get_scheme(args.scheme, args.template)
    atom_list = args.atoms.split(",") if args.atoms else ["p"]
    cfg = _config(args, atom_list, True, scheme)
    rep = probe_dne(cfg)
    out.doc = report_to_json(rep)
    if not rep.found:
        out.say(f"no witness for {scheme} with at most {cfg.max_worlds} worlds "
                f"({rep.stats.models} models examined)")
        return EXIT_NEGATIVE
    m = rep.model
    fails = []
    if not rep.np_in_p:
        fails.append("N(p) <= p fails")
    if not rep.p_in_np:
        fails.append("p <= N(p) fails")
    out.say(f"DNE witness for {scheme} (model #{rep.index})",
            *describe_model(m),
            f"{rep.atom}: {_set_text(m, rep.atom_ext)}",
            f"N({rep.atom}): {_set_text(m, rep.negated_ext)}",
            f"failing direction: {'; '.join(fails)}",
            "fixed up-sets: " + " ".join(_set_text(m, e) for e in rep.fixed),
            "non-fixed up-sets: " + " ".join(_set_text(m, e) for e in rep.non_fixed))
    return EXIT_OK


def cmd_algebra(args, out):
    m = load_model(args.model)
    try:
        a = alg.build_complex_algebra(m, cap=args.cap)
    except alg.AlgebraError as exc:
        raise InputError("frame", str(exc)) from None
    laws = alg.check_laws(a)
    ops = [alg.check_comonad(a, c) for c in alg.COMONADS] + \
          [alg.check_closure(a, c) for c in alg.CLOSURES]
    dual = alg.dualizing_report(a)
    ix = a.index
    st = lambda e: _set_text(m, e)
    out.say(f"elements ({len(a)}): " + " ".join(f"[{i}]{st(e)}" for i, e in enumerate(a.elements)),
            f"laws: {'pass' if laws.passed else 'FAIL ' + repr(laws.failure)}")
    for r in ops:
        out.say(f"{r.kind} {r.composite}: {'pass' if r.passed else 'FAIL ' + repr(r.failure)}; "
                f"fixed: {' '.join(st(e) for e in r.fixed)}")
    out.say(f"has_dualizing_element = {str(dual.has_dualizing_element).lower()}")
    for d in a.elements:
        if d in dual.witnesses:
            x = dual.witnesses[d]
            dd = a.imp(a.imp(x, d), d)
            out.say(f"  D={st(d)}: A={st(x)}: (A->D)->D = {st(dd)} != A")
        else:
            out.say(f"  D={st(d)}: dualizing")
    export = alg.export_algebra(a)
    export["laws"] = {"passed": laws.passed, "instances": laws.instances,
                      "failure": list(laws.failure) if laws.failure else None}
    export["operators"] = [{"composite": r.composite, "kind": r.kind, "passed": r.passed,
                            "fixed": [ix[e] for e in r.fixed]} for r in ops]
    out.doc = export
    if args.export_algebra:
        with open(args.export_algebra, "w", encoding="utf-8") as fh:
            json.dump(export, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def cmd_prove(args, out):
    goal = parse_sequent(args.sequent)
    if args.depth < 1:
        raise UsageError("--depth must be at least 1")
    res = prove_bounded(goal, args.depth, allow_cut=args.allow_cut,
                        weakening=not args.no_weakening, contraction=not args.no_contraction,
                        budget=args.budget)
    out.doc = {"sequent": args.sequent, "status": res.status, "nodes": res.nodes}
    if res.status == "budget":
        raise BudgetError(f"search budget of {args.budget} nodes exhausted")
    if not res.found:
        out.say(f"not-found (depth {args.depth}, {res.nodes} nodes)")
        return EXIT_NEGATIVE
    text = derivation_text(res.derivation)
    assert check_derivation(res.derivation, allow_cut=args.allow_cut).ok
    out.doc["derivation"] = text
    out.say(text.rstrip("\n"))
    return EXIT_OK


def cmd_check_frame(args, out):
    m = load_model(args.model, validate=False)
    bad = check_frame_conditions(m)
    nm = m.name
    added = sorted(m.closure_added)
    out.doc = {"violations": [{"condition": v.condition, "worlds": [nm(w) for w in v.worlds]}
                              for v in bad],
               "closure_added": [[nm(a), nm(b)] for a, b in added]}
    if added:
        out.say("leq closure added: " + ", ".join(f"({nm(a)},{nm(b)})" for a, b in added))
    if not bad:
        out.say("ok: all frame conditions hold")
        return EXIT_OK
    for v in bad:
        out.say(f"{v.condition} violated at ({', '.join(nm(w) for w in v.worlds)})")
    return EXIT_NEGATIVE


class InputError(Exception):
    def __init__(self, cls, message):
        self.cls = cls
        super().__init__(message)


class BudgetError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lnod", description="Split-negation tense logic workbench.")
    p.add_argument("--json", action="store_true", help="emit one JSON document on stdout")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("parse", help="print the canonical form of a formula")
    s.add_argument("formula")
    s.set_defaults(fn=cmd_parse)

    s = sub.add_parser("eval", help="extension or truth value of a formula")
    s.add_argument("--model", required=True)
    s.add_argument("--formula", required=True)
    s.add_argument("--world")
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser("valid", help="validity on one model")
    s.add_argument("--model", required=True)
    s.add_argument("--formula", required=True)
    s.set_defaults(fn=cmd_valid)

    s = sub.add_parser("countermodel", help="bounded countermodel search")
    s.add_argument("--formula", required=True)
    s.add_argument("--max-worlds", type=int, required=True)
    s.add_argument("--strict", action="store_true")
    s.add_argument("--atoms", help="comma-separated atom inventory (default: atoms of the formula)")
    s.add_argument("--budget", type=int, help="cap on models examined")
    s.add_argument("--dot", metavar="PATH")
    s.add_argument("--json", metavar="PATH", dest="json_path")
    s.set_defaults(fn=cmd_countermodel)

    s = sub.add_parser("probe-dne", help="search for a double-negation failure")
    s.add_argument("--scheme", required=True, choices=[*SCHEMES, "custom"])
    s.add_argument("--template", help="one-hole formula over atom 'a' for --scheme custom")
    s.add_argument("--max-worlds", type=int, required=True)
    s.add_argument("--atoms", help="comma-separated atoms to probe (default: p)")
    s.add_argument("--budget", type=int)
    s.set_defaults(fn=cmd_probe)

    s = sub.add_parser("algebra", help="complex algebra laws and dualizing report")
    s.add_argument("--model", required=True)
    s.add_argument("--export-algebra", metavar="PATH")
    s.add_argument("--cap", type=int, default=alg.DEFAULT_CAP)
    s.set_defaults(fn=cmd_algebra)

    s = sub.add_parser("prove", help="bounded backward proof search")
    s.add_argument("sequent")
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--allow-cut", action="store_true")
    s.add_argument("--no-weakening", action="store_true")
    s.add_argument("--no-contraction", action="store_true")
    s.add_argument("--budget", type=int, default=500_000)
    s.set_defaults(fn=cmd_prove)

    s = sub.add_parser("check-frame", help="report frame-condition violations")
    s.add_argument("--model", required=True)
    s.set_defaults(fn=cmd_check_frame)
    return p


def _fail(cls, message, code):
    sys.stderr.write(f"error:{cls}: {message}\n")
    return code


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "fn", None):
            raise UsageError("a command is required")
        out = Output(args.json)
        code = args.fn(args, out)
    except UsageError as exc:
        return _fail("usage", exc, EXIT_USAGE)
    except ParseError as exc:
        return _fail("parse", exc, EXIT_INPUT)
    except ModelError as exc:
        return _fail("model", exc, EXIT_INPUT)
    except InputError as exc:
        return _fail(exc.cls, exc, EXIT_INPUT)
    except ValueError as exc:
        return _fail("input", exc, EXIT_INPUT)
    except OSError as exc:
        return _fail("io", exc, EXIT_INPUT)
    except SearchBudgetExceeded as exc:
        return _fail("budget", exc, EXIT_BUDGET)
    except BudgetError as exc:
        return _fail("budget", exc, EXIT_BUDGET)
    out.flush()
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
