"""Command line interface: ``sst <command> ...``.

Exit codes: 0 ok or true, 1 false or counterexample, 2 usage or input
error, 3 budget exhausted or undecided. ``SSTLAB_BUDGET_MS`` caps solver
time in milliseconds.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .approximants import AnnotationTooLarge, annotate_approximants, check_admits, tightness_probe
from .core import Sst, capacity, evaluate, is_k_valued_bounded, trim, validate
from .equivalence import edge_ambiguity, prune_edges, transitions_equiv, transitions_equiv_oracle
from .normalize import flow_normalize, is_flow_normalized
from .quotient import make_initials_transient, quotient_word
from .textio import SstSyntaxError, parse_sst, printable, serialize_sst
from .wordeq import (BudgetExceeded, concretize, equiv_bounded, format_system, parse_system, satisfies,
                     schema_of, solve_bounded, solve_nielsen, testset_fixpoint)

OK, FALSE, USAGE, BUDGET = 0, 1, 2, 3


class CliError(Exception):
    pass


def budget_ms() -> int | None:
    raw = os.environ.get("SSTLAB_BUDGET_MS")
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"SSTLAB_BUDGET_MS must be an integer, got {raw!r}") from None


def read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as err:
        raise CliError(f"{path}: {err.strerror}") from None


def load(path: str) -> Sst:
    try:
        return parse_sst(read_text(path))
    except SstSyntaxError as err:
        raise CliError("\n".join(f"{path}:{issue}" for issue in err.issues)) from None


def normalized(sst: Sst) -> Sst:
    return sst if is_flow_normalized(sst) else flow_normalize(sst)


def annotated(sst: Sst, alpha: int | None, max_states: int | None) -> Sst:
    sst = normalized(trim(sst))
    alpha = capacity(sst) if alpha is None else alpha
    try:
        return annotate_approximants(sst, alpha, max_states)
    except AnnotationTooLarge as err:
        raise BudgetError(str(err)) from None


class BudgetError(Exception):
    pass


def machine_result(sst: Sst, header=()) -> dict:
    return {"machine": printable(sst, header), "states": len(sst.states),
            "transitions": len(sst.transitions), "capacity": capacity(sst),
            "edge_ambiguity": edge_ambiguity(sst)}


# each handler returns (exit code, json record, text)

def cmd_check(args):
    sst = load(args.file)
    diags = validate(sst)
    rec = {"valid": not diags, "diagnostics": [str(d) for d in diags]}
    text = "\n".join(rec["diagnostics"]) or "ok"
    return (FALSE if diags else OK), rec, text


def cmd_eval(args):
    sst = load(args.file)
    try:
        outs = sorted(evaluate(sst, args.input))
    except ValueError as err:
        raise CliError(str(err)) from None
    rec = {"input": args.input, "outputs": outs}
    text = "\n".join(o or '""' for o in outs) if outs else "no output: input rejected"
    return (OK if outs else FALSE), rec, text


def cmd_trim(args):
    rec = machine_result(trim(load(args.file)))
    return OK, rec, rec["machine"]


def cmd_normalize(args):
    rec = machine_result(flow_normalize(load(args.file)))
    return OK, rec, rec["machine"]


def cmd_annotate(args):
    an = annotated(load(args.file), args.alpha, args.max_states)
    rec = machine_result(an, [f"annotated with alpha {args.alpha if args.alpha is not None else 'capacity'}"])
    return OK, rec, rec["machine"]


def cmd_admits_check(args):
    an = annotated(load(args.file), args.alpha, args.max_states)
    alpha = capacity(an) if args.alpha is None else args.alpha
    report = check_admits(an, alpha, args.len)
    rec = {"ok": report.ok, "detail": report.detail,
           "input": report.run.word if report.run else None, "position": report.position}
    text = "ok" if report.ok else f"mismatch on {rec['input']} at position {report.position}: {report.detail}"
    if args.tight_alpha is not None:
        # a probe only: states not confirmed tight are reported, never failed
        found = tightness_probe(an, alpha, args.tight_alpha, args.len)
        rec["tightness"] = {"probed": len(found), "confirmed": sum(all(v) for v in found.values())}
        text += f"\ntightness at {args.tight_alpha}: {rec['tightness']['confirmed']} of {len(found)} states confirmed"
    return (OK if report.ok else FALSE), rec, text


def cmd_quotient(args):
    sst = make_initials_transient(trim(load(args.file)))
    try:
        q = quotient_word(sst, args.word, prune_dead=True)
    except ValueError as err:
        raise CliError(str(err)) from None
    if args.k is not None:
        q = prune_edges(annotated(q, args.alpha, args.max_states), args.k)
    rec = machine_result(q, [f"left quotient by {args.word}"])
    return OK, rec, rec["machine"]


def cmd_prune(args):
    pruned = prune_edges(annotated(load(args.file), args.alpha, args.max_states), args.k)
    rec = machine_result(pruned, [f"pruned for {args.k}-valued"])
    return OK, rec, rec["machine"]


def cmd_tequiv(args):
    sst = trim(load(args.file))
    if not is_flow_normalized(sst):
        raise CliError("tequiv needs a flow-normalized machine; run `sst normalize` first")
    ts = sst.transitions
    for i in (args.t1, args.t2):
        if not 0 <= i < len(ts):
            raise CliError(f"transition index {i} out of range 0..{len(ts) - 1}")
    t1, t2 = ts[args.t1], ts[args.t2]
    if (t1.source, t1.label, t1.target) != (t2.source, t2.label, t2.target):
        raise CliError("transitions do not share source, label and target")
    an = annotated(sst, args.alpha, args.max_states)
    # compare every annotated copy of the pair
    verdicts = []
    for a in an.transitions:
        if (a.source.base, a.label, a.target.base, a.update) != (t1.source, t1.label, t1.target, t1.update):
            continue
        for b in an.transitions:
            if (b.source, b.target, b.update) == (a.source, a.target, t2.update):
                v = transitions_equiv(a, b, a.source.ax, a.target.ay, an.output_alphabet)
                rec = {"source": a.source.describe(), "target": a.target.describe(), "equivalent": v}
                if args.oracle is not None:
                    o = transitions_equiv_oracle(an, a, b, args.oracle)
                    rec.update(oracle=o.equivalent, contexts=o.contexts, differing=o.differing)
                verdicts.append(rec)
    # with no parallel annotated copy the annotation itself separates the pair
    ok = bool(verdicts) and all(v["equivalent"] for v in verdicts)
    rec = {"t1": str(t1), "t2": str(t2), "equivalent": ok, "copies": verdicts}
    lines = [f"{'equivalent' if ok else 'not equivalent'}: {t1}  vs  {t2}"]
    if not verdicts:
        lines.append("  no annotated copy of the pair is parallel: the approximants already separate them")
    lines += [f"  {'=' if v['equivalent'] else '≠'} at {v['source']} -> {v['target']}" for v in verdicts]
    return (OK if ok else FALSE), rec, "\n".join(lines)


def cmd_equiv(args):
    report = equiv_bounded(load(args.file), load(args.file2), args.bound)
    rec = {"equivalent": report.equivalent, "witness": report.witness,
           "outputs1": sorted(report.outputs1), "outputs2": sorted(report.outputs2)}
    text = "equivalent" if report.equivalent else (
        f"differ on {report.witness}: {sorted(report.outputs1)} vs {sorted(report.outputs2)}")
    return (OK if report.equivalent else FALSE), rec, text


def cmd_kvalued(args):
    report = is_k_valued_bounded(load(args.file), args.k, args.len)
    rec = {"ok": report.ok, "witness": report.witness, "outputs": sorted(report.outputs)}
    text = f"{args.k}-valued up to length {args.len}" if report.ok else (
        f"witness {report.witness} has {len(report.outputs)} outputs: {sorted(report.outputs)}")
    return (OK if report.ok else FALSE), rec, text


def cmd_schema(args):
    sst = load(args.file)
    schema = schema_of(sst, args.prefix)
    assert serialize_sst(concretize(schema)) == serialize_sst(sst)
    notes = [f"{x} = {v}" for x, v in sorted(schema.phi.items())]
    rec = {"schema": serialize_sst(schema.sst, notes), "phi": {str(x): v for x, v in sorted(schema.phi.items())}}
    return OK, rec, rec["schema"]


def cmd_weq_solve(args):
    try:
        system = parse_system(read_text(args.file))
    except ValueError as err:
        raise CliError(str(err)) from None
    budget = budget_ms()
    if args.nielsen:
        if len(system.clauses) > 1 or any(len(c.options) != 1 for c in system.clauses):
            raise CliError("--nielsen takes a plain conjunction of equations")
        eqs = system.clauses[0].options[0] if system.clauses else ()
        res = solve_nielsen(eqs, args.depth, budget)
        sigma = res.witness
        status = res.status
    else:
        try:
            sigma = solve_bounded(system, args.bounded, budget_ms=budget)
        except BudgetExceeded:
            raise BudgetError("budget exhausted") from None
        status = "sat" if sigma is not None else "none-within-bound"
    rec = {"status": status, "assignment": None if sigma is None else {str(x): v for x, v in sorted(sigma.items())}}
    lines = [status] + [f"{x} = {v or 'ε'}" for x, v in (rec["assignment"] or {}).items()]
    if sigma is not None:
        assert satisfies(sigma, system)
    code = {"sat": OK, "unsat": FALSE, "none-within-bound": FALSE}.get(status, BUDGET)
    return code, rec, "\n".join(lines)


def cmd_testset(args):
    s1 = schema_of(load(args.file), "U", "1")
    s2 = s1 if args.file2 is None else schema_of(load(args.file2), "V", "2")
    report = testset_fixpoint(s1, s2, args.k, args.n, args.bound, budget_ms=budget_ms())
    rec = {"verdict": report.verdict, "checked": report.checked,
           "witness": None if report.witness is None else {str(x): v for x, v in sorted(report.witness.items())}}
    lines = [report.verdict, f"assignments checked: {report.checked}"]
    if args.show_system and report.system_next is not None:
        lines.append(format_system(report.system_next).rstrip())
    if report.witness:
        lines += [f"{x} = {v or 'ε'}" for x, v in rec["witness"].items()]
    code = {"fixpoint": OK, "not-fixpoint": FALSE}.get(report.verdict, BUDGET)
    return code, rec, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON record")
    annot = argparse.ArgumentParser(add_help=False)
    annot.add_argument("--alpha", type=int, default=None, help="approximation bound (default: capacity)")
    annot.add_argument("--max-states", type=int, default=200000, help="limit on annotation size")

    parser = argparse.ArgumentParser(prog="sst", description="Streaming string transducer toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, parents=()):
        p = sub.add_parser(name, parents=[common, *parents], help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = add("check", cmd_check, "parse and validate a machine")
    p.add_argument("file")
    p = add("eval", cmd_eval, "outputs on one input")
    p.add_argument("file")
    p.add_argument("input")
    p = add("trim", cmd_trim, "drop useless states")
    p.add_argument("file")
    p = add("normalize", cmd_normalize, "flow-normalize")
    p.add_argument("file")
    p = add("annotate", cmd_annotate, "annotate states with approximants", [annot])
    p.add_argument("file")
    p = add("admits-check", cmd_admits_check, "check annotations against short runs", [annot])
    p.add_argument("file")
    p.add_argument("--len", type=int, default=6)
    p.add_argument("--tight-alpha", type=int, default=None, metavar="B",
                   help="also probe whether the annotation is stable at the larger bound B")
    p = add("quotient", cmd_quotient, "left quotient by an input word", [annot])
    p.add_argument("file")
    p.add_argument("--word", required=True)
    p.add_argument("--k", type=int, default=None, help="also prune parallel edges for k-valued machines")
    p = add("prune", cmd_prune, "remove interchangeable parallel transitions", [annot])
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    p = add("tequiv", cmd_tequiv, "compare two parallel transitions (indices in file order)", [annot])
    p.add_argument("file")
    p.add_argument("t1", type=int)
    p.add_argument("t2", type=int)
    p.add_argument("--oracle", type=int, default=None, metavar="L", help="also compare outputs over contexts up to L")
    p = add("equiv", cmd_equiv, "compare two machines on short inputs")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("file")
    p.add_argument("file2")
    p = add("kvalued", cmd_kvalued, "at most k outputs per short input?")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--len", type=int, required=True)
    p.add_argument("file")
    p = add("schema", cmd_schema, "replace update constants by unknowns")
    p.add_argument("file")
    p.add_argument("--prefix", default="U")
    weq = sub.add_parser("weq", help="word equations")
    weq_sub = weq.add_subparsers(dest="weq_command", required=True)
    p = weq_sub.add_parser("solve", parents=[common], help="solve a .weq system")
    p.set_defaults(handler=cmd_weq_solve)
    p.add_argument("file")
    how = p.add_mutually_exclusive_group()
    how.add_argument("--nielsen", action="store_true")
    how.add_argument("--bounded", type=int, default=4, metavar="B")
    p.add_argument("--depth", type=int, default=64)
    p = add("testset", cmd_testset, "does length n+1 add constraints to the equation system?")
    p.add_argument("file")
    p.add_argument("file2", nargs="?", help="second machine (default: the first, sharing unknowns)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--show-system", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        code, rec, text = args.handler(args)
    except CliError as err:
        code, rec, text = USAGE, {"error": str(err)}, f"error: {err}"
    except BudgetError as err:
        code, rec, text = BUDGET, {"error": str(err)}, f"budget: {err}"
    if args.json:
        rec = {"command": args.command if args.command != "weq" else "weq solve", "exit": code, **rec}
        print(json.dumps(rec, indent=2, sort_keys=True))
    else:
        print(text, file=sys.stderr if code in (USAGE, BUDGET) else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
