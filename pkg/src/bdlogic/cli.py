"""Command-line front end.

Exit status: 0 for a definite positive answer, 1 for a definite negative
one such as a countermodel or a rejected proof, 2 when a bounded search is
inconclusive, 64 for usage errors and 65 for malformed input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .bridge import SEMANTICS as COMPARE_SEMANTICS
from .bridge import Bounds, compare_semantics, kripke_transfer_check, star_transfer_check
from .corpus import check as check_corpus_proof
from .corpus import load_corpus, mutations
from .enumeration import FRAGMENTS, enumerate_formulas
from .formats import (
    FormatError, describe, load_models, load_proof, witness_to_json,
)
from .hilbert import bounded_derive, check_proof, schema
from .kripke import (
    KripkeModel, LogicId, countermodel_search, force, random_models, validate,
)
from .matrices import (
    DunnModel, DunnValue, FourValue, ThreeValue, consequence_four, consequence_g3,
    dunn_consequence, eval_dunn, eval_four, eval_g3, nontrivial_eval,
)
from .star import StarModel, star_consequence_bounded, star_force
from .syntax import ParseError, e_set, parse, prime_translate, reduce, reduce_dn4, render
from .verdict import Status, Verdict

EX_USAGE, EX_DATAERR = 64, 65
LOGICS = [m.value for m in LogicId]
SEMANTICS = ("dunn", "star", "kripke", "matrix", "nontrivial")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


class Output:
    """Collects text lines and records; emits one or the other."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list = []
        self.records: list = []

    def text(self, line: str = "") -> None:
        self.lines.append(line)

    def record(self, **rec) -> None:
        self.records.append(rec)

    def flush(self, stream=None) -> None:
        stream = stream or sys.stdout
        if self.fmt == "records":
            for rec in self.records:
                stream.write(json.dumps(rec, sort_keys=True) + "\n")
        else:
            for line in self.lines:
                stream.write(line + "\n")


def default_semantics(logic: LogicId) -> str:
    if logic is LogicId.BDPLUS:
        return "dunn"
    if logic in (LogicId.I3G3, LogicId.G3):
        return "matrix"
    if logic is LogicId.BDI_CX:
        return "nontrivial"
    return "kripke"


def _logic(args) -> LogicId:
    return LogicId.parse(args.logic)


def _semantics(args, logic: LogicId) -> str:
    sem = args.semantics or default_semantics(logic)
    if sem == "matrix" and logic not in (LogicId.I3G3, LogicId.G3):
        raise UsageError(f"matrix semantics exists for i3g3 and g3, not {logic}")
    if sem in ("dunn", "star") and logic is not LogicId.BDPLUS:
        raise UsageError(f"{sem} semantics is for bd+, not {logic}")
    if sem == "kripke" and logic is LogicId.BDI_CX:
        raise UsageError("bdi-cx has no Kripke semantics")
    if sem == "nontrivial" and logic is not LogicId.BDI_CX:
        raise UsageError("the nontrivial table belongs to bdi-cx")
    return sem


def _assignment(text: Optional[str], parse_value) -> dict:
    out = {}
    for part in (text or "").split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise UsageError(f"bad assignment item {part!r}; use atom=value")
        k, v = part.split("=", 1)
        out[k.strip()] = parse_value(v.strip())
    return out


def _bit(v: str) -> int:
    if v not in ("0", "1"):
        raise ValueError(f"not a classical value: {v!r}")
    return int(v)


def _emit_verdict(out: Output, command: str, verdict: Verdict, logic, semantics, extra=None) -> int:
    status = verdict.status.value
    text = {Status.VALID: "valid", Status.COUNTERMODEL: "countermodel found",
            Status.NONE_WITHIN_BOUNDS: "no countermodel within bounds"}[verdict.status]
    out.text(f"{text} ({logic}, {semantics}, {verdict.searched} searched)")
    if verdict.witness is not None and verdict.status is Status.COUNTERMODEL:
        out.text(f"witness: {describe(verdict.witness)}")
    out.record(command=command, logic=str(logic), semantics=semantics, status=status,
               searched=verdict.searched, witness=witness_to_json(verdict.witness)
               if verdict.status is Status.COUNTERMODEL else None, **(extra or {}))
    return verdict.exit_code


# ------------------------------------------------------------------ commands

def cmd_eval(args, out: Output) -> int:
    logic = _logic(args)
    sem = _semantics(args, logic)
    f = parse(args.formula)
    if sem == "dunn" and not args.models:
        value = eval_dunn(_assignment(args.assign, DunnValue.parse), f)
        positive = value.has1
    elif sem == "matrix":
        if logic is LogicId.I3G3:
            value = eval_four(f, _assignment(args.assign, FourValue.parse))
        else:
            value = eval_g3(f, _assignment(args.assign, ThreeValue.parse))
        positive = int(value) == 0
    elif sem == "nontrivial":
        value = nontrivial_eval(f, _assignment(args.assign, _bit))
        positive = value == 1
    else:
        if not args.models:
            raise UsageError(f"{sem} evaluation needs --models FILE")
        models = load_models(args.models)
        m = models[args.index]
        if sem == "dunn":
            if not isinstance(m, DunnModel):
                raise UsageError("expected a Dunn model")
            value = eval_dunn(m, f)
            positive = value.has1
        elif sem == "star":
            if not isinstance(m, StarModel):
                raise UsageError("expected a star model")
            w = args.world or m.worlds[0]
            value = "1" if star_force(m, w, f) else "0"
            positive = value == "1"
        else:
            if not isinstance(m, KripkeModel):
                raise UsageError("expected a Kripke model")
            w = args.world or m.worlds[0]
            if w not in m.worlds:
                raise UsageError(f"no world {w!r} in the model")
            report = validate(m, logic)
            for v in report.violations:
                print(f"warning: {v}", file=sys.stderr)
            sf = force(m, w, f, logic)
            value = f"{sf} (true={int(sf.true)}, false={int(sf.false)})"
            positive = sf.true
    out.text(f"{render(f)} : {value}")
    out.record(command="eval", logic=str(logic), semantics=sem, formula=render(f), value=str(value),
               designated=bool(positive))
    return 0 if positive else 1


def _premises(args) -> list:
    return [parse(p) for p in (args.premise or [])]


def cmd_consequence(args, out: Output) -> int:
    logic = _logic(args)
    sem = _semantics(args, logic)
    gamma, a = _premises(args), parse(args.conclusion)
    extra = {"premises": [render(g) for g in gamma], "conclusion": render(a)}
    if sem == "dunn":
        v = dunn_consequence(gamma, a, bound=args.max_domain)
    elif sem == "star":
        v = star_consequence_bounded(gamma, a, args.max_worlds, args.max_domain)
    elif sem == "matrix":
        v = (consequence_four if logic is LogicId.I3G3 else consequence_g3)(gamma, a)
    elif sem == "nontrivial":
        raise UsageError("bdi-cx has no consequence semantics; use verify-axioms")
    else:
        v = countermodel_search(gamma, a, logic, args.max_worlds, args.max_domain)
        if v.status is Status.NONE_WITHIN_BOUNDS and args.budget > 0:
            proof = bounded_derive(gamma, a, logic, args.budget)
            if proof is not None:
                extra["proof_steps"] = len(proof.steps)
                out.text(f"derivation found ({len(proof.steps)} steps)")
                v = Verdict(Status.VALID, None, v.searched)
    return _emit_verdict(out, "consequence", v, logic, sem, extra)


def cmd_countermodel(args, out: Output) -> int:
    logic = _logic(args)
    sem = _semantics(args, logic)
    gamma, a = _premises(args), parse(args.conclusion)
    extra = {"premises": [render(g) for g in gamma], "conclusion": render(a)}
    if sem == "star":
        v = star_consequence_bounded(gamma, a, args.max_worlds, args.max_domain)
    elif sem == "dunn":
        v = dunn_consequence(gamma, a, bound=args.max_domain)
    elif sem == "matrix":
        v = (consequence_four if logic is LogicId.I3G3 else consequence_g3)(gamma, a)
    elif sem == "kripke":
        v = countermodel_search(gamma, a, logic, args.max_worlds, args.max_domain)
    else:
        raise UsageError("bdi-cx has no countermodel semantics")
    if v.status is Status.COUNTERMODEL and isinstance(v.witness, tuple):
        m = v.witness[0]
        worlds = getattr(m, "worlds", ())
        out.text(f"{len(worlds)} world(s)")
    return _emit_verdict(out, "countermodel", v, logic, sem, extra)


CHECKS = ("persistence", "decidedness", "reduction", "reduction-dn4")


def _population(args, logic: LogicId) -> list:
    if args.models:
        models = load_models(args.models)
        for i, m in enumerate(models):
            if not isinstance(m, KripkeModel):
                raise UsageError(f"model {i} is not a Kripke model")
        return models
    if args.random:
        return random_models(logic, args.random, args.seed, max_worlds=args.max_worlds,
                             max_domain=args.max_domain)
    raise UsageError("give --models FILE or --random COUNT")


def cmd_validate_model(args, out: Output) -> int:
    from .kripke import check_decidedness, check_persistence, check_reduction

    logic = _logic(args)
    models = _population(args, logic)
    bad = 0
    for i, m in enumerate(models):
        rep = validate(m, logic)
        if args.models or not rep.ok:
            out.text(f"model {i}: {'ok' if rep.ok else 'invalid'}")
            for v in rep.violations:
                out.text(f"  {v}")
        out.record(command="validate-model", logic=str(logic), model=i, ok=rep.ok,
                   violations=[str(v) for v in rep.violations])
        bad += not rep.ok
    if not args.models:
        out.text(f"{len(models) - bad}/{len(models)} models valid for {logic}")
    runs = {"persistence": (check_persistence, logic), "decidedness": (check_decidedness, logic),
            "reduction": (check_reduction, logic), "reduction-dn4": (check_reduction, LogicId.DN4)}
    for name in args.checks or ():
        fn, as_logic = runs[name]
        rep = fn(models, args.depth, as_logic)
        out.text(f"{name}: {rep.checked} sentences, {len(rep.violations)} violations")
        for v in rep.violations[:20]:
            out.text(f"  {v}")
        out.record(command="validate-model", check=name, logic=str(as_logic), depth=args.depth,
                   checked=rep.checked, violations=[str(v) for v in rep.violations])
        bad += not rep.ok
    return 1 if bad else 0


def cmd_check_proof(args, out: Output) -> int:
    if args.corpus:
        proofs = load_corpus()
    elif args.proof:
        proofs = [load_proof(path) for path in args.proof]
    else:
        raise UsageError("give --proof FILE or --corpus")
    code = 0
    for p in proofs:
        logic = args.logic or p.logic
        minimal = p.minimal if args.minimal is None else args.minimal
        goal = parse(args.goal) if args.goal else None
        premises = _premises(args) or list(p.premises)
        res = check_proof(premises, p, logic, goal=goal, minimal=minimal, cx_iff=args.cx_iff)
        rec = dict(command="check-proof", name=p.name, logic=str(logic), steps=len(p.steps),
                   accepted=res.accepted, step=res.step, reason=res.reason)
        line = f"{p.name or 'proof'} ({logic}, {len(p.steps)} steps): {res}"
        if args.mutants and res.accepted:
            ms = list(mutations(p))
            survivors = [d for d, m in ms if check_corpus_proof(m).accepted]
            rec.update(mutants=len(ms), survivors=survivors)
            line += f"; {len(ms) - len(survivors)}/{len(ms)} mutants rejected"
            if survivors:
                code = 1
        out.text(line)
        out.record(**rec)
        if not res.accepted:
            code = 1
    return code


TRANSLATIONS = ("reduce", "reduce-dn4", "prime", "e-set", "e-set-dn3", "render")


def cmd_translate(args, out: Output) -> int:
    f = parse(args.formula)
    if args.mode == "reduce":
        res = [reduce(f)]
    elif args.mode == "reduce-dn4":
        res = [reduce_dn4(f)]
    elif args.mode == "prime":
        res = [prime_translate(f)]
    elif args.mode == "e-set":
        res = list(e_set([f], "mh"))
    elif args.mode == "e-set-dn3":
        res = list(e_set([f], "dn3"))
    else:
        res = [f]
    for g in res:
        out.text(render(g))
    out.record(command="translate", mode=args.mode, input=render(f), output=[render(g) for g in res])
    return 0


def cmd_verify_axioms(args, out: Output) -> int:
    from . import soundness

    logic = _logic(args)
    sem = _semantics(args, logic)
    extra: dict = {}
    if args.schema and sem != "kripke":
        raise UsageError("--schema applies to Kripke sweeps")
    if sem == "dunn":
        rep = soundness.sweep_dunn(args.depth, tuple(range(1, args.max_domain + 1)))
    elif sem == "matrix":
        rep = soundness.sweep_tables(logic, args.depth)
        extra["mp_preserves"] = (soundness.mp_preserves_four() if logic is LogicId.I3G3
                                 else soundness.mp_preserves_g3())
    elif sem == "nontrivial":
        rep = soundness.sweep_nontrivial(args.depth, args.cx_iff, tuple(range(1, args.max_domain + 1)))
        witness = soundness.nontrivial_witness()
        extra["rules_preserve"] = soundness.nontrivial_rules_preserve()
        extra["p_gets_0"] = witness
    else:
        models = random_models(logic, args.models_count, args.seed, max_worlds=args.max_worlds,
                               max_domain=args.max_domain)
        schemas = [schema(sid) for sid in args.schema] if args.schema else None
        rep = soundness.sweep_kripke(logic, models, args.depth, args.minimal, schemas=schemas)
        extra["models"] = len(models)
    status = "sound" if rep.ok else "failures"
    out.text(f"{rep.name}: {rep.checked} instance checks, {len(rep.failures)} failures ({status})")
    for fl in rep.failures[:20]:
        out.text(f"  {fl}")
    for k, v in extra.items():
        out.text(f"{k}: {v}")
    out.record(command="verify-axioms", logic=str(logic), semantics=sem, checked=rep.checked,
               failures=[str(f) for f in rep.failures], failed_schemas=rep.failed_schemas(), **extra)
    ok = rep.ok and all(v for v in extra.values() if isinstance(v, bool))
    return 0 if ok else 1


def cmd_compare(args, out: Output) -> int:
    workers = int(os.environ.get("BDLOGIC_WORKERS", "1") or 1)
    atoms = [a.strip() for a in args.atoms.split(",") if a.strip()]
    rep = compare_semantics(args.left, args.right, args.depth,
                            Bounds(args.max_worlds, args.max_domain), atoms, args.fragment, workers)
    for line in rep.summary().splitlines():
        out.text(line)
    code = rep.exit_code
    transfers = []
    if args.transfer:
        pair = {rep.left, rep.right}
        if pair == {"dunn", "star"}:
            transfers = [star_transfer_check(atoms, args.depth)]
        elif pair == {"four", "i3g3"}:
            transfers = kripke_transfer_check(atoms, args.depth)
        else:
            raise UsageError("--transfer exists for dunn/star and four/i3g3")
        for t in transfers:
            out.text(f"transfer {t.name}: {t.checked} checks, {len(t.failures)} failures")
            for fl in t.failures[:20]:
                out.text(f"  {fl}")
            if not t.ok:
                code = 1
    paths = {}
    if args.out:
        from .report import write_report

        paths = {k: str(v) for k, v in write_report(rep, args.out).items()}
        for k, v in paths.items():
            out.text(f"{k}: {v}")
    out.record(command="compare", left=rep.left, right=rep.right, depth=rep.depth,
               fragment=rep.fragment, checked=rep.checked, agree=rep.counts["agree"],
               ties=rep.counts["tie"], hard=rep.counts["hard"],
               disagreements=[dict(formula=r.formula, left=r.left, right=r.right, kind=r.kind,
                                   witness=r.left_witness or r.right_witness) for r in rep.hard],
               transfer=[dict(name=t.name, checked=t.checked, failures=[str(f) for f in t.failures])
                         for t in transfers],
               files=paths)
    return code


def cmd_enumerate(args, out: Output) -> int:
    atoms = [a.strip() for a in args.atoms.split(",") if a.strip()]
    n = 0
    for f in enumerate_formulas(atoms, args.depth, args.fragment):
        n += 1
        if not args.count:
            out.text(render(f))
            out.record(formula=render(f))
    if args.count:
        out.text(str(n))
        out.record(command="enumerate", count=n)
    return 0


# -------------------------------------------------------------------- parser

def _bounds(p, worlds=3, domain=1):
    p.add_argument("--max-worlds", type=int, default=worlds)
    p.add_argument("--max-domain", type=int, default=domain)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bdlogic", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--format", choices=("text", "records"), default="text")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--format", choices=("text", "records"), default=argparse.SUPPRESS)
        return p

    p = add("eval", cmd_eval, "evaluate a formula in a model or under an assignment")
    p.add_argument("--logic", default="bd+", choices=LOGICS)
    p.add_argument("--semantics", choices=SEMANTICS)
    p.add_argument("--formula", required=True)
    p.add_argument("--assign", help="e.g. p=T,q=N (dunn), p=i (matrix), p=1 (nontrivial)")
    p.add_argument("--models", help="JSON model file")
    p.add_argument("--index", type=int, default=0, help="model index within the file")
    p.add_argument("--world")

    for name, fn, help_ in (("consequence", cmd_consequence, "decide or search Γ ⊨ A"),
                            ("countermodel", cmd_countermodel, "search for a countermodel")):
        p = add(name, fn, help_)
        p.add_argument("--logic", required=True, choices=LOGICS)
        p.add_argument("--semantics", choices=SEMANTICS)
        p.add_argument("--premise", action="append")
        p.add_argument("--conclusion", required=True)
        _bounds(p)
        if name == "consequence":
            p.add_argument("--budget", type=int, default=2000,
                           help="proof-search budget after an unsuccessful bounded search (0 disables)")

    p = add("validate-model", cmd_validate_model,
            "check frame conditions and structural properties of Kripke models")
    p.add_argument("--logic", required=True, choices=LOGICS)
    p.add_argument("--models", help="JSON model file")
    p.add_argument("--random", type=int, metavar="COUNT", help="use COUNT random validated models")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--checks", nargs="+", choices=CHECKS, default=())
    p.add_argument("--depth", type=int, default=3)
    _bounds(p, worlds=4, domain=3)

    p = add("check-proof", cmd_check_proof, "check Hilbert proofs")
    p.add_argument("--proof", action="append")
    p.add_argument("--corpus", action="store_true", help="check the shipped corpus")
    p.add_argument("--logic", choices=LOGICS)
    p.add_argument("--premise", action="append")
    p.add_argument("--goal")
    p.add_argument("--minimal", action="store_true", default=None)
    p.add_argument("--cx-iff", action="store_true")
    p.add_argument("--mutants", action="store_true", help="also check that every mutant is rejected")

    p = add("translate", cmd_translate, "reduction, primed translation, E-sets")
    p.add_argument("--mode", choices=TRANSLATIONS, default="reduce")
    p.add_argument("--formula", required=True)

    p = add("verify-axioms", cmd_verify_axioms, "soundness sweep of a logic's axioms")
    p.add_argument("--logic", required=True, choices=LOGICS)
    p.add_argument("--semantics", choices=SEMANTICS)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--models", dest="models_count", type=int, default=200,
                   help="number of random Kripke models")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--minimal", action="store_true")
    p.add_argument("--cx-iff", action="store_true")
    p.add_argument("--schema", action="append", help="sweep only these schema ids (Kripke)")
    _bounds(p, worlds=4, domain=2)

    p = add("compare", cmd_compare, "semantics agreement report")
    ids = ", ".join(COMPARE_SEMANTICS)
    p.add_argument("--left", required=True, help=f"one of {ids}")
    p.add_argument("--right", required=True, help="as --left")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--atoms", default="p,q")
    p.add_argument("--fragment", choices=FRAGMENTS, default="propositional")
    p.add_argument("--out", help="directory for the TSV, summary and chart")
    p.add_argument("--transfer", action="store_true", help="also check the model-conversion maps")
    _bounds(p, worlds=2)

    p = add("enumerate", cmd_enumerate, "list formulas of a fragment")
    p.add_argument("--atoms", default="p,q")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--fragment", choices=FRAGMENTS, default="propositional")
    p.add_argument("--count", action="store_true")
    return parser


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args.format)
    stderr = stderr or sys.stderr
    try:
        code = args.fn(args, out)
    except UsageError as exc:
        print(f"bdlogic {args.command}: {exc}", file=stderr)
        return EX_USAGE
    except (ParseError, FormatError, ValueError, KeyError, OSError) as exc:
        print(f"bdlogic {args.command}: {exc}", file=stderr)
        return EX_DATAERR
    out.flush(stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
