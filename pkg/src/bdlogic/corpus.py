"""The shipped proof corpus and a single-step mutation generator.

Every proof is written with :class:`ProofBuilder`, so axiom steps carry
explicit substitutions.  ``write_corpus`` regenerates the JSON files under
``data/proofs``; the tests check the files against the builders.
"""
from __future__ import annotations

import dataclasses
import json
from importlib import resources
from pathlib import Path
from typing import Callable, Iterator, Optional

from .formats import dump_json, proof_from_json, proof_to_json
from .hilbert import MP, Axiom, Gen, Hyp, Proof, ProofBuilder, Step, check_proof, schema
from .syntax import BOT, And, Formula, Imp, Neg, Or, bneg, parse, render

_BUILDERS: dict = {}


def _proof(fn: Callable[[], Proof]) -> Callable[[], Proof]:
    _BUILDERS[fn.__name__.replace("_", "-")] = fn
    return fn


def _rem_ax_lines(pb: ProofBuilder, a: Formula):
    """``neg (neg ~A & neg A)`` from i2 alone: i2 at ``neg A`` gives
    ``~neg A -> neg neg A``, and Ax15 with Ax19 turns ``neg ~A`` into ``~neg A``."""
    with pb.assume(And(bneg(Neg(a)), bneg(a))) as h:
        nsa = pb.and_left(h.line)
        na = pb.and_right(h.line)
        top = pb.mp(h.line, pb.axiom("Ax15", A=h.line.formula))
        both = pb.conj(nsa, top)
        ax19 = pb.axiom("Ax19", A=a, B=BOT)
        back = pb.and_right(ax19)
        sna = pb.mp(both, back)
        nna = pb.mp(sna, pb.axiom("i2", A=bneg(a)))
        pb.mp(na, nna)
    return h.result


@_proof
def identity() -> Proof:
    pb = ProofBuilder("bdi")
    pb.identity(parse("p"))
    return pb.build("identity")


@_proof
def rem_ax() -> Proof:
    pb = ProofBuilder("bdi3", minimal=True)
    _rem_ax_lines(pb, parse("p"))
    return pb.build("rem-ax")


@_proof
def ax15_top() -> Proof:
    pb = ProofBuilder("bdi")
    pp = pb.identity(parse("p"))
    pb.mp(pp, pb.axiom("Ax15", A=pp.formula))
    return pb.build("ax15-top")


@_proof
def excluded_middle_nn() -> Proof:
    """``neg neg (p | ~p)`` in BDi3 with i2 as the only extra axiom."""
    pb = ProofBuilder("bdi3", minimal=True)
    p = parse("p")
    key = _rem_ax_lines(pb, p)
    em = Or(p, Neg(p))
    with pb.assume(bneg(em)) as h:
        with pb.assume(p) as hp:
            pb.mp(pb.mp(hp.line, pb.axiom("Ax7", A=p, B=Neg(p))), h.line)
        with pb.assume(Neg(p)) as hn:
            pb.mp(pb.mp(hn.line, pb.axiom("Ax8", A=p, B=Neg(p))), h.line)
        both = pb.conj(hn.result, hp.result)
        pb.mp(both, key)
    return pb.build("excluded-middle-nn")


@_proof
def strong_to_weak() -> Proof:
    pb = ProofBuilder("bdi3", premises=[parse("~p")])
    pb.mp(pb.hyp(1), pb.axiom("i2", A="p"))
    return pb.build("strong-to-weak")


@_proof
def neg_imp_split() -> Proof:
    """From ``~(p -> q)`` infer ``~q`` through Ax19."""
    pb = ProofBuilder("bd+", premises=[parse("~(p -> q)")])
    ax = pb.axiom("Ax19", A="p", B="q")
    fwd = pb.and_left(ax)
    pb.and_right(pb.mp(pb.hyp(1), fwd))
    return pb.build("neg-imp-split")


@_proof
def de_morgan_and() -> Proof:
    pb = ProofBuilder("bdi", premises=[parse("~(p & q)")])
    pb.mp(pb.hyp(1), pb.and_left(pb.axiom("Ax17", A="p", B="q")))
    return pb.build("de-morgan-and")


@_proof
def double_strong() -> Proof:
    pb = ProofBuilder("bdi", premises=[parse("~~p")])
    pb.mp(pb.hyp(1), pb.and_left(pb.axiom("Ax16", A="p")))
    return pb.build("double-strong")


@_proof
def and_swap() -> Proof:
    pb = ProofBuilder("bdi")
    with pb.assume("p & q") as h:
        pb.conj(pb.and_right(h.line), pb.and_left(h.line))
    return pb.build("and-swap")


@_proof
def forall_instance() -> Proof:
    pb = ProofBuilder("bdi", premises=[parse("forall x. P(x)")])
    pb.mp(pb.hyp(1), pb.axiom("Ax14", A="P(x)", t="c"))
    return pb.build("forall-instance")


@_proof
def exists_intro() -> Proof:
    pb = ProofBuilder("bdi", premises=[parse("P(c)")])
    pb.mp(pb.hyp(1), pb.axiom("Ax11", A="P(x)", t="c"))
    return pb.build("exists-intro")


@_proof
def gen_identity() -> Proof:
    pb = ProofBuilder("bdi")
    pb.gen(pb.identity(parse("P(x)")), "x")
    return pb.build("gen-identity")


@_proof
def forall_under_hypothesis() -> Proof:
    """``q -> forall x. (P(x) -> P(x))``: Gen under Ax1, then Ax13."""
    pb = ProofBuilder("bdi")
    body = parse("P(x) -> P(x)")
    q = parse("q")
    lifted = pb.mp(pb.identity(parse("P(x)")), pb.axiom("Ax1", A=body, B=q))
    g = pb.gen(lifted, "x")
    pb.mp(g, pb.axiom("Ax13", A=body, B=q, x="x"))
    return pb.build("forall-under-hypothesis")


@_proof
def exists_elim() -> Proof:
    pb = ProofBuilder("bdi", premises=[parse("forall x. (P(x) -> q)")])
    pb.mp(pb.hyp(1), pb.axiom("Ax12", A="P(x)", B="q", y="x"))
    return pb.build("exists-elim")


def corpus_names() -> list:
    return list(_BUILDERS)


def build_corpus() -> list:
    return [fn() for fn in _BUILDERS.values()]


def corpus_dir() -> Path:
    return Path(str(resources.files("bdlogic") / "data" / "proofs"))


def write_corpus(directory: Optional[Path] = None) -> list:
    directory = Path(directory or corpus_dir())
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for p in build_corpus():
        path = directory / f"{p.name}.json"
        path.write_text(dump_json(proof_to_json(p)))
        paths.append(path)
    return paths


def load_corpus(directory: Optional[Path] = None) -> list:
    directory = Path(directory or corpus_dir())
    return [proof_from_json(json.loads(p.read_text())) for p in sorted(directory.glob("*.json"))]


def check(p: Proof):
    return check_proof(p.premises, p, p.logic, goal=p.conclusion, minimal=p.minimal)


# ---------------------------------------------------------------- mutants

def _perturb(f: Formula) -> list:
    out = [Neg(f), bneg(f)]
    if isinstance(f, Imp):
        out.append(Imp(f.right, f.left) if f.left != f.right else And(f.left, f.right))
    return out


def _replace(p: Proof, k: int, step: Step) -> Proof:
    steps = list(p.steps)
    steps[k - 1] = step
    return dataclasses.replace(p, steps=tuple(steps))


def mutations(p: Proof) -> Iterator[tuple]:
    """Yield ``(description, mutant)`` pairs, each changing exactly one step.

    Operators: perturb the step's formula; cite the step itself or swap the
    MP citations; point a hypothesis at a missing premise; generalise on a
    different variable; wrap a metavariable of an explicit substitution in
    ``~``.
    """
    for k, step in enumerate(p.steps, start=1):
        f, j = step.formula, step.just
        for g in _perturb(f):
            yield f"step {k}: formula -> {render(g)}", _replace(p, k, Step(g, j))
        if isinstance(j, MP):
            yield f"step {k}: swap MP citations", _replace(p, k, Step(f, MP(j.major, j.minor)))
            yield f"step {k}: MP cites itself", _replace(p, k, Step(f, MP(k, j.major)))
        elif isinstance(j, Hyp):
            yield f"step {k}: missing premise", _replace(p, k, Step(f, Hyp(len(p.premises) + 1)))
        elif isinstance(j, Gen):
            other = "y" if j.var != "y" else "z"
            yield f"step {k}: Gen on {other}", _replace(p, k, Step(f, Gen(j.step, other)))
            yield f"step {k}: Gen cites itself", _replace(p, k, Step(f, Gen(k, j.var)))
        elif isinstance(j, Axiom) and j.subst is not None:
            sub = dict(j.subst)
            meta = next(m for m in schema(j.schema).metas if m in sub)
            value = sub[meta]
            value = parse(value) if isinstance(value, str) else value
            sub[meta] = Neg(value)
            yield f"step {k}: {meta} -> ~{render(value)}", _replace(p, k, Step(f, Axiom.of(j.schema, sub)))
