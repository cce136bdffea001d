"""Hilbert systems: axiom schemata, instance matching, proof checking and a
small forward-chaining prover.

Schema patterns are ordinary formulas in which ``A``, ``B``, ``C`` are
metavariables, ``A(t)``/``A(y)`` stand for ``A`` with the pattern variable
replaced, and quantified variables are pattern variables.
"""
from __future__ import annotations

import itertools
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .kripke import LogicId
from .syntax import (
    BOT, And, Atom, Bot, Const, Exists, Forall, Formula, Imp, Meta, MetaInst, Neg, Or,
    TermMeta, Var, free_for, is_variable_name, parse, render, subformulas, substitute,
)


# ------------------------------------------------------------------ schemas

_METAS = ("A", "B", "C")


def _to_pattern(f: Formula) -> Formula:
    if isinstance(f, Atom) and f.pred in _METAS:
        return Meta(f.pred)
    if isinstance(f, Atom) and "__" in f.pred:
        meta, term = f.pred.split("__")
        return MetaInst(meta, "x", Var(term) if is_variable_name(term) else TermMeta(term))
    if isinstance(f, Neg):
        return Neg(_to_pattern(f.body))
    if isinstance(f, (And, Or, Imp)):
        return type(f)(_to_pattern(f.left), _to_pattern(f.right))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, _to_pattern(f.body))
    return f


@dataclass(frozen=True)
class Schema:
    id: str
    pattern: Formula
    text: str
    side: Optional[Callable] = field(default=None, compare=False, repr=False)

    @property
    def metas(self) -> tuple:
        out = []
        for g in subformulas(self.pattern):
            name = g.name if isinstance(g, Meta) else g.meta if isinstance(g, MetaInst) else None
            if name and name not in out:
                out.append(name)
        return tuple(sorted(out))

    @property
    def variables(self) -> tuple:
        out = set()
        for g in subformulas(self.pattern):
            if isinstance(g, (Forall, Exists)):
                out.add(g.var)
            elif isinstance(g, MetaInst):
                out.add(g.var)
                if isinstance(g.term, Var):
                    out.add(g.term.name)
        return tuple(sorted(out))

    @property
    def terms(self) -> tuple:
        return tuple(sorted({g.term.name for g in subformulas(self.pattern)
                             if isinstance(g, MetaInst) and isinstance(g.term, TermMeta)}))

    def __str__(self) -> str:
        return f"{self.id}: {self.text}"


def _t_free(s) -> Optional[str]:
    if not free_for(s["t"], s["x"], s["A"]):
        return f"{s['t']} is not free for {s['x']} in {render(s['A'])}"
    return None


def _x_not_in_b(s) -> Optional[str]:
    if s["x"] in s["B"].fv:
        return f"{s['x']} occurs free in {render(s['B'])}"
    return None


def _ax12_side(s) -> Optional[str]:
    bad = _x_not_in_b(s)
    if bad:
        return bad
    x, y, a = s["x"], s["y"], s["A"]
    if y != x and y in a.fv:
        return f"{y} already occurs free in {render(a)}"
    if not free_for(Var(y), x, a):
        return f"{y} is not free for {x} in {render(a)}"
    return None


_SCHEMA_TEXT = [
    ("Ax1", "A -> (B -> A)", None),
    ("Ax2", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))", None),
    ("Ax3", "((A -> B) -> A) -> A", None),
    ("Ax4", "A & B -> A", None),
    ("Ax5", "A & B -> B", None),
    ("Ax6", "(C -> A) -> ((C -> B) -> (C -> A & B))", None),
    ("Ax7", "A -> A | B", None),
    ("Ax8", "B -> A | B", None),
    ("Ax9", "(A -> C) -> ((B -> C) -> (A | B -> C))", None),
    ("Ax10", "bot -> A", None),
    ("Ax11", "A(t) -> exists x. A", _t_free),
    ("Ax12", "(forall x. A -> B) -> ((exists y. A(y)) -> B)", _ax12_side),
    ("Ax13", "(forall x. B -> A) -> (B -> forall x. A)", _x_not_in_b),
    ("Ax14", "(forall x. A) -> A(t)", _t_free),
    ("Ax15", "A -> ~bot", None),
    ("Ax16", "~~A <-> A", None),
    ("Ax17", "~(A & B) <-> ~A | ~B", None),
    ("Ax18", "~(A | B) <-> ~A & ~B", None),
    ("Ax19", "~(A -> B) <-> neg ~A & ~B", None),
    ("Ax20", "~(forall x. A) <-> exists x. ~A", None),
    ("Ax21", "~(exists x. A) <-> forall x. ~A", None),
    ("i1", "(forall x. neg neg A) -> neg neg forall x. A", None),
    ("i2", "~A -> neg A", None),
    ("i3", "neg neg (A | ~A)", None),
    ("AxG", "A | (A -> B) | neg B", None),
    ("DN-neg-imp", "~(A -> B) <-> neg neg A & ~B", None),
    ("Cx-neg-imp", "~(A -> B) -> (neg ~A -> ~B)", None),
    ("Cx-neg-imp-iff", "~(A -> B) <-> (neg ~A -> ~B)", None),
]


def _pattern(text: str) -> Formula:
    # A(t) is written A__t so the parser sees a separate nullary atom
    for m in _METAS:
        for v in ("t", "y"):
            text = text.replace(f"{m}({v})", f"{m}__{v}")
    return _to_pattern(parse(text))


SCHEMAS = {sid: Schema(sid, _pattern(text), text, side) for sid, text, side in _SCHEMA_TEXT}


def schema(sid: str) -> Schema:
    try:
        return SCHEMAS[sid]
    except KeyError:
        raise KeyError(f"unknown schema {sid!r}") from None


_BD = [f"Ax{i}" for i in range(1, 22)]
_BDI = [s for s in _BD if s != "Ax3"]


def axiom_ids(logic, minimal: bool = False, cx_iff: bool = False) -> list:
    """Schema identifiers of ``logic``.

    ``minimal`` keeps only i2 of the three BDi3 extras (i1 and i3 are
    derivable from it); ``cx_iff`` selects the biconditional reading of the
    connexive replacement for Ax19.
    """
    logic = LogicId.parse(logic)
    if logic is LogicId.BDPLUS:
        return list(_BD)
    if logic is LogicId.BDI:
        return list(_BDI)
    if logic in (LogicId.BDI3, LogicId.I3G3):
        extra = ["i2"] if minimal else ["i1", "i2", "i3"]
        return _BDI + extra + (["AxG"] if logic is LogicId.I3G3 else [])
    if logic in (LogicId.DN4, LogicId.DN3):
        base = [("DN-neg-imp" if s == "Ax19" else s) for s in _BDI]
        return base + (["i2"] if logic is LogicId.DN3 else [])
    if logic is LogicId.BDI_CX:
        repl = "Cx-neg-imp-iff" if cx_iff else "Cx-neg-imp"
        return [(repl if s == "Ax19" else s) for s in _BDI]
    if logic is LogicId.MH:
        return ["Ax1", "Ax2"] + [f"Ax{i}" for i in range(4, 16)] + ["i1"]
    if logic is LogicId.G3:
        return ["Ax1", "Ax2"] + [f"Ax{i}" for i in range(4, 11)] + ["AxG"]
    raise ValueError(f"no axiom set for {logic}")


def axiom_set(logic, minimal: bool = False, cx_iff: bool = False) -> list:
    return [SCHEMAS[s] for s in axiom_ids(logic, minimal, cx_iff)]


# ------------------------------------------------------------------ matching

class _NoMatch(Exception):
    pass


def _bind(sub: dict, key, value) -> None:
    old = sub.get(key, value)
    if old != value:
        raise _NoMatch
    sub[key] = value


def _match(p: Formula, f: Formula, sub: dict, pending: list) -> None:
    if isinstance(p, Meta):
        _bind(sub, p.name, f)
        return
    if isinstance(p, MetaInst):
        pending.append((p, f))
        return
    if type(p) is not type(f):
        raise _NoMatch
    if isinstance(p, Bot):
        return
    if isinstance(p, Atom):
        if p != f:
            raise _NoMatch
        return
    if isinstance(p, Neg):
        _match(p.body, f.body, sub, pending)
        return
    if isinstance(p, (And, Or, Imp)):
        _match(p.left, f.left, sub, pending)
        _match(p.right, f.right, sub, pending)
        return
    if isinstance(p, (Forall, Exists)):
        _bind(sub, ("var", p.var), f.var)
        _match(p.body, f.body, sub, pending)
        return
    raise _NoMatch


def _find_term(a: Formula, target: Formula, x: str):
    """Term sitting in ``target`` where ``a`` has a free ``x`` (first such spot)."""
    if type(a) is not type(target):
        return None
    if isinstance(a, Atom):
        if a.pred != target.pred or len(a.args) != len(target.args):
            return None
        for s, t in zip(a.args, target.args):
            if isinstance(s, Var) and s.name == x:
                return t
        return None
    if isinstance(a, Neg):
        return _find_term(a.body, target.body, x)
    if isinstance(a, (And, Or, Imp)):
        return _find_term(a.left, target.left, x) or _find_term(a.right, target.right, x)
    if isinstance(a, (Forall, Exists)):
        if a.var == x:
            return None
        return _find_term(a.body, target.body, x)
    return None


def _solve_pending(pending: list, sub: dict) -> None:
    for p, f in pending:
        if p.meta not in sub or ("var", p.var) not in sub:
            raise _NoMatch
        a, x = sub[p.meta], sub[("var", p.var)]
        key = ("term", p.term.name) if isinstance(p.term, TermMeta) else ("var", p.term.name)
        if key in sub:
            t = sub[key]
            t = Var(t) if key[0] == "var" else t
        elif x not in a.fv:
            t = Var(x)
        else:
            t = _find_term(a, f, x)
            if t is None:
                raise _NoMatch
        if key[0] == "var":
            if not isinstance(t, Var):
                raise _NoMatch
            _bind(sub, key, t.name)
        else:
            _bind(sub, key, t)
        if not free_for(t, x, a) or substitute(a, x, t) != f:
            raise _NoMatch


def _public(sub: dict) -> dict:
    out = {}
    for k, v in sub.items():
        if isinstance(k, tuple):
            out[k[1]] = v
        else:
            out[k] = v
    return out


def match_schema(s: Union[Schema, str], formula: Formula) -> Optional[dict]:
    """Substitution ``σ`` with ``instantiate(s, σ) == formula``, or ``None``.

    Keys are metavariable names (to formulas), pattern variable names (to
    variable names) and ``t`` (to a term).
    """
    s = schema(s) if isinstance(s, str) else s
    sub: dict = {}
    pending: list = []
    try:
        _match(s.pattern, formula, sub, pending)
        _solve_pending(pending, sub)
    except _NoMatch:
        return None
    out = _public(sub)
    for v in s.variables:
        out.setdefault(v, v)
    if "t" in s.terms and "t" not in out:
        out["t"] = Var(out["x"])
    if s.side is not None and s.side(out):
        return None
    return out


class InstantiationError(ValueError):
    pass


def _coerce_subst(s: Schema, subst: Mapping) -> dict:
    out = {}
    for k, v in subst.items():
        if k in s.metas:
            out[k] = parse(v) if isinstance(v, str) else v
        elif k in s.variables:
            name = v.name if isinstance(v, Var) else str(v)
            if not is_variable_name(name):
                raise InstantiationError(f"{k} must be a variable, got {name}")
            out[k] = name
        elif k in s.terms:
            if isinstance(v, str):
                v = Var(v) if is_variable_name(v) else Const(v)
            out[k] = v
        else:
            raise InstantiationError(f"{s.id} has no parameter {k!r}")
    missing = [m for m in s.metas if m not in out]
    if missing:
        raise InstantiationError(f"{s.id}: no value for {missing}")
    for v in s.variables:
        out.setdefault(v, v)
    for t in s.terms:
        out.setdefault(t, Var(out["x"]))
    return out


def instantiate(s: Union[Schema, str], subst: Mapping) -> Formula:
    """Apply a substitution to a schema, enforcing its side condition."""
    s = schema(s) if isinstance(s, str) else s
    sub = _coerce_subst(s, subst)
    if s.side is not None:
        reason = s.side(sub)
        if reason:
            raise InstantiationError(f"{s.id}: {reason}")

    def go(p):
        if isinstance(p, Meta):
            return sub[p.name]
        if isinstance(p, MetaInst):
            t = sub[p.term.name] if isinstance(p.term, TermMeta) else Var(sub[p.term.name])
            return substitute(sub[p.meta], sub[p.var], t)
        if isinstance(p, Neg):
            return Neg(go(p.body))
        if isinstance(p, (And, Or, Imp)):
            return type(p)(go(p.left), go(p.right))
        if isinstance(p, (Forall, Exists)):
            return type(p)(sub[p.var], go(p.body))
        return p

    return go(s.pattern)


# -------------------------------------------------------------------- proofs

@dataclass(frozen=True)
class Hyp:
    index: int


@dataclass(frozen=True)
class Axiom:
    schema: str
    subst: Optional[tuple] = None

    @classmethod
    def of(cls, schema_id: str, subst: Optional[Mapping] = None) -> "Axiom":
        if subst is None:
            return cls(schema_id, None)
        norm = {}
        for k, v in subst.items():
            if isinstance(v, str) and k in _METAS:
                v = parse(v)
            elif isinstance(v, str) and k == "t":
                v = Var(v) if is_variable_name(v) else Const(v)
            norm[k] = v
        return cls(schema_id, tuple(sorted(norm.items(), key=lambda kv: kv[0])))


@dataclass(frozen=True)
class MP:
    minor: int
    major: int


@dataclass(frozen=True)
class Gen:
    step: int
    var: str


@dataclass(frozen=True)
class Step:
    formula: Formula
    just: object


@dataclass(frozen=True)
class Proof:
    steps: tuple
    premises: tuple = ()
    logic: str = "bdi"
    minimal: bool = False
    name: str = ""

    @property
    def conclusion(self) -> Optional[Formula]:
        return self.steps[-1].formula if self.steps else None


@dataclass(frozen=True)
class ProofCheck:
    accepted: bool
    step: Optional[int] = None
    reason: str = ""

    @property
    def exit_code(self) -> int:
        return 0 if self.accepted else 1

    def __str__(self) -> str:
        if self.accepted:
            return "accepted"
        return f"rejected at step {self.step}: {self.reason}"


def _term_str(t) -> str:
    return t.name


def _justify(k: int, step: Step, gamma: Sequence[Formula], steps: Sequence[Step],
             allowed: set) -> Optional[str]:
    j, f = step.just, step.formula
    if isinstance(j, Hyp):
        if not 1 <= j.index <= len(gamma):
            return f"no premise {j.index}"
        if gamma[j.index - 1] != f:
            return f"premise {j.index} is {render(gamma[j.index - 1])}, not {render(f)}"
        return None
    if isinstance(j, Axiom):
        if j.schema not in allowed:
            return f"{j.schema} is not an axiom of this logic"
        if j.subst is None:
            return None if match_schema(j.schema, f) is not None else f"not an instance of {j.schema}"
        try:
            inst = instantiate(j.schema, dict(j.subst))
        except (InstantiationError, ValueError) as exc:
            return str(exc)
        return None if inst == f else f"{j.schema} instance is {render(inst)}, not {render(f)}"
    if isinstance(j, MP):
        for ref in (j.minor, j.major):
            if not 1 <= ref < k:
                return f"MP cites step {ref}, which is not an earlier step"
        minor, major = steps[j.minor - 1].formula, steps[j.major - 1].formula
        if major != Imp(minor, f):
            return f"step {j.major} is not {render(minor)} -> {render(f)}"
        return None
    if isinstance(j, Gen):
        if not 1 <= j.step < k:
            return f"Gen cites step {j.step}, which is not an earlier step"
        if not is_variable_name(j.var):
            return f"{j.var} is not a variable"
        if f != Forall(j.var, steps[j.step - 1].formula):
            return f"Gen on step {j.step} gives forall {j.var}. {render(steps[j.step - 1].formula)}"
        return None
    return f"unknown justification {j!r}"


def check_proof(gamma: Sequence[Formula], proof: Union[Proof, Sequence[Step]], logic="bdi",
                goal: Optional[Formula] = None, minimal: bool = False,
                cx_iff: bool = False) -> ProofCheck:
    """Accept iff every step follows from Γ, the logic's axioms, MP and Gen."""
    steps = proof.steps if isinstance(proof, Proof) else tuple(proof)
    if not steps:
        return ProofCheck(False, 0, "empty proof")
    allowed = set(axiom_ids(logic, minimal, cx_iff))
    for k, step in enumerate(steps, start=1):
        reason = _justify(k, step, gamma, steps, allowed)
        if reason:
            return ProofCheck(False, k, reason)
    if goal is not None and steps[-1].formula != goal:
        return ProofCheck(False, len(steps), f"proof ends in {render(steps[-1].formula)}, not the goal")
    return ProofCheck(True)


# ----------------------------------------------------------- proof builder

class _Line:
    __slots__ = ("frame", "index", "formula")

    def __init__(self, frame, index, formula):
        self.frame, self.index, self.formula = frame, index, formula


class _Frame:
    def __init__(self, parent, assumption):
        self.parent = parent
        self.assumption = assumption
        self.lines: list = []     # (formula, kind, payload)
        self.handles: list = []


class ProofBuilder:
    """Write proofs with hypothetical reasoning; ``assume`` blocks are
    compiled away by the deduction theorem (identity, Ax1 lifting, Ax2 for
    MP, Ax13 for Gen)."""

    def __init__(self, logic="bdi", premises: Sequence[Formula] = (), minimal: bool = False):
        self.logic = LogicId.parse(logic).value
        self.minimal = minimal
        self.premises = tuple(premises)
        self.root = _Frame(None, None)
        self.frame = self.root

    # primitive rules ------------------------------------------------------
    def _add(self, formula, kind, payload) -> _Line:
        fr = self.frame
        fr.lines.append((formula, kind, payload))
        h = _Line(fr, len(fr.lines) - 1, formula)
        fr.handles.append(h)
        return h

    def hyp(self, i: int) -> _Line:
        return self._add(self.premises[i - 1], "hyp", i)

    def axiom(self, sid: str, **subst) -> _Line:
        sub = {k: (parse(v) if isinstance(v, str) and k in _METAS else v) for k, v in subst.items()}
        return self._add(instantiate(sid, sub), "axiom", (sid, sub))

    def mp(self, minor: _Line, major: _Line) -> _Line:
        if not isinstance(major.formula, Imp) or major.formula.left != minor.formula:
            raise ValueError(f"MP mismatch: {render(minor.formula)} vs {render(major.formula)}")
        return self._add(major.formula.right, "mp", (minor, major))

    def gen(self, line: _Line, var: str) -> _Line:
        return self._add(Forall(var, line.formula), "gen", (line, var))

    @contextmanager
    def assume(self, formula):
        """Inside the block the assumption is a line; afterwards ``result``
        holds the discharged implication for the block's last line."""
        formula = parse(formula) if isinstance(formula, str) else formula
        box = _Discharge()
        inner = _Frame(self.frame, formula)
        self.frame = inner
        box.line = self._add(formula, "assume", None)
        try:
            yield box
        finally:
            self.frame = inner.parent
        if len(inner.lines) == 0:
            raise ValueError("empty assumption block")
        box.result = self._discharge(inner)

    def _discharge(self, inner: _Frame) -> _Line:
        a = inner.assumption
        image: dict = {}      # inner line index -> parent line proving a -> phi

        def lifted(h: _Line) -> _Line:
            if h.frame is inner:
                return image[h.index]
            # outer line: a -> phi by Ax1
            ax = self.axiom("Ax1", A=h.formula, B=a)
            return self.mp(h, ax)

        for idx, (phi, kind, payload) in enumerate(inner.lines):
            if kind == "assume":
                image[idx] = self.identity(a)
            elif kind in ("hyp", "axiom"):
                own = self._add(phi, kind, payload)
                image[idx] = self.mp(own, self.axiom("Ax1", A=phi, B=a))
            elif kind == "mp":
                minor, major = payload
                if minor.frame is not inner and major.frame is not inner:
                    image[idx] = lifted(self.mp(minor, major))
                    continue
                am, aj = lifted(minor), lifted(major)
                b, c = minor.formula, phi
                ax2 = self.axiom("Ax2", A=a, B=b, C=c)
                image[idx] = self.mp(am, self.mp(aj, ax2))
            elif kind == "gen":
                line, var = payload
                if line.frame is not inner:
                    image[idx] = lifted(self.gen(line, var))
                    continue
                if var in a.fv:
                    raise ValueError(f"cannot generalise {var}: free in the assumption")
                g = self.gen(lifted(line), var)
                ax13 = self.axiom("Ax13", A=line.formula, B=a, x=var)
                image[idx] = self.mp(g, ax13)
            else:
                raise ValueError(kind)
        return image[len(inner.lines) - 1]

    # derived rules --------------------------------------------------------
    def identity(self, a: Formula) -> _Line:
        """``a -> a`` in five steps."""
        s1 = self.axiom("Ax2", A=a, B=Imp(a, a), C=a)
        s2 = self.axiom("Ax1", A=a, B=Imp(a, a))
        s3 = self.mp(s2, s1)
        s4 = self.axiom("Ax1", A=a, B=a)
        return self.mp(s4, s3)

    def and_left(self, h: _Line) -> _Line:
        f = h.formula
        return self.mp(h, self.axiom("Ax4", A=f.left, B=f.right))

    def and_right(self, h: _Line) -> _Line:
        f = h.formula
        return self.mp(h, self.axiom("Ax5", A=f.left, B=f.right))

    def conj(self, ha: _Line, hb: _Line) -> _Line:
        """From ``A`` and ``B`` infer ``A & B`` via Ax6 with ``C := A``."""
        a, b = ha.formula, hb.formula
        ax6 = self.axiom("Ax6", A=a, B=b, C=a)
        step = self.mp(self.identity(a), ax6)
        ab = self.mp(hb, self.axiom("Ax1", A=b, B=a))
        return self.mp(ha, self.mp(ab, step))

    def chain(self, hab: _Line, hbc: _Line) -> _Line:
        """From ``A -> B`` and ``B -> C`` infer ``A -> C``."""
        with self.assume(hab.formula.left) as blk:
            self.mp(self.mp(blk.line, hab), hbc)
        return blk.result

    def build(self, name: str = "") -> Proof:
        if self.frame is not self.root:
            raise ValueError("unclosed assumption block")
        steps = []
        number = {}
        for idx, (phi, kind, payload) in enumerate(self.root.lines):
            if kind == "hyp":
                j = Hyp(payload)
            elif kind == "axiom":
                sid, sub = payload
                j = Axiom.of(sid, sub)
            elif kind == "mp":
                j = MP(number[payload[0].index], number[payload[1].index])
            elif kind == "gen":
                j = Gen(number[payload[0].index], payload[1])
            else:
                raise ValueError(kind)
            steps.append(Step(phi, j))
            number[idx] = len(steps)
        return Proof(tuple(steps), self.premises, self.logic, self.minimal, name)


class _Discharge:
    line: _Line = None
    result: _Line = None


# ------------------------------------------------------------ proof search

def _pool(formulas: Iterable[Formula]) -> list:
    seen, out = set(), []
    for f in formulas:
        for g in subformulas(f):
            if g not in seen:
                seen.add(g)
                out.append(g)
    if BOT not in seen:
        out.append(BOT)
    return sorted(out, key=lambda g: (len(render(g)), render(g)))


def _instances(s: Schema, pool: list, variables: list, terms: list) -> Iterable[tuple]:
    metas = s.metas
    pvars = s.variables
    for fill in itertools.product(pool, repeat=len(metas)):
        sub = dict(zip(metas, fill))
        for vfill in itertools.product(variables, repeat=len(pvars)):
            sub2 = dict(sub, **dict(zip(pvars, vfill)))
            for tfill in (itertools.product(terms, repeat=len(s.terms)) if s.terms else [()]):
                sub3 = dict(sub2, **dict(zip(s.terms, tfill)))
                try:
                    yield sub3, instantiate(s, sub3)
                except InstantiationError:
                    continue


def bounded_derive(gamma: Sequence[Formula], goal: Formula, logic="bdi", budget: int = 2000,
                   minimal: bool = False) -> Optional[Proof]:
    """Forward saturation: axiom instances over subformulas of Γ ∪ {goal},
    then modus ponens closure, until the goal (or its ``forall`` body for
    generalisation) appears or ``budget`` formulas are known.  Any returned
    proof has been re-checked by :func:`check_proof`.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    targets = [goal]
    g = goal
    while isinstance(g, Forall):
        g = g.body
        targets.append(g)
    pool = _pool(list(gamma) + [goal])
    variables = sorted({h.var for h in pool if isinstance(h, (Forall, Exists))}) or ["x"]
    terms = sorted({t for h in pool if isinstance(h, Atom) for t in h.args},
                   key=lambda t: (isinstance(t, Var), t.name))
    known: dict = {}            # formula -> (kind, payload)
    order: list = []

    def add(f, kind, payload) -> bool:
        if f in known:
            return False
        known[f] = (kind, payload)
        order.append(f)
        return True

    def found():
        for t in targets:
            if t in known:
                return t
        return None

    for i, h in enumerate(gamma, start=1):
        add(h, "hyp", i)
    for s in axiom_set(logic, minimal):
        for sub, inst in _instances(s, pool, variables, terms):
            add(inst, "axiom", (s.id, sub))
            if len(order) >= budget:
                break
        if len(order) >= budget:
            break
    hit = found()
    while hit is None and len(order) < budget:
        by_ante: dict = {}
        for f in order:
            if isinstance(f, Imp):
                by_ante.setdefault(f.left, []).append(f)
        new = []
        for f in order:
            for imp in by_ante.get(f, ()):
                if imp.right not in known:
                    new.append((imp.right, f, imp))
        if not new:
            break
        for c, minor, major in new:
            add(c, "mp", (minor, major))
            if len(order) >= budget:
                break
        hit = found()
    if hit is None:
        return None
    # extract the derivation of ``hit``, then generalise up to the goal
    steps: list = []
    number: dict = {}

    def emit(f):
        if f in number:
            return number[f]
        kind, payload = known[f]
        if kind == "hyp":
            j = Hyp(payload)
        elif kind == "axiom":
            j = Axiom.of(payload[0], payload[1])
        else:
            a, b = emit(payload[0]), emit(payload[1])
            j = MP(a, b)
        steps.append(Step(f, j))
        number[f] = len(steps)
        return number[f]

    emit(hit)
    cur = hit
    k = targets.index(hit)
    for outer in reversed(targets[:k]):
        steps.append(Step(outer, Gen(number[cur], outer.var)))
        number[outer] = len(steps)
        cur = outer
    proof = Proof(tuple(steps), tuple(gamma), LogicId.parse(logic).value, minimal)
    verdict = check_proof(gamma, proof, logic, goal=goal, minimal=minimal)
    if not verdict.accepted:
        raise AssertionError(f"bounded_derive produced an invalid proof: {verdict}")
    return proof
