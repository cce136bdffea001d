"""Truth-functional semantics: Dunn four-valued models, the 4-valued and
G3 tables for the two-state Kripke case, and the non-triviality table.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .syntax import (
    Atom, Bot, Exists, Forall, Formula, Imp, Meta, MetaInst, Neg, And, Or, Signature,
    TermMeta, Var, render,
)
from .verdict import Status, Verdict

__all__ = [
    "DunnValue", "T", "B", "N", "F", "DunnModel", "eval_dunn", "dunn_consequence",
    "enumerate_dunn_models", "DunnBatch",
    "FourValue", "ThreeValue", "eval_four", "eval_g3", "consequence_four", "consequence_g3",
    "MatrixBatch", "nontrivial_eval", "assignments", "is_propositional",
]


class EvaluationError(ValueError):
    pass


# --------------------------------------------------------------------- Dunn

@dataclass(frozen=True)
class DunnValue:
    """A subset of {1, 0}: ``has1`` is truth, ``has0`` falsity."""
    has1: bool
    has0: bool

    @property
    def designated(self) -> bool:
        return self.has1

    def __str__(self) -> str:
        return {(True, False): "T", (True, True): "B", (False, False): "N", (False, True): "F"}[
            (self.has1, self.has0)]

    @classmethod
    def parse(cls, text: str) -> "DunnValue":
        try:
            return _DUNN_BY_NAME[text.strip().upper()]
        except KeyError:
            raise ValueError(f"not a Dunn value: {text!r} (use T, B, N, F)") from None


T = DunnValue(True, False)
B = DunnValue(True, True)
N = DunnValue(False, False)
F = DunnValue(False, True)
DUNN_VALUES = (T, B, N, F)
_DUNN_BY_NAME = {"T": T, "B": B, "N": N, "F": F}


@dataclass(frozen=True, eq=True)
class DunnModel:
    """Domain plus extension/anti-extension per predicate; gaps and gluts allowed."""
    domain: tuple
    arities: Mapping[str, int]
    pos: Mapping[str, frozenset]
    neg: Mapping[str, frozenset]
    constants: frozenset = frozenset()

    def __post_init__(self):
        if not self.domain:
            raise ValueError("domain must be non-empty")
        missing = set(self.constants) - set(self.domain)
        if missing:
            raise ValueError(f"constants outside the domain: {sorted(missing)}")
        for table in (self.pos, self.neg):
            for pred, tuples in table.items():
                n = self.arities.get(pred)
                if n is None:
                    raise ValueError(f"undeclared predicate {pred}")
                for tup in tuples:
                    if len(tup) != n or any(d not in self.domain for d in tup):
                        raise ValueError(f"bad tuple {tup} for {pred}/{n}")

    @classmethod
    def from_assignment(cls, values: Mapping[str, DunnValue], domain=("d",)) -> "DunnModel":
        pos = {p: frozenset([()]) if v.has1 else frozenset() for p, v in values.items()}
        neg = {p: frozenset([()]) if v.has0 else frozenset() for p, v in values.items()}
        return cls(tuple(domain), {p: 0 for p in values}, pos, neg)

    def value_of(self, pred: str, tup: tuple) -> DunnValue:
        return DunnValue(tup in self.pos.get(pred, ()), tup in self.neg.get(pred, ()))

    def __hash__(self):
        return hash((self.domain, tuple(sorted(self.pos.items())), tuple(sorted(self.neg.items()))))


def _term_value(t, env: Mapping[str, str], domain=None) -> str:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvaluationError(f"free variable {t.name}") from None
    if isinstance(t, TermMeta):
        raise EvaluationError(f"uninstantiated term placeholder {t.name}")
    if domain is not None and t.name not in domain:
        raise EvaluationError(f"constant {t.name} is not in the domain")
    return t.name


def eval_dunn(model, formula: Formula, env: Optional[Mapping[str, str]] = None,
              metas: Optional[Mapping[str, Callable]] = None) -> DunnValue:
    """Interpretation of a sentence in a Dunn model.

    ``model`` is a :class:`DunnModel` or, for propositional input, a mapping
    from atom names straight to :class:`DunnValue`.  ``metas`` supplies values
    for schema placeholders as functions of the variable environment.
    """
    env = dict(env or {})
    if isinstance(model, DunnModel):
        return _dunn(model, formula, env, metas or {})
    return _dunn_prop(model, formula, metas or {})


def _dunn(m: DunnModel, f: Formula, env: dict, metas) -> DunnValue:
    if isinstance(f, Atom):
        if f.pred not in m.arities:
            raise EvaluationError(f"unknown predicate {f.pred}")
        if m.arities[f.pred] != len(f.args):
            raise EvaluationError(f"arity mismatch for {f.pred}")
        return m.value_of(f.pred, tuple(_term_value(t, env, m.domain) for t in f.args))
    if isinstance(f, Bot):
        return F
    if isinstance(f, Neg):
        v = _dunn(m, f.body, env, metas)
        return DunnValue(v.has0, v.has1)
    if isinstance(f, (And, Or, Imp)):
        a = _dunn(m, f.left, env, metas)
        b = _dunn(m, f.right, env, metas)
        return _dunn_binary(f, a, b)
    if isinstance(f, Forall):
        vals = [_dunn(m, f.body, {**env, f.var: d}, metas) for d in m.domain]
        return DunnValue(all(v.has1 for v in vals), any(v.has0 for v in vals))
    if isinstance(f, Exists):
        vals = [_dunn(m, f.body, {**env, f.var: d}, metas) for d in m.domain]
        return DunnValue(any(v.has1 for v in vals), all(v.has0 for v in vals))
    if isinstance(f, Meta):
        return metas[f.name](env)
    if isinstance(f, MetaInst):
        return metas[f.meta]({**env, f.var: _term_value(f.term, env, m.domain)})
    raise TypeError(f"not a formula: {f!r}")


def _dunn_binary(f, a: DunnValue, b: DunnValue) -> DunnValue:
    if isinstance(f, And):
        return DunnValue(a.has1 and b.has1, a.has0 or b.has0)
    if isinstance(f, Or):
        return DunnValue(a.has1 or b.has1, a.has0 and b.has0)
    return DunnValue((not a.has1) or b.has1, (not a.has0) and b.has0)


def _dunn_prop(values: Mapping[str, DunnValue], f: Formula, metas) -> DunnValue:
    if isinstance(f, Atom):
        if f.args:
            raise EvaluationError(f"first-order atom {render(f)} needs a DunnModel")
        try:
            return values[f.pred]
        except KeyError:
            raise EvaluationError(f"unassigned atom {f.pred}") from None
    if isinstance(f, Bot):
        return F
    if isinstance(f, Neg):
        v = _dunn_prop(values, f.body, metas)
        return DunnValue(v.has0, v.has1)
    if isinstance(f, (And, Or, Imp)):
        return _dunn_binary(f, _dunn_prop(values, f.left, metas), _dunn_prop(values, f.right, metas))
    if isinstance(f, Meta):
        return metas[f.name]({})
    raise EvaluationError(f"quantifier in propositional evaluation: {render(f)}")


def is_propositional(f: Formula) -> bool:
    from .syntax import subformulas
    return all(not (isinstance(g, Atom) and g.args) and not isinstance(g, (Forall, Exists))
               for g in subformulas(f))


def assignments(atoms: Sequence[str], values: Sequence) -> Iterator[dict]:
    """All assignments, first atom varying slowest."""
    for combo in itertools.product(values, repeat=len(atoms)):
        yield dict(zip(atoms, combo))


def _fresh_elements(k: int, taken) -> list:
    out, i = [], 1
    while len(out) < k:
        name = f"d{i}"
        if name not in taken:
            out.append(name)
        i += 1
    return out


def enumerate_dunn_models(sig: Signature, bound: int) -> Iterator[DunnModel]:
    """Every Dunn model over ``sig`` whose domain has at most ``bound`` elements."""
    consts = sorted(sig.constants)
    lo = max(1, len(consts))
    for n in range(lo, max(bound, lo) + 1):
        domain = tuple(consts + _fresh_elements(n - len(consts), set(consts)))
        slots = [(p, tup) for p in sorted(sig.predicates)
                 for tup in itertools.product(domain, repeat=sig.predicates[p])]
        for labels in itertools.product(DUNN_VALUES, repeat=len(slots)):
            pos: dict = {p: set() for p in sig.predicates}
            neg: dict = {p: set() for p in sig.predicates}
            for (p, tup), v in zip(slots, labels):
                if v.has1:
                    pos[p].add(tup)
                if v.has0:
                    neg[p].add(tup)
            yield DunnModel(domain, dict(sig.predicates),
                            {p: frozenset(s) for p, s in pos.items()},
                            {p: frozenset(s) for p, s in neg.items()},
                            frozenset(consts))


class DunnBatch:
    """Propositional Dunn evaluation over all 4^n assignments at once.

    Each formula maps to a pair of boolean arrays (truth, falsity) indexed by
    assignment number, in the order of :func:`assignments`.
    """

    def __init__(self, atoms: Sequence[str]):
        self.atoms = list(atoms)
        n = len(self.atoms)
        idx = np.arange(4 ** n)
        self.size = 4 ** n
        self._atom = {}
        for i, a in enumerate(self.atoms):
            code = (idx // 4 ** (n - 1 - i)) % 4
            vals = np.array(DUNN_VALUES, dtype=object)[code]
            self._atom[a] = (np.array([v.has1 for v in vals], dtype=bool),
                             np.array([v.has0 for v in vals], dtype=bool))
        self._zeros = np.zeros(self.size, dtype=bool)
        self._ones = np.ones(self.size, dtype=bool)
        self._memo: dict = {}

    def assignment(self, k: int) -> dict:
        return {a: DunnValue(bool(t[k]), bool(f[k])) for a, (t, f) in self._atom.items()}

    def value(self, f: Formula):
        hit = self._memo.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Atom):
            if f.args or f.pred not in self._atom:
                raise EvaluationError(f"atom {render(f)} not in {self.atoms}")
            out = self._atom[f.pred]
        elif isinstance(f, Bot):
            out = (self._zeros, self._ones)
        elif isinstance(f, Neg):
            t, fa = self.value(f.body)
            out = (fa, t)
        elif isinstance(f, (And, Or, Imp)):
            at, af = self.value(f.left)
            bt, bf = self.value(f.right)
            if isinstance(f, And):
                out = (at & bt, af | bf)
            elif isinstance(f, Or):
                out = (at | bt, af & bf)
            else:
                out = (~at | bt, ~af & bf)
        else:
            raise EvaluationError(f"not propositional: {render(f)}")
        self._memo[f] = out
        return out

    def designated(self, f: Formula) -> np.ndarray:
        return self.value(f)[0]


def _prop_atoms(formulas: Iterable[Formula]) -> list:
    sig = Signature.of(formulas)
    return sorted(sig.predicates)


def dunn_consequence(gamma: Sequence[Formula], conclusion: Formula, bound: int = 2) -> Verdict:
    """BD+ consequence: exact for propositional input, bounded otherwise."""
    formulas = list(gamma) + [conclusion]
    for f in formulas:
        if f.fv:
            raise EvaluationError(f"free variables in {render(f)}")
    if all(is_propositional(f) for f in formulas):
        batch = DunnBatch(_prop_atoms(formulas))
        ok = np.ones(batch.size, dtype=bool)
        for g in gamma:
            ok &= batch.designated(g)
        bad = np.flatnonzero(ok & ~batch.designated(conclusion))
        if bad.size:
            return Verdict(Status.COUNTERMODEL, batch.assignment(int(bad[0])), batch.size)
        return Verdict(Status.VALID, None, batch.size)
    if bound < 1:
        raise ValueError("domain bound must be at least 1")
    sig = Signature.of(formulas)
    searched = 0
    for m in enumerate_dunn_models(sig, bound):
        searched += 1
        if all(eval_dunn(m, g).has1 for g in gamma) and not eval_dunn(m, conclusion).has1:
            return Verdict(Status.COUNTERMODEL, m, searched)
    return Verdict(Status.NONE_WITHIN_BOUNDS, None, searched)


# ------------------------------------------------------------ finite tables

class FourValue(enum.IntEnum):
    ONE = 0
    I = 1
    J = 2
    ZERO = 3

    def __str__(self) -> str:
        return "1ij0"[self.value]

    @classmethod
    def parse(cls, text: str) -> "FourValue":
        try:
            return cls("1ij0".index(text.strip().lower()))
        except ValueError:
            raise ValueError(f"not a four-valued truth value: {text!r} (use 1, i, j, 0)") from None


class ThreeValue(enum.IntEnum):
    ONE = 0
    I = 1
    ZERO = 2

    def __str__(self) -> str:
        return "1i0"[self.value]

    @classmethod
    def parse(cls, text: str) -> "ThreeValue":
        try:
            return cls("1i0".index(text.strip().lower()))
        except ValueError:
            raise ValueError(f"not a G3 truth value: {text!r} (use 1, i, 0)") from None


def _table(rows: str, carrier: str) -> np.ndarray:
    return np.array([[carrier.index(c) for c in row.split()] for row in rows.strip().split("\n")],
                    dtype=np.uint8)


# rows and columns in carrier order 1 i j 0
FOUR_AND = _table("""
1 i j 0
i i j 0
j j j 0
0 0 0 0""", "1ij0")
FOUR_OR = _table("""
1 1 1 1
1 i i i
1 i j j
1 i j 0""", "1ij0")
FOUR_IMP = _table("""
1 i j 0
1 1 j 0
1 1 1 1
1 1 1 1""", "1ij0")
FOUR_BNEG = np.array(["1ij0".index(c) for c in "0011"], dtype=np.uint8)
FOUR_SNEG = np.array(["1ij0".index(c) for c in "0ji1"], dtype=np.uint8)

G3_AND = _table("""
1 i 0
i i 0
0 0 0""", "1i0")
G3_OR = _table("""
1 1 1
1 i i
1 i 0""", "1i0")
G3_IMP = _table("""
1 i 0
1 1 0
1 1 1""", "1i0")
G3_BNEG = np.array(["1i0".index(c) for c in "001"], dtype=np.uint8)

# boolean negation is A -> 0; the printed tables must agree with that reading
assert (FOUR_IMP[:, FourValue.ZERO] == FOUR_BNEG).all()
assert (G3_IMP[:, ThreeValue.ZERO] == G3_BNEG).all()


def _eval_table(f: Formula, values, tables, bottom, metas, logic: str):
    and_, or_, imp, sneg = tables
    if isinstance(f, Atom):
        if f.args:
            raise EvaluationError(f"first-order atom {render(f)} in a propositional table")
        try:
            return values[f.pred]
        except KeyError:
            raise EvaluationError(f"unassigned atom {f.pred}") from None
    if isinstance(f, Bot):
        return bottom
    if isinstance(f, Neg):
        if sneg is None:
            raise EvaluationError(f"strong negation is not part of the {logic} language")
        return type(bottom)(int(sneg[_eval_table(f.body, values, tables, bottom, metas, logic)]))
    if isinstance(f, (And, Or, Imp)):
        a = _eval_table(f.left, values, tables, bottom, metas, logic)
        b = _eval_table(f.right, values, tables, bottom, metas, logic)
        tab = and_ if isinstance(f, And) else or_ if isinstance(f, Or) else imp
        return type(bottom)(int(tab[a, b]))
    if isinstance(f, Meta):
        return metas[f.name]({})
    raise EvaluationError(f"quantifier in propositional evaluation: {render(f)}")


def eval_four(formula: Formula, values: Mapping[str, FourValue], metas=None) -> FourValue:
    """Value under the 4-valued tables (``bot`` is 0)."""
    return _eval_table(formula, values, (FOUR_AND, FOUR_OR, FOUR_IMP, FOUR_SNEG),
                       FourValue.ZERO, metas or {}, "four-valued")


def eval_g3(formula: Formula, values: Mapping[str, ThreeValue], metas=None) -> ThreeValue:
    """Value under the three-valued Goedel tables; strong negation is rejected."""
    return _eval_table(formula, values, (G3_AND, G3_OR, G3_IMP, None),
                       ThreeValue.ZERO, metas or {}, "G3")


class MatrixBatch:
    """Vectorised table evaluation over every assignment of ``atoms``."""

    def __init__(self, atoms: Sequence[str], kind: str = "four"):
        if kind == "four":
            self.tables = (FOUR_AND, FOUR_OR, FOUR_IMP, FOUR_SNEG)
            self.carrier, self.bottom = FourValue, FourValue.ZERO
        elif kind == "g3":
            self.tables = (G3_AND, G3_OR, G3_IMP, None)
            self.carrier, self.bottom = ThreeValue, ThreeValue.ZERO
        else:
            raise ValueError(f"unknown matrix {kind!r}")
        self.kind = kind
        self.atoms = list(atoms)
        k, n = len(self.carrier), len(self.atoms)
        self.size = k ** n
        idx = np.arange(self.size)
        self._atom = {a: ((idx // k ** (n - 1 - i)) % k).astype(np.uint8)
                      for i, a in enumerate(self.atoms)}
        self._bot = np.full(self.size, int(self.bottom), dtype=np.uint8)
        self._memo: dict = {}

    def assignment(self, k: int) -> dict:
        return {a: self.carrier(int(v[k])) for a, v in self._atom.items()}

    def value(self, f: Formula) -> np.ndarray:
        hit = self._memo.get(f)
        if hit is not None:
            return hit
        and_, or_, imp, sneg = self.tables
        if isinstance(f, Atom):
            if f.args or f.pred not in self._atom:
                raise EvaluationError(f"atom {render(f)} not in {self.atoms}")
            out = self._atom[f.pred]
        elif isinstance(f, Bot):
            out = self._bot
        elif isinstance(f, Neg):
            if sneg is None:
                raise EvaluationError(f"strong negation is not part of the {self.kind} language")
            out = sneg[self.value(f.body)]
        elif isinstance(f, (And, Or, Imp)):
            tab = and_ if isinstance(f, And) else or_ if isinstance(f, Or) else imp
            out = tab[self.value(f.left), self.value(f.right)]
        else:
            raise EvaluationError(f"not propositional: {render(f)}")
        self._memo[f] = out
        return out

    def designated(self, f: Formula) -> np.ndarray:
        return self.value(f) == 0


def _table_consequence(gamma, conclusion, kind: str) -> Verdict:
    formulas = list(gamma) + [conclusion]
    bad = [f for f in formulas if not is_propositional(f)]
    if bad:
        raise EvaluationError(f"propositional input required: {render(bad[0])}")
    batch = MatrixBatch(_prop_atoms(formulas), kind)
    ok = np.ones(batch.size, dtype=bool)
    for g in gamma:
        ok &= batch.designated(g)
    fails = np.flatnonzero(ok & ~batch.designated(conclusion))
    if fails.size:
        return Verdict(Status.COUNTERMODEL, batch.assignment(int(fails[0])), batch.size)
    return Verdict(Status.VALID, None, batch.size)


def consequence_four(gamma: Sequence[Formula], conclusion: Formula) -> Verdict:
    """Exact consequence over the 4-valued tables, with a witnessing assignment."""
    return _table_consequence(gamma, conclusion, "four")


def consequence_g3(gamma: Sequence[Formula], conclusion: Formula) -> Verdict:
    return _table_consequence(gamma, conclusion, "g3")


def nontrivial_eval(formula: Formula, values: Mapping, metas=None, domain: Sequence[str] = (),
                   env: Optional[Mapping[str, str]] = None) -> int:
    """Classical two-valued tables, except every ``~B`` gets value 1.

    Propositional atoms are looked up by name.  For first-order input pass a
    ``domain``; ``values`` then maps ``(pred, elements)`` to 0/1 (missing
    tuples are 0) and quantifiers range over the domain.
    """
    env = env or {}
    f = formula
    if isinstance(f, Atom):
        if f.args:
            tup = tuple(_term_value(t, env) for t in f.args)
            return int(values.get((f.pred, tup), 0))
        return int(values[f.pred])
    if isinstance(f, Bot):
        return 0
    if isinstance(f, Neg):
        return 1
    if isinstance(f, (And, Or, Imp)):
        a = nontrivial_eval(f.left, values, metas, domain, env)
        b = nontrivial_eval(f.right, values, metas, domain, env)
        if isinstance(f, And):
            return a & b
        if isinstance(f, Or):
            return a | b
        return int((not a) or b)
    if isinstance(f, (Forall, Exists)):
        if not domain:
            raise EvaluationError(f"quantifier needs a domain: {render(f)}")
        vals = [nontrivial_eval(f.body, values, metas, domain, {**env, f.var: d}) for d in domain]
        return int(all(vals)) if isinstance(f, Forall) else int(any(vals))
    if isinstance(f, Meta):
        return (metas or {})[f.name](env)
    if isinstance(f, MetaInst):
        return (metas or {})[f.meta]({**env, f.var: _term_value(f.term, env)})
    raise TypeError(f"not a formula: {f!r}")
