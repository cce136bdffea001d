"""Kripke models for the intuitionistic relatives of BD+.

Two evaluators live here.  :func:`force` is a direct, recursive reading of
the forcing clauses (quantifiers substitute element names), kept deliberately
simple.  :class:`BatchForcing` evaluates formulas over a disjoint union of
many models at once with numpy masks; the sweeps and searches use it, and
the tests cross-check it against :func:`force`.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence

import numpy as np

from .enumeration import enumerate_formulas
from .syntax import (
    TOP_N, And, Atom, Bot, Const, Exists, Forall, Formula, Imp, Meta, MetaInst, Neg, Or,
    Signature, TermMeta, Var, constants, is_variable_name, reduce, reduce_dn4, render, substitute,
)
from .verdict import Status, Verdict


class LogicId(str, enum.Enum):
    BDPLUS = "bd+"
    BDI = "bdi"
    BDI3 = "bdi3"
    DN3 = "dn3"
    DN4 = "dn4"
    MH = "mh"
    G3 = "g3"
    I3G3 = "i3g3"
    BDI_CX = "bdi-cx"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text) -> "LogicId":
        if isinstance(text, cls):
            return text
        try:
            return cls(str(text).strip().lower())
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown logic {text!r}; expected one of {names}") from None


MONOTONE, DISCRETE, DISJOINT, OMNISCIENT, MAX_SUCCESSOR, CHAIN2, NO_FALSITY = (
    "monotone", "discrete", "disjoint", "omniscient", "max-successor", "chain<=2", "no-falsity")

FRAME_CONDITIONS = {
    LogicId.BDPLUS: frozenset({MONOTONE, DISCRETE}),
    LogicId.BDI: frozenset({MONOTONE}),
    LogicId.BDI3: frozenset({MONOTONE, DISJOINT, OMNISCIENT, MAX_SUCCESSOR}),
    LogicId.DN4: frozenset({MONOTONE}),
    LogicId.DN3: frozenset({MONOTONE, DISJOINT}),
    LogicId.MH: frozenset({MONOTONE, MAX_SUCCESSOR, NO_FALSITY}),
    LogicId.G3: frozenset({MONOTONE, MAX_SUCCESSOR, NO_FALSITY, CHAIN2}),
    LogicId.I3G3: frozenset({MONOTONE, DISJOINT, OMNISCIENT, MAX_SUCCESSOR, CHAIN2}),
}


def conditions(logic, extra: Iterable[str] = ()) -> frozenset:
    logic = LogicId.parse(logic)
    if logic not in FRAME_CONDITIONS:
        raise ValueError(f"{logic} has no Kripke semantics")
    return FRAME_CONDITIONS[logic] | frozenset(extra)


def forcing_kind(logic) -> str:
    """``bdi`` (BD+/BDi/BDi3/I3G3 clauses), ``dn`` (DN3/DN4) or ``mh`` (MH/G3)."""
    logic = LogicId.parse(logic)
    if logic is LogicId.BDI_CX:
        raise ValueError("bdi-cx has no Kripke semantics")
    if logic in (LogicId.DN3, LogicId.DN4):
        return "dn"
    if logic in (LogicId.MH, LogicId.G3):
        return "mh"
    return "bdi"


class SignedForce(NamedTuple):
    true: bool
    false: bool

    def __str__(self) -> str:
        return {(True, False): "T", (True, True): "B", (False, False): "N", (False, True): "F"}[self]


# -------------------------------------------------------------------- models

def _freeze_ext(table) -> dict:
    out = {}
    for pred, tuples in (table or {}).items():
        if tuples is True:
            tuples = [()]
        elif tuples is False or tuples is None:
            tuples = []
        out[pred] = frozenset(tuple(t) for t in tuples)
    return out


@dataclass(frozen=True)
class KripkeModel:
    """Finite model: worlds, order pairs (reflexive pairs included), per-world
    domains and extension/anti-extension tables ``pos[w][P]``/``neg[w][P]``."""
    worlds: tuple
    order: frozenset
    domains: Mapping
    arities: Mapping
    pos: Mapping
    neg: Mapping
    constants: frozenset = frozenset()
    _up: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        up = {w: tuple(x for x in self.worlds if (w, x) in self.order) for w in self.worlds}
        object.__setattr__(self, "_up", up)

    def __hash__(self):
        return hash((self.worlds, self.order))

    @classmethod
    def build(cls, worlds, order=(), domains=None, pos=None, neg=None, constants=(),
              arities=None) -> "KripkeModel":
        """Convenience constructor with loose inputs.

        ``order`` lists pairs ``(w, x)`` meaning w <= x; reflexive pairs are
        added but transitivity is not (``validate`` reports it).  A nullary
        predicate may be given as ``True`` instead of ``[()]``.
        """
        worlds = tuple(worlds)
        consts = frozenset(constants)
        order = frozenset(tuple(p) for p in order) | {(w, w) for w in worlds}
        if domains is None:
            default = consts or frozenset({"d"})
            domains = {w: default for w in worlds}
        domains = {w: frozenset(domains.get(w, ())) for w in worlds}
        pos = {w: _freeze_ext((pos or {}).get(w)) for w in worlds}
        neg = {w: _freeze_ext((neg or {}).get(w)) for w in worlds}
        ar = dict(arities or {})
        for table in (pos, neg):
            for ext in table.values():
                for pred, tuples in ext.items():
                    for t in tuples:
                        if ar.setdefault(pred, len(t)) != len(t):
                            raise ValueError(f"predicate {pred} used with arities {ar[pred]} and {len(t)}")
        return cls(worlds, order, domains, ar, pos, neg, consts)

    def leq(self, w, x) -> bool:
        return (w, x) in self.order

    def up(self, w) -> tuple:
        return self._up[w]

    def maximal(self) -> tuple:
        return tuple(w for w in self.worlds if self._up[w] == (w,))

    def elements(self) -> tuple:
        out = set()
        for d in self.domains.values():
            out |= d
        return tuple(sorted(out))

    def holds_pos(self, w, pred, tup) -> bool:
        return tup in self.pos[w].get(pred, ())

    def holds_neg(self, w, pred, tup) -> bool:
        return tup in self.neg[w].get(pred, ())

    def signature(self) -> Signature:
        return Signature(dict(self.arities), self.constants)

    def restrict(self, root) -> "KripkeModel":
        """The submodel generated by ``root``."""
        keep = self._up[root]
        ks = set(keep)
        return KripkeModel(keep, frozenset(p for p in self.order if p[0] in ks and p[1] in ks),
                           {w: self.domains[w] for w in keep}, dict(self.arities),
                           {w: self.pos[w] for w in keep}, {w: self.neg[w] for w in keep},
                           self.constants)


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class Violation:
    kind: str
    world: object = None
    pred: Optional[str] = None
    tuple: Optional[tuple] = None
    detail: str = ""

    def __str__(self) -> str:
        parts = [self.kind]
        if self.world is not None:
            parts.append(f"world={self.world}")
        if self.pred is not None:
            parts.append(f"pred={self.pred}")
        if self.tuple is not None:
            parts.append(f"tuple={self.tuple}")
        if self.detail:
            parts.append(self.detail)
        return " ".join(parts)


@dataclass
class ValidationReport:
    logic: str
    conditions: frozenset
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}


def validate(model: KripkeModel, logic, extra: Iterable[str] = ()) -> ValidationReport:
    """Check ``model`` against the frame and valuation conditions of ``logic``."""
    logic = LogicId.parse(logic)
    if logic not in FRAME_CONDITIONS:
        rep = ValidationReport(logic.value, frozenset())
        rep.violations.append(Violation("no-kripke-semantics", detail=f"{logic} is checked by tables only"))
        return rep
    conds = conditions(logic, extra)
    rep = ValidationReport(logic.value, conds)
    bad = rep.violations.append
    W = model.worlds
    ws = set(W)
    if not W:
        bad(Violation("empty", detail="no worlds"))
        return rep
    for (a, b) in model.order:
        if a not in ws or b not in ws:
            bad(Violation("order", detail=f"pair ({a}, {b}) mentions an unknown world"))
    for w in W:
        if (w, w) not in model.order:
            bad(Violation("reflexivity", w))
    for a, b in itertools.permutations(W, 2):
        if model.leq(a, b) and model.leq(b, a):
            bad(Violation("antisymmetry", a, detail=f"{a} <= {b} <= {a}"))
    for a, b, c in itertools.product(W, repeat=3):
        if model.leq(a, b) and model.leq(b, c) and not model.leq(a, c):
            bad(Violation("transitivity", a, detail=f"{a} <= {b} <= {c} but not {a} <= {c}"))
    for w in W:
        dom = model.domains.get(w, frozenset())
        if not dom:
            bad(Violation("domain", w, detail="empty domain"))
        missing = model.constants - dom
        if missing:
            bad(Violation("domain", w, detail=f"constants missing: {sorted(missing)}"))
        for d in dom:
            if is_variable_name(d):
                bad(Violation("domain", w, detail=f"element name {d} looks like a variable"))
        for x in model.up(w):
            if not dom <= model.domains.get(x, frozenset()):
                bad(Violation("domain-monotone", w, detail=f"D({w}) not contained in D({x})"))
    tables = [("+", model.pos)]
    if NO_FALSITY not in conds:
        tables.append(("-", model.neg))
    for sign, table in tables:
        for w in W:
            for pred, tuples in table[w].items():
                n = model.arities.get(pred)
                for t in sorted(tuples):
                    if n is None or len(t) != n:
                        bad(Violation("arity", w, pred, t))
                    elif any(d not in model.domains[w] for d in t):
                        bad(Violation("valuation-domain", w, pred, t, f"V{sign} tuple outside D({w})"))
                    if MONOTONE in conds:
                        for x in model.up(w):
                            if t not in table[x].get(pred, ()):
                                bad(Violation("monotone", w, pred, t, f"V{sign} lost at {x}"))
    if DISJOINT in conds:
        for w in W:
            for pred in sorted(model.pos[w]):
                for t in sorted(model.pos[w][pred] & model.neg[w].get(pred, frozenset())):
                    bad(Violation("disjoint", w, pred, t, "tuple in both V+ and V-"))
    if MAX_SUCCESSOR in conds:
        maxes = set(model.maximal())
        for w in W:
            if not any(x in maxes for x in model.up(w)):
                bad(Violation("max-successor", w))
    if OMNISCIENT in conds:
        for w in W:
            dom = sorted(model.domains[w])
            for pred in sorted(model.arities):
                for t in itertools.product(dom, repeat=model.arities[pred]):
                    for x in model.up(w):
                        if not any(model.holds_pos(y, pred, t) or model.holds_neg(y, pred, t)
                                   for y in model.up(x)):
                            bad(Violation("omniscience", w, pred, t, f"undecided above {x}"))
                            break
    if DISCRETE in conds:
        for (a, b) in sorted(model.order):
            if a != b:
                bad(Violation("discrete", a, detail=f"{a} <= {b} in a BD+ model"))
    if CHAIN2 in conds:
        if len(W) > 2:
            bad(Violation("chain", detail=f"{len(W)} worlds, at most 2 allowed"))
        for a, b in itertools.combinations(W, 2):
            if not (model.leq(a, b) or model.leq(b, a)):
                bad(Violation("chain", a, detail=f"{a} and {b} incomparable"))
    return rep


# ------------------------------------------------------------ scalar forcing

class _Forcer:
    def __init__(self, model: KripkeModel, kind: str):
        self.m = model
        self.kind = kind
        self.memo: dict = {}

    def force(self, w, f: Formula) -> tuple:
        key = (w, f)
        hit = self.memo.get(key)
        if hit is None:
            hit = self._force(w, f)
            self.memo[key] = hit
        return hit

    def T(self, w, f) -> bool:
        return self.force(w, f)[0]

    def F(self, w, f) -> bool:
        return self.force(w, f)[1]

    def _force(self, w, f):
        m, mh = self.m, self.kind == "mh"
        if isinstance(f, Atom):
            if mh and f.pred == TOP_N and not f.args:
                return True, False
            tup = tuple(t.name for t in f.args)
            return m.holds_pos(w, f.pred, tup), (not mh) and m.holds_neg(w, f.pred, tup)
        if isinstance(f, Bot):
            return False, not mh
        if isinstance(f, Neg):
            if mh:
                if isinstance(f.body, Bot):
                    return True, False
                raise ValueError(f"strong negation outside ~bot in an MH formula: {render(f)}")
            t, fa = self.force(w, f.body)
            return fa, t
        if isinstance(f, And):
            a, b = self.force(w, f.left), self.force(w, f.right)
            return a[0] and b[0], a[1] or b[1]
        if isinstance(f, Or):
            a, b = self.force(w, f.left), self.force(w, f.right)
            return a[0] or b[0], a[1] and b[1]
        if isinstance(f, Imp):
            up = m.up(w)
            t = all((not self.T(x, f.left)) or self.T(x, f.right) for x in up)
            if mh:
                return t, False
            if self.kind == "dn":
                fa = all(any(self.T(y, f.left) for y in m.up(x)) for x in up)
            else:
                fa = all(not self.F(x, f.left) for x in up)
            return t, fa and self.F(w, f.right)
        if isinstance(f, Forall):
            inst = lambda d: substitute(f.body, f.var, Const(d))
            t = all(self.T(x, inst(d)) for x in m.up(w) for d in sorted(m.domains[x]))
            fa = (not mh) and any(self.F(w, inst(d)) for d in sorted(m.domains[w]))
            return t, fa
        if isinstance(f, Exists):
            inst = lambda d: substitute(f.body, f.var, Const(d))
            t = any(self.T(w, inst(d)) for d in sorted(m.domains[w]))
            fa = (not mh) and all(self.F(x, inst(d)) for x in m.up(w) for d in sorted(m.domains[x]))
            return t, fa
        raise TypeError(f"cannot force {f!r}")


def force(model: KripkeModel, w, formula: Formula, logic="bdi3") -> SignedForce:
    """Signed forcing of a sentence at world ``w``."""
    if w not in model.domains:
        raise ValueError(f"unknown world {w!r}")
    if formula.fv:
        raise ValueError(f"free variables {sorted(formula.fv)} in {render(formula)}")
    missing = constants(formula) - model.domains[w]
    if missing:
        raise ValueError(f"constant(s) {sorted(missing)} outside D({w})")
    return SignedForce(*_Forcer(model, forcing_kind(logic)).force(w, formula))


# ------------------------------------------------------------- batch forcing

class BatchForcing:
    """Vectorised signed forcing over the disjoint union of ``models``.

    ``value(f)`` returns boolean arrays ``(T, F)`` with one entry per world of
    the union (world order: model by model, worlds in model order).  Open
    formulas are evaluated under ``env`` (variable -> element name).  Schema
    placeholders are resolved through ``metas``: name -> callable(env) giving
    ``(T, F)`` arrays, which may carry extra leading axes for broadcasting.
    """

    def __init__(self, models: Sequence[KripkeModel], logic="bdi3", kind: Optional[str] = None):
        self.models = list(models)
        self.kind = kind or forcing_kind(logic)
        offsets, names = [], []
        for i, m in enumerate(self.models):
            offsets.append(len(names))
            names.extend((i, w) for w in m.worlds)
        self.offsets = offsets
        self.world_ids = names
        self.size = n = len(names)
        index = {key: k for k, key in enumerate(names)}
        self.index = index
        src, dst = [], []
        for i, m in enumerate(self.models):
            for w in m.worlds:
                for x in m.up(w):
                    src.append(index[(i, w)])
                    dst.append(index[(i, x)])
        order = np.lexsort((np.array(dst), np.array(src)))
        self._src = np.array(src, dtype=np.intp)[order]
        self._dst = np.array(dst, dtype=np.intp)[order]
        self._starts = np.searchsorted(self._src, np.arange(n))
        self.discrete = len(self._src) == n
        elems = sorted({d for m in self.models for dom in m.domains.values() for d in dom})
        self.elements = elems
        self.dom_mask = {}
        for d in elems:
            mask = np.zeros(n, dtype=bool)
            for i, m in enumerate(self.models):
                for w in m.worlds:
                    if d in m.domains[w]:
                        mask[index[(i, w)]] = True
            self.dom_mask[d] = mask
        pos: dict = {}
        neg: dict = {}
        for i, m in enumerate(self.models):
            for w in m.worlds:
                k = index[(i, w)]
                for pred, tuples in m.pos[w].items():
                    for t in tuples:
                        pos.setdefault((pred, t), np.zeros(n, dtype=bool))[k] = True
                if self.kind != "mh":
                    for pred, tuples in m.neg[w].items():
                        for t in tuples:
                            neg.setdefault((pred, t), np.zeros(n, dtype=bool))[k] = True
        self._pos, self._neg = pos, neg
        self.zeros = np.zeros(n, dtype=bool)
        self.ones = np.ones(n, dtype=bool)
        self._memo: dict = {}
        self._has_meta: dict = {}

    # order operators -------------------------------------------------------
    def box(self, X: np.ndarray) -> np.ndarray:
        """``box(X)[w]`` iff X holds at every x >= w."""
        if self.discrete:
            return X
        return np.logical_and.reduceat(X[..., self._dst], self._starts, axis=-1)

    def diamond(self, X: np.ndarray) -> np.ndarray:
        if self.discrete:
            return X
        return np.logical_or.reduceat(X[..., self._dst], self._starts, axis=-1)

    def model_slice(self, i: int) -> slice:
        start = self.offsets[i]
        return slice(start, start + len(self.models[i].worlds))

    def defined(self, f: Formula) -> np.ndarray:
        """Worlds whose domain contains every constant of ``f``."""
        mask = self.ones
        for c in constants(f):
            mask = mask & self.dom_mask.get(c, self.zeros)
        return mask

    # evaluation -------------------------------------------------------------
    def _meta(self, f: Formula) -> bool:
        hit = self._has_meta.get(f)
        if hit is None:
            if isinstance(f, (Meta, MetaInst)):
                hit = True
            elif isinstance(f, (And, Or, Imp)):
                hit = self._meta(f.left) or self._meta(f.right)
            elif isinstance(f, (Neg, Forall, Exists)):
                hit = self._meta(f.body)
            else:
                hit = False
            self._has_meta[f] = hit
        return hit

    def _term(self, t, env) -> str:
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise ValueError(f"free variable {t.name} without a value") from None
        if isinstance(t, TermMeta):
            raise ValueError(f"uninstantiated term placeholder {t.name}")
        return t.name

    def value(self, f: Formula, env: Optional[Mapping[str, str]] = None, metas=None):
        env = env or {}
        if metas is not None and self._meta(f):
            return self._eval(f, env, metas)
        key = (f, tuple(sorted((v, env[v]) for v in f.fv if v in env)))
        hit = self._memo.get(key)
        if hit is None:
            hit = self._eval(f, env, None)
            self._memo[key] = hit
        return hit

    def true(self, f: Formula, env=None, metas=None) -> np.ndarray:
        return self.value(f, env, metas)[0]

    def clear(self) -> None:
        self._memo.clear()

    def _eval(self, f: Formula, env, metas):
        mh = self.kind == "mh"
        if isinstance(f, Atom):
            if mh and f.pred == TOP_N and not f.args:
                return self.ones, self.zeros
            tup = tuple(self._term(t, env) for t in f.args)
            return (self._pos.get((f.pred, tup), self.zeros),
                    self.zeros if mh else self._neg.get((f.pred, tup), self.zeros))
        if isinstance(f, Bot):
            return self.zeros, (self.zeros if mh else self.ones)
        if isinstance(f, Neg):
            if mh:
                if isinstance(f.body, Bot):
                    return self.ones, self.zeros
                raise ValueError(f"strong negation outside ~bot in an MH formula: {render(f)}")
            t, fa = self.value(f.body, env, metas)
            return fa, t
        if isinstance(f, (And, Or, Imp)):
            at, af = self.value(f.left, env, metas)
            bt, bf = self.value(f.right, env, metas)
            if isinstance(f, And):
                return at & bt, af | bf
            if isinstance(f, Or):
                return at | bt, af & bf
            t = self.box(~at | bt)
            if mh:
                return t, np.zeros_like(t)
            if self.kind == "dn":
                return t, self.box(self.diamond(at)) & bf
            return t, self.box(~af) & bf
        if isinstance(f, (Forall, Exists)):
            ts = []
            for d in self.elements:
                t, fa = self.value(f.body, {**env, f.var: d}, metas)
                ts.append((t, fa, self.dom_mask[d]))
            if isinstance(f, Forall):
                acc_t = None
                acc_f = None
                for t, fa, m in ts:
                    ct, cf = t | ~m, fa & m
                    acc_t = ct if acc_t is None else acc_t & ct
                    acc_f = cf if acc_f is None else acc_f | cf
                t = self.box(acc_t)
                return t, (np.zeros_like(t) if mh else acc_f)
            acc_t = None
            acc_f = None
            for t, fa, m in ts:
                ct, cf = t & m, fa | ~m
                acc_t = ct if acc_t is None else acc_t | ct
                acc_f = cf if acc_f is None else acc_f & cf
            fa = self.box(acc_f)
            return acc_t, (np.zeros_like(fa) if mh else fa)
        if isinstance(f, Meta):
            return metas[f.name](env)
        if isinstance(f, MetaInst):
            return metas[f.meta]({**env, f.var: self._term(f.term, env)})
        raise TypeError(f"cannot force {f!r}")


# ------------------------------------------------------------------- frames

@dataclass(frozen=True)
class Frame:
    """Rooted finite poset on worlds ``0..n-1``; ``leq[i][j]`` implies i <= j as integers."""
    n: int
    pairs: frozenset

    def up(self, w) -> tuple:
        return tuple(x for x in range(self.n) if (w, x) in self.pairs)

    def down(self, w) -> tuple:
        return tuple(x for x in range(self.n) if (x, w) in self.pairs)

    def maximal(self) -> tuple:
        return tuple(w for w in range(self.n) if self.up(w) == (w,))

    def is_chain(self) -> bool:
        return all((a, b) in self.pairs for a in range(self.n) for b in range(a, self.n))

    def upsets(self) -> list:
        """Non-empty up-closed subsets, as sorted tuples, in a fixed order."""
        out = []
        for mask in range(1, 2 ** self.n):
            s = [w for w in range(self.n) if mask >> w & 1]
            if all(x in s for w in s for x in self.up(w)):
                out.append(tuple(s))
        return sorted(out, key=lambda s: (-len(s), s))


def _canonical(n: int, pairs: frozenset) -> tuple:
    strict = [(a, b) for (a, b) in pairs if a != b]
    best = None
    for perm in itertools.permutations(range(1, n)):
        p = (0,) + perm
        # keep only relabellings that stay topological
        if any(p[a] > p[b] for a, b in strict):
            continue
        key = tuple(sorted((p[a], p[b]) for a, b in strict))
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def rooted_frames(n: int) -> tuple:
    """All rooted posets with ``n`` worlds up to isomorphism (root is world 0)."""
    if n < 1:
        raise ValueError("frames need at least one world")
    cand = [(a, b) for a in range(1, n) for b in range(a + 1, n)]
    seen, out = set(), []
    for bits in range(2 ** len(cand)):
        strict = {(0, b) for b in range(1, n)}
        strict |= {cand[k] for k in range(len(cand)) if bits >> k & 1}
        if any((a, c) not in strict for (a, b) in strict for (b2, c) in strict if b == b2):
            continue
        pairs = frozenset(strict | {(w, w) for w in range(n)})
        key = _canonical(n, pairs)
        if key in seen:
            continue
        seen.add(key)
        out.append(Frame(n, frozenset(set(key) | {(w, w) for w in range(n)})))
    return tuple(sorted(out, key=lambda fr: sorted(fr.pairs)))


def frames_for(conds: frozenset, max_worlds: int) -> list:
    out = []
    for n in range(1, max_worlds + 1):
        if DISCRETE in conds and n > 1:
            break
        if CHAIN2 in conds and n > 2:
            break
        for fr in rooted_frames(n):
            if CHAIN2 in conds and not fr.is_chain():
                continue
            out.append(fr)
    return out


def allowed_labels(conds: frozenset) -> tuple:
    # bit 1: in V+, bit 2: in V-
    if NO_FALSITY in conds:
        return (0, 1)
    if DISJOINT in conds:
        return (0, 1, 2)
    return (0, 1, 2, 3)


@lru_cache(maxsize=None)
def region_labellings(frame: Frame, region: tuple, labels: tuple, omniscient: bool) -> tuple:
    """Monotone labellings of the worlds in ``region`` (an up-set)."""
    maxes = set(frame.maximal())
    preds = {w: [v for v in frame.down(w) if v != w and v in region] for w in region}
    out = []

    def go(k, acc):
        if k == len(region):
            out.append(tuple(acc))
            return
        w = region[k]
        need = 0
        for v in preds[w]:
            need |= acc[region.index(v)]
        for lab in labels:
            if lab & need != need:
                continue
            if omniscient and w in maxes and lab == 0:
                continue
            acc.append(lab)
            go(k + 1, acc)
            acc.pop()

    go(0, [])
    return tuple(out)


def _fresh_names(k: int, taken) -> list:
    out, i = [], 1
    while len(out) < k:
        if f"d{i}" not in taken:
            out.append(f"d{i}")
        i += 1
    return out


@dataclass(frozen=True)
class _Layout:
    frame: Frame
    elements: tuple
    domains: tuple       # per world, frozenset of elements
    slots: tuple         # (pred, tuple, region)


def _layouts(frame: Frame, sig: Signature, max_domain: int) -> Iterator[_Layout]:
    consts = sorted(sig.constants)
    ups = frame.upsets()
    everywhere = tuple(range(frame.n))
    for k in range(0, max(0, max_domain - len(consts)) + 1):
        fresh = _fresh_names(k, set(consts))
        for choice in itertools.combinations_with_replacement(range(len(ups)), k):
            where = {c: everywhere for c in consts}
            for name, idx in zip(fresh, choice):
                where[name] = ups[idx]
            domains = tuple(frozenset(e for e, ws in where.items() if w in ws) for w in range(frame.n))
            if any(not d for d in domains):
                continue
            elems = tuple(consts + fresh)
            slots = []
            for pred in sorted(sig.predicates):
                for tup in itertools.product(elems, repeat=sig.predicates[pred]):
                    region = tuple(w for w in range(frame.n) if all(w in where[e] for e in tup))
                    if region:
                        slots.append((pred, tup, region))
            yield _Layout(frame, elems, domains, tuple(slots))


def _model_from(layout: _Layout, labelling: Sequence[tuple], sig: Signature) -> KripkeModel:
    fr = layout.frame
    worlds = tuple(f"w{i}" for i in range(fr.n))
    pos = {w: {} for w in worlds}
    neg = {w: {} for w in worlds}
    for (pred, tup, region), labs in zip(layout.slots, labelling):
        for w, lab in zip(region, labs):
            if lab & 1:
                pos[worlds[w]].setdefault(pred, set()).add(tup)
            if lab & 2:
                neg[worlds[w]].setdefault(pred, set()).add(tup)
    return KripkeModel(
        worlds,
        frozenset((worlds[a], worlds[b]) for a, b in fr.pairs),
        {worlds[i]: layout.domains[i] for i in range(fr.n)},
        dict(sig.predicates),
        {w: {p: frozenset(s) for p, s in t.items()} for w, t in pos.items()},
        {w: {p: frozenset(s) for p, s in t.items()} for w, t in neg.items()},
        frozenset(sig.constants),
    )


def enumerate_models(sig: Signature, logic, max_worlds: int, max_domain: int = 1,
                     extra: Iterable[str] = ()) -> Iterator[KripkeModel]:
    """Every rooted model within bounds that satisfies the logic's conditions.

    Frames are taken up to isomorphism; valuations are not reduced further.
    ``max_domain`` bounds the number of distinct elements in the model.
    """
    conds = conditions(logic, extra)
    labels = allowed_labels(conds)
    omni = OMNISCIENT in conds
    if max_worlds < 1 or max_domain < 1:
        raise ValueError("bounds must be at least 1")
    for fr in frames_for(conds, max_worlds):
        for layout in _layouts(fr, sig, max_domain):
            choices = [region_labellings(fr, region, labels, omni) for (_, _, region) in layout.slots]
            for labelling in itertools.product(*choices):
                yield _model_from(layout, labelling, sig)


def random_models(logic, count: int, seed: int = 0, sig: Optional[Signature] = None,
                  max_worlds: int = 4, max_domain: int = 3, extra: Iterable[str] = ()) -> list:
    """Seeded random population of validated models.

    The frame is drawn by size then shape; each non-constant element exists on
    a random up-set (or nowhere); each slot gets a uniformly chosen valid
    monotone labelling.
    """
    sig = sig or Signature({"p": 0, "q": 0, "P": 1}, frozenset({"c"}))
    conds = conditions(logic, extra)
    labels = allowed_labels(conds)
    omni = OMNISCIENT in conds
    rng = np.random.default_rng(seed)
    by_size: dict = {}
    for fr in frames_for(conds, max_worlds):
        by_size.setdefault(fr.n, []).append(fr)
    sizes = sorted(by_size)
    consts = sorted(sig.constants)
    fresh = _fresh_names(max(0, max_domain - len(consts)), set(consts))
    out = []
    while len(out) < count:
        group = by_size[sizes[rng.integers(len(sizes))]]
        fr = group[rng.integers(len(group))]
        ups = fr.upsets()
        everywhere = tuple(range(fr.n))
        where = {c: everywhere for c in consts}
        for name in fresh:
            pick = rng.integers(len(ups) + 1)
            if pick < len(ups):
                where[name] = ups[pick]
        if not consts and not any(0 in ws for ws in where.values()):
            where[fresh[0]] = everywhere
        elems = tuple(e for e in consts + fresh if e in where)
        domains = tuple(frozenset(e for e in elems if w in where[e]) for w in range(fr.n))
        slots, labelling = [], []
        for pred in sorted(sig.predicates):
            for tup in itertools.product(elems, repeat=sig.predicates[pred]):
                region = tuple(w for w in range(fr.n) if all(w in where[e] for e in tup))
                if not region:
                    continue
                opts = region_labellings(fr, region, labels, omni)
                slots.append((pred, tup, region))
                labelling.append(opts[rng.integers(len(opts))])
        out.append(_model_from(_Layout(fr, elems, domains, tuple(slots)), labelling, sig))
    return out


def disjoint_union(models: Sequence[KripkeModel]) -> KripkeModel:
    """Single model whose worlds are ``m<i>.<w>``; elements keep their names."""
    worlds, order, domains, pos, neg = [], set(), {}, {}, {}
    arities: dict = {}
    consts = frozenset()
    for i, m in enumerate(models):
        ren = {w: f"m{i}.{w}" for w in m.worlds}
        worlds.extend(ren[w] for w in m.worlds)
        order |= {(ren[a], ren[b]) for a, b in m.order}
        for w in m.worlds:
            domains[ren[w]] = m.domains[w]
            pos[ren[w]] = m.pos[w]
            neg[ren[w]] = m.neg[w]
        arities.update(m.arities)
        consts |= m.constants
    return KripkeModel(tuple(worlds), frozenset(order), domains, arities, pos, neg, consts)


# ------------------------------------------------------------------- search

def countermodel_search(gamma: Sequence[Formula], conclusion: Formula, logic="bdi3",
                        max_worlds: int = 3, max_domain: int = 1, extra: Iterable[str] = (),
                        chunk: int = 256, sig: Optional[Signature] = None) -> Verdict:
    """First ``(model, world)`` in enumeration order where every premise is
    true-forced and the conclusion is not."""
    formulas = list(gamma) + [conclusion]
    for f in formulas:
        if f.fv:
            raise ValueError(f"free variables in {render(f)}")
    base = Signature.of(formulas)
    sig = base if sig is None else sig.merge(base)
    if forcing_kind(logic) == "mh":
        sig = Signature({p: a for p, a in sig.predicates.items() if p != TOP_N}, sig.constants)
    kind = forcing_kind(logic)
    searched = 0
    batch: list = []

    def scan(models):
        bf = BatchForcing(models, kind=kind)
        ok = bf.ones.copy()
        for g in gamma:
            ok &= bf.true(g)
        ok &= ~bf.true(conclusion)
        hits = np.flatnonzero(ok)
        if hits.size:
            i, w = bf.world_ids[int(hits[0])]
            return models[i], w
        return None

    for m in enumerate_models(sig, logic, max_worlds, max_domain, extra):
        batch.append(m)
        if len(batch) >= chunk:
            searched += len(batch)
            hit = scan(batch)
            if hit:
                return Verdict(Status.COUNTERMODEL, hit, searched)
            batch = []
    if batch:
        searched += len(batch)
        hit = scan(batch)
        if hit:
            return Verdict(Status.COUNTERMODEL, hit, searched)
    return Verdict(Status.NONE_WITHIN_BOUNDS, None, searched)


# --------------------------------------------------------- structural checks

@dataclass(frozen=True)
class PropertyViolation:
    check: str
    formula: str
    model: int
    world: object
    other: object = None

    def __str__(self) -> str:
        where = f"model {self.model} world {self.world}"
        if self.other is not None:
            where += f" -> {self.other}"
        return f"{self.check}: {self.formula} at {where}"


@dataclass
class PropertyReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def default_atoms(sig: Signature, variable: str = "x") -> list:
    """Atoms over the signature with arguments drawn from its constants and ``variable``."""
    terms = [Const(c) for c in sorted(sig.constants)] + [Var(variable)]
    out = []
    for pred in sorted(sig.predicates):
        n = sig.predicates[pred]
        for args in itertools.product(terms, repeat=n):
            out.append(Atom(pred, tuple(args)))
    return out


def _sentences(models, depth, atoms, logic):
    if atoms is None:
        sig = models[0].signature()
        for m in models[1:]:
            sig = sig.merge(m.signature())
        atoms = default_atoms(sig)
    quantified = any(a.fv for a in atoms)
    strong = forcing_kind(logic) != "mh"
    if quantified:
        frag = "unary-fo" if strong else "~-free-fo"
    else:
        frag = "propositional" if strong else "~-free"
    return [f for f in enumerate_formulas(atoms, depth, frag) if not f.fv]


def _as_list(models) -> list:
    return [models] if isinstance(models, KripkeModel) else list(models)


def _violations(bf: BatchForcing, f: Formula, bad: np.ndarray, check: str, out: list,
                limit: int, src=None, dst=None) -> None:
    for k in np.flatnonzero(bad)[: max(0, limit - len(out))]:
        if src is None:
            i, w = bf.world_ids[int(k)]
            out.append(PropertyViolation(check, render(f), i, w))
        else:
            i, w = bf.world_ids[int(src[k])]
            _, x = bf.world_ids[int(dst[k])]
            out.append(PropertyViolation(check, render(f), i, w, x))


def check_persistence(models, depth: int = 3, logic="bdi3", atoms=None,
                      limit: int = 100) -> PropertyReport:
    """Truth and falsity persist upward for every enumerated sentence.

    ``models`` may be one model or a population (checked as a disjoint union).
    """
    models = _as_list(models)
    bf = BatchForcing(models, logic)
    rep = PropertyReport()
    src, dst = bf._src, bf._dst
    strict = src != dst
    src, dst = src[strict], dst[strict]
    for f in _sentences(models, depth, atoms, logic):
        rep.checked += 1
        t, fa = bf.value(f)
        ok = bf.defined(f)[src]
        for check, arr in (("1-persistence", t), ("0-persistence", fa)):
            bad = ok & arr[src] & ~arr[dst]
            if bad.any():
                _violations(bf, f, bad, check, rep.violations, limit, src, dst)
    return rep


def check_decidedness(models, depth: int = 3, logic="bdi3", atoms=None,
                      limit: int = 100) -> PropertyReport:
    """(i) nothing is both true- and false-forced; (ii) above every world
    some world decides each sentence."""
    models = _as_list(models)
    bf = BatchForcing(models, logic)
    rep = PropertyReport()
    for f in _sentences(models, depth, atoms, logic):
        rep.checked += 1
        t, fa = bf.value(f)
        ok = bf.defined(f)
        glut = ok & t & fa
        if glut.any():
            _violations(bf, f, glut, "no-glut", rep.violations, limit)
        undecided = ok & ~bf.diamond(t | fa)
        if undecided.any():
            _violations(bf, f, undecided, "eventually-decided", rep.violations, limit)
    return rep


def check_reduction(models, depth: int = 3, logic="bdi3", atoms=None,
                    limit: int = 100) -> PropertyReport:
    """``A`` and its reduct agree on truth, and ``~A`` and the reduct of ``~A``
    agree on truth, at every world.  DN logics use :func:`reduce_dn4`."""
    models = _as_list(models)
    kind = forcing_kind(logic)
    if kind == "mh":
        raise ValueError("reduction needs strong negation")
    red = reduce_dn4 if kind == "dn" else reduce
    bf = BatchForcing(models, logic)
    rep = PropertyReport()
    for f in _sentences(models, depth, atoms, logic):
        rep.checked += 1
        t, fa = bf.value(f)
        ok = bf.defined(f)
        for check, lhs, g in (("truth", t, red(f)), ("falsity", fa, red(Neg(f)))):
            bad = ok & (lhs != bf.true(g))
            if bad.any():
                _violations(bf, f, bad, f"reduce-{check}", rep.violations, limit)
    return rep
