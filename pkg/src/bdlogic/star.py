"""Star semantics for BD+: strong negation looks at the companion world w*."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from .matrices import DunnModel
from .syntax import (
    And, Atom, Bot, Const, Exists, Forall, Formula, Imp, Meta, MetaInst, Neg, Or,
    Signature, TermMeta, Var, constants, render, substitute,
)
from .verdict import Status, Verdict


@dataclass(frozen=True)
class StarModel:
    worlds: tuple
    star: Mapping
    domain: tuple
    arities: Mapping
    ext: Mapping            # world -> pred -> frozenset of tuples
    constants: frozenset = frozenset()

    def __post_init__(self):
        if not self.worlds:
            raise ValueError("a star model needs at least one world")
        if not self.domain:
            raise ValueError("domain must be non-empty")
        for w in self.worlds:
            s = self.star.get(w)
            if s not in self.worlds:
                raise ValueError(f"star of {w} is not a world")
            if self.star[s] != w:
                raise ValueError(f"star is not an involution at {w}: {w}** = {self.star[s]}")
        missing = set(self.constants) - set(self.domain)
        if missing:
            raise ValueError(f"constants outside the domain: {sorted(missing)}")
        for w, table in self.ext.items():
            for pred, tuples in table.items():
                for t in tuples:
                    if len(t) != self.arities.get(pred, -1) or any(d not in self.domain for d in t):
                        raise ValueError(f"bad tuple {t} for {pred} at {w}")

    def __hash__(self):
        return hash((self.worlds, tuple(sorted(self.star.items())), self.domain))

    @classmethod
    def build(cls, worlds, star=None, domain=("d",), ext=None, constants=(), arities=None):
        worlds = tuple(worlds)
        star = dict(star or {w: w for w in worlds})
        for a, b in list(star.items()):
            star.setdefault(b, a)
        table = {}
        ar = dict(arities or {})
        for w in worlds:
            table[w] = {}
            for pred, tuples in ((ext or {}).get(w) or {}).items():
                if tuples is True:
                    tuples = [()]
                tuples = frozenset(tuple(t) for t in (tuples or ()))
                for t in tuples:
                    if ar.setdefault(pred, len(t)) != len(t):
                        raise ValueError(f"predicate {pred} used with different arities")
                table[w][pred] = tuples
        for w in worlds:
            for pred in ar:
                table[w].setdefault(pred, frozenset())
        return cls(worlds, star, tuple(domain), ar, table, frozenset(constants))

    def holds(self, w, pred, tup) -> bool:
        return tup in self.ext[w].get(pred, ())


def star_force(model: StarModel, w, formula: Formula) -> bool:
    """``I(w, A) = 1``; implication is classical at each world."""
    if formula.fv:
        raise ValueError(f"free variables {sorted(formula.fv)} in {render(formula)}")
    unknown = constants(formula) - set(model.domain)
    if unknown:
        raise ValueError(f"unknown constant(s) {sorted(unknown)}")
    memo: dict = {}

    def ev(w, f) -> bool:
        key = (w, f)
        if key in memo:
            return memo[key]
        if isinstance(f, Atom):
            r = model.holds(w, f.pred, tuple(t.name for t in f.args))
        elif isinstance(f, Bot):
            r = False
        elif isinstance(f, Neg):
            r = not ev(model.star[w], f.body)
        elif isinstance(f, And):
            r = ev(w, f.left) and ev(w, f.right)
        elif isinstance(f, Or):
            r = ev(w, f.left) or ev(w, f.right)
        elif isinstance(f, Imp):
            r = (not ev(w, f.left)) or ev(w, f.right)
        elif isinstance(f, Forall):
            r = all(ev(w, substitute(f.body, f.var, Const(d))) for d in model.domain)
        elif isinstance(f, Exists):
            r = any(ev(w, substitute(f.body, f.var, Const(d))) for d in model.domain)
        else:
            raise TypeError(f"cannot evaluate {f!r}")
        memo[key] = r
        return r

    return ev(w, formula)


def dunn_to_star(m: DunnModel) -> StarModel:
    """Two-world model with a* = b: V(a) is the extension, V(b) the complement
    of the anti-extension."""
    ext_a, ext_b = {}, {}
    for pred, n in m.arities.items():
        full = frozenset(itertools.product(m.domain, repeat=n))
        ext_a[pred] = frozenset(m.pos.get(pred, frozenset()))
        ext_b[pred] = full - m.neg.get(pred, frozenset())
    return StarModel(("a", "b"), {"a": "b", "b": "a"}, tuple(m.domain), dict(m.arities),
                     {"a": ext_a, "b": ext_b}, frozenset(m.constants))


def _involutions(worlds: Sequence) -> Iterator[dict]:
    """All involutions on ``worlds`` (fixed points allowed), in a fixed order."""
    worlds = list(worlds)
    if not worlds:
        yield {}
        return
    w, rest = worlds[0], worlds[1:]
    for sub in _involutions(rest):
        yield {w: w, **sub}
    for i, x in enumerate(rest):
        for sub in _involutions(rest[:i] + rest[i + 1:]):
            yield {w: x, x: w, **sub}


def enumerate_star_models(sig: Signature, max_worlds: int = 2, max_domain: int = 1) -> Iterator[StarModel]:
    consts = sorted(sig.constants)
    lo = max(1, len(consts))
    for n_dom in range(lo, max(lo, max_domain) + 1):
        fresh = [f"d{i}" for i in range(1, n_dom - len(consts) + 1)]
        domain = tuple(consts + fresh)
        slots = [(p, t) for p in sorted(sig.predicates)
                 for t in itertools.product(domain, repeat=sig.predicates[p])]
        for nw in range(1, max_worlds + 1):
            worlds = tuple(f"w{i}" for i in range(nw))
            for star in _involutions(worlds):
                for bits in itertools.product((False, True), repeat=len(slots) * nw):
                    ext = {w: {p: set() for p in sig.predicates} for w in worlds}
                    k = 0
                    for w in worlds:
                        for (p, t) in slots:
                            if bits[k]:
                                ext[w][p].add(t)
                            k += 1
                    yield StarModel(worlds, star, domain, dict(sig.predicates),
                                    {w: {p: frozenset(s) for p, s in e.items()} for w, e in ext.items()},
                                    frozenset(consts))


class BatchStar:
    """Vectorised star evaluation over a disjoint union of star models."""

    def __init__(self, models: Sequence[StarModel]):
        self.models = list(models)
        ids, star, offsets = [], [], []
        for i, m in enumerate(self.models):
            offsets.append(len(ids))
            local = {w: k for k, w in enumerate(m.worlds)}
            for w in m.worlds:
                ids.append((i, w))
                star.append(offsets[-1] + local[m.star[w]])
        self.world_ids = ids
        self.offsets = offsets
        self.size = n = len(ids)
        self._star = np.array(star, dtype=np.intp)
        self.star_index = self._star
        self.elements = sorted({d for m in self.models for d in m.domain})
        self.dom_mask = {}
        for d in self.elements:
            self.dom_mask[d] = np.array([d in self.models[i].domain for i, _ in ids], dtype=bool)
        ext: dict = {}
        for k, (i, w) in enumerate(ids):
            for pred, tuples in self.models[i].ext[w].items():
                for t in tuples:
                    ext.setdefault((pred, t), np.zeros(n, dtype=bool))[k] = True
        self._ext = ext
        self.zeros = np.zeros(n, dtype=bool)
        self.ones = np.ones(n, dtype=bool)
        self._memo: dict = {}

    def _term(self, t, env):
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, TermMeta):
            raise ValueError(f"uninstantiated term placeholder {t.name}")
        return t.name

    def value(self, f: Formula, env: Optional[Mapping] = None, metas=None) -> np.ndarray:
        env = env or {}
        if metas is not None:
            return self._eval(f, env, metas)
        key = (f, tuple(sorted((v, env[v]) for v in f.fv if v in env)))
        hit = self._memo.get(key)
        if hit is None:
            hit = self._eval(f, env, None)
            self._memo[key] = hit
        return hit

    true = value

    def _eval(self, f, env, metas):
        if isinstance(f, Atom):
            return self._ext.get((f.pred, tuple(self._term(t, env) for t in f.args)), self.zeros)
        if isinstance(f, Bot):
            return self.zeros
        if isinstance(f, Neg):
            return ~self.value(f.body, env, metas)[..., self._star]
        if isinstance(f, (And, Or, Imp)):
            a = self.value(f.left, env, metas)
            b = self.value(f.right, env, metas)
            if isinstance(f, And):
                return a & b
            if isinstance(f, Or):
                return a | b
            return ~a | b
        if isinstance(f, Forall):
            acc = self.ones
            for d in self.elements:
                acc = acc & (self.value(f.body, {**env, f.var: d}, metas) | ~self.dom_mask[d])
            return acc
        if isinstance(f, Exists):
            acc = self.zeros
            for d in self.elements:
                acc = acc | (self.value(f.body, {**env, f.var: d}, metas) & self.dom_mask[d])
            return acc
        if isinstance(f, Meta):
            return metas[f.name](env)
        if isinstance(f, MetaInst):
            return metas[f.meta]({**env, f.var: self._term(f.term, env)})
        raise TypeError(f"cannot evaluate {f!r}")


def star_consequence_bounded(gamma: Sequence[Formula], conclusion: Formula, max_worlds: int = 2,
                             max_domain: int = 1, chunk: int = 512) -> Verdict:
    """Search star models within bounds for a world verifying Γ but not A."""
    if max_worlds < 1 or max_domain < 1:
        raise ValueError("bounds must be at least 1")
    formulas = list(gamma) + [conclusion]
    sig = Signature.of(formulas)
    searched = 0
    batch: list = []

    def scan(models):
        bs = BatchStar(models)
        ok = bs.ones.copy()
        for g in gamma:
            ok &= bs.value(g)
        hits = np.flatnonzero(ok & ~bs.value(conclusion))
        if hits.size:
            i, w = bs.world_ids[int(hits[0])]
            return models[i], w
        return None

    for m in enumerate_star_models(sig, max_worlds, max_domain):
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
