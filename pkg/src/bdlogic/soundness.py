"""Axiom soundness sweeps.

A schema instance is built from filler formulas; its value in a model only
depends on the fillers' values there.  Each sweep therefore evaluates the
filler pool once per model, keeps one representative per distinct value,
and evaluates the schema over every combination of distinct values.  That
is exactly as strong as evaluating every concrete instance, and much cheaper.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .enumeration import DEFAULT_FO_ATOMS, formula_levels
from .hilbert import Schema, axiom_set, instantiate
from .kripke import BatchForcing, KripkeModel, LogicId, forcing_kind
from .matrices import (
    DUNN_VALUES, DunnModel, FourValue, ThreeValue, assignments, enumerate_dunn_models, eval_dunn,
    eval_four, eval_g3, nontrivial_eval, FOUR_IMP, G3_IMP,
)
from .syntax import (
    Const, Exists, Forall, Formula, Imp, MetaInst, Neg, And, Or, Signature, TermMeta, Var, render,
)

PROP_ATOMS = ("p", "q")


@dataclass(frozen=True)
class Failure:
    schema: str
    instance: str
    witness: str

    def __str__(self) -> str:
        return f"{self.schema}: {self.instance} fails at {self.witness}"


@dataclass
class SweepReport:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    per_schema: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def count(self, sid: str, n: int) -> None:
        self.checked += n
        self.per_schema[sid] = self.per_schema.get(sid, 0) + n

    def failed_schemas(self) -> list:
        return sorted({f.schema for f in self.failures})


# ---------------------------------------------------------------- fillers

def filler_pool(depth: int = 2, first_order: bool = False, strong: bool = True) -> list:
    """Formulas used to fill metavariables.

    Propositional pools range over ``p``, ``q``; first-order pools over
    ``P(x)``, ``P(c)``, ``q`` with quantifiers on ``x`` and keep open formulas.
    """
    if first_order:
        frag = "full" if strong else "~-free-fo"
        levels = formula_levels(DEFAULT_FO_ATOMS, depth, frag)
    else:
        levels = formula_levels(PROP_ATOMS, depth, "propositional" if strong else "~-free")
    return [f for level in levels for f in level]


def is_first_order(s: Schema) -> bool:
    return bool(s.variables)


# Metavariables that must not contain the quantified variable free.
_X_FREE = {"Ax12": ("B",), "Ax13": ("B",)}


def _specialize(p: Formula, vmap: dict, tmap: dict) -> Formula:
    if isinstance(p, MetaInst):
        t = tmap[p.term.name] if isinstance(p.term, TermMeta) else Var(vmap.get(p.term.name, p.term.name))
        return MetaInst(p.meta, vmap.get(p.var, p.var), t)
    if isinstance(p, Neg):
        return Neg(_specialize(p.body, vmap, tmap))
    if isinstance(p, (And, Or, Imp)):
        return type(p)(_specialize(p.left, vmap, tmap), _specialize(p.right, vmap, tmap))
    if isinstance(p, (Forall, Exists)):
        return type(p)(vmap.get(p.var, p.var), _specialize(p.body, vmap, tmap))
    return p


def variants(s: Schema) -> list:
    """Concrete choices for the pattern variable ``y`` and term ``t``.

    Returns ``(pattern, params)`` pairs; the pattern still has metavariables.
    """
    if s.id in ("Ax11", "Ax14"):
        return [(_specialize(s.pattern, {}, {"t": t}), {"t": t})
                for t in (Const("c"), Var("x"), Var("y"))]
    if s.id == "Ax12":
        return [(_specialize(s.pattern, {"y": y}, {}), {"y": y}) for y in ("x", "y")]
    return [(s.pattern, {})]


def _pattern_free_vars(p: Formula) -> list:
    # free term variables of a specialised pattern (metas contribute none)
    return sorted(p.fv)


def _concrete(s: Schema, params: dict, fill: dict) -> Formula:
    sub = dict(fill)
    sub.update(params)
    return instantiate(s, sub)


# ------------------------------------------------------------ Dunn sweep

def _dunn_models_fo(domain_sizes: Sequence[int]) -> list:
    sig = Signature({"P": 1, "q": 0}, frozenset({"c"}))
    return [m for m in enumerate_dunn_models(sig, max(domain_sizes)) if len(m.domain) in domain_sizes]


def sweep_dunn(depth: int = 2, domain_sizes: Sequence[int] = (1, 2), logic="bd+",
               schemas: Optional[Sequence[Schema]] = None, limit: int = 50) -> SweepReport:
    """Every instance of the schemas is designated in every Dunn model."""
    schemas = list(schemas if schemas is not None else axiom_set(logic))
    rep = SweepReport(f"dunn:{logic}")
    prop = [s for s in schemas if not is_first_order(s)]
    fo = [s for s in schemas if is_first_order(s)]
    if prop:
        pool = filler_pool(depth)
        for a in assignments(PROP_ATOMS, DUNN_VALUES):
            reps: dict = {}
            for f in pool:
                reps.setdefault(eval_dunn(a, f), f)
            witness = ",".join(f"{k}={v}" for k, v in a.items())
            for s in prop:
                _dunn_products(rep, s, s.pattern, {}, a, reps, {}, [{}], witness, limit)
    if fo:
        pool = filler_pool(depth, first_order=True)
        closed = [f for f in pool if "x" not in f.fv]
        for m in _dunn_models_fo(domain_sizes):
            reps = _dunn_fo_reps(m, pool)
            reps_closed = _dunn_fo_reps(m, closed)
            witness = _describe_dunn(m)
            for s in fo:
                xfree = _X_FREE.get(s.id, ())
                for pat, params in variants(s):
                    envs = [dict(zip(_pattern_free_vars(pat), combo))
                            for combo in itertools.product(m.domain, repeat=len(_pattern_free_vars(pat)))]
                    pools = {meta: (reps_closed if meta in xfree else reps) for meta in s.metas}
                    _dunn_products(rep, s, pat, params, m, None, pools, envs, witness, limit)
    return rep


def _dunn_fo_reps(m: DunnModel, pool: list) -> dict:
    reps: dict = {}
    for f in pool:
        key = tuple(eval_dunn(m, f, {"x": d}) for d in m.domain)
        reps.setdefault(key, f)
    return reps


def _describe_dunn(m: DunnModel) -> str:
    parts = [f"D={{{','.join(m.domain)}}}"]
    for pred in sorted(m.arities):
        for tup in itertools.product(m.domain, repeat=m.arities[pred]):
            v = m.value_of(pred, tup)
            parts.append(f"{pred}{'(' + ','.join(tup) + ')' if tup else ''}={v}")
    return " ".join(parts)


def _dunn_products(rep, s, pat, params, model, reps, pools, envs, witness, limit):
    metas = s.metas
    choice_lists = [list((pools[mv] if pools else reps).items()) for mv in metas]
    n = 0
    for combo in itertools.product(*choice_lists):
        n += 1
        if pools:
            index = {d: i for i, d in enumerate(model.domain)}
            fn = {mv: (lambda key: lambda env: key[index[env["x"]]] if "x" in env else key[0])(key)
                  for mv, (key, _) in zip(metas, combo)}
        else:
            fn = {mv: (lambda v: lambda env: v)(key) for mv, (key, _) in zip(metas, combo)}
        for env in envs:
            if not eval_dunn(model, pat, env, fn).has1:
                if len(rep.failures) < limit:
                    fill = {mv: f for mv, (_, f) in zip(metas, combo)}
                    inst = render(_concrete(s, params, fill))
                    where = witness + (f" env={env}" if env else "")
                    rep.failures.append(Failure(s.id, inst, where))
                break
    rep.count(s.id, n)


# ---------------------------------------------------------- Kripke sweep

class _Pool:
    """Filler values over a union of models, indexed [filler, element, world]."""

    def __init__(self, bf: BatchForcing, fillers: list, open_x: bool):
        self.fillers = fillers
        self.elements = bf.elements if open_x else [None]
        self.eidx = {e: i for i, e in enumerate(self.elements)}
        T = np.zeros((len(fillers), len(self.elements), bf.size), dtype=bool)
        F = np.zeros_like(T)
        for i, f in enumerate(fillers):
            for j, e in enumerate(self.elements):
                env = {"x": e} if (e is not None and "x" in f.fv) else {}
                t, fa = bf.value(f, env)
                T[i, j], F[i, j] = t, fa
        self.T, self.F = T, F
        self.open_x = open_x

    def unique(self, sl: slice):
        t, f = self.T[:, :, sl], self.F[:, :, sl]
        key = np.concatenate([t.reshape(len(t), -1), f.reshape(len(f), -1)], axis=1)
        _, first = np.unique(key, axis=0, return_index=True)
        first = np.sort(first)
        return first, t[first], f[first]


def _broadcast(arr: np.ndarray, axis: int, nmeta: int) -> np.ndarray:
    # arr: (K, W) -> shape with K on ``axis`` of nmeta leading axes
    shape = [1] * nmeta + [arr.shape[-1]]
    shape[axis] = arr.shape[0]
    return arr.reshape(shape)


def sweep_kripke(logic, models: Sequence[KripkeModel], depth: int = 2, minimal: bool = False,
                 schemas: Optional[Sequence[Schema]] = None, limit: int = 50,
                 kind: Optional[str] = None) -> SweepReport:
    """Every instance of the logic's schemas is true-forced at every world of
    every model (open instances: under every assignment into D(w))."""
    logic = LogicId.parse(logic)
    schemas = list(schemas if schemas is not None else axiom_set(logic, minimal))
    kind = kind or forcing_kind(logic)
    strong = kind != "mh"
    rep = SweepReport(f"kripke:{logic}")
    union = BatchForcing(models, kind=kind)
    prop = [s for s in schemas if not is_first_order(s)]
    fo = [s for s in schemas if is_first_order(s)]
    pools = {}
    if prop:
        pools["prop"] = _Pool(union, filler_pool(depth, strong=strong), open_x=False)
    if fo:
        fo_fill = filler_pool(depth, first_order=True, strong=strong)
        pools["fo"] = _Pool(union, fo_fill, open_x=True)
        pools["closed"] = _Pool(union, [f for f in fo_fill if "x" not in f.fv], open_x=False)
    for i, m in enumerate(models):
        sl = union.model_slice(i)
        bf = BatchForcing([m], kind=kind)
        uniq = {name: pool.unique(sl) for name, pool in pools.items()}
        for s in prop:
            _kripke_schema(rep, s, m, bf, {mv: ("prop", pools["prop"]) for mv in s.metas}, uniq, i, limit)
        for s in fo:
            xfree = _X_FREE.get(s.id, ())
            sel = {mv: (("closed", pools["closed"]) if mv in xfree else ("fo", pools["fo"])) for mv in s.metas}
            _kripke_schema(rep, s, m, bf, sel, uniq, i, limit)
    return rep


def _kripke_schema(rep, s, m, bf, sel, uniq, model_index, limit):
    metas = s.metas
    nmeta = len(metas)
    arrays = {}
    for axis, mv in enumerate(metas):
        name, pool = sel[mv]
        first, T, F = uniq[name]
        arrays[mv] = (name, pool, first, T, F, axis)

    def meta_fn(mv):
        name, pool, first, T, F, axis = arrays[mv]

        def f(env):
            j = pool.eidx[env["x"]] if pool.open_x else 0
            return _broadcast(T[:, j], axis, nmeta), _broadcast(F[:, j], axis, nmeta)
        return f

    fns = {mv: meta_fn(mv) for mv in metas}
    total = int(np.prod([len(arrays[mv][2]) for mv in metas])) if metas else 1
    for pat, params in variants(s):
        fvs = _pattern_free_vars(pat)
        for combo in itertools.product(m.elements(), repeat=len(fvs)):
            env = dict(zip(fvs, combo))
            t, _ = bf.value(pat, env, fns)
            ok = bf.ones.copy()
            for v, d in env.items():
                ok &= bf.dom_mask[d]
            bad = ~t & ok
            if bad.any() and len(rep.failures) < limit:
                idx = np.argwhere(bad)[0]
                fill = {mv: arrays[mv][1].fillers[arrays[mv][2][idx[arrays[mv][5]] if nmeta else 0]]
                        for mv in metas}
                inst = _concrete(s, params, fill)
                _, w = bf.world_ids[int(idx[-1])]
                rep.failures.append(Failure(s.id, render(inst), f"model {model_index} world {w}"
                                            + (f" env={env}" if env else "")))
        rep.count(s.id, total * len(m.worlds))


# ------------------------------------------------------------ table sweeps

def sweep_tables(logic="i3g3", depth: int = 2, limit: int = 50) -> SweepReport:
    """Propositional schemas of ``i3g3`` (4-valued tables) or ``g3`` (G3 tables)."""
    logic = LogicId.parse(logic)
    if logic is LogicId.I3G3:
        carrier, ev, strong = list(FourValue), eval_four, True
    elif logic is LogicId.G3:
        carrier, ev, strong = list(ThreeValue), eval_g3, False
    else:
        raise ValueError("table sweeps cover i3g3 and g3")
    rep = SweepReport(f"tables:{logic}")
    pool = filler_pool(depth, strong=strong)
    for a in assignments(PROP_ATOMS, carrier):
        reps: dict = {}
        for f in pool:
            reps.setdefault(ev(f, a), f)
        for s in axiom_set(logic):
            if is_first_order(s):
                continue
            n = 0
            for combo in itertools.product(list(reps.items()), repeat=len(s.metas)):
                n += 1
                fn = {mv: (lambda v: lambda env: v)(v) for mv, (v, _) in zip(s.metas, combo)}
                if ev(s.pattern, a, fn) != carrier[0] and len(rep.failures) < limit:
                    fill = {mv: f for mv, (_, f) in zip(s.metas, combo)}
                    rep.failures.append(Failure(s.id, render(instantiate(s, fill)),
                                                ",".join(f"{k}={v}" for k, v in a.items())))
            rep.count(s.id, n)
    return rep


def mp_preserves(table: np.ndarray) -> bool:
    """Modus ponens keeps the designated value 0 (i.e. 1) over every pair."""
    k = table.shape[0]
    return all(not (a == 0 and table[a, b] == 0) or b == 0 for a in range(k) for b in range(k))


def mp_preserves_four() -> bool:
    return mp_preserves(FOUR_IMP)


def mp_preserves_g3() -> bool:
    return mp_preserves(G3_IMP)


# ---------------------------------------------------------- non-triviality

def sweep_nontrivial(depth: int = 2, cx_iff: bool = False, domain_sizes: Sequence[int] = (1, 2),
                     limit: int = 50) -> SweepReport:
    """Every bdi-cx axiom instance gets 1 under the override table."""
    rep = SweepReport("nontrivial:bdi-cx")
    schemas = axiom_set(LogicId.BDI_CX, cx_iff=cx_iff)
    pool = filler_pool(depth)
    for a in assignments(PROP_ATOMS, (0, 1)):
        reps: dict = {}
        for f in pool:
            reps.setdefault(nontrivial_eval(f, a), f)
        for s in schemas:
            if is_first_order(s):
                continue
            n = 0
            for combo in itertools.product(list(reps.items()), repeat=len(s.metas)):
                n += 1
                fn = {mv: (lambda v: lambda env: v)(v) for mv, (v, _) in zip(s.metas, combo)}
                if nontrivial_eval(s.pattern, a, fn) != 1 and len(rep.failures) < limit:
                    fill = {mv: f for mv, (_, f) in zip(s.metas, combo)}
                    rep.failures.append(Failure(s.id, render(instantiate(s, fill)),
                                                ",".join(f"{k}={v}" for k, v in a.items())))
            rep.count(s.id, n)
    fo_pool = filler_pool(depth, first_order=True)
    for size in domain_sizes:
        domain = ("c",) + tuple(f"d{i}" for i in range(1, size))
        slots = [("q", ())] + [("P", (d,)) for d in domain]
        for bits in itertools.product((0, 1), repeat=len(slots)):
            values = {("P", t): b for (p, t), b in zip(slots, bits) if p == "P"}
            values["q"] = bits[0]
            reps = {}
            reps_closed = {}
            for f in fo_pool:
                key = tuple(nontrivial_eval(f, values, None, domain, {"x": d}) for d in domain)
                reps.setdefault(key, f)
                if "x" not in f.fv:
                    reps_closed.setdefault(key, f)
            index = {d: i for i, d in enumerate(domain)}
            for s in schemas:
                if not is_first_order(s):
                    continue
                xfree = _X_FREE.get(s.id, ())
                n = 0
                for pat, params in variants(s):
                    fvs = _pattern_free_vars(pat)
                    lists = [list((reps_closed if mv in xfree else reps).items()) for mv in s.metas]
                    for combo in itertools.product(*lists):
                        n += 1
                        fn = {mv: (lambda key: lambda env: key[index[env["x"]]] if "x" in env else key[0])(key)
                              for mv, (key, _) in zip(s.metas, combo)}
                        for env_vals in itertools.product(domain, repeat=len(fvs)):
                            env = dict(zip(fvs, env_vals))
                            if nontrivial_eval(pat, values, fn, domain, env) != 1:
                                if len(rep.failures) < limit:
                                    fill = {mv: f for mv, (_, f) in zip(s.metas, combo)}
                                    rep.failures.append(Failure(s.id, render(_concrete(s, params, fill)),
                                                                f"D={domain} {values}"))
                                break
                rep.count(s.id, n)
    return rep


def nontrivial_rules_preserve() -> bool:
    """MP keeps value 1 under the classical → table; Gen keeps it trivially."""
    imp = lambda a, b: int((not a) or b)
    return all(not (a == 1 and imp(a, b) == 1) or b == 1 for a in (0, 1) for b in (0, 1))


def nontrivial_witness() -> Optional[dict]:
    """An assignment giving the atom ``p`` the value 0."""
    from .syntax import parse
    for a in assignments(["p"], (0, 1)):
        if nontrivial_eval(parse("p"), a) == 0:
            return a
    return None
