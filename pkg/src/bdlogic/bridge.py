"""Cross-semantics maps, the Aczel slash, and the semantics agreement harness.

Propositional comparisons are evaluated a whole enumeration level at a time:
each semantics is an algebra of numpy arrays whose last axis runs over the
models (assignments, worlds) in its population, so level ``n`` is built from
levels ``< n`` by broadcasting instead of by walking each formula.
"""
from __future__ import annotations

import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence

import numpy as np

from .enumeration import enumerate_formulas, formula_levels
from .formats import describe
from .hilbert import axiom_set, bounded_derive, match_schema, schema
from .kripke import (
    OMNISCIENT, MAX_SUCCESSOR, BatchForcing, KripkeModel, LogicId, enumerate_models,
    forcing_kind, validate,
)
from .matrices import (
    FOUR_AND, FOUR_IMP, FOUR_OR, FOUR_SNEG, G3_AND, G3_IMP, G3_OR, DunnBatch, DunnModel,
    FourValue, MatrixBatch, consequence_four, enumerate_dunn_models, eval_dunn,
)
from .star import BatchStar, StarModel, dunn_to_star, enumerate_star_models
from .syntax import (
    BOT, And, Atom, Bot, Const, Exists, Forall, Formula, Imp, Neg, Or, Signature, bneg,
    constants, render, size, substitute,
)

__all__ = [
    "Assignment4", "SlashResult", "assignment4_to_kripke2", "kripke2_to_assignment4", "slash",
    "derivability_oracle", "table_oracle", "enumerate_formulas", "compare_semantics",
    "Bounds", "CompareReport", "CompareRow", "SEMANTICS", "parse_semantics",
    "kripke_transfer_check", "star_transfer_check", "TransferReport",
]

Assignment4 = Dict[str, FourValue]


# ----------------------------------------------------- Kripke <-> four values

def assignment4_to_kripke2(v4: Mapping[str, FourValue]) -> KripkeModel:
    """Two-world chain ``x < y``: x decides only 1 and 0, y sends 1 and i to true."""
    pos = {"x": {}, "y": {}}
    neg = {"x": {}, "y": {}}
    for p, v in v4.items():
        v = FourValue(v)
        if v is FourValue.ONE:
            pos["x"][p] = True
        elif v is FourValue.ZERO:
            neg["x"][p] = True
        if v in (FourValue.ONE, FourValue.I):
            pos["y"][p] = True
        else:
            neg["y"][p] = True
    return KripkeModel.build(("x", "y"), order=[("x", "y")], pos=pos, neg=neg,
                             arities={p: 0 for p in v4})


def _chain(m: KripkeModel) -> tuple:
    if len(m.worlds) != 2:
        raise ValueError(f"expected a two-world chain, got {len(m.worlds)} worlds")
    a, b = m.worlds
    if m.leq(b, a) and not m.leq(a, b):
        a, b = b, a
    if not m.leq(a, b) or m.leq(b, a):
        raise ValueError("worlds are not ordered as a chain")
    return a, b


def kripke2_to_assignment4(m: KripkeModel) -> Assignment4:
    report = validate(m, "i3g3")
    if not report.ok:
        raise ValueError(f"not an I3G3 model: {report.violations[0]}")
    x, y = _chain(m)
    if any(m.arities.values()):
        raise ValueError("propositional model expected")
    out = {}
    for p in sorted(m.arities):
        if m.holds_pos(x, p, ()):
            out[p] = FourValue.ONE
        elif m.holds_neg(x, p, ()):
            out[p] = FourValue.ZERO
        elif m.holds_pos(y, p, ()):
            out[p] = FourValue.I
        else:
            out[p] = FourValue.J
    return out


# ------------------------------------------------------------------- slash

@dataclass(frozen=True)
class SlashResult:
    plus: bool
    minus: bool


def slash(formula: Formula, oracle: Callable[[Formula], bool],
          constant_pool: Optional[Iterable[str]] = None, variant: str = "bdi") -> SlashResult:
    """Positive and negative slash of a sentence, with ⊢ answered by ``oracle``.

    Quantifier clauses range over ``constant_pool`` (default: the constants of
    the sentence, or ``c`` if it has none).  ``variant="dn"`` uses the DN3/DN4
    clause for negated implications (``¬¬A`` in place of ``¬~A``).
    """
    if formula.fv:
        raise ValueError(f"slash needs a sentence: {render(formula)}")
    if variant not in ("bdi", "dn"):
        raise ValueError(f"unknown slash variant {variant!r}")
    pool = sorted(constant_pool) if constant_pool is not None else sorted(constants(formula)) or ["c"]
    asked: dict = {}
    memo: dict = {}

    def proves(f):
        hit = asked.get(f)
        if hit is None:
            hit = asked[f] = bool(oracle(f))
        return hit

    def inst(f):
        return [substitute(f.body, f.var, Const(c)) for c in pool]

    def go(f) -> tuple:
        hit = memo.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Atom):
            r = (proves(f), proves(Neg(f)))
        elif isinstance(f, Bot):
            r = (False, True)
        elif isinstance(f, Neg):
            p, m = go(f.body)
            r = (m, p)
        elif isinstance(f, And):
            (ap, am), (bp, bm) = go(f.left), go(f.right)
            r = (ap and bp, am or bm)
        elif isinstance(f, Or):
            (ap, am), (bp, bm) = go(f.left), go(f.right)
            r = (ap or bp, am and bm)
        elif isinstance(f, Imp):
            (ap, _), (bp, bm) = go(f.left), go(f.right)
            side = bneg(Neg(f.left)) if variant == "bdi" else bneg(bneg(f.left))
            r = (proves(f) and (not ap or bp), bm and proves(side))
        elif isinstance(f, Forall):
            vals = [go(g) for g in inst(f)]
            r = (proves(f) and all(p for p, _ in vals), any(m for _, m in vals))
        elif isinstance(f, Exists):
            vals = [go(g) for g in inst(f)]
            r = (any(p for p, _ in vals), proves(Neg(f)) and all(m for _, m in vals))
        else:
            raise TypeError(f"cannot slash {f!r}")
        memo[f] = r
        return r

    return SlashResult(*go(formula))


def derivability_oracle(logic="bdi3", budget: int = 2000, minimal: bool = False) -> Callable:
    """Sound but incomplete ⊢: a bounded forward search for a proof."""
    def oracle(f: Formula) -> bool:
        return bounded_derive([], f, logic, budget, minimal) is not None
    return oracle


def table_oracle() -> Callable:
    """Exact ⊢ for BDi3 + AxG, by validity in the four-valued tables."""
    def oracle(f: Formula) -> bool:
        return consequence_four([], f).valid
    return oracle


# ----------------------------------------------------------- the algebras

class _Algebra:
    """Array semantics over a fixed population; values end with the model axis."""
    exact = False
    strong = True

    def atom(self, name: str) -> np.ndarray:
        raise NotImplementedError

    def bot(self) -> np.ndarray:
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def conj(self, a, b):
        raise NotImplementedError

    def disj(self, a, b):
        raise NotImplementedError

    def imp(self, a, b):
        raise NotImplementedError

    def designated(self, x) -> np.ndarray:
        raise NotImplementedError

    def witness(self, k: int):
        raise NotImplementedError

    def value(self, f: Formula, memo: Optional[dict] = None) -> np.ndarray:
        """Single-formula evaluation with the same operations."""
        memo = {} if memo is None else memo
        hit = memo.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Atom):
            if f.args:
                raise ValueError(f"propositional atom expected, got {render(f)}")
            out = self.atom(f.pred)
        elif isinstance(f, Bot):
            out = self.bot()
        elif isinstance(f, Neg):
            out = self.neg(self.value(f.body, memo))
        elif isinstance(f, (And, Or, Imp)):
            op = self.conj if isinstance(f, And) else self.disj if isinstance(f, Or) else self.imp
            out = op(self.value(f.left, memo), self.value(f.right, memo))
        else:
            raise ValueError(f"not propositional: {render(f)}")
        memo[f] = out
        return out


class _PairAlgebra(_Algebra):
    """Values ``(..., 2, N)``: index 0 is truth, 1 is falsity."""

    def neg(self, x):
        return x[..., ::-1, :]

    def conj(self, a, b):
        return np.stack(np.broadcast_arrays(a[..., 0, :] & b[..., 0, :], a[..., 1, :] | b[..., 1, :]), axis=-2)

    def disj(self, a, b):
        return np.stack(np.broadcast_arrays(a[..., 0, :] | b[..., 0, :], a[..., 1, :] & b[..., 1, :]), axis=-2)

    def designated(self, x):
        return x[..., 0, :]


class DunnAlgebra(_PairAlgebra):
    exact = True

    def __init__(self, atoms: Sequence[str]):
        self.batch = DunnBatch(atoms)
        self.size = self.batch.size

    def atom(self, name):
        return np.stack(self.batch.value(Atom(name, ())))

    def bot(self):
        return np.stack(self.batch.value(BOT))

    def imp(self, a, b):
        return np.stack(np.broadcast_arrays(~a[..., 0, :] | b[..., 0, :], ~a[..., 1, :] & b[..., 1, :]), axis=-2)

    def witness(self, k):
        return self.batch.assignment(k)


class KripkeAlgebra(_PairAlgebra):
    def __init__(self, models: Sequence[KripkeModel], kind: str, exact: bool = False):
        self.models = list(models)
        if not self.models:
            raise ValueError("empty model population")
        self.bf = BatchForcing(self.models, kind=kind)
        self.kind = kind
        self.size = self.bf.size
        self.exact = exact
        self.strong = kind != "mh"

    def atom(self, name):
        return np.stack(self.bf.value(Atom(name, ())))

    def bot(self):
        return np.stack(self.bf.value(BOT))

    def neg(self, x):
        if self.kind == "mh":
            raise ValueError("strong negation is outside the MH/G3 language")
        return x[..., ::-1, :]

    def imp(self, a, b):
        at, af, bt, bf = a[..., 0, :], a[..., 1, :], b[..., 0, :], b[..., 1, :]
        t = self.bf.box(~at | bt)
        if self.kind == "mh":
            f = np.zeros_like(t)
        elif self.kind == "dn":
            f = self.bf.box(self.bf.diamond(at)) & bf
        else:
            f = self.bf.box(~af) & bf
        return np.stack(np.broadcast_arrays(t, f), axis=-2)

    def witness(self, k):
        i, w = self.bf.world_ids[k]
        return self.models[i], w


class StarAlgebra(_Algebra):
    def __init__(self, models: Sequence[StarModel], exact: bool = False):
        self.models = list(models)
        self.bs = BatchStar(self.models)
        self.size = self.bs.size
        self.exact = exact

    def atom(self, name):
        return self.bs.value(Atom(name, ()))

    def bot(self):
        return self.bs.zeros

    def neg(self, x):
        return ~x[..., self.bs.star_index]

    def conj(self, a, b):
        return a & b

    def disj(self, a, b):
        return a | b

    def imp(self, a, b):
        return ~a | b

    def designated(self, x):
        return x

    def witness(self, k):
        i, w = self.bs.world_ids[k]
        return self.models[i], w


class TableAlgebra(_Algebra):
    exact = True

    def __init__(self, atoms: Sequence[str], kind: str = "four"):
        self.batch = MatrixBatch(atoms, kind)
        self.size = self.batch.size
        self.strong = kind == "four"
        if kind == "four":
            self._and, self._or, self._imp, self._neg = FOUR_AND, FOUR_OR, FOUR_IMP, FOUR_SNEG
        else:
            self._and, self._or, self._imp, self._neg = G3_AND, G3_OR, G3_IMP, None

    def atom(self, name):
        return self.batch.value(Atom(name, ()))

    def bot(self):
        return self.batch.value(BOT)

    def neg(self, x):
        if self._neg is None:
            raise ValueError("strong negation is outside the G3 language")
        return self._neg[x]

    def conj(self, a, b):
        return self._and[a, b]

    def disj(self, a, b):
        return self._or[a, b]

    def imp(self, a, b):
        return self._imp[a, b]

    def designated(self, x):
        return x == 0

    def witness(self, k):
        return self.batch.assignment(k)


_CHUNK = 1 << 22


def level_values(alg: _Algebra, atoms: Sequence[str], depth: int, strong: bool = True) -> list:
    """Value arrays aligned with :func:`formula_levels` (propositional fragments)."""
    first = np.stack([alg.atom(a) for a in atoms] + [alg.bot()])
    levels = [first]
    for n in range(1, depth + 1):
        parts = []
        if strong:
            parts.append(alg.neg(levels[n - 1]))
        for op in (alg.conj, alg.disj, alg.imp):
            for i in range(n):
                A, B = levels[i], levels[n - 1 - i]
                step = max(1, _CHUNK // max(1, B.size))
                for s in range(0, len(A), step):
                    r = op(A[s:s + step, None], B[None])
                    parts.append(r.reshape((-1,) + r.shape[2:]))
        levels.append(np.concatenate(parts))
    return levels


# ------------------------------------------------------------- semantics ids

SEMANTICS = ("dunn", "star", "four", "g3-table", "bd+", "bdi", "bdi3", "dn3", "dn4", "mh", "g3",
             "i3g3", "dn3+i3")


@dataclass(frozen=True)
class Bounds:
    max_worlds: int = 2
    max_domain: int = 1


@dataclass(frozen=True)
class _Sem:
    name: str
    family: str                 # dunn | star | table | kripke
    logic: Optional[str] = None
    extra: tuple = ()
    axioms: tuple = ()

    @property
    def strong(self) -> bool:
        if self.family == "table":
            return self.logic == "four"
        if self.family == "kripke":
            return forcing_kind(self.logic) != "mh"
        return True


def parse_semantics(text: str) -> _Sem:
    key = text.strip().lower()
    if key.startswith("kripke:"):
        key = key[len("kripke:"):]
    key = {"matrix:i3g3": "four", "matrix:g3": "g3-table", "tables": "four"}.get(key, key)
    if key == "dunn":
        return _Sem("dunn", "dunn")
    if key == "star":
        return _Sem("star", "star")
    if key in ("four", "g3-table"):
        return _Sem(key, "table", "four" if key == "four" else "g3")
    if key == "dn3+i3":
        ids = [s.id for s in axiom_set("dn3")] + ["i3"]
        return _Sem(key, "kripke", "dn3", (OMNISCIENT, MAX_SUCCESSOR), tuple(ids))
    try:
        logic = LogicId.parse(key)
    except ValueError:
        raise ValueError(f"unknown semantics {text!r}; expected one of {', '.join(SEMANTICS)}") from None
    if logic is LogicId.BDI_CX:
        raise ValueError("bdi-cx has no semantics to compare (use the nontrivial table check)")
    return _Sem(logic.value, "kripke", logic.value, (), tuple(s.id for s in axiom_set(logic)))


def _prop_sig(atoms) -> Signature:
    return Signature({a: 0 for a in atoms}, frozenset())


def _kripke_exact(sem: _Sem, bounds: Bounds) -> bool:
    """Bounded Kripke search is complete on propositional input for these."""
    if sem.logic == "bd+":
        return True
    return sem.logic in ("i3g3", "g3") and bounds.max_worlds >= 2


def build_algebra(sem: _Sem, atoms: Sequence[str], bounds: Bounds) -> _Algebra:
    atoms = list(atoms)
    if sem.family == "dunn":
        return DunnAlgebra(atoms)
    if sem.family == "table":
        return TableAlgebra(atoms, sem.logic)
    if sem.family == "star":
        models = list(enumerate_star_models(_prop_sig(atoms), bounds.max_worlds, 1))
        return StarAlgebra(models, exact=bounds.max_worlds >= 2)
    models = list(enumerate_models(_prop_sig(atoms), sem.logic, bounds.max_worlds, 1, sem.extra))
    return KripkeAlgebra(models, forcing_kind(sem.logic), _kripke_exact(sem, bounds))


# -------------------------------------------------------------- the report

VALID, REFUTED, UNREFUTED = "valid", "refuted", "unrefuted"


@dataclass(frozen=True)
class CompareRow:
    index: int
    formula: str
    left: str
    right: str
    kind: str                   # hard | tie
    left_witness: str = ""
    right_witness: str = ""


@dataclass
class CompareReport:
    left: str
    right: str
    depth: int
    fragment: str
    checked: int = 0
    counts: Counter = field(default_factory=Counter)
    verdicts: Counter = field(default_factory=Counter)
    rows: list = field(default_factory=list)
    by_size: Counter = field(default_factory=Counter)
    elapsed: float = 0.0

    @property
    def hard(self) -> list:
        return [r for r in self.rows if r.kind == "hard"]

    @property
    def ties(self) -> list:
        return [r for r in self.rows if r.kind == "tie"]

    @property
    def ok(self) -> bool:
        return self.counts["hard"] == 0

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def merge(self, other: "CompareReport") -> "CompareReport":
        if (self.left, self.right, self.fragment) != (other.left, other.right, other.fragment):
            raise ValueError("cannot merge reports of different comparisons")
        rows = sorted(self.rows + other.rows, key=lambda r: r.index)
        return CompareReport(self.left, self.right, max(self.depth, other.depth), self.fragment,
                             self.checked + other.checked, self.counts + other.counts,
                             self.verdicts + other.verdicts, rows, self.by_size + other.by_size,
                             self.elapsed + other.elapsed)

    def summary(self) -> str:
        lines = [
            f"compare {self.left} vs {self.right}: fragment {self.fragment}, depth <= {self.depth}",
            f"formulas checked: {self.checked}",
            f"agree: {self.counts['agree']}  ties (inconclusive): {self.counts['tie']}  "
            f"hard disagreements: {self.counts['hard']}",
        ]
        for side in ("left", "right"):
            name = getattr(self, side)
            parts = ", ".join(f"{v} {self.verdicts[(side, v)]}" for v in (VALID, REFUTED, UNREFUTED))
            lines.append(f"{name}: {parts}")
        for r in self.hard[:10]:
            lines.append(f"  {r.formula}: {self.left} {r.left}, {self.right} {r.right}"
                         f"{'; ' + (r.left_witness or r.right_witness) if (r.left_witness or r.right_witness) else ''}")
        return "\n".join(lines)


def _classify(a: str, b: str) -> str:
    if a == b and a != UNREFUTED:
        return "agree"
    if REFUTED in (a, b):
        return "hard"
    return "tie"


def _verdicts(sem: _Sem, refuted: np.ndarray, formulas: Sequence[Formula], exact: bool) -> list:
    out = []
    for bad, f in zip(refuted, formulas):
        if bad:
            out.append(REFUTED)
        elif exact:
            out.append(VALID)
        elif sem.family == "kripke" and any(match_schema(schema(s), f) is not None for s in sem.axioms):
            out.append(VALID)
        else:
            out.append(UNREFUTED)
    return out


def _prop_side(sem: _Sem, atoms, depth, fragment, bounds):
    alg = build_algebra(sem, atoms, bounds)
    levels = level_values(alg, atoms, depth, strong=fragment == "propositional")
    des = [alg.designated(v) for v in levels]
    fails = np.concatenate([~d.all(axis=-1) for d in des])
    first = np.concatenate([np.argmax(~d, axis=-1) for d in des])
    return alg, fails, first


def _check_fragment(sem: _Sem, fragment: str) -> None:
    if fragment in ("propositional", "full", "unary-fo") and not sem.strong:
        raise ValueError(f"{sem.name} does not interpret strong negation; use a ~-free fragment")
    if fragment not in ("propositional", "~-free") and sem.family == "table":
        raise ValueError(f"{sem.name} is propositional only")


def compare_semantics(left: str, right: str, depth: int, bounds: Optional[Bounds] = None,
                      atoms: Sequence[str] = ("p", "q"), fragment: str = "propositional",
                      workers: Optional[int] = None) -> CompareReport:
    """Validity verdicts of every enumerated formula under two semantics.

    A verdict is ``valid`` (exact semantics, or a matched axiom schema for a
    bounded Kripke logic), ``refuted`` (a countermodel within bounds) or
    ``unrefuted``.  Refuted against anything else is a hard disagreement;
    valid against unrefuted, or two unrefuted verdicts, is an inconclusive tie.
    """
    bounds = bounds or Bounds()
    ls, rs = parse_semantics(left), parse_semantics(right)
    for s in (ls, rs):
        _check_fragment(s, fragment)
    start = time.perf_counter()
    report = CompareReport(ls.name, rs.name, depth, fragment)
    if fragment in ("propositional", "~-free"):
        levels = formula_levels(atoms, depth, fragment)
        formulas = [f for level in levels for f in level]
        sizes = [n for n, level in enumerate(levels) for _ in level]
        lalg, lfail, lfirst = _prop_side(ls, atoms, depth, fragment, bounds)
        ralg, rfail, rfirst = _prop_side(rs, atoms, depth, fragment, bounds)
        lv = _verdicts(ls, lfail, formulas, lalg.exact)
        rv = _verdicts(rs, rfail, formulas, ralg.exact)

        def wit(alg, fail, first, k):
            return describe(alg.witness(int(first[k]))) if fail[k] else ""

        for k, f in enumerate(formulas):
            kind = _classify(lv[k], rv[k])
            report.counts[kind] += 1
            report.by_size[(sizes[k], kind)] += 1
            report.verdicts[("left", lv[k])] += 1
            report.verdicts[("right", rv[k])] += 1
            if kind != "agree":
                report.rows.append(CompareRow(k, render(f), lv[k], rv[k], kind,
                                              wit(lalg, lfail, lfirst, k), wit(ralg, rfail, rfirst, k)))
        report.checked = len(formulas)
    else:
        formulas = list(enumerate_formulas(_fo_atoms(atoms), depth, fragment))
        workers = workers or int(os.environ.get("BDLOGIC_WORKERS", "1") or 1)
        texts = [render(f) for f in formulas]
        chunks = [list(range(i, min(i + 200, len(texts)))) for i in range(0, len(texts), 200)]
        args = [(ls, rs, bounds, [texts[i] for i in c], c[0], depth, fragment) for c in chunks]
        if workers > 1 and len(chunks) > 1:
            with ProcessPoolExecutor(workers) as pool:
                parts = list(pool.map(_fo_chunk, args))
        else:
            parts = [_fo_chunk(a) for a in args]
        for part in parts:
            report = report.merge(part)
    report.depth = depth
    report.elapsed = time.perf_counter() - start
    return report


def _fo_atoms(atoms):
    if tuple(atoms) == ("p", "q"):
        return ("P(x)", "P(c)", "q")
    return atoms


def _fo_population(sem: _Sem, sig: Signature, bounds: Bounds):
    if sem.family == "dunn":
        models = list(enumerate_dunn_models(sig, bounds.max_domain))
        return lambda f: np.array([eval_dunn(m, f).has1 for m in models]), lambda k: models[k]
    if sem.family == "star":
        models = list(enumerate_star_models(sig, bounds.max_worlds, bounds.max_domain))
        bs = BatchStar(models)
        return bs.value, lambda k: (models[bs.world_ids[k][0]], bs.world_ids[k][1])
    models = list(enumerate_models(sig, sem.logic, bounds.max_worlds, bounds.max_domain, sem.extra))
    bf = BatchForcing(models, kind=forcing_kind(sem.logic))
    return (lambda f: bf.true(f) | ~bf.defined(f)), \
        (lambda k: (models[bf.world_ids[k][0]], bf.world_ids[k][1]))


def _fo_chunk(args) -> CompareReport:
    from .syntax import parse
    ls, rs, bounds, texts, offset, depth, fragment = args
    formulas = [parse(t) for t in texts]
    sig = Signature.of(formulas)
    report = CompareReport(ls.name, rs.name, depth, fragment)
    sides = []
    for sem in (ls, rs):
        des, wit = _fo_population(sem, sig, bounds)
        vals = [des(f) for f in formulas]
        fails = np.array([not v.all() for v in vals], dtype=bool)
        first = [int(np.argmax(~v)) for v in vals]
        sides.append((_verdicts(sem, fails, formulas, False), fails, first, wit))
    (lv, lf, l1, lw), (rv, rf, r1, rw) = sides
    for k, t in enumerate(texts):
        kind = _classify(lv[k], rv[k])
        report.counts[kind] += 1
        report.by_size[(size(formulas[k]), kind)] += 1
        report.verdicts[("left", lv[k])] += 1
        report.verdicts[("right", rv[k])] += 1
        if kind != "agree":
            report.rows.append(CompareRow(offset + k, t, lv[k], rv[k], kind,
                                          describe(lw(l1[k])) if lf[k] else "",
                                          describe(rw(r1[k])) if rf[k] else ""))
    report.checked = len(texts)
    return report


# ------------------------------------------------------- transfer checks

@dataclass
class TransferReport:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _flat(levels) -> np.ndarray:
    return np.concatenate(levels)


def star_transfer_check(atoms: Sequence[str] = ("p", "q"), depth: int = 4, limit: int = 20) -> TransferReport:
    """For each Dunn assignment: 1∈I(A) iff a ⊩ A, and 0∈I(A) iff b ⊮ A."""
    dunn = DunnAlgebra(atoms)
    models = [dunn_to_star(DunnModel.from_assignment(dunn.witness(k))) for k in range(dunn.size)]
    star = StarAlgebra(models)
    d = _flat(level_values(dunn, atoms, depth))
    s = _flat(level_values(star, atoms, depth))
    a, b = s[:, 0::2], s[:, 1::2]
    bad_t = d[:, 0, :] != a
    bad_f = d[:, 1, :] != ~b
    rep = TransferReport("dunn-star", d.shape[0] * d.shape[2])
    formulas = [f for level in formula_levels(atoms, depth) for f in level]
    for name, bad in (("truth at a", bad_t), ("falsity via b", bad_f)):
        for i, k in zip(*np.nonzero(bad)):
            if len(rep.failures) >= limit:
                break
            rep.failures.append((name, render(formulas[i]), describe(dunn.witness(int(k)))))
    return rep


def _five(T, F, v, formulas, where, rep, limit):
    """T, F: forcing at x and y (shape (L, 2, M)); v: four values (L, M)."""
    tx, fx, ty, fy = T[:, 0], F[:, 0], T[:, 1], F[:, 1]
    one, i, j, zero = (v == FourValue.ONE), (v == FourValue.I), (v == FourValue.J), (v == FourValue.ZERO)
    checks = (
        ("I(x,A)={1} iff 1", (tx & ~fx) != one),
        ("I(x,A)={0} iff 0", (fx & ~tx) != zero),
        ("I(x,A)=empty iff i or j", (~tx & ~fx) != (i | j)),
        ("I(y,A)={1} iff 1 or i", (ty & ~fy) != (one | i)),
        ("I(y,A)={0} iff j or 0", (fy & ~ty) != (j | zero)),
    )
    for name, bad in checks:
        for a, k in zip(*np.nonzero(bad)):
            if len(rep.failures) >= limit:
                return
            rep.failures.append((name, render(formulas[a]), where(int(k))))


def kripke_transfer_check(atoms: Sequence[str] = ("p", "q"), depth: int = 4, limit: int = 20) -> list:
    """Both directions of the four-value/2-chain correspondence.

    Returns two reports: from every assignment via ``assignment4_to_kripke2``,
    and from every validated 2-chain I3G3 model via ``kripke2_to_assignment4``.
    Round-trip identity is checked along the way.
    """
    atoms = list(atoms)
    table = TableAlgebra(atoms, "four")
    v = _flat(level_values(table, atoms, depth))
    formulas = [f for level in formula_levels(atoms, depth) for f in level]
    n = len(atoms)

    fwd = TransferReport("four->kripke")
    v4s = [table.witness(k) for k in range(table.size)]
    models = [assignment4_to_kripke2(a) for a in v4s]
    for a, m in zip(v4s, models):
        if not validate(m, "i3g3").ok:
            fwd.failures.append(("not an I3G3 model", "", describe(a)))
        if kripke2_to_assignment4(m) != a:
            fwd.failures.append(("round trip", "", describe(a)))
    kr = KripkeAlgebra(models, "bdi")
    K = _flat(level_values(kr, atoms, depth))            # (L, 2, 2M): worlds x, y per model
    T = K[:, 0, :].reshape(len(K), -1, 2).transpose(0, 2, 1)
    F = K[:, 1, :].reshape(len(K), -1, 2).transpose(0, 2, 1)
    fwd.checked = len(formulas) * len(models)
    _five(T, F, v, formulas, lambda k: describe(v4s[k]), fwd, limit)

    back = TransferReport("kripke->four")
    chains = [m for m in enumerate_models(_prop_sig(atoms), "i3g3", 2) if len(m.worlds) == 2]
    idx, back_v4 = [], []
    for m in chains:
        a = kripke2_to_assignment4(m)
        back_v4.append(a)
        idx.append(sum(int(a[p]) * 4 ** (n - 1 - i) for i, p in enumerate(atoms)))
        again = assignment4_to_kripke2(a)
        x, y = _chain(m)
        for p in atoms:
            same = (m.holds_pos(x, p, ()) == again.holds_pos("x", p, ()) and
                    m.holds_neg(x, p, ()) == again.holds_neg("x", p, ()) and
                    m.holds_pos(y, p, ()) == again.holds_pos("y", p, ()) and
                    m.holds_neg(y, p, ()) == again.holds_neg("y", p, ()))
            if not same:
                back.failures.append(("round trip", p, describe((m, x))))
    kc = KripkeAlgebra(chains, "bdi")
    K = _flat(level_values(kc, atoms, depth))
    order = []
    for i, m in enumerate(chains):
        x, y = _chain(m)
        base = kc.bf.offsets[i]
        order.append((base + m.worlds.index(x), base + m.worlds.index(y)))
    xs = np.array([o[0] for o in order])
    ys = np.array([o[1] for o in order])
    T = np.stack([K[:, 0, xs], K[:, 0, ys]], axis=1)
    F = np.stack([K[:, 1, xs], K[:, 1, ys]], axis=1)
    back.checked = len(formulas) * len(chains)
    _five(T, F, v[:, np.array(idx)], formulas, lambda k: describe((chains[k], "root")), back, limit)
    return [fwd, back]
