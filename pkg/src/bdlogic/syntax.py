"""First-order formula language: terms, formulas, parser, printer, translations.

Formulas are immutable and hash-consed lightly: every node caches its hash and
its free variables on construction, so large enumerations can be memoised
cheaply.  Derived connectives (``neg``, ``<->``, ``=>``) exist only in the
surface syntax and are expanded by the parser.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

__all__ = [
    "Const", "Var", "TermMeta", "Term",
    "Formula", "Atom", "Bot", "Neg", "And", "Or", "Imp", "Forall", "Exists",
    "Meta", "MetaInst",
    "Signature", "ParseError", "SignatureError",
    "is_variable_name", "bneg", "iff", "strong_imp", "TOP_N",
    "parse", "render", "substitute", "free_vars", "constants", "predicates",
    "size", "is_sentence", "has_strong_neg", "subformulas",
    "reduce", "reduce_dn4", "is_reduced", "prime_name", "prime_translate", "e_set",
]

_VAR_RE = re.compile(r"^[u-z][0-9]*'*$")

# atom that stands for ~bot once strong negation is translated away
TOP_N = "top_n"


def is_variable_name(name: str) -> bool:
    """Variables are a lowercase letter u..z optionally followed by digits."""
    return bool(_VAR_RE.match(name))


# --------------------------------------------------------------------- terms

@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TermMeta:
    """Placeholder for a term inside an axiom schema."""
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Const, Var, TermMeta]


# ------------------------------------------------------------------ formulas

class Formula:
    """Base class for formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


def _init_cache(node, h: int, fv: frozenset) -> None:
    object.__setattr__(node, "_hash", h)
    object.__setattr__(node, "fv", fv)


@dataclass(frozen=True, eq=True)
class Atom(Formula):
    pred: str
    args: tuple = ()
    _hash: int = field(init=False, repr=False, compare=False)
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        fv = frozenset(t.name for t in self.args if isinstance(t, Var))
        _init_cache(self, hash(("atom", self.pred, self.args)), fv)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class Bot(Formula):
    _hash: int = field(init=False, repr=False, compare=False)
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _init_cache(self, hash("bot"), frozenset())

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class Neg(Formula):
    """Strong (de Morgan) negation."""
    body: Formula
    _hash: int = field(init=False, repr=False, compare=False)
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _init_cache(self, hash(("~", self.body._hash)), self.body.fv)

    def __hash__(self):
        return self._hash


class _Binary(Formula):
    __slots__ = ()
    symbol = "?"


def _binary(cls_name: str, symbol: str, tag: str):
    @dataclass(frozen=True, eq=True)
    class B(_Binary):
        left: Formula
        right: Formula
        _hash: int = field(init=False, repr=False, compare=False)
        fv: frozenset = field(init=False, repr=False, compare=False)

        def __post_init__(self):
            _init_cache(self, hash((tag, self.left._hash, self.right._hash)),
                        self.left.fv | self.right.fv)

        def __hash__(self):
            return self._hash

    B.__name__ = B.__qualname__ = cls_name
    B.symbol = symbol
    return B


And = _binary("And", "&", "and")
Or = _binary("Or", "|", "or")
Imp = _binary("Imp", "->", "imp")


class _Quant(Formula):
    __slots__ = ()
    keyword = "?"


def _quant(cls_name: str, keyword: str):
    @dataclass(frozen=True, eq=True)
    class Q(_Quant):
        var: str
        body: Formula
        _hash: int = field(init=False, repr=False, compare=False)
        fv: frozenset = field(init=False, repr=False, compare=False)

        def __post_init__(self):
            _init_cache(self, hash((keyword, self.var, self.body._hash)),
                        self.body.fv - {self.var})

        def __hash__(self):
            return self._hash

    Q.__name__ = Q.__qualname__ = cls_name
    Q.keyword = keyword
    return Q


Forall = _quant("Forall", "forall")
Exists = _quant("Exists", "exists")


@dataclass(frozen=True, eq=True)
class Meta(Formula):
    """Schema metavariable standing for an arbitrary formula."""
    name: str
    _hash: int = field(init=False, repr=False, compare=False)
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _init_cache(self, hash(("meta", self.name)), frozenset())

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class MetaInst(Formula):
    """Schema placeholder ``A(t)``: metavariable ``meta`` with ``var`` replaced by ``term``."""
    meta: str
    var: str
    term: Term
    _hash: int = field(init=False, repr=False, compare=False)
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        fv = frozenset([self.term.name]) if isinstance(self.term, Var) else frozenset()
        _init_cache(self, hash(("metainst", self.meta, self.var, self.term)), fv)

    def __hash__(self):
        return self._hash


BOT = Bot()


def bneg(a: Formula) -> Formula:
    """Boolean negation ``A -> bot``."""
    return Imp(a, BOT)


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def strong_imp(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(Neg(b), Neg(a)))


# ----------------------------------------------------------------- signature

class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    """Predicate arities and constant names."""
    predicates: Mapping[str, int] = field(default_factory=dict)
    constants: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "predicates", dict(self.predicates))
        object.__setattr__(self, "constants", frozenset(self.constants))
        bad = [c for c in self.constants if is_variable_name(c)]
        if bad:
            raise SignatureError(f"constant names clash with variable names: {sorted(bad)}")

    @classmethod
    def of(cls, formulas: Iterable[Formula]) -> "Signature":
        preds: dict = {}
        consts: set = set()
        for f in formulas:
            for name, arity in predicates(f).items():
                if preds.setdefault(name, arity) != arity:
                    raise SignatureError(f"predicate {name} used with arities {preds[name]} and {arity}")
            consts |= constants(f)
        return cls(preds, frozenset(consts))

    def merge(self, other: "Signature") -> "Signature":
        preds = dict(self.predicates)
        for name, arity in other.predicates.items():
            if preds.setdefault(name, arity) != arity:
                raise SignatureError(f"predicate {name} used with arities {preds[name]} and {arity}")
        return Signature(preds, self.constants | other.constants)

    def primed(self) -> "Signature":
        """Signature extended by a primed twin ``P'`` of every predicate."""
        preds = dict(self.predicates)
        for name, arity in self.predicates.items():
            twin = prime_name(name)
            if twin in self.predicates:
                raise SignatureError(f"primed name {twin} collides with an existing predicate")
            preds[twin] = arity
        return Signature(preds, self.constants)


# -------------------------------------------------------------------- parser

class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at position {pos}" + (f": {text!r}" if text else ""))
        self.pos = pos


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|=>|[~&|().,]|↔|→|⇒|∧|∨|¬|∼|∀|∃|⊥)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
""", re.VERBOSE)

_UNICODE = {"↔": "<->", "→": "->", "⇒": "=>", "∧": "&", "∨": "|", "¬": "neg",
            "∼": "~", "∀": "forall", "∃": "exists", "⊥": "bot"}
_KEYWORDS = {"bot", "neg", "forall", "exists"}


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError("unexpected character", pos, text[pos])
        if m.lastgroup != "ws":
            tok = m.group()
            tokens.append((_UNICODE.get(tok, tok), m.lastgroup, pos))
        pos = m.end()
    tokens.append(("<eof>", "eof", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Optional[Signature]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = sig
        self.arity: dict = {}

    def peek(self) -> str:
        return self.toks[self.i][0]

    def pos(self) -> int:
        return self.toks[self.i][2]

    def take(self, expected: Optional[str] = None):
        tok, kind, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r} but found {tok!r}", pos)
        self.i += 1
        return tok, kind, pos

    def parse(self) -> Formula:
        f = self.iff(frozenset())
        if self.peek() != "<eof>":
            raise ParseError(f"unexpected {self.peek()!r}", self.pos())
        return f

    def iff(self, bound):
        left = self.imp(bound)
        if self.peek() == "<->":
            self.take()
            return iff(left, self.iff(bound))
        return left

    def imp(self, bound):
        left = self.disj(bound)
        if self.peek() == "->":
            self.take()
            return Imp(left, self.imp(bound))
        if self.peek() == "=>":
            self.take()
            return strong_imp(left, self.imp(bound))
        return left

    def disj(self, bound):
        left = self.conj(bound)
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conj(bound))
        return left

    def conj(self, bound):
        left = self.unary(bound)
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary(bound))
        return left

    def unary(self, bound):
        tok = self.peek()
        if tok == "~":
            self.take()
            return Neg(self.unary(bound))
        if tok == "neg":
            self.take()
            return bneg(self.unary(bound))
        if tok in ("forall", "exists"):
            self.take()
            name, kind, pos = self.take()
            if kind != "ident" or name in _KEYWORDS:
                raise ParseError("expected a variable after quantifier", pos, name)
            if not is_variable_name(name):
                raise ParseError("quantified name is not a variable (use u..z)", pos, name)
            self.take(".")
            body = self.iff(bound | {name})
            return (Forall if tok == "forall" else Exists)(name, body)
        return self.primary(bound)

    def primary(self, bound):
        tok, kind, pos = self.take()
        if tok == "bot":
            return BOT
        if tok == "(":
            f = self.iff(bound)
            self.take(")")
            return f
        if kind != "ident" or tok in _KEYWORDS:
            raise ParseError(f"unexpected {tok!r}", pos)
        args: list = []
        if self.peek() == "(":
            self.take()
            if self.peek() != ")":
                args.append(self.term())
                while self.peek() == ",":
                    self.take()
                    args.append(self.term())
            self.take(")")
        self.check_pred(tok, len(args), pos)
        return Atom(tok, tuple(args))

    def term(self) -> Term:
        name, kind, pos = self.take()
        if kind != "ident" or name in _KEYWORDS:
            raise ParseError("expected a term", pos, name)
        if is_variable_name(name):
            return Var(name)
        if self.sig is not None and name not in self.sig.constants:
            raise ParseError("unknown constant", pos, name)
        return Const(name)

    def check_pred(self, name: str, arity: int, pos: int) -> None:
        if self.sig is not None:
            if name not in self.sig.predicates:
                raise ParseError("unknown predicate", pos, name)
            if self.sig.predicates[name] != arity:
                raise ParseError(f"arity mismatch: {name} expects {self.sig.predicates[name]} arguments", pos, name)
        elif self.arity.setdefault(name, arity) != arity:
            raise ParseError(f"arity mismatch: {name} used with {self.arity[name]} and {arity} arguments", pos, name)


def parse(text: str, sig: Optional[Signature] = None) -> Formula:
    """Parse ASCII (or Unicode) surface syntax into a desugared formula.

    Identifiers ``u``..``z`` (optionally followed by digits) are variables;
    every other term identifier is a constant.  Without a signature, predicate
    arities are inferred and must be used consistently.
    """
    return _Parser(text, sig).parse()


# ------------------------------------------------------------------- printer

_PREC = {"Imp": 1, "Or": 2, "And": 3}


def render(f: Formula) -> str:
    """Print with the minimal parentheses that ``parse`` needs to read it back."""
    return _render(f, 0, True)


def _render(f: Formula, ctx: int, rightmost: bool) -> str:
    # ctx: binding strength required by the parent; rightmost: nothing follows f
    if isinstance(f, Atom):
        if not f.args:
            return f.pred
        return f"{f.pred}({','.join(str(t) for t in f.args)})"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Meta):
        return f.name
    if isinstance(f, MetaInst):
        return f"{f.meta}[{f.var}:={f.term}]"
    if isinstance(f, Neg):
        return "~" + _render(f.body, 4, rightmost)
    if isinstance(f, _Quant):
        s = f"{f.keyword} {f.var}. {_render(f.body, 0, True)}"
        return s if rightmost else f"({s})"
    if isinstance(f, _Binary):
        p = _PREC[type(f).__name__]
        paren = p < ctx
        inner_right = True if paren else rightmost
        if isinstance(f, Imp):
            s = f"{_render(f.left, p + 1, False)} -> {_render(f.right, p, inner_right)}"
        else:
            s = f"{_render(f.left, p, False)} {f.symbol} {_render(f.right, p + 1, inner_right)}"
        return f"({s})" if paren else s
    raise TypeError(f"not a formula: {f!r}")


# --------------------------------------------------------- structural queries

def free_vars(f: Formula) -> frozenset:
    return f.fv


def is_sentence(f: Formula) -> bool:
    return not f.fv


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal of all subformula occurrences."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, _Binary):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, (Neg, _Quant)):
            stack.append(g.body)


def constants(f: Formula) -> frozenset:
    out = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            out.update(t.name for t in g.args if isinstance(t, Const))
        elif isinstance(g, MetaInst) and isinstance(g.term, Const):
            out.add(g.term.name)
    return frozenset(out)


def predicates(f: Formula) -> dict:
    out: dict = {}
    for g in subformulas(f):
        if isinstance(g, Atom) and out.setdefault(g.pred, len(g.args)) != len(g.args):
            raise SignatureError(f"predicate {g.pred} used with different arities")
    return out


def size(f: Formula) -> int:
    """Number of connective and quantifier occurrences."""
    return sum(1 for g in subformulas(f) if isinstance(g, (Neg, _Binary, _Quant)))


def has_strong_neg(f: Formula) -> bool:
    return any(isinstance(g, Neg) for g in subformulas(f))


# -------------------------------------------------------------- substitution

def _fresh(base: str, avoid: set) -> str:
    stem = base.rstrip("0123456789'")
    k = 1
    while f"{stem}{k}" in avoid:
        k += 1
    return f"{stem}{k}"


def _subst_term(t: Term, x: str, s: Term) -> Term:
    return s if isinstance(t, Var) and t.name == x else t


def _vars_in(f: Formula) -> set:
    out = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            out.update(t.name for t in g.args if isinstance(t, Var))
        elif isinstance(g, _Quant):
            out.add(g.var)
    return out


def substitute(f: Formula, x: str, t: Term) -> Formula:
    """Replace free occurrences of variable ``x`` by ``t``, renaming bound
    variables where ``t`` would otherwise be captured."""
    if x not in f.fv:
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(_subst_term(a, x, t) for a in f.args))
    if isinstance(f, Neg):
        return Neg(substitute(f.body, x, t))
    if isinstance(f, _Binary):
        return type(f)(substitute(f.left, x, t), substitute(f.right, x, t))
    if isinstance(f, _Quant):
        if isinstance(t, Var) and t.name == f.var:
            fresh = _fresh(f.var, _vars_in(f.body) | {x, t.name})
            body = substitute(f.body, f.var, Var(fresh))
            return type(f)(fresh, substitute(body, x, t))
        return type(f)(f.var, substitute(f.body, x, t))
    if isinstance(f, MetaInst):
        raise TypeError("cannot substitute into a schema placeholder")
    return f


def free_for(t: Term, x: str, f: Formula) -> bool:
    """True when substituting ``t`` for ``x`` in ``f`` captures nothing."""
    if not isinstance(t, Var) or x not in f.fv:
        return True
    if isinstance(f, Neg):
        return free_for(t, x, f.body)
    if isinstance(f, _Binary):
        return free_for(t, x, f.left) and free_for(t, x, f.right)
    if isinstance(f, _Quant):
        if f.var == t.name:
            return False
        return free_for(t, x, f.body)
    return True


# ----------------------------------------------------------------- reduction

def reduce(f: Formula) -> Formula:
    """Push strong negation inward until it sits on atoms or ``bot`` only."""
    return _reduce(f, dn=False)


def reduce_dn4(f: Formula) -> Formula:
    """Variant for the DN systems: ``~(A->B)`` goes to ``neg neg f(A) & f(~B)``."""
    return _reduce(f, dn=True)


def _reduce(f: Formula, dn: bool) -> Formula:
    if isinstance(f, (Atom, Bot)):
        return f
    if isinstance(f, _Binary):
        return type(f)(_reduce(f.left, dn), _reduce(f.right, dn))
    if isinstance(f, _Quant):
        return type(f)(f.var, _reduce(f.body, dn))
    if not isinstance(f, Neg):
        raise TypeError(f"cannot reduce {f!r}")
    g = f.body
    if isinstance(g, (Atom, Bot)):
        return f
    if isinstance(g, Neg):
        return _reduce(g.body, dn)
    if isinstance(g, And):
        return Or(_reduce(Neg(g.left), dn), _reduce(Neg(g.right), dn))
    if isinstance(g, Or):
        return And(_reduce(Neg(g.left), dn), _reduce(Neg(g.right), dn))
    if isinstance(g, Imp):
        if dn:
            return And(bneg(bneg(_reduce(g.left, dn))), _reduce(Neg(g.right), dn))
        return And(bneg(_reduce(Neg(g.left), dn)), _reduce(Neg(g.right), dn))
    if isinstance(g, Forall):
        return Exists(g.var, _reduce(Neg(g.body), dn))
    if isinstance(g, Exists):
        return Forall(g.var, _reduce(Neg(g.body), dn))
    raise TypeError(f"cannot reduce {f!r}")


def is_reduced(f: Formula) -> bool:
    return all(isinstance(g.body, (Atom, Bot)) for g in subformulas(f) if isinstance(g, Neg))


# ---------------------------------------------------------- primed translation

def prime_name(pred: str) -> str:
    return pred + "'"


def prime_translate(f: Formula) -> Formula:
    """Replace each ``~P(t..)`` by ``P'(t..)`` and ``~bot`` by the atom ``top_n``."""
    if not is_reduced(f):
        raise ValueError(f"formula is not reduced: {render(f)}")
    names = predicates(f)
    for name in names:
        if prime_name(name) in names and _negated_preds(f) & {name}:
            raise SignatureError(f"primed name {prime_name(name)} already occurs in the formula")
    if TOP_N in names:
        raise SignatureError(f"reserved atom {TOP_N} occurs in the formula")
    return _prime(f)


def _prime(f: Formula) -> Formula:
    if isinstance(f, Neg):
        if isinstance(f.body, Bot):
            return Atom(TOP_N)
        return Atom(prime_name(f.body.pred), f.body.args)
    if isinstance(f, _Binary):
        return type(f)(_prime(f.left), _prime(f.right))
    if isinstance(f, _Quant):
        return type(f)(f.var, _prime(f.body))
    return f


def _negated_preds(f: Formula) -> set:
    return {g.body.pred for g in subformulas(f) if isinstance(g, Neg) and isinstance(g.body, Atom)}


def _closure_vars(arity: int) -> list:
    if arity <= 3:
        return ["x", "y", "z"][:arity]
    return [f"x{i}" for i in range(1, arity + 1)]


def e_set(gamma: Iterable[Formula], mode: str = "mh") -> tuple:
    """Side formulas pairing each strongly negated predicate with its primed twin.

    ``mode="mh"`` emits both families (exclusion and potential omniscience);
    ``mode="dn3"`` emits only the exclusion family.
    """
    if mode not in ("mh", "dn3"):
        raise ValueError(f"unknown mode {mode!r}")
    arities: dict = {}
    for f in gamma:
        if not is_reduced(f):
            raise ValueError(f"formula is not reduced: {render(f)}")
        for g in subformulas(f):
            if isinstance(g, Neg) and isinstance(g.body, Atom):
                arities[g.body.pred] = len(g.body.args)
    out = []
    for pred in sorted(arities):
        xs = _closure_vars(arities[pred])
        args = tuple(Var(v) for v in xs)
        p, q = Atom(pred, args), Atom(prime_name(pred), args)
        families = [Imp(q, bneg(p))]
        if mode == "mh":
            families.append(bneg(bneg(Or(q, p))))
        for body in families:
            for v in reversed(xs):
                body = Forall(v, body)
            out.append(body)
    return tuple(out)


def parse_all(texts: Sequence[str], sig: Optional[Signature] = None) -> list:
    return [parse(t, sig) for t in texts]
