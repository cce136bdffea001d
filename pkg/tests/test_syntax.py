import pytest
from hypothesis import given

from bdlogic.syntax import (
    BOT, And, Atom, Const, Exists, Forall, Imp, Neg, Or, ParseError, Signature, Var, bneg,
    constants, e_set, free_vars, has_strong_neg, is_reduced, is_sentence, parse, predicates,
    prime_translate, reduce, reduce_dn4, render, size, strong_imp, substitute,
)

from conftest import formulas

p, q, r = Atom("p"), Atom("q"), Atom("r")


@pytest.mark.parametrize("text, expected", [
    ("p -> q -> r", Imp(p, Imp(q, r))),
    ("p & q | r", Or(And(p, q), r)),
    ("~p & q", And(Neg(p), q)),
    ("~~p", Neg(Neg(p))),
    ("neg p", Imp(p, BOT)),
    ("p <-> q", And(Imp(p, q), Imp(q, p))),
    ("(p -> q) -> r", Imp(Imp(p, q), r)),
    ("bot", BOT),
])
def test_precedence(text, expected):
    assert parse(text) == expected


def test_strong_implication_is_sugar():
    assert parse("p => q") == strong_imp(p, q) == And(Imp(p, q), Imp(Neg(q), Neg(p)))


def test_quantifiers_and_terms():
    f = parse("forall x. exists y. P(x, y, c)")
    assert isinstance(f, Forall) and isinstance(f.body, Exists)
    atom = f.body.body
    assert atom.args == (Var("x"), Var("y"), Const("c"))
    assert is_sentence(f)
    assert free_vars(f.body) == frozenset({"x"})
    assert constants(f) == frozenset({"c"})
    assert predicates(f) == {"P": 3}


@pytest.mark.parametrize("text, pos", [("p &", 3), ("(p", 2), ("p q", 2), ("-> p", 0), ("P(x", 3)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert f"position {pos}" in str(exc.value)


def test_signature_checks():
    sig = Signature({"P": 1}, frozenset({"c"}))
    assert parse("P(c)", sig) == Atom("P", (Const("c"),))
    with pytest.raises(ParseError):
        parse("Q(c)", sig)


@given(formulas(max_leaves=10))
def test_render_round_trip(f):
    assert parse(render(f)) == f


def test_render_first_order_round_trip():
    for text in ["forall x. P(x) -> q", "(forall x. P(x)) -> q", "~exists x. ~P(x) & P(c)",
                 "forall x. (P(x) | ~P(x))"]:
        f = parse(text)
        assert parse(render(f)) == f


def test_size_counts_connectives():
    assert size(p) == 0
    assert size(parse("~(p -> q)")) == 2
    assert size(parse("forall x. P(x) & q")) == 2


def test_reduce_examples():
    assert render(reduce(parse("~(p->q)"))) == "(~p -> bot) & ~q"
    assert render(reduce_dn4(parse("~(p->q)"))) == "((p -> bot) -> bot) & ~q"
    assert reduce(parse("~~p")) == p
    assert reduce(parse("~forall x. P(x)")) == parse("exists x. ~P(x)")


@given(formulas())
def test_reduct_is_reduced(f):
    assert is_reduced(reduce(f))
    assert is_reduced(reduce_dn4(f))
    assert reduce(reduce(f)) == reduce(f)


def test_prime_translation_removes_strong_negation():
    g = prime_translate(parse("~p & ~P(c) -> ~bot"))
    assert not has_strong_neg(g)
    assert render(g) == "p' & P'(c) -> top_n"


def test_e_set_modes():
    mh = e_set([parse("~p -> bot")], "mh")
    assert [render(f) for f in mh] == ["p' -> p -> bot", "(p' | p -> bot) -> bot"]
    assert e_set([parse("~p -> bot")], "dn3") == mh[:1]
    unary = e_set([parse("~P(c) & ~P(d)")])
    assert render(unary[0]) == "forall x. P'(x) -> P(x) -> bot"
    with pytest.raises(ValueError):
        e_set([parse("~~p")])


def test_substitution_avoids_capture():
    f = parse("forall y. P(x, y)")
    g = substitute(f, "x", Var("y"))
    assert isinstance(g, Forall) and g.var != "y"
    assert free_vars(g) == frozenset({"y"})
    assert substitute(parse("forall x. P(x)"), "x", Const("c")) == parse("forall x. P(x)")


def test_bneg():
    assert bneg(p) == Imp(p, BOT)
