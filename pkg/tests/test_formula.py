import pytest
from hypothesis import given, settings, strategies as st

from fo2enum.formula import (
    And,
    ArityMismatchError,
    Atom,
    Eq,
    Exists,
    Forall,
    FormulaSyntaxError,
    GroundLiteral,
    Iff,
    Implies,
    Not,
    Or,
    ThirdVariableError,
    UnassignedAtomError,
    evaluate_ground,
    format_formula,
    free_variables,
    parse_formula,
    parse_sentence,
)
from tests.conftest import GG


def test_parse_graph_sentence_structure():
    s = parse_sentence(GG)
    assert [f"{p.name}/{p.arity}" for p in s.vocabulary.predicates] == ["E/2"]
    assert not s.vocabulary.equality_used
    top = s.formula
    assert isinstance(top, And)
    universal, existential = top.left, top.right
    assert isinstance(universal, Forall) and isinstance(universal.body, Forall)
    body = universal.body.body
    assert body == And(Not(Atom("E", ("x", "x"))), Implies(Atom("E", ("x", "y")), Atom("E", ("y", "x"))))
    assert existential == Forall("x", Exists("y", Atom("E", ("x", "y"))))


def test_parse_single_quantifier():
    s = parse_sentence("forall x: P(x)")
    assert s.formula == Forall("x", Atom("P", ("x",)))
    assert [p.name for p in s.vocabulary.predicates] == ["P"]


def test_third_variable_rejected():
    with pytest.raises(ThirdVariableError):
        parse_sentence("forall z: P(z)")
    with pytest.raises(ThirdVariableError):
        parse_sentence("forall x: P(u)")


def test_arity_errors():
    with pytest.raises(ArityMismatchError):
        parse_sentence("forall x: P(x) & forall x forall y: P(x,y)")
    with pytest.raises(ArityMismatchError):
        parse_sentence("forall x forall y: P(x,y,x)")


def test_free_variables_rejected_in_sentences():
    with pytest.raises(FormulaSyntaxError):
        parse_sentence("P(x)")


def test_syntax_errors_carry_position():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_sentence("forall x: P(x & Q(x)")
    assert exc.value.position >= 0
    with pytest.raises(FormulaSyntaxError):
        parse_sentence("forall x: P")
    with pytest.raises(FormulaSyntaxError):
        parse_sentence("forall x: $(x)")


def test_comments_and_whitespace():
    text = "# a comment\nforall x: P(x)  # trailing\n"
    assert parse_sentence(text).formula == Forall("x", Atom("P", ("x",)))


def test_precedence_and_associativity():
    f, _ = parse_formula("~P(x) & Q(x) | R(x) -> S(x) <-> T(x)")
    # <-> binds loosest, then ->, |, &, ~.
    assert isinstance(f, Iff)
    assert isinstance(f.left, Implies)
    assert isinstance(f.left.left, Or)
    assert isinstance(f.left.left.left, And)
    assert f.left.left.left.left == Not(Atom("P", ("x",)))


def test_quantifier_body_extends_until_quantified_conjunct():
    s = parse_sentence("forall x: P(x) -> Q(x) & forall x: Q(x)")
    assert s.formula == And(
        Forall("x", Implies(Atom("P", ("x",)), Atom("Q", ("x",)))),
        Forall("x", Atom("Q", ("x",))),
    )
    # without a following quantifier the body is greedy
    greedy = parse_sentence("forall x exists y: E(x,y) & E(y,x)")
    assert greedy.formula == Forall(
        "x", Exists("y", And(Atom("E", ("x", "y")), Atom("E", ("y", "x"))))
    )


def test_equality_tokens():
    s = parse_sentence("forall x forall y: x = y")
    assert s.vocabulary.equality_used
    assert s.formula.body.body == Eq("x", "y")
    s2 = parse_sentence("forall x forall y: x != y")
    assert s2.formula.body.body == Not(Eq("x", "y"))


def test_free_variables():
    assert free_variables(Atom("E", ("x", "y"))) == {"x", "y"}
    assert free_variables(Forall("x", Exists("y", Atom("E", ("x", "y"))))) == set()
    assert free_variables(Exists("y", Atom("E", ("x", "y")))) == {"x"}


def test_evaluate_ground_graph_clauses():
    s = parse_sentence(GG)
    phi = s.formula.left.body.body
    no_loop = {("E", (0, 0)): False}
    assert evaluate_ground(phi, {"x": 0, "y": 0}, no_loop) is True
    assert evaluate_ground(phi, {"x": 0, "y": 0}, {("E", (0, 0)): True}) is False


def test_evaluate_ground_equality_is_structural():
    eq = Eq("x", "y")
    assert evaluate_ground(eq, {"x": 0, "y": 1}, {}) is False
    assert evaluate_ground(eq, {"x": 1, "y": 1}, {}) is True
    # a stray literal table entry for equality must not matter
    assert evaluate_ground(eq, {"x": 0, "y": 1}, {("=", (0, 1)): True}) is False


def test_evaluate_ground_totality_and_missing_atom():
    f, _ = parse_formula("P(x) -> P(y)")
    table = {("P", (0,)): True, ("P", (1,)): False}
    assert evaluate_ground(f, {"x": 0, "y": 1}, table) is False
    with pytest.raises(UnassignedAtomError):
        evaluate_ground(f, {"x": 0, "y": 2}, table)


def test_evaluate_accepts_literal_iterable():
    f, _ = parse_formula("P(x)")
    assert evaluate_ground(f, {"x": 0}, [GroundLiteral("P", (0,), True)]) is True


def test_print_parse_fixed_point_on_samples():
    from tests.conftest import SUITE

    for text in SUITE.values():
        s = parse_sentence(text)
        printed = format_formula(s.formula)
        again = parse_sentence(printed)
        assert again.formula == s.formula
        assert format_formula(again.formula) == printed


# A small random formula generator for the printer round-trip.
_atoms = st.sampled_from(
    [
        Atom("P", ("x",)),
        Atom("Q", ("y",)),
        Atom("E", ("x", "y")),
        Atom("E", ("y", "x")),
        Atom("E", ("x", "x")),
        Eq("x", "y"),
    ]
)


def _combine(children):
    binary = st.sampled_from([And, Or, Implies, Iff])
    return st.one_of(
        st.builds(lambda f: Not(f), children),
        st.builds(lambda op, a, b: op(a, b), binary, children, children),
        st.builds(lambda q, v, f: q(v, f), st.sampled_from([Forall, Exists]), st.sampled_from(["x", "y"]), children),
    )


formulas = st.recursive(_atoms, _combine, max_leaves=12)


@settings(max_examples=100, deadline=None)
@given(formulas)
def test_print_parse_fixed_point_random(f):
    printed = format_formula(f)
    reparsed, _ = parse_formula(printed)
    assert reparsed == f


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="PQExy()~&|<->=!, :forales\n#0123456789_", max_size=60))
def test_parser_never_crashes(text):
    from fo2enum.formula import FormulaError

    try:
        parse_sentence(text)
    except FormulaError:
        pass
