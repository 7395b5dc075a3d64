import pytest

from fo2enum.formula import (
    Atom,
    Eq,
    Iff,
    Implies,
    Not,
    conjuncts,
    parse_sentence,
)
from fo2enum.oracle import oracle_models, oracle_models_sentence, positive_key
from fo2enum.snf import back_map_model, is_snf, to_snf
from fo2enum.formula import GroundLiteral
from tests.conftest import COL, GG, NESTED


def test_graph_sentence_already_snf():
    s = parse_sentence(GG)
    assert is_snf(s)
    snf, mapping = to_snf(s)
    assert snf.betas == ("E",)
    assert snf.m == 1
    assert snf.aux_predicates == frozenset()
    assert mapping.aux_names == frozenset()
    parts = conjuncts(snf.phi)
    assert Not(Atom("E", ("x", "x"))) in parts
    assert Implies(Atom("E", ("x", "y")), Atom("E", ("y", "x"))) in parts


def test_pure_universal_sentence_is_snf_with_no_existentials():
    s = parse_sentence(COL)
    assert is_snf(s)
    snf, _ = to_snf(s)
    assert snf.m == 0 and snf.betas == ()


def test_nested_quantifier_not_snf():
    s = parse_sentence("forall x: (P(x) -> exists y: R(x,y))")
    assert not is_snf(s)
    snf, mapping = to_snf(s)
    assert len(snf.betas) == 1
    assert snf.aux_predicates == mapping.aux_names
    assert len(mapping.aux_names) == 2  # one scope predicate, one witness predicate
    names = [d.name for d in mapping.definitions]
    assert names == sorted(names, key=names.index)  # introduction order preserved


def test_negative_existential_body_gets_fresh_witness():
    s = parse_sentence("forall x exists y: ~F(x,y)")
    snf, mapping = to_snf(s)
    assert len(snf.betas) == 1
    w = snf.betas[0]
    assert w in snf.aux_predicates
    assert Iff(Atom(w, ("x", "y")), Not(Atom("F", ("x", "y")))) in conjuncts(snf.phi)


def test_swapped_existential_atom_is_not_reused():
    # the body E(y,x) is an atom but not over (x,y), so a fresh witness is used
    s = parse_sentence("forall x exists y: E(y,x)")
    snf, _ = to_snf(s)
    assert snf.betas[0] != "E"


def test_equality_stays_in_phi_and_is_never_introduced():
    s = parse_sentence("forall x exists y: (E(x,y) & x != y)")
    snf, _ = to_snf(s)
    assert snf.betas[0] != "E"

    def count_eq(f):
        if isinstance(f, Eq):
            return 1
        if isinstance(f, (Atom,)):
            return 0
        if isinstance(f, Not):
            return count_eq(f.body)
        if hasattr(f, "left"):
            return count_eq(f.left) + count_eq(f.right)
        return count_eq(f.body)

    assert count_eq(snf.phi) == 1  # just the one from the input
    eq_free = parse_sentence(GG)
    snf2, _ = to_snf(eq_free)
    assert count_eq(snf2.phi) == 0


def test_back_map_drops_only_aux_literals():
    s = parse_sentence("forall x exists y: ~F(x,y)")
    snf, mapping = to_snf(s)
    w = snf.betas[0]
    model = (
        GroundLiteral("F", (0, 1), True),
        GroundLiteral(w, (0, 1), False),
        GroundLiteral(w, (1, 0), True),
    )
    assert back_map_model(model, mapping) == (GroundLiteral("F", (0, 1), True),)


def test_back_map_identity_without_aux():
    s = parse_sentence(GG)
    snf, mapping = to_snf(s)
    model = tuple(
        GroundLiteral("E", args, sign)
        for args, sign in [((0, 0), False), ((0, 1), True), ((1, 0), True), ((1, 1), False)]
    )
    assert back_map_model(model, mapping) == model


@pytest.mark.parametrize(
    "text",
    [
        NESTED,
        "forall x: (P(x) -> exists y: R(x,y))",
        "exists x: P(x)",
        "(forall x: P(x)) | (forall x: Q(x))",
        "forall x: ~(exists y: (R(x,y) & ~R(y,x)))",
        "exists x exists y: E(x,y)",
    ],
)
def test_model_bijection_small_domains(text):
    s = parse_sentence(text)
    snf, mapping = to_snf(s)
    for n in (1, 2, 3):
        try:
            original = oracle_models_sentence(s, n).models
        except Exception:
            continue
        snf_models = oracle_models(snf, n).models
        mapped = {
            positive_key(back_map_model(tuple(GroundLiteral(p, a, True) for p, a in key), mapping))
            for key in snf_models
        }
        assert len(snf_models) == len(original)
        assert len(mapped) == len(snf_models)  # injective
        assert mapped == original  # image is exactly the original model set
