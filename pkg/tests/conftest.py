import pytest

from fo2enum.engine import CompiledSentence
from fo2enum.oracle import positive_key

# Test sentences. GG describes undirected graphs without isolated vertices and
# COL describes 2-colored graphs; the rest cover the normal-form corners:
# no existential conjunct, two existential conjuncts, an existential conjunct
# that has to introduce a fresh witness predicate, a nested quantifier, and
# the equality fragment.
GG = "forall x forall y: ~E(x,x) & (E(x,y) -> E(y,x)) & forall x exists y: E(x,y)"
COL = (
    "forall x: ((~R(x) | ~B(x)) & (R(x) | B(x))) & "
    "forall x forall y: (E(x,y) -> ((R(x) & B(y)) | (B(x) & R(y)))) & "
    "forall x forall y: (E(x,y) -> E(y,x))"
)
FRESH = "forall x forall y: (F(x,x) & (F(x,y) -> F(y,x))) & forall x exists y: ~F(x,y)"
M2 = (
    "forall x forall y: (~E(x,x) & (E(x,y) -> E(y,x))) & "
    "forall x exists y: E(x,y) & forall x exists y: ~E(x,y)"
)
NESTED = (
    "forall x: (P(x) <-> exists y: R(x,y)) & "
    "forall x forall y: (R(x,y) -> R(y,x)) & forall x: ~R(x,x)"
)
EQ_ALL = "forall x forall y: x = y"
EQ_GG = (
    "forall x forall y: (~E(x,x) & (E(x,y) -> E(y,x)) & ((Q(x) & Q(y)) -> x = y)) & "
    "forall x exists y: E(x,y)"
)

SUITE = {
    "gg": GG,
    "col": COL,
    "fresh": FRESH,
    "m2": M2,
    "nested": NESTED,
    "eq_all": EQ_ALL,
    "eq_gg": EQ_GG,
}


@pytest.fixture(scope="session")
def compiled():
    return {name: CompiledSentence(text) for name, text in SUITE.items()}


def engine_model_set(cs: CompiledSentence, n: int, original: bool = False):
    return {positive_key(m) for m in cs.models(n, original=original)}
