import math

import pytest

from fo2enum.formula import GroundLiteral, parse_sentence
from fo2enum.oracle import (
    ContradictoryPartialError,
    TooLargeError,
    evaluate_sentence,
    oracle_config_sat,
    oracle_extendable,
    oracle_models,
    oracle_models_sentence,
)
from fo2enum.snf import to_snf
from fo2enum.types import build_tables
from tests.conftest import COL, GG


def _pipeline(text):
    snf, _ = to_snf(parse_sentence(text))
    return snf, build_tables(snf)


def _isolate_free_graphs(n: int) -> int:
    """Count of undirected graphs on n labeled vertices with minimum degree
    one, by inclusion-exclusion over the set of isolated vertices."""
    return sum(
        (-1) ** k * math.comb(n, k) * 2 ** math.comb(n - k, 2) for k in range(n + 1)
    )


def test_graph_model_counts():
    snf, _ = _pipeline(GG)
    for n in (1, 2, 3, 4):
        result = oracle_models(snf, n)
        assert result.count == len(result.models) == _isolate_free_graphs(n)
    assert _isolate_free_graphs(2) == 1
    assert _isolate_free_graphs(3) == 4
    assert _isolate_free_graphs(4) == 41


def test_oracle_determinism():
    snf, _ = _pipeline(GG)
    assert oracle_models(snf, 3).models == oracle_models(snf, 3).models


def test_oracle_config_sat():
    snf, tables = _pipeline(GG)
    assert oracle_config_sat(snf, tables, (1,)) is False
    assert oracle_config_sat(snf, tables, (3,)) is True
    col_snf, col_tables = _pipeline(COL)
    assert oracle_config_sat(col_snf, col_tables, (1, 1)) is True


def test_config_sat_agrees_with_model_census():
    snf, tables = _pipeline(COL)
    space = tables.space
    for n in (1, 2, 3):
        models = oracle_models(snf, n).models
        census_seen = set()
        for key in models:
            counts = [0] * tables.u
            for e in range(n):
                bits = tuple(
                    (nm, (e,) if ar == 1 else (e, e)) in key for nm, ar in space.one_atoms
                )
                counts[tables.index_of[bits]] += 1
            census_seen.add(tuple(counts))
        for config in census_seen:
            assert oracle_config_sat(snf, tables, config) is True


def test_extendability():
    snf, _ = _pipeline(GG)
    isolated_first = [
        GroundLiteral("E", (0, 1), False),
        GroundLiteral("E", (1, 0), False),
        GroundLiteral("E", (0, 2), False),
        GroundLiteral("E", (2, 0), False),
    ]
    assert oracle_extendable(snf, 3, isolated_first) is False
    assert oracle_extendable(snf, 3, []) is True
    assert oracle_extendable(snf, 3, [GroundLiteral("E", (0, 0), True)]) is False
    with pytest.raises(ContradictoryPartialError):
        oracle_extendable(
            snf, 3, [GroundLiteral("E", (0, 1), True), GroundLiteral("E", (0, 1), False)]
        )


def test_too_large_guards():
    snf, _ = _pipeline(GG)
    with pytest.raises(TooLargeError):
        oracle_models(snf, 10)
    s = parse_sentence(GG)
    with pytest.raises(TooLargeError):
        oracle_models_sentence(s, 6)


def test_quantified_evaluator():
    s = parse_sentence(GG)
    triangle = {("E", (a, b)): a != b for a in range(3) for b in range(3)}
    assert evaluate_sentence(s.formula, 3, triangle) is True
    empty = {("E", (a, b)): False for a in range(3) for b in range(3)}
    assert evaluate_sentence(s.formula, 3, empty) is False


def test_quantified_enumeration_matches_normal_form():
    s = parse_sentence(GG)
    snf, _ = to_snf(s)
    for n in (1, 2, 3):
        assert oracle_models_sentence(s, n).models == oracle_models(snf, n).models


def test_empty_domain():
    snf, _ = _pipeline(GG)
    result = oracle_models(snf, 0)
    assert result.count == 1 and frozenset() in result.models
