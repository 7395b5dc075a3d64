import math

import pytest
from hypothesis import given, settings, strategies as st

from fo2enum.config import discover_templates
from fo2enum.formula import parse_sentence
from fo2enum.oracle import oracle_models
from fo2enum.snf import to_snf
from fo2enum.types import build_tables
from fo2enum.unary import (
    SizeMismatchError,
    ZeroPartsError,
    enum_compositions,
    enum_partitions,
    enum_sat_configs,
    enum_unary_substructures,
)
from tests.conftest import COL, GG


def _pipeline(text):
    snf, _ = to_snf(parse_sentence(text))
    tables = build_tables(snf)
    return snf, tables, discover_templates(snf, tables)


def test_compositions_order_and_edges():
    assert list(enum_compositions(3, 2)) == [(3, 0), (2, 1), (1, 2), (0, 3)]
    assert list(enum_compositions(0, 2)) == [(0, 0)]
    assert list(enum_compositions(2, 1)) == [(2,)]
    assert list(enum_compositions(0, 0)) == [()]
    with pytest.raises(ZeroPartsError):
        list(enum_compositions(2, 0))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 7), st.integers(1, 4))
def test_composition_properties(total, parts):
    out = list(enum_compositions(total, parts))
    assert len(out) == math.comb(total + parts - 1, parts - 1)
    assert len(set(out)) == len(out)
    assert all(sum(c) == total and len(c) == parts for c in out)
    firsts = [c[0] for c in out]
    assert firsts == sorted(firsts, reverse=True)


class _StubTemplates:
    """Fixed template list for exercising the growth cases in isolation."""

    def __init__(self, delta_eff, templates):
        self.delta_eff = delta_eff
        self._templates = templates

    def iter_templates(self, max_size=None):
        for t in self._templates:
            if max_size is None or sum(t) <= max_size:
                yield t


def test_growth_from_bound_entries():
    templates = _StubTemplates(6, [(6, 4, 6, 2)])
    assert list(enum_sat_configs(templates, 21)) == [
        (9, 4, 6, 2),
        (8, 4, 7, 2),
        (7, 4, 8, 2),
        (6, 4, 9, 2),
    ]


def test_enum_sat_configs_graph_and_colored():
    _, _, gg = _pipeline(GG)
    assert list(enum_sat_configs(gg, 5)) == [(5,)]
    assert list(enum_sat_configs(gg, 0)) == [(0,)]
    _, _, col = _pipeline(COL)
    assert set(enum_sat_configs(col, 2)) == {(2, 0), (0, 2), (1, 1)}


def test_enum_sat_configs_no_duplicates_and_all_satisfiable():
    snf, tables, templates = _pipeline(COL)
    for n in range(0, 6):
        out = list(enum_sat_configs(templates, n))
        assert len(out) == len(set(out))
        assert all(sum(c) == n for c in out)
        assert all(templates.sat_cfg(c) for c in out)


def test_enum_sat_configs_completeness():
    import itertools

    for text in (GG, COL):
        snf, tables, templates = _pipeline(text)
        bound = templates.delta_eff * tables.u
        for n in range(0, bound + 2):
            yielded = set(enum_sat_configs(templates, n))
            satisfiable = {
                config
                for config in itertools.product(range(n + 1), repeat=tables.u)
                if sum(config) == n and templates.sat_cfg(config)
            }
            assert yielded == satisfiable, (text, n)


def test_enum_partitions():
    got = list(enum_partitions(3, (2, 1)))
    assert [u.assignment for u in got] == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert all(u.config == (2, 1) for u in got)
    assert len(list(enum_partitions(3, (3,)))) == 1
    assert len(list(enum_partitions(6, (3, 2, 1)))) == 60
    with pytest.raises(SizeMismatchError):
        list(enum_partitions(3, (1, 1)))


def test_partitions_are_lexicographic_and_distinct():
    out = [u.assignment for u in enum_partitions(5, (2, 2, 1))]
    assert out == sorted(out)
    assert len(out) == len(set(out)) == 30


def test_unary_substructures_counts():
    snf, tables, templates = _pipeline(GG)
    assert len(list(enum_unary_substructures(snf, tables, templates, 3))) == 1
    assert list(enum_unary_substructures(snf, tables, templates, 1)) == []
    snf, tables, templates = _pipeline(COL)
    assert len(list(enum_unary_substructures(snf, tables, templates, 2))) == 4


def test_unary_substructures_match_oracle_projections():
    for text in (GG, COL):
        snf, tables, templates = _pipeline(text)
        space = tables.space
        for n in (1, 2, 3, 4):
            got = [u.assignment for u in enum_unary_substructures(snf, tables, templates, n)]
            assert len(got) == len(set(got))
            expected = set()
            for key in oracle_models(snf, n).models:
                expected.add(
                    tuple(
                        tables.index_of[
                            tuple(
                                (nm, (e,) if ar == 1 else (e, e)) in key
                                for nm, ar in space.one_atoms
                            )
                        ]
                        for e in range(n)
                    )
                )
            assert set(got) == expected
