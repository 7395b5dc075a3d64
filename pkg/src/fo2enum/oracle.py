"""Brute-force reference implementations used by the test suite.

These deliberately share no type or compatibility machinery with the fast
path: they work on raw ground atoms and the shared formula evaluator only.
The searches walk atom blocks (per-element atoms, then per-pair cross atoms)
depth first, discarding a branch as soon as a fully assigned ground instance
of the universal part fails or a finished element lacks a required witness.
This visits exactly the truth assignments a flat enumeration would keep while
staying fast enough for the small domains the guard admits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from fo2enum.formula import (
    Eq,
    Exists,
    Forall,
    Formula,
    GroundLiteral,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Atom,
    Sentence,
    Vocabulary,
    evaluate_ground,
    literal_table,
)
from fo2enum.snf import SnfSentence

MAX_FREE_ATOMS = 40
MAX_QUANTIFIED_ATOMS = 20

ModelKey = frozenset  # frozenset[tuple[str, tuple[int, ...]]], positive atoms only


class OracleError(Exception):
    pass


class TooLargeError(OracleError):
    pass


class ContradictoryPartialError(OracleError):
    pass


@dataclass(frozen=True)
class OracleResult:
    models: frozenset[ModelKey]
    count: int


def positive_key(literals) -> ModelKey:
    """Canonical encoding of a structure: the set of its positive atoms."""
    return frozenset((lit.pred, lit.args) for lit in literals if lit.sign)


def _blocks(vocabulary: Vocabulary, n: int):
    """Atom blocks and, per block, the elements completed once it is set."""
    unary = [p.name for p in vocabulary.unary]
    binary = [p.name for p in vocabulary.binary]
    blocks: list[tuple] = []
    for e in range(n):
        atoms = [(p, (e,)) for p in unary] + [(r, (e, e)) for r in binary]
        blocks.append(("elem", e, atoms))
    for a in range(n):
        for b in range(a + 1, n):
            atoms = [key for r in binary for key in ((r, (a, b)), (r, (b, a)))]
            blocks.append(("pair", (a, b), atoms))
    completes: list[list[int]] = [[] for _ in blocks]
    if blocks:
        if n == 1:
            completes[0] = [0]
        elif n > 1 and binary:
            for idx, (kind, who, _) in enumerate(blocks):
                if kind != "pair":
                    continue
                a, b = who
                if b == n - 1:
                    completes[idx].append(a)
                    if a == n - 2:
                        completes[idx].append(b)
        elif n >= 1 and not binary:
            for e in range(n):
                completes[e] = [e]
    return blocks, completes


def _owes(snf: SnfSentence, table, e: int) -> list[str]:
    owed = []
    for beta, guard in zip(snf.betas, snf.beta_guards):
        if guard is not None and not table.get((guard, (e,)), False):
            continue
        owed.append(beta)
    return owed


def _witnessed(table, beta: str, e: int, n: int) -> bool:
    for other in range(n):
        if table.get((beta, (e, other)), False):
            return True
    return False


def _search(
    snf: SnfSentence,
    n: int,
    pinned: Mapping[tuple[str, tuple[int, ...]], bool],
) -> Iterator[dict]:
    blocks, completes = _blocks(snf.vocabulary, n)
    all_atoms = [key for _, _, atoms in blocks for key in atoms]
    atom_set = set(all_atoms)
    for key in pinned:
        if key not in atom_set:
            raise OracleError(f"atom {key} outside the vocabulary/domain")
    free = len(all_atoms) - len(pinned)
    if free > MAX_FREE_ATOMS:
        raise TooLargeError(f"{free} unassigned ground atoms exceed the search guard")

    phi = snf.phi
    table: dict[tuple[str, tuple[int, ...]], bool] = dict(pinned)

    def block_ok(idx: int) -> bool:
        kind, who, _ = blocks[idx]
        if phi is not None:
            if kind == "elem":
                if not evaluate_ground(phi, {"x": who, "y": who}, table):
                    return False
            else:
                a, b = who
                if not evaluate_ground(phi, {"x": a, "y": b}, table):
                    return False
                if not evaluate_ground(phi, {"x": b, "y": a}, table):
                    return False
        for e in completes[idx]:
            for beta in _owes(snf, table, e):
                if not _witnessed(table, beta, e, n):
                    return False
        return True

    def rec(idx: int) -> Iterator[dict]:
        if idx == len(blocks):
            yield dict(table)
            return
        _, _, atoms = blocks[idx]
        open_atoms = [key for key in atoms if key not in pinned]
        for values in itertools.product((False, True), repeat=len(open_atoms)):
            for key, val in zip(open_atoms, values):
                table[key] = val
            if block_ok(idx):
                yield from rec(idx + 1)
        for key in open_atoms:
            del table[key]

    if not blocks:
        # Empty domain: the lone empty structure is a model iff nothing is owed.
        yield dict(table)
        return
    yield from rec(0)


def oracle_models(snf: SnfSentence, n: int) -> OracleResult:
    """All models of a normalized sentence over n elements, canonicalized."""
    models = set()
    for table in _search(snf, n, {}):
        models.add(frozenset(key for key, val in table.items() if val))
    return OracleResult(frozenset(models), len(models))


def oracle_config_sat(snf: SnfSentence, tables, config) -> bool:
    """Whether some model realizes exactly this 1-type census; decided by
    pinning each element's single-variable atoms and exhausting the rest."""
    if len(config) != tables.u:
        raise OracleError(f"expected {tables.u} entries, got {len(config)}")
    pinned: dict[tuple[str, tuple[int, ...]], bool] = {}
    e = 0
    for idx, count in enumerate(config):
        for _ in range(count):
            for lit in tables.one_type_literals(idx, e):
                pinned[(lit.pred, lit.args)] = lit.sign
            e += 1
    for _ in _search(snf, e, pinned):
        return True
    return False


def oracle_extendable(snf: SnfSentence, n: int, partial) -> bool:
    """Whether a set of ground literals extends to a full model over n
    elements."""
    try:
        pinned = literal_table(partial)
    except ValueError as exc:
        raise ContradictoryPartialError(str(exc)) from None
    for _ in _search(snf, n, pinned):
        return True
    return False


# -- reference semantics for arbitrary (quantified) sentences ----------------


def evaluate_sentence(
    formula: Formula,
    n: int,
    table: Mapping[tuple[str, tuple[int, ...]], bool],
    binding: Optional[dict] = None,
) -> bool:
    """Standard semantics over the domain {0..n-1}."""
    b = binding or {}
    if isinstance(formula, Forall):
        return all(
            evaluate_sentence(formula.body, n, table, {**b, formula.var: e}) for e in range(n)
        )
    if isinstance(formula, Exists):
        return any(
            evaluate_sentence(formula.body, n, table, {**b, formula.var: e}) for e in range(n)
        )
    if isinstance(formula, Not):
        return not evaluate_sentence(formula.body, n, table, b)
    if isinstance(formula, And):
        return evaluate_sentence(formula.left, n, table, b) and evaluate_sentence(
            formula.right, n, table, b
        )
    if isinstance(formula, Or):
        return evaluate_sentence(formula.left, n, table, b) or evaluate_sentence(
            formula.right, n, table, b
        )
    if isinstance(formula, Implies):
        return not evaluate_sentence(formula.left, n, table, b) or evaluate_sentence(
            formula.right, n, table, b
        )
    if isinstance(formula, Iff):
        return evaluate_sentence(formula.left, n, table, b) == evaluate_sentence(
            formula.right, n, table, b
        )
    if isinstance(formula, Eq):
        return b[formula.left] == b[formula.right]
    if isinstance(formula, Atom):
        return table[(formula.pred, tuple(b[a] for a in formula.args))]
    raise TypeError(f"not a formula: {formula!r}")


def oracle_models_sentence(sentence: Sentence, n: int) -> OracleResult:
    """All models of an arbitrary sentence by exhaustive assignment."""
    atoms: list[tuple[str, tuple[int, ...]]] = []
    for p in sentence.vocabulary.predicates:
        if p.arity == 1:
            atoms.extend((p.name, (e,)) for e in range(n))
        else:
            atoms.extend((p.name, (a, b)) for a in range(n) for b in range(n))
    if len(atoms) > MAX_QUANTIFIED_ATOMS:
        raise TooLargeError(f"{len(atoms)} ground atoms exceed the quantified-search guard")
    models = set()
    for values in itertools.product((False, True), repeat=len(atoms)):
        table = dict(zip(atoms, values))
        if evaluate_sentence(sentence.formula, n, table):
            models.add(frozenset(key for key, val in table.items() if val))
    return OracleResult(frozenset(models), len(models))
