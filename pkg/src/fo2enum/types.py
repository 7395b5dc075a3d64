"""1-types, 2-types and their compatibility with a normalized sentence.

A 1-type fixes the sign of every single-element atom (P(x) for unary P and
R(x,x) for binary R); a 2-type fixes the sign of every strictly-cross atom
(R(x,y) and R(y,x)), and deliberately excludes the endpoint 1-types. Sign
vectors are enumerated lexicographically with False before True, and the
position of a type in that enumeration is its index everywhere downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from fo2enum.formula import (
    GroundLiteral,
    Vocabulary,
    evaluate_ground,
)
from fo2enum.snf import SnfSentence


@dataclass(frozen=True, slots=True)
class OneType:
    bits: tuple[bool, ...]


@dataclass(frozen=True, slots=True)
class TwoType:
    bits: tuple[bool, ...]


class TypeSpace:
    """Atom layout for one vocabulary: which bit means which ground atom."""

    def __init__(self, vocabulary: Vocabulary):
        self.vocabulary = vocabulary
        self.one_atoms: tuple[tuple[str, int], ...] = tuple(
            [(p.name, 1) for p in vocabulary.unary] + [(p.name, 2) for p in vocabulary.binary]
        )
        self.cross_atoms: tuple[tuple[str, bool], ...] = tuple(
            (p.name, fwd) for p in vocabulary.binary for fwd in (True, False)
        )
        self.one_index = {key: i for i, key in enumerate(self.one_atoms)}
        self.cross_index = {key: i for i, key in enumerate(self.cross_atoms)}

    def one_type_literals(self, tau: OneType, e: int) -> list[GroundLiteral]:
        out = []
        for (name, arity), sign in zip(self.one_atoms, tau.bits):
            args = (e,) if arity == 1 else (e, e)
            out.append(GroundLiteral(name, args, sign))
        return out

    def two_type_literals(self, pi: TwoType, e0: int, e1: int) -> list[GroundLiteral]:
        out = []
        for (name, fwd), sign in zip(self.cross_atoms, pi.bits):
            args = (e0, e1) if fwd else (e1, e0)
            out.append(GroundLiteral(name, args, sign))
        return out

    def swap_two_type(self, pi: TwoType) -> TwoType:
        bits = list(pi.bits)
        for i in range(0, len(bits), 2):
            bits[i], bits[i + 1] = bits[i + 1], bits[i]
        return TwoType(tuple(bits))

    def one_type_text(self, tau: OneType) -> str:
        parts = []
        for (name, arity), sign in zip(self.one_atoms, tau.bits):
            atom = f"{name}(x)" if arity == 1 else f"{name}(x,x)"
            parts.append(atom if sign else "~" + atom)
        return " & ".join(parts) if parts else "<empty>"

    def project_one_bits(self, other: "TypeSpace") -> tuple[int, ...]:
        """Positions of ``other``'s one-type atoms inside this space's layout."""
        return tuple(self.one_index[key] for key in other.one_atoms)


def enumerate_one_types(vocabulary: Vocabulary) -> list[OneType]:
    width = len(vocabulary.unary) + len(vocabulary.binary)
    return [OneType(bits) for bits in itertools.product((False, True), repeat=width)]


def enumerate_two_types(vocabulary: Vocabulary) -> list[TwoType]:
    width = 2 * len(vocabulary.binary)
    return [TwoType(bits) for bits in itertools.product((False, True), repeat=width)]


@dataclass(frozen=True, slots=True)
class OrientedTwoType:
    """A compatible 2-type as seen from one side of an ordered element pair.

    ``fwd_betas`` has bit k set when beta_k(first, second) is positive in the
    2-type, ``bwd_betas`` when beta_k(second, first) is. ``index`` refers to
    the canonical (unordered, low-index-first) table entry.
    """

    two_type: TwoType
    index: int
    fwd_betas: int
    bwd_betas: int


class CompatibilityTables:
    """Compatible 1-types of a sentence and, per unordered pair of them, the
    compatible 2-types. Entries are stored once per pair {i, j} with i <= j,
    oriented with x on the i side; ordered views apply the explicit swap.

    Equality atoms are evaluated structurally: true on the reflexive grounding
    used for 1-type compatibility, false on the two-element grounding used for
    2-type compatibility.

    Pair entries are memoized on first use. A cache entry, once present, never
    changes; concurrent first accesses may redundantly compute the same
    entries but settle on equal values (single-writer use needs no care).
    """

    def __init__(self, snf: SnfSentence):
        self.snf = snf
        self.space = TypeSpace(snf.vocabulary)
        self.all_one_types = enumerate_one_types(snf.vocabulary)
        self.all_two_types = enumerate_two_types(snf.vocabulary)
        self.compatible_one_types = [
            tau for tau in self.all_one_types if self._one_compatible(tau)
        ]
        self.index_of = {tau.bits: i for i, tau in enumerate(self.compatible_one_types)}
        # Pair entries are filled on first use: only 1-type pairs that actually
        # occur in a domain are ever needed, while the full table is quadratic
        # in the number of compatible 1-types.
        self._pair: dict[tuple[int, int], tuple[TwoType, ...]] = {}
        self._oriented: dict[tuple[int, int], tuple[OrientedTwoType, ...]] = {}
        self.self_beta_mask = [self._self_betas(tau) for tau in self.compatible_one_types]
        self.need_mask = [self._needs(tau, idx) for idx, tau in enumerate(self.compatible_one_types)]

    def _build_pair(self, i: int, j: int) -> None:
        entries = tuple(pi for pi in self.all_two_types if self._pair_compatible(i, j, pi))
        self._pair[(i, j)] = entries
        self._oriented[(i, j)] = tuple(
            OrientedTwoType(pi, k, self._beta_mask(pi, True), self._beta_mask(pi, False))
            for k, pi in enumerate(entries)
        )
        if i != j:
            self._oriented[(j, i)] = tuple(
                OrientedTwoType(
                    self.space.swap_two_type(pi),
                    k,
                    self._beta_mask(pi, False),
                    self._beta_mask(pi, True),
                )
                for k, pi in enumerate(entries)
            )

    # -- construction helpers ------------------------------------------------

    def _one_compatible(self, tau: OneType) -> bool:
        if self.snf.phi is None:
            return True
        table = {}
        for (name, arity), sign in zip(self.space.one_atoms, tau.bits):
            table[(name, (0,) if arity == 1 else (0, 0))] = sign
        return evaluate_ground(self.snf.phi, {"x": 0, "y": 0}, table)

    def _pair_compatible(self, i: int, j: int, pi: TwoType) -> bool:
        if self.snf.phi is None:
            return True
        table = {}
        for e, tau in ((0, self.compatible_one_types[i]), (1, self.compatible_one_types[j])):
            for (name, arity), sign in zip(self.space.one_atoms, tau.bits):
                table[(name, (e,) if arity == 1 else (e, e))] = sign
        for (name, fwd), sign in zip(self.space.cross_atoms, pi.bits):
            table[(name, (0, 1) if fwd else (1, 0))] = sign
        phi = self.snf.phi
        return evaluate_ground(phi, {"x": 0, "y": 1}, table) and evaluate_ground(
            phi, {"x": 1, "y": 0}, table
        )

    def _beta_mask(self, pi: TwoType, forward: bool) -> int:
        mask = 0
        for k, beta in enumerate(self.snf.betas):
            if pi.bits[self.space.cross_index[(beta, forward)]]:
                mask |= 1 << k
        return mask

    def _self_betas(self, tau: OneType) -> int:
        mask = 0
        for k, beta in enumerate(self.snf.betas):
            if tau.bits[self.space.one_index[(beta, 2)]]:
                mask |= 1 << k
        return mask

    def _needs(self, tau: OneType, idx: int) -> int:
        mask = 0
        for k, guard in enumerate(self.snf.beta_guards):
            if guard is not None and not tau.bits[self.space.one_index[(guard, 1)]]:
                continue
            mask |= 1 << k
        return mask & ~self.self_beta_mask[idx]

    # -- queries ---------------------------------------------------------------

    @property
    def u(self) -> int:
        return len(self.compatible_one_types)

    def pair_entries(self, i: int, j: int) -> tuple[TwoType, ...]:
        key = (i, j) if i <= j else (j, i)
        if key not in self._pair:
            self._build_pair(*key)
        return self._pair[key]

    def oriented_entries(self, i: int, j: int) -> tuple[OrientedTwoType, ...]:
        if (i, j) not in self._oriented:
            self._build_pair(min(i, j), max(i, j))
        return self._oriented[(i, j)]

    def one_type_literals(self, idx: int, e: int) -> list[GroundLiteral]:
        return self.space.one_type_literals(self.compatible_one_types[idx], e)

    def describe_one_types(self) -> list[str]:
        return [self.space.one_type_text(tau) for tau in self.compatible_one_types]


def two_type_satisfies_beta(snf: SnfSentence, pi: TwoType, k: int, direction: str) -> bool:
    """Whether beta_k(x,y) (direction "forward") or beta_k(y,x) ("backward")
    is positive in the 2-type."""
    if not 0 <= k < snf.m:
        raise IndexError(f"beta index {k} out of range")
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    space = TypeSpace(snf.vocabulary)
    return pi.bits[space.cross_index[(snf.betas[k], direction == "forward")]]


def build_tables(snf: SnfSentence) -> CompatibilityTables:
    return CompatibilityTables(snf)
