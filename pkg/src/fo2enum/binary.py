"""Binary-substructure enumeration: the backtracking core.

Given a domain with fixed 1-types, models are produced by deciding the 2-type
of one element pair at a time: an ascending target element freezes its links
to all later elements (pair phase), then the next target is processed (domain
phase). Every trial 2-type is vetted by a constant-time consistency check
before descending.

The check works on an auxiliary sentence over an extended vocabulary:

* one unary guard predicate per existential conjunct, positive on an element
  while it still owes that witness to the already-decided region;
* a target marker T, a determined marker R, and a binary marker D constrained
  by  T(x) & R(y) -> D(x,y) & D(y,x)  and its complement, identifying exactly
  the pairs between the target and elements whose link to it is decided.

Whether the current partial structure extends to a full model is then just
satisfiability of the auxiliary sentence's 1-type census, which is maintained
incrementally (a few cells per trial) and answered through the clamped memo.
D-marked pairs hold a fixed, already-accounted-for 2-type, so the census
solver must not let them supply fresh witnesses: they are passed to it as
blocked pairs. Witness bits a trial provides are folded into the guard bits of
both endpoints at trial time, which keeps the two views consistent.
"""

from __future__ import annotations

import os
from typing import Callable, Iterator, Optional

from fo2enum.config import TemplateSet
from fo2enum.formula import (
    And,
    Atom,
    GroundLiteral,
    Implies,
    Not,
    Predicate,
)
from fo2enum.snf import SnfSentence
from fo2enum.types import CompatibilityTables, OrientedTwoType, TwoType, build_tables
from fo2enum.unary import UnarySubstructure

ROLE_FREE, ROLE_DETERMINED, ROLE_TARGET = 0, 1, 2

Model = tuple[GroundLiteral, ...]


class EnumerationError(Exception):
    pass


class InconsistentUnaryError(EnumerationError):
    pass


class IncompatibleTwoTypeError(EnumerationError):
    pass


class PairUndecidedError(EnumerationError):
    pass


def _fresh(used: set[str], stem: str) -> str:
    if stem not in used:
        used.add(stem)
        return stem
    i = 2
    while f"{stem}{i}" in used:
        i += 1
    used.add(f"{stem}{i}")
    return f"{stem}{i}"


class _DerivedTables(CompatibilityTables):
    """Tables of the extended sentence with pair entries taken from the base
    tables: the marker axioms force the D bits per role pair and never touch
    the base part of a 2-type, so rescanning candidates against the extended
    formula would redo work the base tables already hold."""

    def attach(
        self,
        base_tables: CompatibilityTables,
        target_name: str,
        determined_name: str,
    ) -> None:
        space = self.space
        t_bit = space.one_index[(target_name, 1)]
        r_bit = space.one_index[(determined_name, 1)]
        proj = space.project_one_bits(base_tables.space)
        self._base_tables = base_tables
        self._tflag = [tau.bits[t_bit] for tau in self.compatible_one_types]
        self._rflag = [tau.bits[r_bit] for tau in self.compatible_one_types]
        self._base_of = [
            base_tables.index_of[tuple(tau.bits[p] for p in proj)]
            for tau in self.compatible_one_types
        ]

    def _build_pair(self, i: int, j: int) -> None:
        bi, bj = self._base_of[i], self._base_of[j]
        d = (self._tflag[i] and self._rflag[j]) or (self._tflag[j] and self._rflag[i])

        def derive(entries):
            return tuple(
                OrientedTwoType(TwoType(e.two_type.bits + (d, d)), k, e.fwd_betas, e.bwd_betas)
                for k, e in enumerate(entries)
            )

        forward = derive(self._base_tables.oriented_entries(bi, bj))
        self._pair[(i, j)] = tuple(e.two_type for e in forward)
        self._oriented[(i, j)] = forward
        if i != j:
            self._oriented[(j, i)] = derive(self._base_tables.oriented_entries(bj, bi))


class AuxSentence:
    """The consistency-check sentence with its tables, memoized census
    decisions, and the mapping from (base 1-type, guard bits, role) to cells
    of the extended census."""

    def __init__(self, base: SnfSentence, base_tables: Optional[CompatibilityTables] = None):
        self.base = base
        self.base_tables = base_tables if base_tables is not None else build_tables(base)

        used = {p.name for p in base.vocabulary.predicates}
        self.z_names = tuple(_fresh(used, f"Z{k + 1}") for k in range(base.m))
        self.target_name = _fresh(used, "T")
        self.determined_name = _fresh(used, "R")
        self.link_name = _fresh(used, "D")

        extra = [Predicate(z, 1) for z in self.z_names]
        extra += [Predicate(self.target_name, 1), Predicate(self.determined_name, 1)]
        extra += [Predicate(self.link_name, 2)]
        vocabulary = base.vocabulary.extend(extra)

        t_x = Atom(self.target_name, ("x",))
        t_y = Atom(self.target_name, ("y",))
        r_x = Atom(self.determined_name, ("x",))
        r_y = Atom(self.determined_name, ("y",))
        d_xy = Atom(self.link_name, ("x", "y"))
        d_yx = Atom(self.link_name, ("y", "x"))
        marked = Implies(And(t_x, r_y), And(d_xy, d_yx))
        unmarked = Implies(
            And(Not(And(t_x, r_y)), Not(And(t_y, r_x))),
            And(Not(d_xy), Not(d_yx)),
        )
        phi = And(base.phi, And(marked, unmarked)) if base.phi is not None else And(marked, unmarked)

        self.snf = SnfSentence(
            phi=phi,
            betas=base.betas,
            vocabulary=vocabulary,
            aux_predicates=base.aux_predicates | frozenset(p.name for p in extra),
            beta_guards=self.z_names,
        )
        self.tables = _DerivedTables(self.snf)
        self.tables.attach(self.base_tables, self.target_name, self.determined_name)

        space = self.tables.space
        t_bit = space.one_index[(self.target_name, 1)]
        r_bit = space.one_index[(self.determined_name, 1)]
        self.target_flag = [tau.bits[t_bit] for tau in self.tables.compatible_one_types]
        self.determined_flag = [tau.bits[r_bit] for tau in self.tables.compatible_one_types]

        proj = space.project_one_bits(self.base_tables.space)
        z_bits = [space.one_index[(z, 1)] for z in self.z_names]
        self.cell_index: dict[tuple[int, int, int], int] = {}
        for ai, tau in enumerate(self.tables.compatible_one_types):
            base_bits = tuple(tau.bits[p] for p in proj)
            bi = self.base_tables.index_of.get(base_bits)
            if bi is None:
                continue
            z_mask = 0
            for k, pos in enumerate(z_bits):
                if tau.bits[pos]:
                    z_mask |= 1 << k
            t, r = self.target_flag[ai], self.determined_flag[ai]
            if t and r:
                role = ROLE_TARGET
            elif r:
                role = ROLE_DETERMINED
            elif not t:
                role = ROLE_FREE
            else:
                continue  # target marker without determined marker is never used
            self.cell_index[(bi, z_mask, role)] = ai

        tf, df = self.target_flag, self.determined_flag

        def blocked(i: int, j: int) -> bool:
            return (tf[i] and df[j]) or (tf[j] and df[i])

        self.templates = TemplateSet(self.snf, self.tables, blocked_pair=blocked)
        self.full_mask = (1 << base.m) - 1

    @property
    def width(self) -> int:
        return len(self.tables.compatible_one_types)


def build_aux_sentence(
    snf: SnfSentence, base_tables: Optional[CompatibilityTables] = None
) -> AuxSentence:
    return AuxSentence(snf, base_tables)


def shadow_checks_enabled() -> bool:
    return os.environ.get("FO2_DEBUG_SHADOW", "") not in ("", "0")


class EnumerationState:
    """Live backtracking state: domain roles, per-element guard bits, decided
    pair 2-types, and the incrementally maintained census of the auxiliary
    sentence."""

    def __init__(
        self,
        aux: AuxSentence,
        unary: UnarySubstructure,
        observer: Optional[Callable[["EnumerationState", bool], None]] = None,
        shadow: bool = False,
    ):
        self.aux = aux
        self.n = len(unary.assignment)
        self.assignment = unary.assignment
        self.z = [aux.full_mask] * self.n
        self.role = [ROLE_FREE] * self.n
        self.frontier = 0
        self.target: Optional[int] = None
        self.pair_entry: list[list[Optional[OrientedTwoType]]] = [
            [None] * self.n for _ in range(self.n)
        ]
        self.census = [0] * aux.width
        for e in range(self.n):
            self.census[self.cell_of(e)] += 1
        self.observer = observer
        self.shadow = shadow
        if self.n and not aux.templates.sat_cfg(tuple(self.census)):
            raise InconsistentUnaryError(
                f"1-type assignment {unary.assignment} admits no model"
            )

    # -- cells -----------------------------------------------------------------

    def cell_of(self, e: int) -> int:
        return self.aux.cell_index[(self.assignment[e], self.z[e], self.role[e])]

    def _move(self, e: int, old_cell: int) -> None:
        self.census[old_cell] -= 1
        self.census[self.cell_of(e)] += 1

    # -- checkpoints -------------------------------------------------------------

    def check(self) -> bool:
        ok = self.aux.templates.sat_cfg(tuple(self.census))
        if self.observer is not None:
            self.observer(self, ok)
        return ok

    # -- mutations ---------------------------------------------------------------

    def flip_target(self, e: int) -> None:
        old = self.cell_of(e)
        self.role[e] = ROLE_TARGET
        self.target = e
        self._move(e, old)
        if self.shadow:
            self.assert_shadow()

    def unflip_target(self, e: int) -> None:
        old = self.cell_of(e)
        self.role[e] = ROLE_FREE
        self.target = None
        self._move(e, old)
        if self.shadow:
            self.assert_shadow()

    def candidates(self, t: int, e: int) -> tuple[OrientedTwoType, ...]:
        return self.aux.base_tables.oriented_entries(self.assignment[t], self.assignment[e])

    def apply_trial(self, e: int, entry: OrientedTwoType) -> tuple:
        """Decide the pair {target, e} as ``entry`` (oriented target-first);
        returns an undo token."""
        if self.role[e] != ROLE_FREE or self.target is None:
            raise EnumerationError(f"element {e} is not undecided for the current target")
        if entry not in self.candidates(self.target, e):
            raise IncompatibleTwoTypeError(
                f"2-type is not compatible with the pair {{{self.target}, {e}}}"
            )
        return self._apply(e, entry)

    def _apply(self, e: int, entry: OrientedTwoType) -> tuple:
        t = self.target
        token = (e, self.z[e], self.cell_of(e), t, self.z[t], self.cell_of(t))
        old_e = token[2]
        old_t = token[5]
        self.z[t] &= ~entry.fwd_betas
        self.z[e] &= ~entry.bwd_betas
        self.role[e] = ROLE_DETERMINED
        self.pair_entry[t][e] = entry
        self._move(e, old_e)
        if self.cell_of(t) != old_t:
            self._move(t, old_t)
        if self.shadow:
            self.assert_shadow()
        return token

    def revert(self, token: tuple) -> None:
        e, z_e, cell_e, t, z_t, cell_t = token
        cur_e, cur_t = self.cell_of(e), self.cell_of(t)
        self.z[e] = z_e
        self.role[e] = ROLE_FREE
        self.z[t] = z_t
        self.pair_entry[t][e] = None
        self.census[cur_e] -= 1
        self.census[cell_e] += 1
        if cur_t != cell_t:
            self.census[cur_t] -= 1
            self.census[cell_t] += 1
        if self.shadow:
            self.assert_shadow()

    def advance_frontier(self) -> tuple:
        """Freeze the target's local structure: the target leaves the live
        census and every later element re-enters the undecided role, keeping
        the guard bits its frozen links earned."""
        t = self.target
        if t is None:
            raise EnumerationError("no target selected")
        for e in range(t + 1, self.n):
            if self.role[e] != ROLE_DETERMINED:
                raise PairUndecidedError(f"pair {{{t}, {e}}} is still undecided")
        token = (t, self.cell_of(t))
        self.census[self.cell_of(t)] -= 1
        for e in range(t + 1, self.n):
            old = self.cell_of(e)
            self.role[e] = ROLE_FREE
            self._move(e, old)
        self.frontier += 1
        self.target = None
        if self.shadow:
            self.assert_shadow()
        return token

    def undo_advance(self, token: tuple) -> None:
        t, cell_t = token
        self.frontier -= 1
        self.target = t
        for e in range(t + 1, self.n):
            old = self.cell_of(e)
            self.role[e] = ROLE_DETERMINED
            self._move(e, old)
        self.census[cell_t] += 1
        if self.shadow:
            self.assert_shadow()

    # -- views --------------------------------------------------------------------

    def materialize(self) -> Model:
        """Owned literal snapshot of the fully decided structure."""
        base_tables = self.aux.base_tables
        lits: list[GroundLiteral] = []
        for e in range(self.n):
            lits.extend(base_tables.one_type_literals(self.assignment[e], e))
        space = base_tables.space
        for t in range(self.n):
            row = self.pair_entry[t]
            for e in range(t + 1, self.n):
                entry = row[e]
                if entry is not None:
                    lits.extend(space.two_type_literals(entry.two_type, t, e))
        return tuple(lits)

    def partial_literals(self) -> list[GroundLiteral]:
        """Current partial structure over the base vocabulary: all 1-types plus
        every decided pair (frozen rows and the current target's links)."""
        base_tables = self.aux.base_tables
        lits: list[GroundLiteral] = []
        for e in range(self.n):
            lits.extend(base_tables.one_type_literals(self.assignment[e], e))
        space = base_tables.space
        for t in range(self.n):
            for e in range(t + 1, self.n):
                entry = self.pair_entry[t][e]
                if entry is None:
                    continue
                if t < self.frontier or (t == self.target and self.role[e] == ROLE_DETERMINED):
                    lits.extend(space.two_type_literals(entry.two_type, t, e))
        return lits

    # -- debugging -------------------------------------------------------------------

    def recompute(self) -> tuple[list[int], list[int]]:
        """Guard bits and census rebuilt from scratch from the decided pairs."""
        z = [self.aux.full_mask] * self.n
        for t in range(self.frontier):
            for e in range(t + 1, self.n):
                entry = self.pair_entry[t][e]
                z[t] &= ~entry.fwd_betas
                z[e] &= ~entry.bwd_betas
        t = self.target
        if t is not None:
            for e in range(t + 1, self.n):
                if self.role[e] == ROLE_DETERMINED:
                    entry = self.pair_entry[t][e]
                    z[t] &= ~entry.fwd_betas
                    z[e] &= ~entry.bwd_betas
        census = [0] * self.aux.width
        for e in range(self.frontier, self.n):
            census[self.aux.cell_index[(self.assignment[e], z[e], self.role[e])]] += 1
        return z, census

    def assert_shadow(self) -> None:
        z, census = self.recompute()
        live = list(range(self.frontier, self.n))
        if any(z[e] != self.z[e] for e in live):
            raise AssertionError(
                f"incremental guard bits {[self.z[e] for e in live]} != "
                f"recomputed {[z[e] for e in live]}"
            )
        if census != self.census:
            raise AssertionError(f"incremental census {self.census} != recomputed {census}")


def init_state(
    aux: AuxSentence,
    unary: UnarySubstructure,
    observer: Optional[Callable[[EnumerationState, bool], None]] = None,
    shadow: Optional[bool] = None,
) -> EnumerationState:
    if shadow is None:
        shadow = shadow_checks_enabled()
    return EnumerationState(aux, unary, observer=observer, shadow=shadow)


def enumerate_models(
    aux: AuxSentence,
    unary: UnarySubstructure,
    observer: Optional[Callable[[EnumerationState, bool], None]] = None,
    shadow: Optional[bool] = None,
) -> Iterator[Model]:
    """All models extending the given 1-type assignment, each exactly once."""
    state = init_state(aux, unary, observer=observer, shadow=shadow)
    yield from _domain_phase(state, 0)


def _domain_phase(state: EnumerationState, frontier: int) -> Iterator[Model]:
    if state.n - frontier <= 1:
        yield state.materialize()
        return
    t = frontier
    state.flip_target(t)
    try:
        for _ in _local_structures(state, t):
            token = state.advance_frontier()
            yield from _domain_phase(state, frontier + 1)
            state.undo_advance(token)
    finally:
        state.unflip_target(t)


def _local_structures(state: EnumerationState, t: int) -> Iterator[None]:
    """Yields once per consistent complete set of links from the target to all
    later elements; the links stay applied while the caller descends."""
    partners = list(range(t + 1, state.n))
    if not partners:
        yield
        return
    iterators = [iter(state.candidates(t, partners[0]))]
    tokens: list[Optional[tuple]] = [None]
    while iterators:
        depth = len(iterators) - 1
        e = partners[depth]
        descended = False
        for entry in iterators[depth]:
            token = state._apply(e, entry)
            if state.check():
                tokens[depth] = token
                descended = True
                break
            state.revert(token)
        if descended:
            if depth + 1 == len(partners):
                yield
                state.revert(tokens[depth])
                tokens[depth] = None
            else:
                iterators.append(iter(state.candidates(t, partners[depth + 1])))
                tokens.append(None)
        else:
            iterators.pop()
            tokens.pop()
            if tokens:
                state.revert(tokens[-1])
                tokens[-1] = None
