"""The configuration decision problem.

A configuration counts how many domain elements realize each compatible
1-type. Satisfiability of bounded configurations is decided by exhaustive
backtracking over 2-type assignments with witness-deficiency pruning; every
entry of a configuration can be clamped to the bound

    delta = max(m (m + 1), 2 m + 1)

(raised to at least 2 when equality is used) without changing satisfiability,
which makes the general decision amortized constant time through a memo of
clamped results.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterator, Optional

from fo2enum.snf import SnfSentence
from fo2enum.types import CompatibilityTables

Configuration = tuple[int, ...]


class ConfigError(Exception):
    pass


class LengthMismatchError(ConfigError):
    pass


class BoundExceededError(ConfigError):
    pass


def compute_delta(snf: SnfSentence, with_equality: Optional[bool] = None) -> int:
    """Universal clamping bound for template entries."""
    if with_equality is None:
        with_equality = snf.with_equality
    m = snf.m
    delta = max(m * (m + 1), 2 * m + 1)
    return max(delta, 2) if with_equality else delta


def derives(base: Configuration, target: Configuration, with_equality: bool = False) -> bool:
    """Whether ``target`` is reachable from ``base`` by growing entries.

    Entries may only grow where the base entry is positive; with equality the
    threshold rises to entries greater than one. All other entries must match
    exactly.
    """
    if len(base) != len(target):
        raise LengthMismatchError(f"configuration lengths {len(base)} != {len(target)}")
    floor = 1 if with_equality else 0
    return all(
        (t >= b) if b > floor else (t == b) for b, t in zip(base, target)
    )


def is_bounded_config_satisfiable(
    snf: SnfSentence,
    tables: CompatibilityTables,
    config: Configuration,
    *,
    blocked_pair: Optional[Callable[[int, int], bool]] = None,
    bound: Optional[int] = None,
) -> bool:
    """Exact decision for a small configuration by ground search.

    Fixes the 1-type of each element according to ``config``, then assigns a
    compatible 2-type to every unordered pair, backtracking whenever some
    element can no longer collect a witness for an owed existential conjunct
    among its unassigned pairs. ``blocked_pair`` marks 1-type index pairs whose
    assigned 2-type exists in the structure but may not serve as a witness
    provider (an element's own reflexive atoms always may).
    """
    if len(config) != tables.u:
        raise LengthMismatchError(f"expected {tables.u} entries, got {len(config)}")
    if any(c < 0 for c in config):
        raise ConfigError("negative cardinality")
    delta_eff = compute_delta(snf) if bound is None else bound
    if sum(config) > delta_eff * max(1, tables.u):
        raise BoundExceededError(f"|config| = {sum(config)} exceeds {delta_eff} * {tables.u}")

    for i, c in enumerate(config):
        if c >= 2 and not tables.pair_entries(i, i):
            return False

    elems = [i for i, c in enumerate(config) for _ in range(c)]
    need = [tables.need_mask[t] for t in elems]
    k = len(elems)
    if k <= 1:
        return all(x == 0 for x in need)

    pairs = [(a, b) for a in range(k) for b in range(a + 1, k)]
    cands = []
    toward = []
    m = snf.m
    avail = [[0] * m for _ in range(k)]
    for a, b in pairs:
        entries = tables.oriented_entries(elems[a], elems[b])
        if not entries:
            return False
        # Only the witness bits of a candidate matter here, so candidates with
        # equal masks are interchangeable; blocked pairs contribute nothing.
        if blocked_pair and blocked_pair(elems[a], elems[b]):
            masks = [(0, 0)]
        else:
            masks = sorted(
                {(ent.fwd_betas, ent.bwd_betas) for ent in entries},
                key=lambda fb: -(bin(fb[0]).count("1") + bin(fb[1]).count("1")),
            )
        cands.append(masks)
        ma = mb = 0
        for fa, fb in masks:
            ma |= fa
            mb |= fb
        toward.append((ma, mb))
        for kk in range(m):
            if ma >> kk & 1:
                avail[a][kk] += 1
            if mb >> kk & 1:
                avail[b][kk] += 1

    def feasible(e: int) -> bool:
        nm = need[e]
        kk = 0
        while nm:
            if nm & 1 and avail[e][kk] == 0:
                return False
            nm >>= 1
            kk += 1
        return True

    for e in range(k):
        if not feasible(e):
            return False

    def dfs(p: int) -> bool:
        if p == len(pairs):
            return all(x == 0 for x in need)
        a, b = pairs[p]
        ma, mb = toward[p]
        for kk in range(m):
            if ma >> kk & 1:
                avail[a][kk] -= 1
            if mb >> kk & 1:
                avail[b][kk] -= 1
        try:
            old_a, old_b = need[a], need[b]
            for fwd, bwd in cands[p]:
                need[a] = old_a & ~fwd
                need[b] = old_b & ~bwd
                if feasible(a) and feasible(b) and dfs(p + 1):
                    return True
            need[a], need[b] = old_a, old_b
            return False
        finally:
            for kk in range(m):
                if ma >> kk & 1:
                    avail[a][kk] += 1
                if mb >> kk & 1:
                    avail[b][kk] += 1

    return dfs(0)


class TemplateSet:
    """Satisfiable bounded configurations, discovered lazily and memoized.

    The grid {0..delta_eff}^|U| is only walked on demand; arbitrary
    configurations are decided by clamping every entry to delta_eff and looking
    the clamped point up in the memo, which realizes the amortized
    constant-time decision.
    """

    def __init__(
        self,
        snf: SnfSentence,
        tables: CompatibilityTables,
        with_equality: Optional[bool] = None,
        blocked_pair: Optional[Callable[[int, int], bool]] = None,
    ):
        self.snf = snf
        self.tables = tables
        self.with_equality = snf.with_equality if with_equality is None else with_equality
        self.delta = compute_delta(snf, with_equality=False)
        self.delta_eff = compute_delta(snf, with_equality=self.with_equality)
        self.blocked_pair = blocked_pair
        self._memo: dict[Configuration, bool] = {}

    def is_satisfiable_bounded(self, config: Configuration) -> bool:
        config = tuple(config)
        cached = self._memo.get(config)
        if cached is None:
            cached = is_bounded_config_satisfiable(
                self.snf,
                self.tables,
                config,
                blocked_pair=self.blocked_pair,
                bound=self.delta_eff,
            )
            self._memo[config] = cached
        return cached

    def clamp(self, config: Configuration) -> Configuration:
        return tuple(min(c, self.delta_eff) for c in config)

    def sat_cfg(self, config: Configuration) -> bool:
        if len(config) != self.tables.u:
            raise LengthMismatchError(f"expected {self.tables.u} entries, got {len(config)}")
        if any(c < 0 for c in config):
            raise ConfigError("negative cardinality")
        return self.is_satisfiable_bounded(self.clamp(config))

    def is_template(self, config: Configuration) -> bool:
        config = tuple(config)
        if any(not 0 <= c <= self.delta_eff for c in config):
            return False
        return self.is_satisfiable_bounded(config)

    def iter_templates(self, max_size: Optional[int] = None) -> Iterator[Configuration]:
        """Template configurations in lexicographic order, optionally only
        those whose total size does not exceed ``max_size`` (larger grid
        points are then never generated, let alone decided)."""
        if max_size is None:
            points = itertools.product(range(self.delta_eff + 1), repeat=self.tables.u)
        else:
            points = self._bounded_points((), max_size)
        for point in points:
            if self.is_satisfiable_bounded(point):
                yield point

    def _bounded_points(self, prefix: Configuration, budget: int) -> Iterator[Configuration]:
        if len(prefix) == self.tables.u:
            yield prefix
            return
        for v in range(min(self.delta_eff, budget) + 1):
            yield from self._bounded_points(prefix + (v,), budget - v)

    def all_templates(self) -> frozenset[Configuration]:
        return frozenset(self.iter_templates())


def discover_templates(
    snf: SnfSentence,
    tables: CompatibilityTables,
    with_equality: Optional[bool] = None,
) -> TemplateSet:
    return TemplateSet(snf, tables, with_equality=with_equality)


def sat_cfg(templates: TemplateSet, config: Configuration) -> bool:
    return templates.sat_cfg(config)
