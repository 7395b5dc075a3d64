"""Streaming enumeration of satisfiable configurations of a given size and of
the domain partitions realizing them.

Size-n configurations derive from the bounded templates: a template is used as
is when it already has size n, and when smaller, the missing elements are
distributed over its entries that sit exactly at the clamping bound (growing
any of those preserves satisfiability). Templates with no such entry cannot
grow and are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from fo2enum.config import Configuration, TemplateSet
from fo2enum.snf import SnfSentence
from fo2enum.types import CompatibilityTables


class PartitionError(Exception):
    pass


class ZeroPartsError(PartitionError):
    pass


class SizeMismatchError(PartitionError):
    pass


@dataclass(frozen=True)
class UnarySubstructure:
    """A 1-type index per domain element, together with the induced census."""

    assignment: tuple[int, ...]
    config: Configuration


def enum_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write ``total`` as ``parts`` non-negative integers,
    first coordinate descending: (3,0), (2,1), (1,2), (0,3)."""
    if total < 0:
        raise ValueError("total must be non-negative")
    if parts == 0:
        if total > 0:
            raise ZeroPartsError(f"cannot split {total} into zero parts")
        yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in enum_compositions(total - first, parts - 1):
            yield (first,) + rest


def enum_sat_configs(templates: TemplateSet, n: int) -> Iterator[Configuration]:
    """Every satisfiable configuration of size n, exactly once, in template
    order."""
    if n < 0:
        raise ValueError("domain size must be non-negative")
    bound = templates.delta_eff
    for template in templates.iter_templates(max_size=n):
        size = sum(template)
        if size == n:
            yield template
            continue
        grow = [i for i, v in enumerate(template) if v == bound]
        if not grow:
            continue
        for extra in enum_compositions(n - size, len(grow)):
            config = list(template)
            for pos, add in zip(grow, extra):
                config[pos] += add
            yield tuple(config)


def _next_permutation(seq: list[int]) -> bool:
    """In-place lexicographic successor; False when seq was the last one."""
    i = len(seq) - 2
    while i >= 0 and seq[i] >= seq[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = len(seq) - 1
    while seq[j] <= seq[i]:
        j -= 1
    seq[i], seq[j] = seq[j], seq[i]
    seq[i + 1 :] = reversed(seq[i + 1 :])
    return True


def enum_partitions(n: int, config: Configuration) -> Iterator[UnarySubstructure]:
    """All assignments of elements to 1-types with the given census, in
    lexicographic order on the assignment vector."""
    if sum(config) != n:
        raise SizeMismatchError(f"census sums to {sum(config)}, not {n}")
    assignment = [i for i, c in enumerate(config) for _ in range(c)]
    while True:
        yield UnarySubstructure(tuple(assignment), tuple(config))
        if not _next_permutation(assignment):
            return


def enum_unary_substructures(
    snf: SnfSentence,
    tables: CompatibilityTables,
    templates: TemplateSet,
    n: int,
) -> Iterator[UnarySubstructure]:
    """All 1-type assignments over n elements that extend to a model."""
    for config in enum_sat_configs(templates, n):
        yield from enum_partitions(n, config)
