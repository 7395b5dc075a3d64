"""Compile-once facade over the enumeration pipeline.

A CompiledSentence owns everything derived from one sentence text: the parsed
and normalized forms, the compatibility tables, the memoized template cache
and the auxiliary consistency-check sentence. All query entry points used by
the service and the CLI live here.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from fo2enum.binary import AuxSentence, Model, enumerate_models, shadow_checks_enabled
from fo2enum.config import Configuration, TemplateSet, discover_templates
from fo2enum.formula import Sentence, parse_sentence, render_atom
from fo2enum.snf import BackMapping, SnfSentence, back_map_model, to_snf
from fo2enum.types import CompatibilityTables, build_tables
from fo2enum.unary import enum_sat_configs, enum_unary_substructures


@dataclass(frozen=True)
class BenchRow:
    n: int
    models: int
    mean_delay: float
    max_delay: float
    p99_delay: float


@dataclass(frozen=True)
class BenchReport:
    rows: tuple[BenchRow, ...]
    slope: Optional[float]


class CompiledSentence:
    def __init__(self, text: str):
        self.text = text
        self.sentence: Sentence = parse_sentence(text)
        self.snf: SnfSentence
        self.mapping: BackMapping
        self.snf, self.mapping = to_snf(self.sentence)
        self.tables: CompatibilityTables = build_tables(self.snf)
        self.templates: TemplateSet = discover_templates(self.snf, self.tables)
        self.aux: AuxSentence = AuxSentence(self.snf, self.tables)

    # -- queries -----------------------------------------------------------------

    @property
    def with_equality(self) -> bool:
        return self.snf.with_equality

    def models(
        self,
        n: int,
        limit: Optional[int] = None,
        original: bool = True,
        shadow: Optional[bool] = None,
    ) -> Iterator[Model]:
        """Stream every model over n elements exactly once, deterministically.
        With ``original`` set, auxiliary predicates introduced by normalization
        are dropped from each model."""
        if n < 0:
            raise ValueError("domain size must be non-negative")
        if limit is not None and limit < 1:
            raise ValueError("limit must be positive")
        if shadow is None:
            shadow = shadow_checks_enabled()
        drop = original and bool(self.mapping.aux_names)
        emitted = 0
        for unary in enum_unary_substructures(self.snf, self.tables, self.templates, n):
            for model in enumerate_models(self.aux, unary, shadow=shadow):
                yield back_map_model(model, self.mapping) if drop else model
                emitted += 1
                if limit is not None and emitted >= limit:
                    return

    def count(self, n: int) -> int:
        """Exact model count by exhaustive enumeration (exponential in n)."""
        return sum(1 for _ in self.models(n, original=False))

    def check_config(self, config: Configuration) -> bool:
        return self.templates.sat_cfg(tuple(config))

    def spectrum(self, n: int) -> bool:
        """Whether any satisfiable configuration of size n exists."""
        return next(enum_sat_configs(self.templates, n), None) is not None

    def type_info(self) -> dict:
        return {
            "predicates": [f"{p.name}/{p.arity}" for p in self.sentence.vocabulary.predicates],
            "equality": self.with_equality,
            "m": self.snf.m,
            "betas": list(self.snf.betas),
            "aux_predicates": sorted(self.mapping.aux_names),
            "delta": self.templates.delta,
            "delta_eff": self.templates.delta_eff,
            "u": self.tables.u,
            "compatible_one_types": self.tables.describe_one_types(),
        }

    def bench(self, sizes: list[int], limit: int = 1000) -> BenchReport:
        """Measure inter-model delay per domain size; yield-to-yield timings
        include model materialization and back-mapping."""
        if not sizes:
            raise ValueError("at least one size required")
        rows = []
        for n in sizes:
            delays = []
            last = time.perf_counter()
            for _ in self.models(n, limit=limit):
                now = time.perf_counter()
                delays.append(now - last)
                last = now
            if delays:
                ordered = sorted(delays)
                p99 = ordered[min(len(ordered) - 1, math.ceil(0.99 * len(ordered)) - 1)]
                rows.append(
                    BenchRow(n, len(delays), sum(delays) / len(delays), ordered[-1], p99)
                )
            else:
                rows.append(BenchRow(n, 0, 0.0, 0.0, 0.0))
        slope = None
        fit = [(r.n, r.mean_delay) for r in rows if r.models > 0 and r.mean_delay > 0]
        if len(fit) >= 2:
            xs = np.log([n for n, _ in fit])
            ys = np.log([d for _, d in fit])
            slope = float(np.polyfit(xs, ys, 1)[0])
        return BenchReport(tuple(rows), slope)


def render_model(model: Model) -> list[str]:
    """Sorted positive atoms of a model, as strings like E(e1,e2)."""
    return sorted(render_atom(lit.pred, lit.args) for lit in model if lit.sign)
