"""Normalization of sentences into the shape

    forall x forall y: phi(x,y)  &  AND_k forall x exists y: beta_k(x,y)

with phi quantifier-free and each beta_k an atomic binary predicate.

Every auxiliary predicate is introduced with a biconditional definition folded
into phi, so models of the normalized sentence map one-to-one onto models of
the original sentence: dropping the auxiliary literals recovers the original
model and nothing else changes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from fo2enum.formula import (
    And,
    Atom,
    Eq,
    Exists,
    Forall,
    Formula,
    GroundLiteral,
    Iff,
    Implies,
    Not,
    Or,
    Predicate,
    Sentence,
    Vocabulary,
    conjoin,
    conjuncts,
    free_variables,
    is_quantifier_free,
    swap_variables,
)


@dataclass(frozen=True)
class SnfSentence:
    """Normal form: phi is quantifier-free (None means vacuously true) and each
    existential conjunct requires a beta_k(x, y) witness for every element.

    ``beta_guards`` optionally names a unary predicate per existential
    conjunct; when set, only elements whose 1-type makes the guard positive owe
    a witness. User sentences always have unguarded conjuncts; guards exist for
    the auxiliary sentence used by the enumeration engine.
    """

    phi: Optional[Formula]
    betas: tuple[str, ...]
    vocabulary: Vocabulary
    aux_predicates: frozenset[str] = frozenset()
    beta_guards: tuple[Optional[str], ...] = ()

    def __post_init__(self):
        if not self.beta_guards:
            object.__setattr__(self, "beta_guards", (None,) * len(self.betas))
        if len(self.beta_guards) != len(self.betas):
            raise ValueError("one guard slot per existential conjunct required")
        binary = {p.name for p in self.vocabulary.binary}
        for b in self.betas:
            if b not in binary:
                raise ValueError(f"existential predicate {b} is not binary in the vocabulary")

    @property
    def m(self) -> int:
        return len(self.betas)

    @property
    def with_equality(self) -> bool:
        return self.vocabulary.equality_used


@dataclass(frozen=True)
class AuxDefinition:
    """One auxiliary predicate and its defining formula.

    For a unary predicate the definition reads  name(x) <-> Q y: body  with Q
    the recorded quantifier; for a binary predicate it reads
    name(x,y) <-> body. Definitions refer only to earlier vocabulary.
    """

    name: str
    arity: int
    quantifier: Optional[str]  # "forall" | "exists" | None
    body: Formula


@dataclass(frozen=True)
class BackMapping:
    definitions: tuple[AuxDefinition, ...] = ()

    @property
    def aux_names(self) -> frozenset[str]:
        return frozenset(d.name for d in self.definitions)


def back_map_model(
    snf_model: frozenset[GroundLiteral] | tuple[GroundLiteral, ...],
    mapping: BackMapping,
) -> tuple[GroundLiteral, ...]:
    """Restrict a model of the normalized sentence to the original vocabulary."""
    drop = mapping.aux_names
    return tuple(lit for lit in snf_model if lit.pred not in drop)


def is_snf(sentence: Sentence) -> bool:
    """True iff the sentence already matches the normal form syntactically,
    with every existential body a positive binary atom over its two bound
    variables."""
    for c in conjuncts(sentence.formula):
        if _universal_body(c) is not None:
            continue
        body = _existential_body(c)
        if isinstance(body, Atom) and body.args == ("x", "y"):
            continue
        return False
    return True


def _universal_body(c: Formula) -> Optional[Formula]:
    """Body of a purely universal conjunct, or None. The body is returned as
    written; grounding over all ordered pairs makes the quantifier order and
    single-variable cases equivalent."""
    stripped = c
    depth = 0
    while isinstance(stripped, Forall) and depth < 2:
        stripped = stripped.body
        depth += 1
    if depth >= 1 and is_quantifier_free(stripped):
        return stripped
    return None


def _existential_body(c: Formula) -> Optional[Formula]:
    """Canonical body of a conjunct of shape forall u exists v: psi with psi
    quantifier-free, renamed so that u is x and v is y; otherwise None."""
    if not isinstance(c, Forall):
        return None
    inner = c.body
    if not isinstance(inner, Exists) or c.var == inner.var:
        return None
    if not is_quantifier_free(inner.body):
        return None
    if c.var == "x":
        return inner.body
    return swap_variables(inner.body)


class _Names:
    def __init__(self, taken: set[str]):
        self.taken = set(taken)

    def fresh(self, stem: str) -> str:
        i = 1
        while f"{stem}{i}" in self.taken:
            i += 1
        name = f"{stem}{i}"
        self.taken.add(name)
        return name


def to_snf(sentence: Sentence) -> tuple[SnfSentence, BackMapping]:
    """Normalize an arbitrary sentence, returning the normal form and the
    mapping that recovers original-vocabulary models."""
    names = _Names({p.name for p in sentence.vocabulary.predicates})
    phi_parts: list[Formula] = []
    betas: list[str] = []
    new_preds: list[Predicate] = []
    defs: list[AuxDefinition] = []

    pending = conjuncts(sentence.formula)
    while pending:
        c = pending.pop(0)
        body = _universal_body(c)
        if body is None and is_quantifier_free(c):
            # Residue of eliminating a closed quantified subformula: its free
            # occurrences all come from constant-valued auxiliary atoms, so the
            # implicit universal closure is exact.
            body = c
        if body is not None:
            phi_parts.append(body)
            continue
        ex_body = _existential_body(c)
        if ex_body is not None:
            if isinstance(ex_body, Atom) and ex_body.args == ("x", "y"):
                betas.append(ex_body.pred)
            else:
                w = names.fresh("W")
                new_preds.append(Predicate(w, 2))
                defs.append(AuxDefinition(w, 2, None, ex_body))
                phi_parts.append(Iff(Atom(w, ("x", "y")), ex_body))
                betas.append(w)
            continue
        pending.insert(0, _eliminate_one(c, names, phi_parts, betas, new_preds, defs))

    vocabulary = sentence.vocabulary.extend(new_preds)
    snf = SnfSentence(
        phi=conjoin(phi_parts) if phi_parts else None,
        betas=tuple(betas),
        vocabulary=vocabulary,
        aux_predicates=frozenset(p.name for p in new_preds),
    )
    return snf, BackMapping(tuple(defs))


def _eliminate_one(
    c: Formula,
    names: _Names,
    phi_parts: list[Formula],
    betas: list[str],
    new_preds: list[Predicate],
    defs: list[AuxDefinition],
) -> Formula:
    """Replace one innermost quantified subformula of c by a fresh unary atom,
    emitting the biconditional definition, and return the rewritten conjunct."""
    target = _find_innermost(c, is_root=True, binders=())
    if target is None:
        # c itself is a single quantified formula in a non-normal position
        # (for example a bare existential conjunct).
        target = (c, None)
    theta, site_var = target

    psi = theta.body if theta.var == "y" else swap_variables(theta.body)
    a = names.fresh("A")
    new_preds.append(Predicate(a, 1))
    a_x = Atom(a, ("x",))
    w = names.fresh("W")
    new_preds.append(Predicate(w, 2))
    w_xy = Atom(w, ("x", "y"))
    if isinstance(theta, Exists):
        defs.append(AuxDefinition(a, 1, "exists", psi))
        phi_parts.append(Implies(psi, a_x))
        phi_parts.append(Iff(w_xy, Or(Not(a_x), psi)))
    else:
        defs.append(AuxDefinition(a, 1, "forall", psi))
        phi_parts.append(Implies(a_x, psi))
        phi_parts.append(Iff(w_xy, Or(a_x, Not(psi))))
    defs.append(AuxDefinition(w, 2, None, Or(Not(a_x), psi) if isinstance(theta, Exists) else Or(a_x, Not(psi))))
    betas.append(w)

    free = free_variables(theta)
    var = next(iter(free)) if free else (site_var or "x")
    replacement = Atom(a, (var,))
    if theta is c:
        return replacement
    return _replace(c, theta, replacement)


def _find_innermost(f: Formula, is_root: bool, binders: tuple[str, ...]):
    """First quantified subformula with a quantifier-free body that is not the
    conjunct root, paired with the innermost enclosing bound variable."""
    if isinstance(f, (Forall, Exists)):
        if not is_root and is_quantifier_free(f.body):
            return f, (binders[-1] if binders else None)
        return _find_innermost(f.body, False, binders + (f.var,))
    if isinstance(f, Not):
        return _find_innermost(f.body, False, binders)
    if isinstance(f, (And, Or, Implies, Iff)):
        found = _find_innermost(f.left, False, binders)
        if found is not None:
            return found
        return _find_innermost(f.right, False, binders)
    return None


def _replace(f: Formula, old: Formula, new: Formula) -> Formula:
    if f is old:
        return new
    if isinstance(f, Not):
        return Not(_replace(f.body, old, new))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(_replace(f.left, old, new), _replace(f.right, old, new))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, _replace(f.body, old, new))
    return f
