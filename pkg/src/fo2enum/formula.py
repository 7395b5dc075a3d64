"""Two-variable formulas: vocabulary, AST, parser, printer and ground evaluation.

Text grammar::

    formula    := iff
    iff        := implies ('<->' iff)?
    implies    := or ('->' implies)?
    or         := and ('|' and)*
    and        := unary ('&' unary)*
    unary      := '~' unary | quantified | primary
    quantified := (('forall'|'exists') var)+ ':' body
    primary    := '(' formula ')' | name '(' args ')' | var '=' var | var '!=' var

Precedence is ``~ > & > | > -> > <->``; ``->`` and ``<->`` associate to the
right. A quantifier body extends as far to the right as possible, except that
an unparenthesized ``&`` directly followed by ``forall`` or ``exists`` ends
the body and joins the quantified block with the next one. Only the variables
``x`` and ``y`` may appear; ``#`` starts a line comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Union

VARIABLES = ("x", "y")

_KEYWORDS = ("forall", "exists")


class FormulaError(Exception):
    """Base class for errors raised by this module."""


class FormulaSyntaxError(FormulaError):
    """Malformed input text; carries the character offset of the problem."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class ThirdVariableError(FormulaSyntaxError):
    """A variable other than x or y was used."""


class ArityMismatchError(FormulaSyntaxError):
    """A predicate was used with an inconsistent or unsupported arity."""


class UnassignedAtomError(FormulaError):
    """Ground evaluation needed an atom that the literal set does not assign."""


@dataclass(frozen=True, slots=True)
class Predicate:
    name: str
    arity: int


@dataclass(frozen=True)
class Vocabulary:
    """Ordered predicate symbols; equality is tracked by flag, never stored."""

    predicates: tuple[Predicate, ...]
    equality_used: bool = False

    def __post_init__(self) -> None:
        names = [p.name for p in self.predicates]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate predicate names in {names}")
        for p in self.predicates:
            if p.arity not in (1, 2):
                raise ValueError(f"unsupported arity {p.arity} for {p.name}")

    @property
    def unary(self) -> tuple[Predicate, ...]:
        return tuple(p for p in self.predicates if p.arity == 1)

    @property
    def binary(self) -> tuple[Predicate, ...]:
        return tuple(p for p in self.predicates if p.arity == 2)

    def arity_of(self, name: str) -> int:
        for p in self.predicates:
            if p.name == name:
                return p.arity
        raise KeyError(name)

    def extend(self, extra: Iterable[Predicate], equality_used: bool | None = None) -> "Vocabulary":
        eq = self.equality_used if equality_used is None else equality_used
        return Vocabulary(self.predicates + tuple(extra), eq)

    def fresh_name(self, stem: str) -> str:
        used = {p.name for p in self.predicates}
        i = 1
        while f"{stem}{i}" in used:
            i += 1
        return f"{stem}{i}"


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Atom:
    pred: str
    args: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Atom, Eq, Not, And, Or, Implies, Iff, Forall, Exists]

_BINARY_NODES = {And: "&", Or: "|", Implies: "->", Iff: "<->"}


@dataclass(frozen=True)
class Sentence:
    """A closed formula together with its inferred vocabulary."""

    formula: Formula
    vocabulary: Vocabulary


class GroundLiteral(NamedTuple):
    """A signed ground atom; element ids are 0-based ints (rendered e1, e2, ...)."""

    pred: str
    args: tuple[int, ...]
    sign: bool


def element_name(e: int) -> str:
    return f"e{e + 1}"


def render_atom(pred: str, args: tuple[int, ...]) -> str:
    return f"{pred}({','.join(element_name(a) for a in args)})"


def render_literal(lit: GroundLiteral) -> str:
    text = render_atom(lit.pred, lit.args)
    return text if lit.sign else "~" + text


# --- analysis --------------------------------------------------------------


def free_variables(formula: Formula) -> frozenset[str]:
    if isinstance(formula, Atom):
        return frozenset(formula.args)
    if isinstance(formula, Eq):
        return frozenset((formula.left, formula.right))
    if isinstance(formula, Not):
        return free_variables(formula.body)
    if isinstance(formula, (And, Or, Implies, Iff)):
        return free_variables(formula.left) | free_variables(formula.right)
    if isinstance(formula, (Forall, Exists)):
        return free_variables(formula.body) - {formula.var}
    raise TypeError(f"not a formula: {formula!r}")


def is_quantifier_free(formula: Formula) -> bool:
    if isinstance(formula, (Atom, Eq)):
        return True
    if isinstance(formula, Not):
        return is_quantifier_free(formula.body)
    if isinstance(formula, (And, Or, Implies, Iff)):
        return is_quantifier_free(formula.left) and is_quantifier_free(formula.right)
    return False


def swap_variables(formula: Formula) -> Formula:
    """Exchange x and y throughout, respecting nothing: callers must ensure
    the formula is quantifier-free (bound occurrences would be renamed too)."""
    mapping = {"x": "y", "y": "x"}
    return substitute(formula, mapping)


def substitute(formula: Formula, mapping: Mapping[str, str]) -> Formula:
    if isinstance(formula, Atom):
        return Atom(formula.pred, tuple(mapping.get(a, a) for a in formula.args))
    if isinstance(formula, Eq):
        return Eq(mapping.get(formula.left, formula.left), mapping.get(formula.right, formula.right))
    if isinstance(formula, Not):
        return Not(substitute(formula.body, mapping))
    if isinstance(formula, (And, Or, Implies, Iff)):
        return type(formula)(substitute(formula.left, mapping), substitute(formula.right, mapping))
    raise ValueError("substitute only supports quantifier-free formulas")


def conjuncts(formula: Formula) -> list[Formula]:
    """Flatten a top-level conjunction tree into its list of conjuncts."""
    if isinstance(formula, And):
        return conjuncts(formula.left) + conjuncts(formula.right)
    return [formula]


def conjoin(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


# --- ground evaluation -----------------------------------------------------


def literal_table(literals: Iterable[GroundLiteral]) -> dict[tuple[str, tuple[int, ...]], bool]:
    table: dict[tuple[str, tuple[int, ...]], bool] = {}
    for lit in literals:
        key = (lit.pred, lit.args)
        if table.get(key, lit.sign) != lit.sign:
            raise ValueError(f"contradictory literals for {render_atom(*key)}")
        table[key] = lit.sign
    return table


def evaluate_ground(
    formula: Formula,
    binding: Mapping[str, int],
    literals: Mapping[tuple[str, tuple[int, ...]], bool] | Iterable[GroundLiteral],
) -> bool:
    """Evaluate a quantifier-free formula under a variable binding.

    Equality atoms are decided purely by the binding; every other atom must be
    assigned by ``literals`` or UnassignedAtomError is raised.
    """
    table = literals if isinstance(literals, Mapping) else literal_table(literals)
    return _eval(formula, binding, table)


def _eval(f: Formula, b: Mapping[str, int], t: Mapping[tuple[str, tuple[int, ...]], bool]) -> bool:
    if isinstance(f, Atom):
        key = (f.pred, tuple(b[a] for a in f.args))
        try:
            return t[key]
        except KeyError:
            raise UnassignedAtomError(f"no truth value for {render_atom(*key)}") from None
    if isinstance(f, Eq):
        return b[f.left] == b[f.right]
    if isinstance(f, Not):
        return not _eval(f.body, b, t)
    if isinstance(f, And):
        return _eval(f.left, b, t) and _eval(f.right, b, t)
    if isinstance(f, Or):
        return _eval(f.left, b, t) or _eval(f.right, b, t)
    if isinstance(f, Implies):
        return (not _eval(f.left, b, t)) or _eval(f.right, b, t)
    if isinstance(f, Iff):
        return _eval(f.left, b, t) == _eval(f.right, b, t)
    raise ValueError(f"not quantifier-free: {f!r}")


# --- parser ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>\#[^\n]*)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<op><->|->|!=|[()~&|=:,])
    """,
    re.VERBOSE,
)

_PREC = {"<->": 1, "->": 2, "|": 3, "&": 4}
_RIGHT_ASSOC = {"<->", "->"}


class _Token(NamedTuple):
    kind: str  # "name", "op", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        pos = m.end()
        if m.lastgroup in ("ws", "comment"):
            continue
        tokens.append(_Token("name" if m.lastgroup == "name" else "op", m.group(), m.start()))
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.arities: dict[str, int] = {}
        self.order: list[str] = []
        self.equality_used = False

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise FormulaSyntaxError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.pos)
        return tok

    def parse(self) -> Formula:
        formula = self.parse_expr(0, in_body=False)
        tok = self.peek()
        if tok.kind != "end":
            raise FormulaSyntaxError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return formula

    def parse_expr(self, min_prec: int, in_body: bool) -> Formula:
        lhs = self.parse_unary(in_body)
        while True:
            tok = self.peek()
            if tok.kind != "op" or tok.text not in _PREC:
                break
            prec = _PREC[tok.text]
            if prec < min_prec:
                break
            if in_body and tok.text == "&" and self.peek(1).text in _KEYWORDS:
                break  # the '&' joins quantified blocks; leave it to the caller
            self.next()
            rhs = self.parse_expr(prec if tok.text in _RIGHT_ASSOC else prec + 1, in_body)
            node = {"&": And, "|": Or, "->": Implies, "<->": Iff}[tok.text]
            lhs = node(lhs, rhs)
        return lhs

    def parse_unary(self, in_body: bool) -> Formula:
        tok = self.peek()
        if tok.text == "~":
            self.next()
            return Not(self.parse_unary(in_body))
        if tok.text in _KEYWORDS:
            return self.parse_quantified()
        return self.parse_primary()

    def parse_quantified(self) -> Formula:
        quants: list[tuple[str, str]] = []
        while self.peek().text in _KEYWORDS:
            kw = self.next()
            var = self.next()
            if var.kind != "name":
                raise FormulaSyntaxError(f"expected a variable after {kw.text!r}", var.pos)
            self.check_variable(var)
            quants.append((kw.text, var.text))
        self.expect(":")
        body = self.parse_expr(0, in_body=True)
        for kw, var in reversed(quants):
            body = Forall(var, body) if kw == "forall" else Exists(var, body)
        return body

    def parse_primary(self) -> Formula:
        tok = self.next()
        if tok.text == "(":
            inner = self.parse_expr(0, in_body=False)
            self.expect(")")
            return inner
        if tok.kind != "name":
            raise FormulaSyntaxError(f"expected a formula, found {tok.text or 'end of input'!r}", tok.pos)
        follow = self.peek()
        if follow.text == "(":
            return self.parse_atom(tok)
        if follow.text in ("=", "!="):
            self.check_variable(tok)
            op = self.next()
            right = self.next()
            if right.kind != "name":
                raise FormulaSyntaxError("expected a variable on the right of equality", right.pos)
            self.check_variable(right)
            self.equality_used = True
            eq = Eq(tok.text, right.text)
            return eq if op.text == "=" else Not(eq)
        raise FormulaSyntaxError(f"dangling name {tok.text!r}: expected '(' or equality", tok.pos)

    def parse_atom(self, name: _Token) -> Formula:
        self.expect("(")
        args: list[str] = []
        while True:
            arg = self.next()
            if arg.kind != "name":
                raise FormulaSyntaxError("expected a variable argument", arg.pos)
            self.check_variable(arg)
            args.append(arg.text)
            tok = self.next()
            if tok.text == ")":
                break
            if tok.text != ",":
                raise FormulaSyntaxError(f"expected ',' or ')', found {tok.text!r}", tok.pos)
        if len(args) > 2:
            raise ArityMismatchError(f"{name.text} used with {len(args)} arguments", name.pos)
        seen = self.arities.get(name.text)
        if seen is None:
            self.arities[name.text] = len(args)
            self.order.append(name.text)
        elif seen != len(args):
            raise ArityMismatchError(
                f"{name.text} used with both {seen} and {len(args)} arguments", name.pos
            )
        return Atom(name.text, tuple(args))

    def check_variable(self, tok: _Token) -> None:
        if tok.text in _KEYWORDS:
            raise FormulaSyntaxError(f"keyword {tok.text!r} cannot be a variable", tok.pos)
        if tok.text not in VARIABLES:
            raise ThirdVariableError(f"only variables x and y are allowed, found {tok.text!r}", tok.pos)

    def vocabulary(self) -> Vocabulary:
        preds = tuple(Predicate(n, self.arities[n]) for n in self.order)
        return Vocabulary(preds, self.equality_used)


def parse_formula(text: str) -> tuple[Formula, Vocabulary]:
    """Parse a formula that may contain free variables."""
    parser = _Parser(text)
    formula = parser.parse()
    return formula, parser.vocabulary()


def parse_sentence(text: str) -> Sentence:
    formula, vocab = parse_formula(text)
    free = free_variables(formula)
    if free:
        raise FormulaSyntaxError(f"free variables {sorted(free)} in sentence", 0)
    return Sentence(formula, vocab)


# --- printer ----------------------------------------------------------------


def format_formula(formula: Formula) -> str:
    return _fmt(formula, 0, top=True)


def format_sentence(sentence: Sentence) -> str:
    return format_formula(sentence.formula)


def _fmt(f: Formula, parent_prec: int, top: bool = False) -> str:
    if isinstance(f, Atom):
        return f"{f.pred}({','.join(f.args)})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        if isinstance(f.body, Eq):
            return f"{f.body.left} != {f.body.right}"
        return "~" + _fmt(f.body, 5)
    if isinstance(f, (Forall, Exists)):
        quants = []
        body = f
        while isinstance(body, (Forall, Exists)):
            quants.append(("forall" if isinstance(body, Forall) else "exists") + f" {body.var}")
            body = body.body
        text = " ".join(quants) + ": " + _fmt(body, 0)
        return text if top else f"({text})"
    op = _BINARY_NODES[type(f)]
    prec = _PREC[op]
    if op in _RIGHT_ASSOC:
        left = _fmt(f.left, prec + 1)
        right = _fmt(f.right, prec)
    else:
        left = _fmt(f.left, prec)
        right = _fmt(f.right, prec + 1)
    text = f"{left} {op} {right}"
    return text if prec >= parent_prec else f"({text})"
