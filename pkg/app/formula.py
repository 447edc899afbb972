#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Iterator, Union

from lark import Lark, Transformer, UnexpectedInput

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class And:
    left: 'Formula'
    right: 'Formula'


@dataclass(frozen=True)
class Or:
    left: 'Formula'
    right: 'Formula'


@dataclass(frozen=True)
class Imp:
    left: 'Formula'
    right: 'Formula'


@dataclass(frozen=True)
class Box:
    body: 'Formula'


@dataclass(frozen=True)
class Dia:
    body: 'Formula'


Formula = Union[Atom, Bottom, And, Or, Imp, Box, Dia]

BOTTOM = Bottom()


def neg(formula):
    '''~A is sugar for A -> false'''
    return Imp(formula, BOTTOM)


class FormulaSyntaxError(ValueError):
    """Malformed formula text.

    Attributes:
        offset: byte offset (UTF-8) of the offending input position.
        expected: sorted list of tokens the parser would have accepted.
    """

    def __init__(self, message, offset, expected):
        super().__init__(message)
        self.offset = offset
        self.expected = expected


GRAMMAR = r'''
    ?start: form
    ?form: disj "->" form -> imp
         | disj
    ?disj: disj "|" conj -> or_
         | conj
    ?conj: conj "&" unary -> and_
         | unary
    ?unary: "~" unary -> neg
          | "[]" unary -> box
          | "<>" unary -> dia
          | primary
    ?primary: "false" -> bottom
            | IDENT -> atom
            | "(" form ")"
    IDENT: /[a-z][a-zA-Z0-9_]*/
    %import common.WS
    %ignore WS
'''


class FormulaTransformer(Transformer):
    '''Builds the formula AST bottom-up while the LALR parser runs'''

    def imp(self, items):
        return Imp(items[0], items[1])

    def or_(self, items):
        return Or(items[0], items[1])

    def and_(self, items):
        return And(items[0], items[1])

    def neg(self, items):
        return neg(items[0])

    def box(self, items):
        return Box(items[0])

    def dia(self, items):
        return Dia(items[0])

    def bottom(self, _items):
        return BOTTOM

    def atom(self, items):
        return Atom(str(items[0]))


_PARSER = Lark(GRAMMAR, parser='lalr', transformer=FormulaTransformer())


def _display_terminal(name):
    if name == '$END':
        return 'end of input'
    try:
        pattern = _PARSER.get_terminal(name).pattern
    except KeyError:
        return name
    if pattern.type == 'str':
        return pattern.value
    return name


def parse_formula(text):
    """
    Parse the ASCII concrete syntax into a formula.

    Precedence, tightest first: ~ [] <>, then &, then |, then -> (right
    associative). ~A is desugared to A -> false.

    Returns:
        Formula: the parsed AST.

    Raises:
        FormulaSyntaxError: on malformed input, carrying the byte offset and
        the set of expected tokens.
    """
    try:
        return _PARSER.parse(text)
    except UnexpectedInput as e:
        token = getattr(e, 'token', None)
        position = e.pos_in_stream
        if token is not None and token.type == '$END':
            position = len(text)
        if position is None or position < 0:
            position = len(text)
        offset = len(text[:position].encode('utf-8'))
        expected = getattr(e, 'expected', None) or getattr(e, 'allowed', None)
        expected = sorted({_display_terminal(n) for n in (expected or ())})
        raise FormulaSyntaxError(
            f"Syntax error at byte {offset}: expected one of {expected}",
            offset, expected) from e


_PRECEDENCE = {Imp: 1, Or: 2, And: 3, Box: 4, Dia: 4}


def _precedence(formula):
    if isinstance(formula, Imp) and formula.right == BOTTOM:
        return 4
    return _PRECEDENCE.get(type(formula), 5)


def _render(formula, level):
    text = _render_bare(formula)
    if _precedence(formula) < level:
        return f'({text})'
    return text


def _render_bare(formula):
    if isinstance(formula, Atom):
        return formula.name
    if isinstance(formula, Bottom):
        return 'false'
    if isinstance(formula, Box):
        return '[]' + _render(formula.body, 4)
    if isinstance(formula, Dia):
        return '<>' + _render(formula.body, 4)
    if isinstance(formula, Imp):
        if formula.right == BOTTOM:
            return '~' + _render(formula.left, 4)
        return f'{_render(formula.left, 2)} -> {_render(formula.right, 1)}'
    if isinstance(formula, Or):
        return f'{_render(formula.left, 2)} | {_render(formula.right, 3)}'
    if isinstance(formula, And):
        return f'{_render(formula.left, 3)} & {_render(formula.right, 4)}'
    raise TypeError(f"Not a formula: {formula!r}")


@lru_cache(maxsize=65536)
def render_formula(formula):
    '''Minimal-parenthesis ASCII rendering, inverse of parse_formula'''
    return _render(formula, 0)


def children(formula):
    if isinstance(formula, (And, Or, Imp)):
        return (formula.left, formula.right)
    if isinstance(formula, (Box, Dia)):
        return (formula.body,)
    return ()


def subformulas(formula) -> Iterator['Formula']:
    '''Pre-order walk over all subformula occurrences'''
    stack = [formula]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(children(current)))


def subformula_closure(formula) -> FrozenSet['Formula']:
    return frozenset(subformulas(formula))


def size(formula):
    '''Number of AST nodes'''
    return sum(1 for _ in subformulas(formula))


def depth(formula):
    kids = children(formula)
    if not kids:
        return 0
    return 1 + max(depth(kid) for kid in kids)


def atoms(formula):
    return frozenset(
        f.name for f in subformulas(formula) if isinstance(f, Atom))


# First-order shapes produced by the standard translation

@dataclass(frozen=True)
class Pred:
    pred: str
    label: str


@dataclass(frozen=True)
class RelAtom:
    left: str
    right: str


@dataclass(frozen=True)
class FOBottom:
    pass


@dataclass(frozen=True)
class FOAnd:
    left: 'FirstOrderFormula'
    right: 'FirstOrderFormula'


@dataclass(frozen=True)
class FOOr:
    left: 'FirstOrderFormula'
    right: 'FirstOrderFormula'


@dataclass(frozen=True)
class FOImp:
    left: 'FirstOrderFormula'
    right: 'FirstOrderFormula'


@dataclass(frozen=True)
class Forall:
    var: str
    body: 'FirstOrderFormula'


@dataclass(frozen=True)
class Exists:
    var: str
    body: 'FirstOrderFormula'


FirstOrderFormula = Union[
    Pred, RelAtom, FOBottom, FOAnd, FOOr, FOImp, Forall, Exists]


def standard_translation(label, formula):
    """
    Translate x:A into its first-order shape over R and unary predicates.

    Bound variables are y0, y1, ... numbered per call, skipping the free
    label.

    Returns:
        FirstOrderFormula: ST_x(A).
    """
    counter = [0]

    def fresh():
        while True:
            name = f'y{counter[0]}'
            counter[0] += 1
            if name != label:
                return name

    def translate(x, f):
        if isinstance(f, Atom):
            return Pred(f.name, x)
        if isinstance(f, Bottom):
            return FOBottom()
        if isinstance(f, And):
            return FOAnd(translate(x, f.left), translate(x, f.right))
        if isinstance(f, Or):
            return FOOr(translate(x, f.left), translate(x, f.right))
        if isinstance(f, Imp):
            return FOImp(translate(x, f.left), translate(x, f.right))
        y = fresh()
        if isinstance(f, Box):
            return Forall(y, FOImp(RelAtom(x, y), translate(y, f.body)))
        if isinstance(f, Dia):
            return Exists(y, FOAnd(RelAtom(x, y), translate(y, f.body)))
        raise TypeError(f"Not a formula: {f!r}")

    return translate(label, formula)


def render_first_order(fo):
    '''Fully parenthesised ASCII rendering of a first-order formula'''
    if isinstance(fo, Pred):
        return f'{fo.pred}({fo.label})'
    if isinstance(fo, RelAtom):
        return f'{fo.left}R{fo.right}'
    if isinstance(fo, FOBottom):
        return 'false'
    if isinstance(fo, FOAnd):
        return f'({render_first_order(fo.left)} & {render_first_order(fo.right)})'
    if isinstance(fo, FOOr):
        return f'({render_first_order(fo.left)} | {render_first_order(fo.right)})'
    if isinstance(fo, FOImp):
        return f'({render_first_order(fo.left)} -> {render_first_order(fo.right)})'
    if isinstance(fo, Forall):
        return f'forall {fo.var} {_wrap(fo.body)}'
    if isinstance(fo, Exists):
        return f'exists {fo.var} {_wrap(fo.body)}'
    raise TypeError(f"Not a first-order formula: {fo!r}")


def _wrap(fo):
    text = render_first_order(fo)
    if text.startswith('('):
        return text
    return f'({text})'
