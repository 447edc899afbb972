#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import itertools
import logging
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Optional, Tuple, Union

import networkx as nx
from more_itertools import powerset, unique_everseen

from formula import (
    And,
    Atom,
    Bottom,
    Box,
    Dia,
    Imp,
    Or,
    parse_formula,
    render_formula,
)
from global_variables import FRESH_STEM

logger = logging.getLogger(__name__)

LABEL_PATTERN = r'[a-z][a-z0-9_]*'
_REL_ATOM = re.compile(rf'^\s*({LABEL_PATTERN})R({LABEL_PATTERN})\s*$')
_REL_LIST = re.compile(
    rf'^\s*({LABEL_PATTERN}R{LABEL_PATTERN}\s*'
    rf'(,\s*{LABEL_PATTERN}R{LABEL_PATTERN}\s*)*)?$')


class SequentSyntaxError(ValueError):
    pass


class RuleError(ValueError):
    '''Malformed rule instance or a sequent outside its system'''


@dataclass(frozen=True)
class LabelledFormula:
    label: str
    formula: object

    def __str__(self):
        return f'{self.label}:{render_formula(self.formula)}'

    def rename(self, mapping):
        return LabelledFormula(
            mapping.get(self.label, self.label), self.formula)


@dataclass(frozen=True)
class DisjFormula:
    '''Ordered disjunction of at least two labelled formulas'''
    disjuncts: Tuple[LabelledFormula, ...]

    def __post_init__(self):
        object.__setattr__(self, 'disjuncts', tuple(self.disjuncts))
        if len(self.disjuncts) < 2:
            raise RuleError(
                "A disjunction needs two disjuncts; use a labelled formula")

    def __str__(self):
        return ' + '.join(str(d) for d in self.disjuncts)

    def rename(self, mapping):
        return DisjFormula(tuple(d.rename(mapping) for d in self.disjuncts))


Entry = Union[LabelledFormula, DisjFormula]


def disj(items):
    '''Wrap a nonempty sequence of labelled formulas, degree 1 unwrapped'''
    items = tuple(items)
    if not items:
        raise RuleError("Empty disjunction")
    if len(items) == 1:
        return items[0]
    return DisjFormula(items)


def disjuncts_of(entry):
    if isinstance(entry, DisjFormula):
        return entry.disjuncts
    return (entry,)


def degree(entry):
    return len(disjuncts_of(entry))


def entry_key(entry):
    return tuple(
        (d.label, render_formula(d.formula)) for d in disjuncts_of(entry))


def entry_labels(entry):
    return {d.label for d in disjuncts_of(entry)}


@dataclass(frozen=True)
class Sequent:
    """
    R, Gamma => Delta.

    rel is a set of (x, y) pairs for xRy; lhs and rhs are multisets kept as
    sorted tuples, so equality is multiset equality.
    """
    rel: FrozenSet[Tuple[str, str]] = frozenset()
    lhs: Tuple[Entry, ...] = ()
    rhs: Tuple[Entry, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'rel', frozenset(tuple(a) for a in self.rel))
        object.__setattr__(self, 'lhs', tuple(sorted(self.lhs, key=entry_key)))
        object.__setattr__(self, 'rhs', tuple(sorted(self.rhs, key=entry_key)))

    def rel_labels(self):
        return {label for atom in self.rel for label in atom}

    def labels(self):
        found = self.rel_labels()
        for entry in self.lhs + self.rhs:
            found |= entry_labels(entry)
        return found

    def rename(self, mapping):
        return Sequent(
            frozenset((mapping.get(a, a), mapping.get(b, b))
                      for a, b in self.rel),
            tuple(e.rename(mapping) for e in self.lhs),
            tuple(e.rename(mapping) for e in self.rhs))

    def with_rel(self, rel):
        return Sequent(frozenset(rel), self.lhs, self.rhs)

    def __str__(self):
        lhs = ', '.join(str(e) for e in self.lhs)
        rhs = ', '.join(str(e) for e in self.rhs)
        body = f'{lhs} => {rhs}'.strip()
        if self.rel:
            rel = ', '.join(f'{a}R{b}' for a, b in sorted(self.rel))
            return f'{rel} | {body}'
        return body


def _parse_entries(text):
    entries = []
    for chunk in text.split(','):
        if not chunk.strip():
            continue
        disjuncts = []
        for part in chunk.split('+'):
            label, sep, body = part.partition(':')
            label = label.strip()
            if not sep or not re.fullmatch(LABEL_PATTERN, label):
                raise SequentSyntaxError(
                    f"Expected 'label:formula', got {part.strip()!r}")
            disjuncts.append(LabelledFormula(label, parse_formula(body)))
        entries.append(disj(disjuncts))
    return tuple(entries)


def parse_sequent(text):
    """
    Parse "xRy, yRz | x:p, y:[]q => z:r".

    Relational atoms come before the first '|' when that prefix is a list of
    atoms; disjunctions of labelled formulas are written with '+'.

    Raises:
        SequentSyntaxError: malformed sequent text.
    """
    if text.count('=>') != 1:
        raise SequentSyntaxError(f"Expected exactly one '=>' in {text!r}")
    left, right = text.split('=>')
    rel = set()
    head, bar, rest = left.partition('|')
    if bar and _REL_LIST.match(head):
        for chunk in head.split(','):
            if chunk.strip():
                match = _REL_ATOM.match(chunk)
                rel.add((match.group(1), match.group(2)))
        left = rest
    try:
        return Sequent(frozenset(rel), _parse_entries(left),
                       _parse_entries(right))
    except ValueError as e:
        raise SequentSyntaxError(f"Invalid sequent {text!r}: {e}") from e


class SystemId(Enum):
    K = 'K'
    K4 = 'K4'
    IK = 'IK'
    IK4 = 'IK4'
    mIK4 = 'mIK4'
    dIK4 = 'dIK4'

    @property
    def single_succedent(self):
        return self in (SystemId.IK, SystemId.IK4, SystemId.dIK4)

    @property
    def transitive(self):
        return self not in (SystemId.K, SystemId.IK)

    @property
    def disjunctive(self):
        return self is SystemId.dIK4

    @property
    def classical(self):
        return self in (SystemId.K, SystemId.K4)


@dataclass(frozen=True)
class RuleInstance:
    """
    One application of a rule, read bottom-up.

    principal holds (side, entry) pairs by value; witness is the (x, y)
    relational atom used by boxL/diaR and their macros, or (x, y, z) for
    tr; atoms are the relational atoms removed by th or added by tr.
    """
    rule: str
    conclusion: Sequent
    premisses: Tuple[Sequent, ...] = ()
    principal: Tuple[Tuple[str, Entry], ...] = ()
    fresh: Optional[str] = None
    witness: Optional[Tuple[str, ...]] = None
    atoms: FrozenSet[Tuple[str, str]] = frozenset()
    choice: Optional[int] = None
    split: Optional[int] = None
    cut_formula: Optional[Entry] = None
    generalized: bool = False


BASIC_RULES = (
    'id', 'botL', 'cut', 'wL', 'wR', 'cL', 'cR', 'th', 'tr',
    'impL', 'impR', 'andL', 'andR', 'orL', 'orR',
    'boxL', 'boxR', 'diaL', 'diaR')
MACRO_LEFT = (
    'macro-impL', 'macro-andL', 'macro-orL', 'macro-boxL', 'macro-diaL')
MACRO_RIGHT = ('macro-andR', 'macro-orR', 'macro-diaR')
MACRO_CLASSICAL = ('macro-impR', 'macro-boxR')
DIS_RULES = ('dis-orL', 'dis-orR')
RULE_NAMES = BASIC_RULES + MACRO_LEFT + MACRO_RIGHT + MACRO_CLASSICAL \
    + DIS_RULES
MULTIPLICATIVE = ('cut', 'impL')


def rule_allowed(rule, system):
    if rule == 'tr':
        return system.transitive
    if rule in ('wR', 'cR') + MACRO_RIGHT:
        return not system.single_succedent
    if rule in MACRO_CLASSICAL:
        return system.classical
    if rule in DIS_RULES:
        return system.disjunctive
    return rule in RULE_NAMES


def fresh_label(used, stem=FRESH_STEM):
    '''First stem0, stem1, ... not in used'''
    for index in itertools.count():
        name = f'{stem}{index}'
        if name not in used:
            return name


def check_sequent(s, system):
    '''Violations of the system's shape invariants (empty when ok)'''
    problems = []
    if not system.disjunctive:
        if any(degree(e) > 1 for e in s.lhs + s.rhs):
            problems.append(f"{system.value} admits no disjunctions: {s}")
    if system.single_succedent and len(s.rhs) != 1:
        problems.append(
            f"{system.value} needs exactly one formula on the right: {s}")
    return problems


def _ms(entries):
    return Counter(entries)


def _minus(entries, entry):
    '''Remove one occurrence'''
    items = list(entries)
    items.remove(entry)
    return tuple(items)


def _replace(entries, old, new):
    return _minus(entries, old) + tuple(new)


def _lf(label, formula):
    return LabelledFormula(label, formula)


def _single_principal(r, side):
    if len(r.principal) != 1 or r.principal[0][0] != side:
        return None
    entry = r.principal[0][1]
    entries = r.conclusion.lhs if side == 'L' else r.conclusion.rhs
    if entry not in entries:
        return None
    return entry


def _expected(r, system):
    """
    Premisses dictated by the schema of r from its conclusion and
    parameters, or an error string. Multiplicative rules return None and
    are checked separately.
    """
    c = r.conclusion
    rule = r.rule
    single = system.single_succedent
    if rule in MULTIPLICATIVE:
        return None
    if rule == 'id':
        return _check_id(r, system)
    if rule == 'botL':
        entry = _single_principal(r, 'L')
        if entry is None or degree(entry) != 1 \
                or not isinstance(entry.formula, Bottom):
            return "botL needs a principal x:false on the left"
        return []
    if rule in ('wL', 'wR', 'cL', 'cR'):
        side = rule[-1]
        entry = _single_principal(r, side)
        if entry is None:
            return f"{rule} principal missing from the conclusion"
        if rule == 'wL':
            return [Sequent(c.rel, _minus(c.lhs, entry), c.rhs)]
        if rule == 'wR':
            return [Sequent(c.rel, c.lhs, _minus(c.rhs, entry))]
        if rule == 'cL':
            return [Sequent(c.rel, c.lhs + (entry,), c.rhs)]
        return [Sequent(c.rel, c.lhs, c.rhs + (entry,))]
    if rule == 'th':
        if not r.atoms or not set(r.atoms) <= c.rel:
            return "th must remove relational atoms of the conclusion"
        return [c.with_rel(c.rel - set(r.atoms))]
    if rule == 'tr':
        if not r.witness or len(r.witness) != 3:
            return "tr needs a witness x, y, z"
        x, y, z = r.witness
        if (x, y) not in c.rel or (y, z) not in c.rel:
            return f"tr needs {x}R{y} and {y}R{z}"
        if (x, z) in c.rel:
            return f"tr adds {x}R{z} which is already present"
        return [c.with_rel(c.rel | {(x, z)})]
    if rule in DIS_RULES:
        return _expected_dis(r)
    side = 'L' if rule.endswith('L') else 'R'
    entry = _single_principal(r, side)
    if entry is None or degree(entry) != 1:
        return f"{rule} needs a labelled principal formula on the {side}"
    x, f = entry.label, entry.formula
    if side == 'R' and not system.classical \
            and rule in ('impR', 'boxR') and len(c.rhs) != 1:
        return f"{rule} needs exactly one formula on the right"
    retain = rule.startswith('macro-')
    base = rule[len('macro-'):] if retain else rule
    keep = (entry,) if retain else ()
    if base in ('boxR', 'diaL'):
        y = r.fresh
        if y is None or y in c.labels():
            return f"{rule}: {y} fresh required"
    if base in ('boxL', 'diaR'):
        if not r.witness or len(r.witness) != 2 or r.witness[0] != x \
                or tuple(r.witness) not in c.rel:
            return f"{rule} needs a relational atom {x}Ry"
        y = r.witness[1]
    lhs_rest = _minus(c.lhs, entry) + keep if side == 'L' else c.lhs
    rhs_rest = _minus(c.rhs, entry) + keep if side == 'R' else c.rhs
    if base == 'andL' and isinstance(f, And):
        if retain:
            return [Sequent(c.rel, lhs_rest + (_lf(x, f.left),
                                               _lf(x, f.right)), c.rhs)]
        if r.choice not in (0, 1):
            return "andL needs choice 0 or 1"
        part = f.left if r.choice == 0 else f.right
        return [Sequent(c.rel, lhs_rest + (_lf(x, part),), c.rhs)]
    if base == 'orL' and isinstance(f, Or):
        return [Sequent(c.rel, lhs_rest + (_lf(x, f.left),), c.rhs),
                Sequent(c.rel, lhs_rest + (_lf(x, f.right),), c.rhs)]
    if base == 'impL' and isinstance(f, Imp) and retain:
        left_rhs = (_lf(x, f.left),) if single \
            else c.rhs + (_lf(x, f.left),)
        return [Sequent(c.rel, lhs_rest, left_rhs),
                Sequent(c.rel, lhs_rest + (_lf(x, f.right),), c.rhs)]
    if base == 'boxL' and isinstance(f, Box):
        return [Sequent(c.rel, lhs_rest + (_lf(y, f.body),), c.rhs)]
    if base == 'diaL' and isinstance(f, Dia):
        return [Sequent(c.rel | {(x, y)}, lhs_rest + (_lf(y, f.body),),
                        c.rhs)]
    if base == 'andR' and isinstance(f, And):
        return [Sequent(c.rel, c.lhs, rhs_rest + (_lf(x, f.left),)),
                Sequent(c.rel, c.lhs, rhs_rest + (_lf(x, f.right),))]
    if base == 'orR' and isinstance(f, Or):
        if retain:
            return [Sequent(c.rel, c.lhs, rhs_rest + (_lf(x, f.left),
                                                      _lf(x, f.right)))]
        if r.choice not in (0, 1):
            return "orR needs choice 0 or 1"
        part = f.left if r.choice == 0 else f.right
        return [Sequent(c.rel, c.lhs, rhs_rest + (_lf(x, part),))]
    if base == 'impR' and isinstance(f, Imp):
        return [Sequent(c.rel, c.lhs + (_lf(x, f.left),),
                        rhs_rest + (_lf(x, f.right),))]
    if base == 'boxR' and isinstance(f, Box):
        return [Sequent(c.rel | {(x, y)}, c.lhs,
                        rhs_rest + (_lf(y, f.body),))]
    if base == 'diaR' and isinstance(f, Dia):
        return [Sequent(c.rel, c.lhs, rhs_rest + (_lf(y, f.body),))]
    return f"{rule} does not match principal {entry}"


def _check_id(r, system):
    c = r.conclusion
    atoms_left = [e for side, e in r.principal if side == 'L']
    atoms_right = [e for side, e in r.principal if side == 'R']
    if len(atoms_left) != 1 or len(atoms_right) != 1:
        return "id needs one principal on each side"
    left, right = atoms_left[0], atoms_right[0]
    if degree(left) != 1 or not isinstance(left.formula, Atom):
        return "id is restricted to atomic formulas"
    if left not in c.lhs or right not in c.rhs:
        return "id principal missing from the conclusion"
    if r.generalized:
        if left not in disjuncts_of(right):
            return f"generalized id needs {left} on the right"
        return []
    if c.lhs != (left,) or c.rhs != (left,) or right != left:
        return "strict id is exactly x:p => x:p"
    return []


def _expected_dis(r):
    c = r.conclusion
    side = 'L' if r.rule == 'dis-orL' else 'R'
    entry = _single_principal(r, side)
    if entry is None or degree(entry) < 2:
        return f"{r.rule} needs a disjunction principal on the {side}"
    parts = disjuncts_of(entry)
    k = r.split
    if k is None or not 1 <= k < len(parts):
        return f"{r.rule} split point out of range"
    head, tail = disj(parts[:k]), disj(parts[k:])
    if side == 'L':
        rest = _minus(c.lhs, entry)
        return [Sequent(c.rel, rest + (head,), c.rhs),
                Sequent(c.rel, rest + (tail,), c.rhs)]
    if r.choice not in (0, 1):
        return "dis-orR needs choice 0 or 1"
    rest = _minus(c.rhs, entry)
    return [Sequent(c.rel, c.lhs, rest + ((head, tail)[r.choice],))]


def _check_multiplicative(r, system):
    c = r.conclusion
    if len(r.premisses) != 2:
        return [f"{r.rule} has two premisses"]
    left, right = r.premisses
    if left.rel != c.rel or right.rel != c.rel:
        return [f"{r.rule} premisses keep the relational context"]
    if r.rule == 'cut':
        chi = r.cut_formula
        if chi is None:
            return ["cut needs a cut formula"]
        conclusion_lhs = _ms(c.lhs)
        given, taken = chi, chi
    else:
        entry = _single_principal(r, 'L')
        if entry is None or degree(entry) != 1 \
                or not isinstance(entry.formula, Imp):
            return ["impL needs a principal x:A -> B on the left"]
        x, f = entry.label, entry.formula
        conclusion_lhs = _ms(c.lhs) - _ms([entry])
        given, taken = _lf(x, f.left), _lf(x, f.right)
    problems = []
    if _ms(right.lhs)[taken] < 1 or _ms(left.rhs)[given] < 1:
        return [f"{r.rule} premisses miss {given}"]
    if _ms(left.lhs) + (_ms(right.lhs) - _ms([taken])) != conclusion_lhs:
        problems.append(f"{r.rule} left contexts do not add up")
    if system.single_succedent:
        if left.rhs != (given,) or right.rhs != c.rhs:
            problems.append(f"{r.rule} right contexts do not match")
    elif (_ms(left.rhs) - _ms([given])) + _ms(right.rhs) != _ms(c.rhs):
        problems.append(f"{r.rule} right contexts do not add up")
    return problems


def rule_violations(r, system):
    """
    Check r against the schema of its rule in system.

    Returns:
        list: human readable violations, empty when r is a valid instance.
    """
    if not rule_allowed(r.rule, system):
        return [f"rule {r.rule} is not available in {system.value}"]
    problems = [f"conclusion: {p}" for p in check_sequent(r.conclusion,
                                                          system)]
    if r.rule in MULTIPLICATIVE:
        problems += _check_multiplicative(r, system)
    else:
        expected = _expected(r, system)
        if isinstance(expected, str):
            return problems + [expected]
        if list(r.premisses) != expected:
            problems.append(
                f"{r.rule} premisses differ from the schema: got "
                f"{[str(p) for p in r.premisses]}, expected "
                f"{[str(p) for p in expected]}")
    for premiss in r.premisses:
        problems += [f"premiss: {p}" for p in check_sequent(premiss, system)]
    return problems


def make_instance(rule, conclusion, system, **params):
    '''Build an instance with premisses generated from the schema'''
    schema = RuleInstance(rule, conclusion, **params)
    expected = _expected(schema, system)
    if isinstance(expected, str):
        raise RuleError(expected)
    return RuleInstance(rule, conclusion, tuple(expected or ()), **params)


def apply_rule(r, system=None):
    """
    Premisses of a rule instance.

    Raises:
        RuleError: when system is given and r is not a valid instance.
    """
    if system is not None:
        problems = rule_violations(r, system)
        if problems:
            raise RuleError('; '.join(problems))
    return list(r.premisses)


def _left_formulas(s):
    return [e for e in unique_everseen(s.lhs) if degree(e) == 1]


def _right_formulas(s):
    return [e for e in unique_everseen(s.rhs) if degree(e) == 1]


def _successors(s, x):
    return sorted(b for a, b in s.rel if a == x)


def _multiplicative_splits(context):
    '''All ways to split a multiset in two, each split listed once'''
    items = list(context)
    indices = range(len(items))
    chosen = unique_everseen(
        powerset(indices),
        key=lambda picked: tuple(sorted(entry_key(items[i]) for i in picked)))
    for picked in chosen:
        left = tuple(items[i] for i in picked)
        right = tuple(items[i] for i in indices if i not in picked)
        yield left, right


def applicable_rules(s, system, cut_candidates=()):
    """
    Enumerate the rule instances of system whose conclusion is s.

    Order is fixed: rule name order of BASIC_RULES then the dis rules, then
    principal position, then premiss choices. Cut instances only come from
    cut_candidates.

    Raises:
        RuleError: s violates the invariants of system.
    """
    problems = check_sequent(s, system)
    if problems:
        raise RuleError('; '.join(problems))
    found = []
    classical = system.classical

    def add(rule, **params):
        if not rule_allowed(rule, system):
            return
        instance = make_instance(rule, s, system, **params)
        if not rule_violations(instance, system):
            found.append(instance)

    left, right = _left_formulas(s), _right_formulas(s)
    labels = s.labels()
    for e in left:
        if isinstance(e.formula, Atom):
            for r_entry in unique_everseen(s.rhs):
                if e in disjuncts_of(r_entry):
                    strict = s.lhs == (e,) and s.rhs == (e,)
                    add('id', principal=(('L', e), ('R', r_entry)),
                        generalized=not strict)
    for e in left:
        if isinstance(e.formula, Bottom):
            add('botL', principal=(('L', e),))
    for chi in cut_candidates:
        found.extend(_cut_instances(s, chi, system))
    for rule, entries in (('wL', unique_everseen(s.lhs)),
                          ('wR', unique_everseen(s.rhs)),
                          ('cL', unique_everseen(s.lhs)),
                          ('cR', unique_everseen(s.rhs))):
        for e in entries:
            add(rule, principal=((rule[-1], e),))
    for atom in sorted(s.rel):
        add('th', atoms=frozenset({atom}))
    for (x, y), (y2, z) in itertools.product(sorted(s.rel), repeat=2):
        if y == y2 and (x, z) not in s.rel:
            add('tr', witness=(x, y, z), atoms=frozenset({(x, z)}))
    for e in left:
        if isinstance(e.formula, Imp):
            found.extend(_impl_instances(s, e, system))
    for e in right:
        if isinstance(e.formula, Imp) and (classical or len(s.rhs) == 1):
            add('impR', principal=(('R', e),))
    for e in left:
        if isinstance(e.formula, And):
            for choice in (0, 1):
                add('andL', principal=(('L', e),), choice=choice)
    for e in right:
        if isinstance(e.formula, And):
            add('andR', principal=(('R', e),))
    for e in left:
        if isinstance(e.formula, Or):
            add('orL', principal=(('L', e),))
    for e in right:
        if isinstance(e.formula, Or):
            for choice in (0, 1):
                add('orR', principal=(('R', e),), choice=choice)
    for e in left:
        if isinstance(e.formula, Box):
            for y in _successors(s, e.label):
                add('boxL', principal=(('L', e),), witness=(e.label, y))
    for e in right:
        if isinstance(e.formula, Box) and (classical or len(s.rhs) == 1):
            add('boxR', principal=(('R', e),), fresh=fresh_label(labels))
    for e in left:
        if isinstance(e.formula, Dia):
            add('diaL', principal=(('L', e),), fresh=fresh_label(labels))
    for e in right:
        if isinstance(e.formula, Dia):
            for y in _successors(s, e.label):
                add('diaR', principal=(('R', e),), witness=(e.label, y))
    if system.disjunctive:
        for e in unique_everseen(s.lhs):
            for k in range(1, degree(e)):
                add('dis-orL', principal=(('L', e),), split=k)
        for e in unique_everseen(s.rhs):
            for k in range(1, degree(e)):
                for choice in (0, 1):
                    add('dis-orR', principal=(('R', e),), split=k,
                        choice=choice)
    return found


def _impl_instances(s, e, system):
    x, f = e.label, e.formula
    given, taken = _lf(x, f.left), _lf(x, f.right)
    rest = _minus(s.lhs, e)
    instances = []
    if system.single_succedent:
        rhs_splits = [((), s.rhs)]
    else:
        rhs_splits = list(_multiplicative_splits(s.rhs))
    for lhs_left, lhs_right in _multiplicative_splits(rest):
        for rhs_left, rhs_right in rhs_splits:
            left = Sequent(s.rel, lhs_left, rhs_left + (given,))
            right = Sequent(s.rel, lhs_right + (taken,), rhs_right)
            instance = RuleInstance('impL', s, (left, right),
                                    principal=(('L', e),))
            if not rule_violations(instance, system):
                instances.append(instance)
    return instances


def _cut_instances(s, chi, system):
    instances = []
    if system.single_succedent:
        rhs_splits = [((), s.rhs)]
    else:
        rhs_splits = list(_multiplicative_splits(s.rhs))
    for lhs_left, lhs_right in _multiplicative_splits(s.lhs):
        for rhs_left, rhs_right in rhs_splits:
            left = Sequent(s.rel, lhs_left, rhs_left + (chi,))
            right = Sequent(s.rel, lhs_right + (chi,), rhs_right)
            instance = RuleInstance('cut', s, (left, right), cut_formula=chi)
            if not rule_violations(instance, system):
                instances.append(instance)
    return instances


def transitively_closed(rel):
    return all((x, z) in rel for (x, y) in rel for (y2, z) in rel if y == y2)


def saturation_violations(s, system=SystemId.mIK4):
    """
    Positions of s that block saturation, up to multiplicity.

    Returns:
        list: ('L' | 'R', entry) pairs, plus ('rel', (x, y, z)) for missing
        transitive atoms.
    """
    lhs, rhs = set(s.lhs), set(s.rhs)
    violations = []
    for e in _left_formulas(s):
        x, f = e.label, e.formula
        if isinstance(f, And):
            ok = _lf(x, f.left) in lhs and _lf(x, f.right) in lhs
        elif isinstance(f, Or):
            ok = _lf(x, f.left) in lhs or _lf(x, f.right) in lhs
        elif isinstance(f, Imp):
            ok = _lf(x, f.left) in rhs or _lf(x, f.right) in lhs
        elif isinstance(f, Box):
            ok = all(_lf(y, f.body) in lhs for y in _successors(s, x))
        elif isinstance(f, Dia):
            ok = any(_lf(y, f.body) in lhs for y in _successors(s, x))
        else:
            ok = True
        if not ok:
            violations.append(('L', e))
    for e in _right_formulas(s):
        x, f = e.label, e.formula
        if isinstance(f, And):
            ok = _lf(x, f.left) in rhs or _lf(x, f.right) in rhs
        elif isinstance(f, Or):
            ok = _lf(x, f.left) in rhs and _lf(x, f.right) in rhs
        elif isinstance(f, Dia):
            ok = all(_lf(y, f.body) in rhs for y in _successors(s, x))
        elif isinstance(f, Imp) and system.classical:
            ok = _lf(x, f.left) in lhs and _lf(x, f.right) in rhs
        elif isinstance(f, Box) and system.classical:
            ok = any(_lf(y, f.body) in rhs for y in _successors(s, x))
        else:
            ok = True
        if not ok:
            violations.append(('R', e))
    if system.transitive:
        for (x, y), (y2, z) in itertools.product(sorted(s.rel), repeat=2):
            if y == y2 and (x, z) not in s.rel:
                violations.append(('rel', (x, y, z)))
    return violations


def is_saturated(s, system=SystemId.mIK4):
    '''(saturated?, unsaturated positions)'''
    violations = saturation_violations(s, system)
    return not violations, violations


def macro_rules(s, system=SystemId.mIK4):
    """
    Principal-retaining instances for every unsaturated position of s.

    Left macros are derivable in every system; right macros need several
    formulas on the right, and macro-impR / macro-boxR are classical only.
    """
    labels = s.labels()
    found = []
    for side, e in saturation_violations(s, system):
        if side == 'rel':
            continue
        f = e.formula
        rule = None
        params = {'principal': ((side, e),)}
        if side == 'L':
            if isinstance(f, Box):
                for y in _successors(s, e.label):
                    if _lf(y, f.body) not in s.lhs:
                        found.append(make_instance(
                            'macro-boxL', s, system, witness=(e.label, y),
                            **params))
                continue
            rule = {And: 'macro-andL', Or: 'macro-orL', Imp: 'macro-impL',
                    Dia: 'macro-diaL'}[type(f)]
            if rule == 'macro-diaL':
                params['fresh'] = fresh_label(labels)
        else:
            if isinstance(f, Dia):
                if not rule_allowed('macro-diaR', system):
                    continue
                for y in _successors(s, e.label):
                    if _lf(y, f.body) not in s.rhs:
                        found.append(make_instance(
                            'macro-diaR', s, system, witness=(e.label, y),
                            **params))
                continue
            rule = {And: 'macro-andR', Or: 'macro-orR', Imp: 'macro-impR',
                    Box: 'macro-boxR'}[type(f)]
            if rule == 'macro-boxR':
                params['fresh'] = fresh_label(labels)
        if rule_allowed(rule, system):
            found.append(make_instance(rule, s, system, **params))
    return found


def is_quasi_tree_like(s):
    """
    R = {} and every label is the right-hand label, or some tree R0 has
    R0 <= R <= closure(R0) and covers every label of s.
    """
    labels = s.labels()
    if not s.rel:
        rhs_labels = set()
        for e in s.rhs:
            rhs_labels |= entry_labels(e)
        if not rhs_labels:
            return len(labels) <= 1
        return len(rhs_labels) == 1 and labels <= rhs_labels
    nodes = s.rel_labels()
    if not labels <= nodes:
        return False
    graph = nx.DiGraph(list(s.rel))
    if not nx.is_directed_acyclic_graph(graph):
        return False
    roots = [v for v in sorted(graph) if graph.in_degree(v) == 0]
    if len(roots) != 1:
        return False
    others = [v for v in sorted(graph) if v != roots[0]]
    choices = [sorted(graph.predecessors(v)) for v in others]
    for parents in itertools.product(*choices):
        tree = nx.DiGraph(list(zip(parents, others)))
        tree.add_node(roots[0])
        if not nx.is_arborescence(tree):
            continue
        closure = nx.transitive_closure_dag(tree)
        if all(closure.has_edge(a, b) for a, b in s.rel):
            return True
    return False


def _profile(entries):
    '''label -> multiset of formulas attached to it, disjunctions by index'''
    profile = {}
    for entry in entries:
        for index, d in enumerate(disjuncts_of(entry)):
            profile.setdefault(d.label, Counter())[
                (degree(entry), index, d.formula)] += 1
    return profile


def _counter_le(small, big):
    return all(big[key] >= count for key, count in small.items())


def iter_renamings(src, dst, mode='equal', seed=None, tick=None):
    """
    Injective label renamings sigma with src.rename(sigma) related to dst.

    Modes:
        equal: the renamed sequent equals dst.
        grown: lhs and rhs equal, relational context included in dst's.
        subsume: lhs, rhs (as multisets) and relational context included.

    Args:
        seed: optional partial mapping sigma must extend.
        tick: optional callable run once per label assignment tried; the
            enumeration stops as soon as it returns True.

    Yields:
        dict: each renaming, in backtracking order.
    """
    src_labels = sorted(src.labels())
    dst_labels = sorted(dst.labels())
    if mode == 'equal' and len(src_labels) != len(dst_labels):
        return
    if len(src_labels) > len(dst_labels):
        return
    if mode in ('equal', 'grown') and (
            len(src.lhs) != len(dst.lhs) or len(src.rhs) != len(dst.rhs)):
        return
    src_left, dst_left = _profile(src.lhs), _profile(dst.lhs)
    src_right, dst_right = _profile(src.rhs), _profile(dst.rhs)
    empty = Counter()

    def compatible(a, b):
        for src_prof, dst_prof in ((src_left, dst_left),
                                   (src_right, dst_right)):
            small, big = src_prof.get(a, empty), dst_prof.get(b, empty)
            if mode == 'subsume':
                if not _counter_le(small, big):
                    return False
            elif small != big:
                return False
        return True

    seed = dict(seed or {})
    if any(a in src.labels() and not compatible(a, b)
           for a, b in seed.items()):
        return
    candidates = {
        a: [b for b in dst_labels if compatible(a, b)] for a in src_labels}
    order = sorted(
        (a for a in src_labels if a not in seed),
        key=lambda a: (len(candidates[a]), a))
    out_edges = {}
    for a, b in src.rel:
        out_edges.setdefault(a, []).append((a, b))
        out_edges.setdefault(b, []).append((a, b))

    def consistent(sigma, label):
        for a, b in out_edges.get(label, ()):
            if a in sigma and b in sigma and (sigma[a], sigma[b]) not in dst.rel:
                return False
        return True

    def finished(sigma):
        renamed = src.rename(sigma)
        if mode == 'equal':
            return renamed == dst
        if mode == 'grown':
            return renamed.lhs == dst.lhs and renamed.rhs == dst.rhs \
                and renamed.rel <= dst.rel
        return renamed.rel <= dst.rel \
            and _counter_le(Counter(renamed.lhs), Counter(dst.lhs)) \
            and _counter_le(Counter(renamed.rhs), Counter(dst.rhs))

    sigma = {a: b for a, b in seed.items() if a in src_labels}
    if len(set(sigma.values())) != len(sigma):
        return
    if not all(consistent(sigma, a) for a in sigma):
        return

    spent = []

    def extend(index, used):
        if spent:
            return
        if index == len(order):
            if finished(sigma):
                yield dict(sigma)
            return
        a = order[index]
        for b in candidates[a]:
            if b in used:
                continue
            if tick is not None and tick():
                spent.append(a)
                return
            sigma[a] = b
            if consistent(sigma, a):
                yield from extend(index + 1, used | {b})
            del sigma[a]

    yield from extend(0, frozenset(sigma.values()))


def find_renaming(src, dst, mode='equal', seed=None):
    '''First renaming found by iter_renamings, or None'''
    return next(iter_renamings(src, dst, mode, seed), None)


def parse_entry(text):
    '''One labelled formula or disjunction, e.g. "x:p + y:q"'''
    entries = _parse_entries(text)
    if len(entries) != 1:
        raise SequentSyntaxError(f"Expected a single entry, got {text!r}")
    return entries[0]
