"""Core domain types: Boolean formulas, rules, AFs, RAFs, CAFs.

All types are immutable after construction and hashable, so they can be
shared freely and used as dictionary keys (condition deduplication relies
on structural equality).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Union

from .errors import ValidationError

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
RESERVED = {"true", "false", "not", "arg", "att", "rc", "constraint", "mode"}


def check_name(name: str, what: str = "name") -> str:
    if not IDENT_RE.match(name):
        raise ValidationError(f"{what} {name!r} is not a valid identifier")
    if name in RESERVED:
        raise ValidationError(f"{what} {name!r} is a reserved word")
    return name


# ---------------------------------------------------------------------------
# Boolean formulas
# ---------------------------------------------------------------------------

class Formula:
    """Base class of formula tree nodes."""

    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return conj([self, other])

    def __or__(self, other: "Formula") -> "Formula":
        return disj([self, other])

    def __invert__(self) -> "Formula":
        return Not(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool

    def __repr__(self):
        return "TOP" if self.value else "BOT"


TOP = Const(True)
BOT = Const(False)


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple


@dataclass(frozen=True)
class Or(Formula):
    args: tuple


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


def conj(parts) -> Formula:
    parts = tuple(parts)
    if not parts:
        return TOP
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disj(parts) -> Formula:
    parts = tuple(parts)
    if not parts:
        return BOT
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


def iff(a: Formula, b: Formula) -> Formula:
    """a <-> b, spelled with the grammar's connectives."""
    return And((Implies(a, b), Implies(b, a)))


def formula_vars(f: Formula) -> frozenset:
    """Set of atom names occurring in f."""
    out = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.name)
        elif isinstance(node, Not):
            stack.append(node.arg)
        elif isinstance(node, (And, Or)):
            stack.extend(node.args)
        elif isinstance(node, Implies):
            stack.append(node.left)
            stack.append(node.right)
    return frozenset(out)


_PREC = {"imp": 0, "or": 1, "and": 2, "not": 3, "atom": 4}


def render_formula(f: Formula) -> str:
    def rec(node, parent_prec):
        if isinstance(node, Const):
            return "true" if node.value else "false"
        if isinstance(node, Var):
            return node.name
        if isinstance(node, Not):
            s = "~" + rec(node.arg, _PREC["not"])
            return s
        if isinstance(node, And):
            # children at and-level get parens so nesting round-trips exactly
            s = " & ".join(rec(a, _PREC["and"] + 1) for a in node.args)
            return f"({s})" if parent_prec > _PREC["and"] else s
        if isinstance(node, Or):
            s = " | ".join(rec(a, _PREC["or"] + 1) for a in node.args)
            return f"({s})" if parent_prec > _PREC["or"] else s
        if isinstance(node, Implies):
            # right associative, lowest precedence
            s = rec(node.left, _PREC["imp"] + 1) + " -> " + rec(node.right, _PREC["imp"])
            return f"({s})" if parent_prec > _PREC["imp"] else s
        raise TypeError(f"not a formula node: {node!r}")

    return rec(f, 0)


# ---------------------------------------------------------------------------
# Rules and programs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Rule:
    """Disjunctive rule  h1 | ... | hk :- b1, ..., not c1, ...

    An empty head denotes a constraint (falsum head).
    """

    head: frozenset = frozenset()
    pos: frozenset = frozenset()
    neg: frozenset = frozenset()

    @staticmethod
    def make(head=(), pos=(), neg=()) -> "Rule":
        return Rule(frozenset(head), frozenset(pos), frozenset(neg))

    def atoms(self) -> frozenset:
        return self.head | self.pos | self.neg

    def render(self) -> str:
        head = " | ".join(sorted(self.head))
        body = [*sorted(self.pos), *(f"not {a}" for a in sorted(self.neg))]
        if body:
            return f"{head} :- {', '.join(body)}".strip()
        return head if head else ":-"


def fact(atom: str) -> Rule:
    return Rule.make(head=[atom])


def constraint(pos=(), neg=()) -> Rule:
    return Rule.make(pos=pos, neg=neg)


Condition = Union[Formula, Rule]


def condition_vars(cond: Condition) -> frozenset:
    if isinstance(cond, Rule):
        return cond.atoms()
    return formula_vars(cond)


# ---------------------------------------------------------------------------
# Frameworks
# ---------------------------------------------------------------------------

class Semantics(Enum):
    CONF = "conf"
    ADM = "adm"
    COMP = "comp"
    PREF = "pref"
    STAB = "stab"
    SEMIST = "semiSt"
    STAG = "stag"

    def __str__(self):
        return self.value


#: the semantics families used by the decision problems
SEMANTICS_STAR = (Semantics.CONF, Semantics.ADM, Semantics.COMP, Semantics.STAB)
SEMANTICS_ALL = SEMANTICS_STAR + (Semantics.SEMIST, Semantics.STAG)


class RcClass(Enum):
    SIMPLE = "simple"
    PROPOSITIONAL = "propositional"
    TIGHT = "tight"
    NORMAL = "normal"
    DISJUNCTIVE = "disjunctive"

    def __str__(self):
        return self.value


CLASSICAL = "classical"
ASP = "asp"


@dataclass(frozen=True)
class AF:
    """Argumentation framework: ordered arguments plus directed attacks."""

    arguments: tuple
    attacks: frozenset

    @staticmethod
    def make(arguments, attacks=()) -> "AF":
        return AF(tuple(arguments), frozenset(tuple(p) for p in attacks))

    def validate(self) -> None:
        if not self.arguments:
            raise ValidationError("argument set must be non-empty")
        seen = set()
        for a in self.arguments:
            check_name(a, "argument")
            if a in seen:
                raise ValidationError(f"argument {a!r}: duplicate declaration")
            seen.add(a)
        for (a, b) in self.attacks:
            if a not in seen:
                raise ValidationError(f"attack ({a},{b}): attacker {a!r} undeclared")
            if b not in seen:
                raise ValidationError(f"attack ({a},{b}): target {b!r} undeclared")

    def attackers_of(self, a: str) -> frozenset:
        return frozenset(x for (x, y) in self.attacks if y == a)


@dataclass(frozen=True)
class RAF:
    """Rejection-augmented AF.

    ``rc`` maps arguments to a frozenset of conditions (formulas in
    classical mode, rules in asp mode).  Missing entries mean the empty
    condition, which is equivalent to true.
    """

    af: AF
    mode: str
    rc: Mapping[str, frozenset] = field(default_factory=dict)

    @staticmethod
    def make(af: AF, mode: str = CLASSICAL, rc=None) -> "RAF":
        cooked = {}
        for a, conds in (rc or {}).items():
            conds = frozenset(conds)
            if conds:
                cooked[a] = conds
        return RAF(af, mode, cooked)

    def conditions(self, a: str) -> frozenset:
        return self.rc.get(a, frozenset())

    def all_conditions(self) -> frozenset:
        out = set()
        for conds in self.rc.values():
            out |= conds
        return frozenset(out)

    def hosts(self, cond: Condition) -> tuple:
        """Arguments whose rejection condition contains ``cond``, in order."""
        return tuple(a for a in self.af.arguments if cond in self.conditions(a))

    def condition_atoms(self) -> frozenset:
        """var(C(A)): all atoms occurring in any rejection condition."""
        out = set()
        for cond in self.all_conditions():
            out |= condition_vars(cond)
        return frozenset(out)

    def auxiliary_atoms(self) -> frozenset:
        """Condition atoms that are not arguments."""
        return self.condition_atoms() - frozenset(self.af.arguments)


@dataclass(frozen=True)
class CAF:
    """AF with one global constraint over the argument names."""

    af: AF
    constraint: Formula


def validate_raf(raf: RAF) -> None:
    """Check every structural invariant; raises on the first violation."""
    raf.af.validate()
    if raf.mode not in (CLASSICAL, ASP):
        raise ValidationError(f"mode {raf.mode!r}: must be classical or asp")
    args = set(raf.af.arguments)
    for a, conds in raf.rc.items():
        if a not in args:
            raise ValidationError(f"rc({a}): argument undeclared")
        for cond in conds:
            if raf.mode == CLASSICAL and not isinstance(cond, Formula):
                raise ValidationError(f"rc({a}): rule condition in classical mode")
            if raf.mode == ASP and not isinstance(cond, Rule):
                raise ValidationError(f"rc({a}): formula condition in asp mode")
            for v in condition_vars(cond):
                check_name(v, f"rc({a}) atom")


def validate_caf(caf: CAF) -> None:
    caf.af.validate()
    extra = formula_vars(caf.constraint) - set(caf.af.arguments)
    if extra:
        raise ValidationError(
            f"constraint uses undeclared arguments: {', '.join(sorted(extra))}")


def classify_rc(raf: RAF) -> RcClass:
    """Most specific rejection-condition class of a RAF.

    Classical conditions over argument variables only are simple, any other
    classical conditions are propositional.  Program conditions are tight
    when the positive dependency digraph of the union program is acyclic
    (checked before head size), normal when every head is at most a
    singleton, and disjunctive otherwise.
    """
    from .asp import Program, is_tight  # local import to avoid a cycle

    if raf.mode == CLASSICAL:
        if raf.condition_atoms() <= set(raf.af.arguments):
            return RcClass.SIMPLE
        return RcClass.PROPOSITIONAL
    program = Program(frozenset(raf.all_conditions()))
    if is_tight(program):
        return RcClass.TIGHT
    if all(len(r.head) <= 1 for r in program.rules):
        return RcClass.NORMAL
    return RcClass.DISJUNCTIVE
