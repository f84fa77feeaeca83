"""Reader and writer for the instance format.

The format is line-oriented in spirit but statements are delimited by a
period, so several may share a line.  ``%`` starts a comment.

    #mode classical.            (default) | #mode asp.
    arg(a).  att(a,b).
    rc(a): ~p & (q -> r).       classical condition, one formula per line
    rc(a): x | y :- z, not w.   asp rule; ":- body" alone is a constraint
    constraint: a -> b.         CAF constraint (CAF files carry no rc lines)

Multiple rc statements for one argument accumulate into a set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import ParseError
from .model import (AF, ASP, CAF, CLASSICAL, Const, Formula, Implies, Not,
                    Or, And, RAF, Rule, Var, check_name, render_formula,
                    validate_caf, validate_raf)

_PUNCT = ((":-", "IMPL_BODY"), ("->", "ARROW"), ("(", "LP"), (")", "RP"),
          (",", "COMMA"), (".", "DOT"), (":", "COLON"), ("|", "PIPE"),
          ("&", "AMP"), ("~", "TILDE"))


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> List[Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "#":
            tokens.append(Token("HASH", "#", line, col))
            i += 1
            col += 1
            continue
        for lit, kind in _PUNCT:
            if text.startswith(lit, i):
                tokens.append(Token(kind, lit, line, col))
                i += len(lit)
                col += len(lit)
                break
        else:
            if ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                tokens.append(Token("NAME", text[i:j], line, col))
                col += j - i
                i = j
            else:
                raise ParseError(f"unexpected character {ch!r}", line, col)
    return tokens


def _statements(tokens: List[Token]) -> List[List[Token]]:
    out = []
    current: List[Token] = []
    for tok in tokens:
        if tok.kind == "DOT":
            if current:
                out.append(current)
                current = []
            continue
        current.append(tok)
    if current:
        t = current[0]
        raise ParseError("statement not terminated with '.'", t.line, t.column)
    return out


class _FormulaParser:
    """Recursive descent over one statement's token tail.

    Precedence (low to high): ``->`` (right assoc), ``|``, ``&``, ``~``.
    """

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    def _peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self, kind: str) -> Token:
        tok = self._peek()
        if tok is None or tok.kind != kind:
            where = tok or self.tokens[-1]
            raise ParseError(f"expected {kind}, got {where.text!r}",
                             where.line, where.column)
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        f = self._implication()
        tok = self._peek()
        if tok is not None:
            raise ParseError(f"unexpected token {tok.text!r} in formula",
                             tok.line, tok.column)
        return f

    def _implication(self) -> Formula:
        left = self._disjunction()
        tok = self._peek()
        if tok is not None and tok.kind == "ARROW":
            self.pos += 1
            return Implies(left, self._implication())
        return left

    def _disjunction(self) -> Formula:
        parts = [self._conjunction()]
        while (tok := self._peek()) is not None and tok.kind == "PIPE":
            self.pos += 1
            parts.append(self._conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def _conjunction(self) -> Formula:
        parts = [self._unary()]
        while (tok := self._peek()) is not None and tok.kind == "AMP":
            self.pos += 1
            parts.append(self._unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def _unary(self) -> Formula:
        tok = self._peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("", "", 0, 0)
            raise ParseError("formula ended unexpectedly", last.line, last.column)
        if tok.kind == "TILDE":
            self.pos += 1
            return Not(self._unary())
        if tok.kind == "LP":
            self.pos += 1
            f = self._implication()
            self._take("RP")
            return f
        if tok.kind == "NAME":
            self.pos += 1
            if tok.text == "true":
                return Const(True)
            if tok.text == "false":
                return Const(False)
            if tok.text == "not":
                raise ParseError("'not' is only valid in asp rule bodies",
                                 tok.line, tok.column)
            return Var(tok.text)
        raise ParseError(f"unexpected token {tok.text!r} in formula",
                         tok.line, tok.column)


def _parse_rule(tokens: List[Token]) -> Rule:
    head: List[str] = []
    pos_body: List[str] = []
    neg_body: List[str] = []
    i = 0
    n = len(tokens)

    def err(msg, tok):
        raise ParseError(msg, tok.line, tok.column)

    # head: atoms separated by '|'; empty when ':-' starts the rule
    while i < n and tokens[i].kind != "IMPL_BODY":
        if tokens[i].kind != "NAME" or tokens[i].text == "not":
            err(f"expected head atom, got {tokens[i].text!r}", tokens[i])
        head.append(tokens[i].text)
        i += 1
        if i < n and tokens[i].kind == "PIPE":
            i += 1
            if i >= n or tokens[i].kind == "IMPL_BODY":
                err("trailing '|' in rule head", tokens[i - 1])
        elif i < n and tokens[i].kind != "IMPL_BODY":
            err(f"expected '|' or ':-', got {tokens[i].text!r}", tokens[i])
    if i < n:  # body after ':-'; an empty body denotes the falsum constraint
        i += 1
        while i < n:
            tok = tokens[i]
            if tok.kind != "NAME":
                err(f"unexpected token {tok.text!r} in rule body", tok)
            if tok.text == "not":
                i += 1
                if i >= n or tokens[i].kind != "NAME" or tokens[i].text == "not":
                    err("expected atom after 'not'", tok)
                neg_body.append(tokens[i].text)
            else:
                pos_body.append(tok.text)
            i += 1
            if i < n:
                if tokens[i].kind != "COMMA":
                    err(f"expected ',', got {tokens[i].text!r}", tokens[i])
                i += 1
                if i >= n:
                    err("trailing ',' in rule body", tok)
    for a in head + pos_body + neg_body:
        check_name(a, "atom")
    return Rule.make(head, pos_body, neg_body)


@dataclass
class _Doc:
    mode: Optional[str] = None
    args: List[str] = None
    attacks: List[Tuple[str, str]] = None
    rc_raw: List[Tuple[str, List[Token]]] = None
    caf_constraints: List[Formula] = None

    def __post_init__(self):
        self.args = []
        self.attacks = []
        self.rc_raw = []
        self.caf_constraints = []


def _read_document(text: str) -> _Doc:
    doc = _Doc()
    for stmt in _statements(_tokenize(text)):
        head = stmt[0]
        if head.kind == "HASH":
            if (len(stmt) == 3 and stmt[1].kind == "NAME" and stmt[1].text == "mode"
                    and stmt[2].kind == "NAME" and stmt[2].text in (CLASSICAL, ASP)):
                if doc.mode is not None:
                    raise ParseError("duplicate #mode directive", head.line, head.column)
                doc.mode = stmt[2].text
                continue
            raise ParseError("malformed directive (expected '#mode classical.' "
                             "or '#mode asp.')", head.line, head.column)
        if head.kind != "NAME":
            raise ParseError(f"unexpected token {head.text!r}", head.line, head.column)
        if head.text == "arg":
            name = _paren_names(stmt, 1, head)
            doc.args.append(name)
        elif head.text == "att":
            src, dst = _paren_pair(stmt, 1, head)
            doc.attacks.append((src, dst))
        elif head.text == "rc":
            arg, rest = _rc_header(stmt, head)
            doc.rc_raw.append((arg, rest))
        elif head.text == "constraint":
            if len(stmt) < 2 or stmt[1].kind != "COLON":
                raise ParseError("expected ':' after 'constraint'",
                                 head.line, head.column)
            doc.caf_constraints.append(_FormulaParser(stmt[2:]).parse())
        else:
            raise ParseError(f"unknown statement {head.text!r}",
                             head.line, head.column)
    return doc


def _paren_names(stmt, at, head) -> str:
    ok = (len(stmt) == at + 3 and stmt[at].kind == "LP"
          and stmt[at + 1].kind == "NAME" and stmt[at + 2].kind == "RP")
    if not ok:
        raise ParseError(f"malformed {head.text}(...) statement",
                         head.line, head.column)
    return stmt[at + 1].text


def _paren_pair(stmt, at, head) -> Tuple[str, str]:
    ok = (len(stmt) == at + 5 and stmt[at].kind == "LP"
          and stmt[at + 1].kind == "NAME" and stmt[at + 2].kind == "COMMA"
          and stmt[at + 3].kind == "NAME" and stmt[at + 4].kind == "RP")
    if not ok:
        raise ParseError(f"malformed {head.text}(...) statement",
                         head.line, head.column)
    return stmt[at + 1].text, stmt[at + 3].text


def _rc_header(stmt, head):
    ok = (len(stmt) >= 5 and stmt[1].kind == "LP" and stmt[2].kind == "NAME"
          and stmt[3].kind == "RP" and stmt[4].kind == "COLON")
    if not ok:
        raise ParseError("malformed rc statement (expected 'rc(NAME): ...')",
                         head.line, head.column)
    if len(stmt) == 5:
        raise ParseError("empty rejection condition", head.line, head.column)
    return stmt[2].text, stmt[5:]


def _build_af(doc: _Doc) -> AF:
    declared = set()
    for a in doc.args:
        check_name(a, "argument")
        if a in declared:
            raise ParseError(f"argument {a!r}: duplicate declaration")
        declared.add(a)
    for (a, b) in doc.attacks:
        for x in (a, b):
            if x not in declared:
                raise ParseError(f"att({a},{b}): argument {x!r} undeclared")
    return AF.make(doc.args, doc.attacks)


def parse_raf(text: str) -> RAF:
    """Parse and validate a RAF document."""
    doc = _read_document(text)
    if doc.caf_constraints:
        raise ParseError("constraint statement is not allowed in a RAF document")
    af = _build_af(doc)
    mode = doc.mode or CLASSICAL
    declared = set(af.arguments)
    rc = {}
    for arg, rest in doc.rc_raw:
        if arg not in declared:
            raise ParseError(f"rc({arg}): argument undeclared")
        if mode == ASP:
            cond = _parse_rule(rest)
        else:
            cond = _FormulaParser(rest).parse()
        rc.setdefault(arg, set()).add(cond)
    raf = RAF.make(af, mode, rc)
    validate_raf(raf)
    return raf


def parse_caf(text: str) -> CAF:
    """Parse and validate a CAF document (one constraint line, no rc)."""
    doc = _read_document(text)
    if doc.rc_raw:
        raise ParseError("rc statements are not allowed in a CAF document")
    if doc.mode == ASP:
        raise ParseError("CAF documents are classical")
    if len(doc.caf_constraints) > 1:
        raise ParseError("multiple constraint statements")
    af = _build_af(doc)
    constraint = doc.caf_constraints[0] if doc.caf_constraints else Const(True)
    caf = CAF(af, constraint)
    validate_caf(caf)
    return caf


def render_raf(raf: RAF) -> str:
    """Canonical text for a RAF; parse(render(G)) reproduces G."""
    lines = [f"#mode {raf.mode}."]
    for a in raf.af.arguments:
        lines.append(f"arg({a}).")
    for (a, b) in sorted(raf.af.attacks):
        lines.append(f"att({a},{b}).")
    for a in raf.af.arguments:
        for cond in sorted(raf.conditions(a), key=_condition_key):
            if isinstance(cond, Rule):
                lines.append(f"rc({a}): {cond.render()}.")
            else:
                lines.append(f"rc({a}): {render_formula(cond)}.")
    return "\n".join(lines) + "\n"


def render_caf(caf: CAF) -> str:
    lines = ["#mode classical."]
    for a in caf.af.arguments:
        lines.append(f"arg({a}).")
    for (a, b) in sorted(caf.af.attacks):
        lines.append(f"att({a},{b}).")
    lines.append(f"constraint: {render_formula(caf.constraint)}.")
    return "\n".join(lines) + "\n"


def _condition_key(cond):
    if isinstance(cond, Rule):
        return (1, cond.render())
    return (0, render_formula(cond))
