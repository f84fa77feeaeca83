"""Classical propositional reasoning over formula trees.

Literals are pairs ``(atom, positive)``; a clause is a frozenset of
literals.  ``classical_consistent`` is the workhorse behind rejection
checks: it constant-folds the fixed assignment into the formulas, peels
off acyclic biconditional definitions, and brute-forces the remaining
free variables.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceeded, RafkitError
from .model import (And, BOT, Const, Formula, Implies, Not, Or, TOP, Var,
                    formula_vars)

Lit = Tuple[str, bool]
Clause = frozenset


def evaluate(f: Formula, assignment: Mapping[str, bool]) -> bool:
    """Evaluate under a total assignment of var(f)."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Var):
        try:
            return assignment[f.name]
        except KeyError:
            raise RafkitError(f"unassigned variable {f.name!r}") from None
    if isinstance(f, Not):
        return not evaluate(f.arg, assignment)
    if isinstance(f, And):
        return all(evaluate(a, assignment) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(a, assignment) for a in f.args)
    if isinstance(f, Implies):
        return (not evaluate(f.left, assignment)) or evaluate(f.right, assignment)
    raise TypeError(f"not a formula: {f!r}")


def partial_eval(f: Formula, assignment: Mapping[str, bool]) -> Formula:
    """Constant-fold a partial assignment into the formula."""
    if isinstance(f, Const):
        return f
    if isinstance(f, Var):
        if f.name in assignment:
            return TOP if assignment[f.name] else BOT
        return f
    if isinstance(f, Not):
        sub = partial_eval(f.arg, assignment)
        if isinstance(sub, Const):
            return BOT if sub.value else TOP
        return Not(sub)
    if isinstance(f, And):
        parts = []
        for a in f.args:
            sub = partial_eval(a, assignment)
            if sub == BOT:
                return BOT
            if sub != TOP:
                parts.append(sub)
        if not parts:
            return TOP
        return parts[0] if len(parts) == 1 else And(tuple(parts))
    if isinstance(f, Or):
        parts = []
        for a in f.args:
            sub = partial_eval(a, assignment)
            if sub == TOP:
                return TOP
            if sub != BOT:
                parts.append(sub)
        if not parts:
            return BOT
        return parts[0] if len(parts) == 1 else Or(tuple(parts))
    if isinstance(f, Implies):
        left = partial_eval(f.left, assignment)
        right = partial_eval(f.right, assignment)
        if left == BOT or right == TOP:
            return TOP
        if left == TOP:
            return right
        if right == BOT:
            return Not(left)
        return Implies(left, right)
    raise TypeError(f"not a formula: {f!r}")


def _conjuncts(f: Formula) -> List[Formula]:
    if isinstance(f, And):
        if _as_definition(f) is not None:  # keep biconditionals whole
            return [f]
        out = []
        for a in f.args:
            out.extend(_conjuncts(a))
        return out
    return [f]


def _as_definition(f: Formula) -> Optional[Tuple[str, Formula]]:
    """Recognize  (v -> phi) & (phi -> v)  as a definition of v."""
    if not (isinstance(f, And) and len(f.args) == 2):
        return None
    a, b = f.args
    if not (isinstance(a, Implies) and isinstance(b, Implies)):
        return None
    for fwd, bwd in ((a, b), (b, a)):
        if (isinstance(fwd.left, Var) and fwd.left == bwd.right
                and fwd.right == bwd.left):
            v = fwd.left.name
            if v not in formula_vars(fwd.right):
                return v, fwd.right
    return None


def classical_consistent(formulas: Iterable[Formula],
                         fixed: Mapping[str, bool],
                         caps: Caps = DEFAULT_CAPS) -> bool:
    """True iff some total extension of ``fixed`` satisfies every formula.

    Biconditional conjuncts defining an otherwise-free variable are
    evaluated functionally instead of branched over, which keeps the
    brute-force exponent down to the genuinely free variables.
    """
    residual = []
    for f in formulas:
        g = partial_eval(f, fixed)
        if g == BOT:
            return False
        if g == TOP:
            continue
        residual.extend(c for c in _conjuncts(g) if c != TOP)
    if any(c == BOT for c in residual):
        return False
    if not residual:
        return True

    defs: Dict[str, Formula] = {}
    constraints: List[Formula] = []
    for c in residual:
        d = _as_definition(c)
        if d is not None and d[0] not in defs:
            defs[d[0]] = d[1]
        else:
            constraints.append(c)

    # order definitions so each only depends on fixed/free/earlier vars;
    # drop cyclic ones back into the constraint list
    ordered: List[Tuple[str, Formula]] = []
    placed = set()
    pending = dict(defs)
    while pending:
        progress = False
        for v in sorted(pending):
            body_vars = formula_vars(pending[v]) & set(pending)
            if not body_vars - placed:
                ordered.append((v, pending[v]))
                placed.add(v)
                del pending[v]
                progress = True
        if not progress:
            break
    for v in sorted(pending):
        constraints.append(And((Implies(Var(v), pending[v]),
                                Implies(pending[v], Var(v)))))

    free = set()
    for c in constraints:
        free |= formula_vars(c)
    for _, body in ordered:
        free |= formula_vars(body)
    defined = {v for v, _ in ordered}
    free -= defined
    free = sorted(free)
    if len(free) > caps.free_variables:
        raise CapExceeded("classical consistency", len(free), caps.free_variables)

    for bits in range(1 << len(free)):
        nu = {v: bool(bits >> i & 1) for i, v in enumerate(free)}
        for v, body in ordered:
            nu[v] = evaluate(body, nu)
        if all(evaluate(c, nu) for c in constraints):
            return True
    return False


# ---------------------------------------------------------------------------
# Clause forms
# ---------------------------------------------------------------------------

def literal_of(f: Formula) -> Optional[Lit]:
    if isinstance(f, Var):
        return (f.name, True)
    if isinstance(f, Not) and isinstance(f.arg, Var):
        return (f.arg.name, False)
    return None


def clause_of(f: Formula) -> Optional[Clause]:
    """The clause denoted by f, if f is literal/disjunction shaped."""
    if f == BOT:
        return frozenset()
    lit = literal_of(f)
    if lit is not None:
        return frozenset([lit])
    if isinstance(f, Or):
        lits = [literal_of(a) for a in f.args]
        if all(l is not None for l in lits):
            return frozenset(lits)
    return None


def formula_clauses(f: Formula, max_vars: int = 14) -> List[Clause]:
    """Equivalent CNF without auxiliary variables.

    Clause-shaped formulas pass through; everything else goes through a
    truth table, so this is only for conditions over few variables.
    """
    f = partial_eval(f, {})
    if f == TOP:
        return []
    c = clause_of(f)
    if c is not None:
        return [c]
    if isinstance(f, And):
        subs = [clause_of(a) for a in f.args]
        if all(s is not None for s in subs):
            return list(subs)
    names = sorted(formula_vars(f))
    if len(names) > max_vars:
        raise CapExceeded("truth-table CNF", len(names), max_vars)
    clauses = []
    for bits in range(1 << len(names)):
        nu = {v: bool(bits >> i & 1) for i, v in enumerate(names)}
        if not evaluate(f, nu):
            clauses.append(frozenset((v, not nu[v]) for v in names))
    return clauses


def clause_formula(clause: Clause) -> Formula:
    from .model import disj
    return disj([Var(a) if pos else Not(Var(a)) for (a, pos) in sorted(clause)])


def negated_clause_formula(clause: Clause) -> Formula:
    """The term ``not clause`` as a formula."""
    from .model import conj
    return conj([Not(Var(a)) if pos else Var(a) for (a, pos) in sorted(clause)])


def negated_cnf_formula(clauses: List[Clause]) -> Formula:
    """DNF formula equivalent to the negation of the clause set."""
    from .model import disj
    return disj([negated_clause_formula(c) for c in clauses])


# ---------------------------------------------------------------------------
# Tseitin conversion
# ---------------------------------------------------------------------------

def tseitin(f: Formula, avoid: Iterable[str] = (), prefix: str = "__t"):
    """CNF with full biconditional definitions.

    Returns ``(clauses, aux_map, out)`` where ``clauses`` are the
    definitional clauses, ``aux_map`` maps fresh variables to the
    subformulas they name, and ``out`` is the literal equivalent to f (or
    a bool when f folds to a constant).  Every model of the clauses
    extends an assignment of var(f) uniquely.
    """
    used = set(formula_vars(f)) | set(avoid)
    counter = [0]
    clauses: List[Clause] = []
    aux_map: Dict[str, Formula] = {}
    cache: Dict[Formula, Lit] = {}

    def fresh(sub: Formula) -> str:
        while True:
            name = f"{prefix}{counter[0]}"
            counter[0] += 1
            if name not in used:
                used.add(name)
                aux_map[name] = sub
                return name

    def neg(lit: Lit) -> Lit:
        return (lit[0], not lit[1])

    def rec(node: Formula) -> Lit:
        if node in cache:
            return cache[node]
        if isinstance(node, Var):
            lit = (node.name, True)
        elif isinstance(node, Not):
            lit = neg(rec(node.arg))
        elif isinstance(node, (And, Or)):
            kids = [rec(a) for a in node.args]
            v = fresh(node)
            lit = (v, True)
            if isinstance(node, And):
                for k in kids:
                    clauses.append(frozenset([neg(lit), k]))
                clauses.append(frozenset([lit] + [neg(k) for k in kids]))
            else:
                for k in kids:
                    clauses.append(frozenset([lit, neg(k)]))
                clauses.append(frozenset([neg(lit)] + kids))
        elif isinstance(node, Implies):
            left, right = rec(node.left), rec(node.right)
            v = fresh(node)
            lit = (v, True)
            clauses.append(frozenset([neg(lit), neg(left), right]))
            clauses.append(frozenset([lit, left]))
            clauses.append(frozenset([lit, neg(right)]))
        else:
            raise TypeError(f"not a formula: {node!r}")
        cache[node] = lit
        return lit

    folded = partial_eval(f, {})
    if isinstance(folded, Const):
        return [], {}, folded.value
    return clauses, aux_map, rec(folded)
