"""Seeded random instances for the differential and property suites."""

from __future__ import annotations

import random
from typing import List, Optional, Tuple

from .model import (AF, ASP, BOT, CLASSICAL, And, Const, Formula, Implies,
                    Not, Or, RAF, Rule, TOP, Var)
from .qbf import QbfInstance, build_qbf


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)


def rand_af(rng: random.Random, n_min: int = 1, n_max: int = 6,
            p_attack: float = 0.25) -> AF:
    n = rng.randint(n_min, n_max)
    args = [f"a{i}" for i in range(n)]
    attacks = [(x, y) for x in args for y in args if rng.random() < p_attack]
    return AF.make(args, attacks)


def rand_formula(rng: random.Random, atoms: List[str], depth: int = 3) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.85:
            return Var(rng.choice(atoms))
        return TOP if rng.random() < 0.5 else BOT
    kind = rng.choice(["not", "and", "or", "imp"])
    if kind == "not":
        return Not(rand_formula(rng, atoms, depth - 1))
    left = rand_formula(rng, atoms, depth - 1)
    right = rand_formula(rng, atoms, depth - 1)
    if kind == "and":
        return And((left, right))
    if kind == "or":
        return Or((left, right))
    return Implies(left, right)


def rand_clause_formula(rng: random.Random, atoms: List[str],
                        max_width: int = 3) -> Formula:
    width = rng.randint(1, min(max_width, len(atoms)))
    chosen = rng.sample(atoms, width)
    lits = [Var(a) if rng.random() < 0.5 else Not(Var(a)) for a in chosen]
    return lits[0] if len(lits) == 1 else Or(tuple(lits))


def _attach_conditions(rng, args, make_condition, p_cond=0.8, max_conds=2):
    rc = {}
    pool = []
    for a in args:
        conds = []
        for _ in range(rng.randint(0, max_conds)):
            if rng.random() >= p_cond:
                continue
            if pool and rng.random() < 0.15:
                conds.append(rng.choice(pool))  # shared condition, two hosts
            else:
                cond = make_condition()
                conds.append(cond)
                pool.append(cond)
        if conds:
            rc[a] = conds
    return rc


def rand_simple_raf(rng: random.Random, n_max: int = 6,
                    clause_only: bool = True) -> RAF:
    af = rand_af(rng, n_max=n_max)
    args = list(af.arguments)
    make = ((lambda: rand_clause_formula(rng, args)) if clause_only
            else (lambda: rand_formula(rng, args, depth=2)))
    rc = _attach_conditions(rng, args, make)
    return RAF.make(af, CLASSICAL, rc)


def rand_prop_raf(rng: random.Random, n_max: int = 6, aux_max: int = 4,
                  clause_only: bool = True) -> RAF:
    af = rand_af(rng, n_max=n_max)
    aux = [f"p{i}" for i in range(rng.randint(1, aux_max))]
    atoms = list(af.arguments) + aux
    make = ((lambda: rand_clause_formula(rng, atoms)) if clause_only
            else (lambda: rand_formula(rng, atoms, depth=2)))
    rc = _attach_conditions(rng, af.arguments, make)
    # keep the class honest: some condition must use a non-argument atom
    if not (_vars_of(rc) & set(aux)):
        rc.setdefault(af.arguments[0], []).append(Var(aux[0]))
    return RAF.make(af, CLASSICAL, rc)


def _vars_of(rc) -> set:
    from .model import condition_vars
    out = set()
    for conds in rc.values():
        for c in conds:
            out |= condition_vars(c)
    return out


def rand_tight_raf(rng: random.Random, n_max: int = 5, aux_max: int = 4) -> RAF:
    """Programs with singleton heads and acyclic positive dependencies."""
    af = rand_af(rng, n_max=n_max)
    aux = [f"p{i}" for i in range(rng.randint(1, aux_max))]
    order = list(af.arguments) + aux  # positive bodies point down this order

    def make_rule() -> Rule:
        atoms = order
        if rng.random() < 0.25:
            head = []
            lower = atoms
        else:
            hi = rng.randrange(len(atoms))
            head = [atoms[hi]]
            lower = atoms[:hi]
        pos = rng.sample(lower, min(len(lower), rng.randint(0, 2)))
        neg = rng.sample(atoms, rng.randint(0, 2))
        return Rule.make(head, pos, neg)

    rc = _attach_conditions(rng, af.arguments, make_rule)
    return RAF.make(af, ASP, rc)


def rand_disj_raf(rng: random.Random, n_max: int = 5, aux_max: int = 4) -> RAF:
    af = rand_af(rng, n_max=n_max)
    aux = [f"p{i}" for i in range(rng.randint(1, aux_max))]
    atoms = list(af.arguments) + aux

    def make_rule() -> Rule:
        head = rng.sample(atoms, rng.randint(0, 2))
        pos = rng.sample(atoms, rng.randint(0, 2))
        neg = rng.sample(atoms, rng.randint(0, 2))
        return Rule.make(head, pos, neg)

    rc = _attach_conditions(rng, af.arguments, make_rule)
    return RAF.make(af, ASP, rc)


def rand_raf_mixed(rng: random.Random, n_max: int = 7) -> RAF:
    kind = rng.randrange(4)
    if kind == 0:
        return rand_simple_raf(rng, n_max=n_max, clause_only=False)
    if kind == 1:
        return rand_prop_raf(rng, n_max=n_max, clause_only=False)
    if kind == 2:
        return rand_tight_raf(rng, n_max=min(n_max, 5))
    return rand_disj_raf(rng, n_max=min(n_max, 5))


def rand_caf(rng: random.Random, n_max: int = 6, depth: int = 3):
    from .model import CAF
    af = rand_af(rng, n_max=n_max)
    return CAF(af, rand_formula(rng, list(af.arguments), depth=depth))


# ---------------------------------------------------------------------------
# Formula inputs for the hardness generators
# ---------------------------------------------------------------------------

def rand_cnf(rng: random.Random, max_vars: int = 4,
             max_clauses: int = 5) -> Tuple[List[str], list]:
    n = rng.randint(1, max_vars)
    names = [f"x{i}" for i in range(n)]
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        width = rng.randint(1, min(3, n))
        chosen = rng.sample(names, width)
        clauses.append(frozenset((a, rng.random() < 0.5) for a in chosen))
    return names, clauses


def _mixed_term(rng, xs, ys, max_extra=1):
    lits = [(rng.choice(xs), rng.random() < 0.5),
            (rng.choice(ys), rng.random() < 0.5)]
    for _ in range(rng.randint(0, max_extra)):
        pool = xs + ys
        lits.append((rng.choice(pool), rng.random() < 0.5))
    return {l[0]: l for l in lits}.values()  # one literal per atom


def rand_qsat2_dnf(rng: random.Random, max_x: int = 3, max_y: int = 3,
                   max_terms: int = 4, three_dnf: bool = True) -> QbfInstance:
    xs = [f"x{i}" for i in range(rng.randint(1, max_x))]
    ys = [f"y{i}" for i in range(rng.randint(1, max_y))]
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        term = list(_mixed_term(rng, xs, ys, max_extra=1 if three_dnf else 2))
        terms.append(term)
    return build_qbf([("e", xs), ("a", ys)], cnf=[], dnf=terms)


def _random_clauses(rng, blocks, max_clauses):
    """Random clauses over the union, with one clause touching every block
    so quantifier ranks survive pruning."""
    pool = [v for block in blocks for v in block]
    clauses = [[(rng.choice(block), rng.random() < 0.5) for block in blocks]]
    for _ in range(rng.randint(0, max_clauses - 1)):
        chosen = rng.sample(pool, rng.randint(1, min(3, len(pool))))
        clauses.append([(a, rng.random() < 0.5) for a in chosen])
    return clauses


def rand_qsat3_cnf(rng: random.Random, max_each: int = 2,
                   max_clauses: int = 4) -> QbfInstance:
    xs = [f"x{i}" for i in range(rng.randint(1, max_each))]
    ys = [f"y{i}" for i in range(rng.randint(1, max_each))]
    zs = [f"z{i}" for i in range(rng.randint(1, max_each))]
    clauses = _random_clauses(rng, [xs, ys, zs], max_clauses)
    return build_qbf([("e", xs), ("a", ys), ("e", zs)], cnf=clauses, dnf=None)


def rand_cred_simple_input(rng: random.Random, max_y: int = 2, max_z: int = 2,
                           max_clauses: int = 3) -> QbfInstance:
    ys = [f"y{i}" for i in range(rng.randint(1, max_y))]
    zs = [f"z{i}" for i in range(rng.randint(1, max_z))]
    clauses = _random_clauses(rng, [ys, zs], max_clauses)
    return build_qbf([("a", ys), ("e", zs)], cnf=clauses, dnf=None)


def rand_cred_prop_input(rng: random.Random, max_each: int = 2,
                         max_terms: int = 3) -> QbfInstance:
    ys = [f"y{i}" for i in range(rng.randint(1, max_each))]
    zs = [f"z{i}" for i in range(rng.randint(1, max_each))]
    xs = [f"x{i}" for i in range(rng.randint(1, max_each))]
    terms = _random_clauses(rng, [ys, zs, xs], max_terms)
    return build_qbf([("a", ys), ("e", zs), ("a", xs)], cnf=[], dnf=terms)


def rand_cred_disj_input(rng: random.Random, max_each: int = 2,
                         max_clauses: int = 3) -> QbfInstance:
    ys = [f"y{i}" for i in range(rng.randint(1, max_each))]
    zs = [f"z{i}" for i in range(rng.randint(1, max_each))]
    xs = [f"x{i}" for i in range(rng.randint(1, max_each))]
    ws = [f"w{i}" for i in range(rng.randint(1, max_each))]
    clauses = _random_clauses(rng, [ys, zs, xs, ws], max_clauses)
    return build_qbf([("a", ys), ("e", zs), ("a", xs), ("e", ws)],
                     cnf=clauses, dnf=None)
