"""Extension reasoning for rejection-augmented AFs.

An extension candidate must be an extension of the underlying AF and its
rejection instance (the conditions of its members, the membership facts,
and the non-membership constraints) must be inconsistent.  The maximality
of the range-based semantics is judged on the underlying AF by default;
``maximality="filtered"`` instead compares only candidates that survive
the rejection check, which is the reading the credulous-hardness
construction relies on (see translate.cred_hardness_instance).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from . import afsem
from .asp import Program, asp_consistent
from .config import DEFAULT_CAPS, Caps
from .errors import RafkitError
from .logic import classical_consistent
from .model import (ASP, CLASSICAL, RAF, Rule, Semantics, condition_vars,
                    constraint, fact)

BASE = "base"
FILTERED = "filtered"


@dataclass(frozen=True)
class Extension:
    members: Tuple[str, ...]
    range: Tuple[str, ...]


@dataclass(frozen=True)
class RejectionInstance:
    mode: str
    formulas: Optional[frozenset] = None
    fixed: Optional[tuple] = None          # ((arg, bool), ...) over all arguments
    program: Optional[Program] = None
    forced: frozenset = frozenset()
    excluded: frozenset = frozenset()


def rejection_instance(raf: RAF, members: Iterable[str]) -> RejectionInstance:
    """The consistency object of Definition-style rejection for a candidate."""
    e = frozenset(members)
    unknown = e - set(raf.af.arguments)
    if unknown:
        raise RafkitError(f"argument {sorted(unknown)[0]!r} not in the framework")
    conds = frozenset().union(*(raf.conditions(a) for a in e)) if e else frozenset()
    if raf.mode == CLASSICAL:
        fixed = tuple((a, a in e) for a in raf.af.arguments)
        return RejectionInstance(CLASSICAL, formulas=conds, fixed=fixed)
    rules = set(conds)
    rules.update(fact(a) for a in sorted(e))
    rules.update(constraint(pos=[a]) for a in raf.af.arguments if a not in e)
    return RejectionInstance(ASP, program=Program(frozenset(rules)),
                             forced=e, excluded=frozenset(raf.af.arguments) - e)


def instance_consistent(inst: RejectionInstance, caps: Caps = DEFAULT_CAPS) -> bool:
    if inst.mode == CLASSICAL:
        return classical_consistent(inst.formulas, dict(inst.fixed), caps)
    return asp_consistent(inst.program, caps,
                          forced=inst.forced, excluded=inst.excluded)


class _RejectionCache:
    """Memoizes rejection verdicts by active conditions and the restriction
    of the candidate to the argument atoms those conditions mention."""

    def __init__(self, raf: RAF, caps: Caps):
        self.raf = raf
        self.caps = caps
        self.args = frozenset(raf.af.arguments)
        self.cache: Dict[tuple, bool] = {}

    def inconsistent(self, members: frozenset) -> bool:
        conds = (frozenset().union(*(self.raf.conditions(a) for a in members))
                 if members else frozenset())
        relevant = set()
        for c in conds:
            relevant |= condition_vars(c)
        relevant &= self.args
        key = (conds, frozenset(members & relevant))
        hit = self.cache.get(key)
        if hit is None:
            hit = not instance_consistent(
                rejection_instance(self.raf, members), self.caps)
            self.cache[key] = hit
        return hit


def is_extension(raf: RAF, members: Iterable[str], sigma: Semantics,
                 caps: Caps = DEFAULT_CAPS) -> bool:
    """Candidate test: base extension plus inconsistent rejection instance."""
    e = frozenset(members)
    if not afsem.satisfies(raf.af, e, sigma, caps):
        return False
    return not instance_consistent(rejection_instance(raf, e), caps)


def enumerate_extensions(raf: RAF, sigma: Semantics, caps: Caps = DEFAULT_CAPS,
                         maximality: str = BASE) -> List[Extension]:
    """All extensions, ordered by cardinality then lexicographically."""
    idx = afsem._index(raf.af)
    cache = _RejectionCache(raf, caps)
    if maximality == FILTERED and sigma in (Semantics.SEMIST, Semantics.STAG):
        base = (Semantics.ADM if sigma == Semantics.SEMIST else Semantics.CONF)
        pool = [m for m in afsem.extension_masks(raf.af, base, caps)
                if m and cache.inconsistent(frozenset(idx.set_of(m)))]
        ranges = {m: idx.range_of(m) for m in pool}
        chosen = [m for m in pool
                  if not any(ranges[o] & ~ranges[m] and not (ranges[m] & ~ranges[o])
                             for o in pool)]
    else:
        chosen = [m for m in afsem.extension_masks(raf.af, sigma, caps)
                  if m and cache.inconsistent(frozenset(idx.set_of(m)))]
    out = [Extension(idx.set_of(m), idx.set_of(idx.range_of(m))) for m in chosen]
    return sorted(out, key=lambda e: (len(e.members), e.members))


def cons(raf: RAF, sigma: Semantics, caps: Caps = DEFAULT_CAPS,
         maximality: str = BASE) -> bool:
    """Extension existence."""
    return bool(enumerate_extensions(raf, sigma, caps, maximality))


def cons_shortcut(raf: RAF, sigma: Semantics, caps: Caps = DEFAULT_CAPS) -> bool:
    """Existence check that guesses an admissible (semiSt) or conflict-free
    (stag) set and applies the rejection test, skipping range maximality.

    Sound in the accepting direction (cons implies this); the converse can
    fail because rejection is not monotone under growing candidates, see
    the regression test with a condition naming a foreign argument.
    """
    if sigma not in (Semantics.SEMIST, Semantics.STAG):
        raise RafkitError("shortcut applies to semiSt/stag only")
    base = Semantics.ADM if sigma == Semantics.SEMIST else Semantics.CONF
    idx = afsem._index(raf.af)
    cache = _RejectionCache(raf, caps)
    return any(m and cache.inconsistent(frozenset(idx.set_of(m)))
               for m in afsem.extension_masks(raf.af, base, caps))


def cred(raf: RAF, sigma: Semantics, argument: str, caps: Caps = DEFAULT_CAPS,
         maximality: str = BASE) -> bool:
    """Credulous acceptance: the argument occurs in some extension."""
    if argument not in raf.af.arguments:
        raise RafkitError(f"argument {argument!r} not in the framework")
    return any(argument in e.members
               for e in enumerate_extensions(raf, sigma, caps, maximality))
