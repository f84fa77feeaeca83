"""Answer-set machinery: reduct, answer-set check, consistency, tightness.

Programs are ground and small; everything runs on bitmask encodings of the
atom set.  Caps guard the exponential searches.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceeded, RafkitError
from .model import Rule


@dataclass(frozen=True)
class Program:
    rules: frozenset

    @staticmethod
    def make(rules: Iterable[Rule]) -> "Program":
        return Program(frozenset(rules))

    def atoms(self) -> frozenset:
        out = set()
        for r in self.rules:
            out |= r.atoms()
        return frozenset(out)


def dependency_digraph(program: Program):
    """Positive head-to-body dependency edges (x, y): x in H(r), y in B+(r)."""
    edges = set()
    for r in program.rules:
        for x in r.head:
            for y in r.pos:
                edges.add((x, y))
    return frozenset(program.atoms()), edges


def is_tight(program: Program) -> bool:
    """True iff the dependency digraph is acyclic (self-loops are cycles)."""
    vertices, edges = dependency_digraph(program)
    succ = {v: set() for v in vertices}
    for (x, y) in edges:
        succ[x].add(y)
    state = {}  # 1 = on stack, 2 = done

    for start in vertices:
        if start in state:
            continue
        stack = [(start, iter(succ[start]))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in state:
                    state[nxt] = 1
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
                if state[nxt] == 1:
                    return False
            if not advanced:
                state[node] = 2
                stack.pop()
    return True


class _Masks:
    """Bitmask view of a program over a fixed atom ordering."""

    def __init__(self, program: Program, extra_atoms=()):
        atoms = sorted(program.atoms() | set(extra_atoms))
        self.atoms = atoms
        self.index = {a: i for i, a in enumerate(atoms)}
        self.rules = []
        for r in sorted(program.rules, key=lambda r: r.render()):
            self.rules.append((self._mask(r.head), self._mask(r.pos), self._mask(r.neg)))

    def _mask(self, names) -> int:
        m = 0
        for a in names:
            m |= 1 << self.index[a]
        return m

    def to_set(self, mask: int) -> frozenset:
        return frozenset(a for a, i in self.index.items() if mask >> i & 1)

    def satisfies(self, mask: int) -> bool:
        for head, pos, neg in self.rules:
            if head & mask or neg & mask or pos & ~mask:
                continue
            return False
        return True

    def reduct_rules(self, mask: int):
        return [(head, pos) for head, pos, neg in self.rules if not neg & mask]

    @staticmethod
    def models_reduct(mask: int, reduct) -> bool:
        for head, pos in reduct:
            if head & mask or pos & ~mask:
                continue
            return False
        return True


def gl_reduct(program: Program, m: Iterable[str]) -> Program:
    """Gelfond-Lifschitz reduct: drop rules blocked by m, strip negative bodies."""
    m = frozenset(m)
    kept = [Rule(r.head, r.pos, frozenset()) for r in program.rules if not (m & r.neg)]
    return Program(frozenset(kept))


def satisfies(program: Program, m: Iterable[str]) -> bool:
    masks = _Masks(program, extra_atoms=m)
    return masks.satisfies(masks._mask(frozenset(m) & set(masks.atoms)))


def is_answer_set(program: Program, m: Iterable[str], caps: Caps = DEFAULT_CAPS) -> bool:
    """m is a subset-minimal model of the reduct of ``program`` under m."""
    m = frozenset(m)
    if len(m) > caps.program_atoms:
        raise CapExceeded("answer-set minimality check", len(m), caps.program_atoms)
    masks = _Masks(program, extra_atoms=m)
    mask = masks._mask(m)
    reduct = masks.reduct_rules(mask)
    if not masks.models_reduct(mask, reduct):
        return False
    sub = (mask - 1) & mask
    while sub:
        if masks.models_reduct(sub, reduct):
            return False
        sub = (sub - 1) & mask
    if mask and masks.models_reduct(0, reduct):
        return False
    return True


def answer_sets(program: Program, caps: Caps = DEFAULT_CAPS,
                forced: Iterable[str] = (), excluded: Iterable[str] = ()):
    """All answer sets, optionally restricted to candidates that contain
    ``forced`` and avoid ``excluded`` (a sound restriction when facts and
    constraints make other candidates impossible)."""
    masks = _Masks(program, extra_atoms=tuple(forced) + tuple(excluded))
    forced_mask = masks._mask(frozenset(forced))
    excluded_mask = masks._mask(frozenset(excluded))
    free = [i for a, i in masks.index.items()
            if not (forced_mask >> i & 1) and not (excluded_mask >> i & 1)]
    if len(free) > caps.program_atoms:
        raise CapExceeded("answer-set search", len(free), caps.program_atoms)
    out = []
    for bits in range(1 << len(free)):
        mask = forced_mask
        for j, i in enumerate(free):
            if bits >> j & 1:
                mask |= 1 << i
        if not masks.satisfies(mask):
            continue
        reduct = masks.reduct_rules(mask)
        minimal = True
        sub = (mask - 1) & mask
        while sub:
            if sub & forced_mask == forced_mask and masks.models_reduct(sub, reduct):
                minimal = False
                break
            sub = (sub - 1) & mask
        if minimal and mask and forced_mask == 0 and masks.models_reduct(0, reduct):
            minimal = False
        if minimal:
            out.append(masks.to_set(mask))
    return sorted(out, key=lambda s: (len(s), tuple(sorted(s))))


def asp_consistent(program: Program, caps: Caps = DEFAULT_CAPS,
                   forced: Iterable[str] = (), excluded: Iterable[str] = ()) -> bool:
    """True iff the program has at least one answer set."""
    masks = _Masks(program, extra_atoms=tuple(forced) + tuple(excluded))
    forced_mask = masks._mask(frozenset(forced))
    excluded_mask = masks._mask(frozenset(excluded))
    free = [i for a, i in masks.index.items()
            if not (forced_mask >> i & 1) and not (excluded_mask >> i & 1)]
    if len(free) > caps.program_atoms:
        raise CapExceeded("answer-set search", len(free), caps.program_atoms)
    for bits in range(1 << len(free)):
        mask = forced_mask
        for j, i in enumerate(free):
            if bits >> j & 1:
                mask |= 1 << i
        if not masks.satisfies(mask):
            continue
        reduct = masks.reduct_rules(mask)
        minimal = True
        sub = (mask - 1) & mask
        while sub:
            if sub & forced_mask == forced_mask and masks.models_reduct(sub, reduct):
                minimal = False
                break
            sub = (sub - 1) & mask
        if minimal and mask and forced_mask == 0 and masks.models_reduct(0, reduct):
            minimal = False
        if minimal:
            return True
    return False


def justified_model_check(program: Program, m: Iterable[str]) -> bool:
    """Supported-model test: m models the program and every atom of m has a
    firing rule with that atom in the head.

    Coincides with the answer-set test on tight programs with singleton
    heads; with disjunctive heads it is only a necessary condition, see the
    answer-set test for the exact notion.
    """
    if not is_tight(program):
        raise RafkitError("justified_model_check requires a tight program")
    m = frozenset(m)
    if not satisfies(program, m):
        return False
    for a in m:
        for r in program.rules:
            if a in r.head and r.pos <= m and not (r.neg & m):
                break
        else:
            return False
    return True
