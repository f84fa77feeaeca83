"""Constructive simulations and hardness-instance generators.

Simulations: plain AFs, constrained AFs (one global constraint), and
twofold extensions all embed into rejection frameworks.  Generators: the
consistency-hardness reductions from SAT/2-QSAT/3-QSAT per rejection
class and the credulous-hardness reductions for semi-stable/stage.  Each
construction ships with a brute-force oracle so equivalence is testable.

Naming of fresh symbols: primed copies get ``__p``, second copies
``__pp``, defeat markers ``__d`` / ``__dp``, hats ``__h``, complements
``__n``; collisions with instance names grow leading underscores.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import afsem
from .config import DEFAULT_CAPS, Caps
from .errors import InputShapeError, RafkitError
from .logic import clause_formula, evaluate, negated_clause_formula
from .model import (AF, ASP, BOT, CAF, CLASSICAL, And, Formula, Implies, Not,
                    Or, RAF, Rule, Semantics, Var, conj, disj, formula_vars,
                    iff)
from .qbf import QbfInstance
from .td import Graph, TreeDecomposition, primal_graph

S = Semantics


def _mangle(base: str, suffix: str, used) -> str:
    name = base + suffix
    while name in used:
        name = "_" + name
    return name


def _fresh_map(names: Iterable[str], suffix: str, used: set) -> Dict[str, str]:
    out = {}
    for n in names:
        out[n] = _mangle(n, suffix, used)
        used.add(out[n])
    return out


# ---------------------------------------------------------------------------
# AF simulation
# ---------------------------------------------------------------------------

def af_to_raf(af: AF) -> RAF:
    """Rejection framework with the same extensions, minus the empty set.

    A falsum condition on every argument makes each non-empty candidate's
    rejection instance inconsistent.
    """
    return RAF.make(af, CLASSICAL, {a: [BOT] for a in af.arguments})


# ---------------------------------------------------------------------------
# CAF simulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CafSimulation:
    raf: RAF
    semantics: Semantics  # evaluate extensions of ``raf`` at this semantics


def _attackers(af: AF) -> Dict[str, List[str]]:
    att = {a: [] for a in af.arguments}
    for (x, y) in sorted(af.attacks):
        att[y].append(x)
    return att


def _caf_admissibility(af: AF, p: Dict[str, str], conflict_only: bool) -> Formula:
    parts = [Or((Not(Var(p[a])), Not(Var(p[b]))))
             for (a, b) in sorted(af.attacks)]
    conflict = conj(parts)
    if conflict_only:
        return conflict
    att = _attackers(af)
    defense = []
    for a in af.arguments:
        for b in att[a]:
            counter = disj([Var(p[c]) for c in att[b]])
            defense.append(Or((Not(Var(p[a])), counter)) if att[b]
                           else Not(Var(p[a])))
    return conj([conflict] + defense)


def _caf_constraint_on_copy(af: AF, phi: Formula, p: Dict[str, str],
                            pp: Dict[str, str]) -> Formula:
    bridge = conj([iff(Var(p[a]), Var(pp[a])) for a in af.arguments])
    shifted = _substitute(phi, {a: Var(pp[a]) for a in af.arguments})
    return And((bridge, shifted))


def _substitute(f: Formula, sub: Dict[str, Formula]) -> Formula:
    if isinstance(f, Var):
        return sub.get(f.name, f)
    if isinstance(f, Not):
        return Not(_substitute(f.arg, sub))
    if isinstance(f, And):
        return And(tuple(_substitute(a, sub) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(_substitute(a, sub) for a in f.args))
    if isinstance(f, Implies):
        return Implies(_substitute(f.left, sub), _substitute(f.right, sub))
    return f


def caf_to_raf(caf: CAF, sigma: Semantics) -> CafSimulation:
    """Simulate one CAF semantics.

    For adm/stab/comp the negated constraint is the condition everywhere
    and extensions are read at the same semantics.  The maximality-based
    semantics pack the counterexample search into the condition: a primed
    copy encodes a constrained-admissible (conflict-free, for stage)
    strict improvement, and extensions of the result are read at adm
    (pref, semiSt) or conf (stag).
    """
    af = caf.af
    phi = caf.constraint
    if sigma in (S.ADM, S.STAB, S.COMP):
        cond = Not(phi)
        raf = RAF.make(af, CLASSICAL, {a: [cond] for a in af.arguments})
        return CafSimulation(raf, sigma)
    if sigma == S.CONF:
        raise RafkitError("conf is not covered by the CAF simulation")

    used = set(af.arguments) | set(formula_vars(phi))
    p = _fresh_map(af.arguments, "__p", used)
    pp = _fresh_map(af.arguments, "__pp", used)

    if sigma == S.PREF:
        psi = And((
            _caf_admissibility(af, p, conflict_only=False),
            _caf_constraint_on_copy(af, phi, p, pp),
            And((conj([Implies(Var(a), Var(p[a])) for a in af.arguments]),
                 disj([And((Var(p[a]), Not(Var(a)))) for a in af.arguments]))),
        ))
        eval_at = S.ADM
    elif sigma in (S.SEMIST, S.STAG):
        d = _fresh_map(af.arguments, "__d", used)
        dp = _fresh_map(af.arguments, "__dp", used)
        att = _attackers(af)
        defeat = conj(
            [iff(Var(d[a]), disj([Var(b) for b in att[a]]))
             for a in af.arguments]
            + [iff(Var(dp[a]), disj([Var(p[b]) for b in att[a]]))
               for a in af.arguments])
        lower = conj(
            [Implies(Var(a), Or((Var(p[a]), Var(dp[a]))))
             for a in af.arguments]
            + [Implies(Var(d[a]), Or((Var(p[a]), Var(dp[a]))))
               for a in af.arguments])
        strict = disj([And((Or((Var(p[a]), Var(dp[a]))),
                            Not(Var(a)), Not(Var(d[a]))))
                       for a in af.arguments])
        psi = And((
            _caf_admissibility(af, p, conflict_only=sigma == S.STAG),
            _caf_constraint_on_copy(af, phi, p, pp),
            defeat, lower, strict,
        ))
        eval_at = S.ADM if sigma == S.SEMIST else S.CONF
    else:
        raise RafkitError(f"unsupported semantics {sigma}")

    cond = Or((Not(phi), psi))
    raf = RAF.make(af, CLASSICAL, {a: [cond] for a in af.arguments})
    return CafSimulation(raf, eval_at)


def caf_oracle(caf: CAF, sigma: Semantics,
               caps: Caps = DEFAULT_CAPS) -> List[FrozenSet[str]]:
    """Brute-force CAF semantics via completions."""
    af = caf.af
    idx = afsem._index(af)

    def completion_holds(mask: int) -> bool:
        nu = {a: bool(mask >> i & 1) for i, a in enumerate(idx.names)}
        return evaluate(caf.constraint, nu)

    if sigma == S.CONF:
        pool = [m for m in afsem.extension_masks(af, S.CONF, caps)
                if completion_holds(m)]
        return sorted((frozenset(idx.set_of(m)) for m in pool),
                      key=lambda s: (len(s), tuple(sorted(s))))
    if sigma in (S.ADM, S.COMP):
        pool = [m for m in afsem.extension_masks(af, sigma, caps)
                if completion_holds(m)]
        return sorted((frozenset(idx.set_of(m)) for m in pool),
                      key=lambda s: (len(s), tuple(sorted(s))))
    if sigma == S.STAB:
        pool = [m for m in afsem.extension_masks(af, S.CONF, caps)
                if completion_holds(m) and idx.range_of(m) == idx.full]
        return sorted((frozenset(idx.set_of(m)) for m in pool),
                      key=lambda s: (len(s), tuple(sorted(s))))

    if sigma == S.PREF:
        good = [m for m in afsem.extension_masks(af, S.ADM, caps)
                if completion_holds(m)]
        keep = [m for m in good
                if not any(o != m and o & m == m for o in good)]
    elif sigma in (S.SEMIST, S.STAG):
        base = S.ADM if sigma == S.SEMIST else S.CONF
        good = [m for m in afsem.extension_masks(af, base, caps)
                if completion_holds(m)]
        ranges = {m: idx.range_of(m) for m in good}
        keep = [m for m in good
                if not any(ranges[o] & ~ranges[m] and not (ranges[m] & ~ranges[o])
                           for o in good)]
    else:
        raise RafkitError(f"unsupported semantics {sigma}")
    return sorted((frozenset(idx.set_of(m)) for m in keep),
                  key=lambda s: (len(s), tuple(sorted(s))))


# ---------------------------------------------------------------------------
# Twofold extensions
# ---------------------------------------------------------------------------

def twofold_to_raf(af: AF, shrinking: Iterable[str]) -> RAF:
    """Conditions over a primed copy force the trace on the shrinking to be
    stable in the induced sub-framework.  An empty shrinking degenerates
    to the plain AF simulation (stability on the empty sub-framework holds
    vacuously)."""
    s = frozenset(shrinking)
    if not s <= set(af.arguments):
        raise RafkitError("shrinking must be a subset of the arguments")
    if not s:
        return af_to_raf(af)
    used = set(af.arguments)
    p = _fresh_map(af.arguments, "__p", used)
    rc = {}
    escape = disj([Not(Var(p[x])) for x in sorted(s)])
    for a in sorted(s):
        outgoing = [Var(p[b]) for (x, b) in sorted(af.attacks) if x == a]
        rc[a] = [conj([Var(p[a]), *outgoing, escape])]
    return RAF.make(af, CLASSICAL, rc)


def induced_subframework(af: AF, s: Iterable[str]) -> AF:
    s = frozenset(s)
    return AF.make([a for a in af.arguments if a in s],
                   [(a, b) for (a, b) in af.attacks if a in s and b in s])


def twofold_oracle(af: AF, shrinking: Iterable[str], sigma1: Semantics,
                   sigma2: Semantics,
                   caps: Caps = DEFAULT_CAPS) -> List[FrozenSet[str]]:
    """All sets that satisfy sigma1 on the AF while their trace on the
    shrinking satisfies sigma2 on the induced sub-framework."""
    s = frozenset(shrinking)
    sub = induced_subframework(af, s) if s else None
    idx = afsem._index(af)
    out = []
    for m in afsem.extension_masks(af, sigma1, caps):
        members = frozenset(idx.set_of(m))
        trace = members & s
        if sub is None:
            ok = True  # every semantics here accepts the empty framework trace
        else:
            ok = afsem.satisfies(sub, trace, sigma2, caps)
        if ok:
            out.append(members)
    return sorted(out, key=lambda x: (len(x), tuple(sorted(x))))


# ---------------------------------------------------------------------------
# Consistency-hardness generators
# ---------------------------------------------------------------------------

def _pair_attacks(xs: Sequence[str], p: Dict[str, str]) -> List[Tuple[str, str]]:
    out = []
    for x in xs:
        out.append((x, p[x]))
        out.append((p[x], x))
    return out


def _block_names(inst: QbfInstance) -> List[List[str]]:
    return [[inst.names[v - 1] for v in nums] for _, nums in inst.blocks]


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise InputShapeError(message)


def hardness_instance(source, cls) -> RAF:
    """Consistency-hardness reductions, one per rejection class.

    ``source`` is ``(names, clauses)`` for the simple class and a
    QbfInstance otherwise.  The guarantee, exercised by the differential
    suites: the input is satisfiable/valid iff the output has a
    conflict-free extension.
    """
    from .model import RcClass

    cls = RcClass(cls) if not isinstance(cls, RcClass) else cls
    if cls == RcClass.SIMPLE:
        return _simple_from_sat(source)
    if cls == RcClass.PROPOSITIONAL:
        return _prop_from_qsat2(source)
    if cls == RcClass.TIGHT:
        return _tight_from_qsat2(source)
    if cls == RcClass.DISJUNCTIVE:
        return _disj_from_qsat3(source)
    raise RafkitError(f"no generator for class {cls}")


def _simple_from_sat(source) -> RAF:
    names, clauses = source
    _require(len(names) > 0, "SAT input needs at least one variable")
    used = set(names)
    p = _fresh_map(names, "__p", used)
    clause_args = []
    for i in range(len(clauses)):
        v = _mangle(f"v_c{i}", "", used)
        used.add(v)
        clause_args.append(v)
    args = list(names) + [p[x] for x in names] + clause_args
    attacks = _pair_attacks(names, p)
    # the negated matrix as one condition: false under a membership pattern
    # exactly when the pattern satisfies every clause
    reject = disj([negated_clause_formula(frozenset(c)) for c in clauses])
    rc = {a: [reject] for a in list(names) + [p[x] for x in names]}
    return RAF.make(AF.make(args, attacks), CLASSICAL, rc)


def _prop_from_qsat2(inst: QbfInstance) -> RAF:
    _require(inst.rank == 2 and inst.blocks[0][0] == "e",
             "propositional generator expects an exists-forall instance")
    _require(not inst.cnf and inst.dnf, "matrix must be a DNF")
    xs, ys = _block_names(inst)
    terms = inst.named_dnf()
    for t in terms:
        tvars = {a for (a, _) in t}
        _require(len(t) <= 3, "terms must have at most three literals")
        _require(tvars & set(xs) and tvars & set(ys),
                 "every term must mention both blocks")
    used = set(xs) | set(ys)
    p = _fresh_map(xs, "__p", used)
    args = list(xs) + [p[x] for x in xs]
    attacks = _pair_attacks(xs, p)
    rc: Dict[str, List[Formula]] = {a: [] for a in args}
    for term in sorted(terms, key=sorted):
        blocker = negated_term_formula(term)
        for (a, _) in sorted(term):
            if a in p:  # an X variable hosts the blocker on both copies
                rc[a].append(blocker)
                rc[p[a]].append(blocker)
    return RAF.make(AF.make(args, attacks), CLASSICAL, rc)


def negated_term_formula(term) -> Formula:
    """Negation of a conjunction of literals, as a clause formula."""
    return clause_formula(frozenset((a, not pos) for (a, pos) in term))


def _tight_from_qsat2(inst: QbfInstance) -> RAF:
    _require(inst.rank == 2 and inst.blocks[0][0] == "e",
             "tight generator expects an exists-forall instance")
    _require(not inst.cnf and inst.dnf, "matrix must be a DNF")
    xs, ys = _block_names(inst)
    terms = inst.named_dnf()
    for t in terms:
        tvars = {a for (a, _) in t}
        _require(tvars & set(xs) and tvars & set(ys),
                 "every term must mention both blocks")
    used = set(xs) | set(ys)
    p = _fresh_map(xs, "__p", used)
    yp = _fresh_map(ys, "__p", used)
    args = list(xs) + [p[x] for x in xs]
    attacks = _pair_attacks(xs, p)
    rc: Dict[str, List[Rule]] = {a: [] for a in args}
    xset, yset = set(xs), set(ys)
    for term in sorted(terms, key=sorted):
        body = []
        hosts = []
        for (a, pos) in sorted(term):
            if a in xset:
                atom = a if pos else p[a]
                hosts.append(atom)
            else:
                atom = a if pos else yp[a]
            body.append(atom)
        bundle = [Rule.make(pos=body)]
        for (a, pos) in sorted(term):
            if a in yset:
                bundle.append(Rule.make(head=[a], neg=[yp[a]]))
                bundle.append(Rule.make(head=[yp[a]], neg=[a]))
        for h in hosts:
            rc[h].extend(bundle)
    return RAF.make(AF.make(args, attacks), ASP, rc)


def _disj_from_qsat3(inst: QbfInstance) -> RAF:
    _require(inst.rank == 3 and inst.blocks[0][0] == "e",
             "disjunctive generator expects an exists-forall-exists instance")
    _require(inst.cnf and not inst.dnf, "matrix must be a CNF")
    xs, ys, zs = _block_names(inst)
    clauses = inst.named_cnf()
    used = set(xs) | set(ys) | set(zs)
    p = _fresh_map(xs, "__p", used)
    xn = _fresh_map(xs, "__n", used)
    yp = _fresh_map(ys, "__p", used)
    zp = _fresh_map(zs, "__p", used)
    sat = _mangle("s", "", used)
    used.add(sat)
    args = list(xs) + [p[x] for x in xs]
    attacks = _pair_attacks(xs, p)
    rules: List[Rule] = []
    for x in xs:
        rules.append(Rule.make(head=[xn[x]], neg=[x]))
    for y in ys:
        rules.append(Rule.make(head=[y], neg=[yp[y]]))
        rules.append(Rule.make(head=[yp[y]], neg=[y]))
    for z in zs:
        rules.append(Rule.make(head=[z, zp[z]]))
        rules.append(Rule.make(head=[z], pos=[sat]))
        rules.append(Rule.make(head=[zp[z]], pos=[sat]))
    rules.append(Rule.make(neg=[sat]))
    xset, yset, zset = set(xs), set(ys), set(zs)
    for clause in sorted(clauses, key=sorted):
        body = []
        for (a, pos) in sorted(clause):
            if a in xset:
                body.append(xn[a] if pos else a)
            elif a in yset:
                body.append(yp[a] if pos else a)
            else:
                body.append(zp[a] if pos else a)
        rules.append(Rule.make(head=[sat], pos=body))
    rc = {a: list(rules) for a in args}  # uniform hosting keeps all machinery active
    return RAF.make(AF.make(args, attacks), ASP, rc)


# ---------------------------------------------------------------------------
# Credulous-hardness generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CredInstance:
    raf: RAF
    query: str


def _dw_skeleton(ys: Sequence[str], zs: Sequence[str], used: set):
    """Argument/attack core of the semi-stable/stage reduction."""
    t = _mangle("t", "", used); used.add(t)
    tp = _mangle("t", "__p", used); used.add(tp)
    b = _mangle("b", "", used); used.add(b)
    yp = _fresh_map(ys, "__p", used)
    yh = _fresh_map(ys, "__h", used)
    yhp = _fresh_map(ys, "__hp", used)
    zp = _fresh_map(zs, "__p", used)
    args = [t, tp, b]
    args += list(ys) + [yp[y] for y in ys]
    args += [yh[y] for y in ys] + [yhp[y] for y in ys]
    args += list(zs) + [zp[z] for z in zs]
    attacks = [(t, tp), (tp, t), (t, b), (b, b)]
    attacks += _pair_attacks(list(ys), yp)
    attacks += _pair_attacks(list(zs), zp)
    for y in ys:
        attacks += [(y, yh[y]), (yp[y], yhp[y]),
                    (yh[y], yh[y]), (yhp[y], yhp[y])]
    literal_arg = {}
    for y in ys:
        literal_arg[(y, True)] = y
        literal_arg[(y, False)] = yp[y]
    for z in zs:
        literal_arg[(z, True)] = z
        literal_arg[(z, False)] = zp[z]
    return t, tp, b, args, attacks, literal_arg


def cred_hardness_instance(inst: QbfInstance, cls) -> CredInstance:
    """Credulous-hardness reductions for semi-stable/stage.

    simple: forall-exists CNF, clause arguments, falsum conditions
    everywhere; the query argument lies in no extension iff the input is
    true.  propositional: forall-exists-forall DNF; the inner block moves
    into the query's counterpart condition.  disjunctive:
    forall-exists-forall-exists CNF; the inner two blocks become a
    saturation program.  The guarantee for the latter two holds under
    filtered maximality (rejection-surviving candidates compete).
    """
    from .model import RcClass

    cls = RcClass(cls) if not isinstance(cls, RcClass) else cls
    if cls == RcClass.SIMPLE:
        return _cred_simple(inst)
    if cls == RcClass.PROPOSITIONAL:
        return _cred_prop(inst)
    if cls == RcClass.DISJUNCTIVE:
        return _cred_disj(inst)
    raise RafkitError(f"no credulous generator for class {cls}")


def _cred_simple(inst: QbfInstance) -> CredInstance:
    _require(inst.rank == 2 and inst.blocks[0][0] == "a",
             "simple credulous generator expects a forall-exists instance")
    _require(inst.cnf and not inst.dnf, "matrix must be a CNF")
    ys, zs = _block_names(inst)
    used = set(ys) | set(zs)
    t, tp, b, args, attacks, literal_arg = _dw_skeleton(ys, zs, used)
    clause_args = []
    clauses = inst.named_cnf()
    for i, clause in enumerate(clauses):
        c = _mangle(f"c{i}", "", used)
        used.add(c)
        clause_args.append(c)
        attacks.append((c, t))
        for lit in sorted(clause):
            attacks.append((literal_arg[lit], c))
    args += clause_args
    rc = {a: [BOT] for a in args}
    return CredInstance(RAF.make(AF.make(args, attacks), CLASSICAL, rc), tp)


def _cred_prop(inst: QbfInstance) -> CredInstance:
    _require(inst.rank == 3 and inst.blocks[0][0] == "a",
             "propositional credulous generator expects forall-exists-forall")
    _require(inst.dnf and not inst.cnf, "matrix must be a DNF")
    ys, zs, xs = _block_names(inst)
    used = set(ys) | set(zs) | set(xs)
    t, tp, b, args, attacks, _ = _dw_skeleton(ys, zs, used)
    # the query's counterpart must always survive rejection; everything
    # else stays unconditioned so only t carries the inner check
    rc: Dict[str, list] = {
        t: [negated_term_formula(term)
            for term in sorted(inst.named_dnf(), key=sorted)],
        tp: [BOT],
    }
    return CredInstance(RAF.make(AF.make(args, attacks), CLASSICAL, rc), tp)


def _cred_disj(inst: QbfInstance) -> CredInstance:
    _require(inst.rank == 4 and inst.blocks[0][0] == "a",
             "disjunctive credulous generator expects rank four "
             "(forall-exists-forall-exists)")
    _require(inst.cnf and not inst.dnf, "matrix must be a CNF")
    ys, zs, xs, ws = _block_names(inst)
    used = set(ys) | set(zs) | set(xs) | set(ws)
    t, tp, b, args, attacks, _ = _dw_skeleton(ys, zs, used)
    xp = _fresh_map(xs, "__p", used)
    wp = _fresh_map(ws, "__p", used)
    an = _fresh_map(list(ys) + list(zs), "__n", used)
    sat = _mangle("s", "", used)
    used.add(sat)
    rules: List[Rule] = []
    for x in xs:
        rules.append(Rule.make(head=[x], neg=[xp[x]]))
        rules.append(Rule.make(head=[xp[x]], neg=[x]))
    for w in ws:
        rules.append(Rule.make(head=[w, wp[w]]))
        rules.append(Rule.make(head=[w], pos=[sat]))
        rules.append(Rule.make(head=[wp[w]], pos=[sat]))
    rules.append(Rule.make(neg=[sat]))
    for a in list(ys) + list(zs):
        rules.append(Rule.make(head=[an[a]], neg=[a]))
    yzset = set(ys) | set(zs)
    for clause in sorted(inst.named_cnf(), key=sorted):
        body = []
        for (a, pos) in sorted(clause):
            if a in yzset:
                body.append(an[a] if pos else a)
            elif a in set(xs):
                body.append(xp[a] if pos else a)
            else:
                body.append(wp[a] if pos else a)
        rules.append(Rule.make(head=[sat], pos=body))
    rc: Dict[str, list] = {a: [] for a in args}
    rc[t] = rules
    rc[tp] = [Rule.make()]  # falsum rule: always inconsistent when active
    return CredInstance(RAF.make(AF.make(args, attacks), ASP, rc), tp)


# ---------------------------------------------------------------------------
# Width-preservation constructions
# ---------------------------------------------------------------------------

def doubled_td(td: TreeDecomposition, raf: RAF) -> TreeDecomposition:
    """Decomposition of a generated framework's primal graph obtained by
    adding each bag variable's fresh copies to its bag and pruning copies
    back to where they are needed (the propositional/tight width
    argument)."""
    graph = primal_graph(raf)
    out = td.copy()
    new_bags = {}
    for node, bag in out.bags.items():
        grown = set()
        for v in bag:
            grown.add(v)
            for suffix in ("__p", "__n"):
                copy = v + suffix
                if copy in graph.vertices:
                    grown.add(copy)
        new_bags[node] = frozenset(v for v in grown if v in graph.vertices)
    out.bags = new_bags
    _attach_leftovers(out, graph)
    _steiner_prune(out, graph)
    return out


def _attach_leftovers(td: TreeDecomposition, graph: Graph) -> None:
    """Cover vertices/edges missed by the bag mapping by widening bags that
    already contain a neighbor (global atoms such as the saturation flag)."""
    covered = set()
    for bag in td.bags.values():
        covered |= bag
    leftovers = graph.vertices - covered
    adjacency = graph.neighbors()
    for v in sorted(leftovers):
        targets = [n for n in td.postorder()
                   if adjacency[v] & td.bags[n]] or [td.root]
        for n in targets:
            td.bags[n] = td.bags[n] | {v}
        _reconnect(td, v)
    # make sure every edge is inside some bag
    for (u, v) in sorted(graph.edges):
        if any(u in bag and v in bag for bag in td.bags.values()):
            continue
        host = next((n for n in td.postorder() if u in td.bags[n]), td.root)
        td.bags[host] = td.bags[host] | {v}
        _reconnect(td, v)


def _reconnect(td: TreeDecomposition, v: str) -> None:
    """Restore connectivity for one vertex by adding it along tree paths."""
    holding = [n for n in td.postorder() if v in td.bags[n]]
    if len(holding) <= 1:
        return
    parent = td.parent_map()
    depth = {}
    for n in td.postorder():
        p = parent[n]
        depth[n] = 0 if p is None else depth[p] + 1

    def path_up(a, b):
        seen = set()
        while a is not None:
            seen.add(a)
            a = parent[a]
        chain = []
        while b not in seen:
            chain.append(b)
            b = parent[b]
        return seen, chain, b

    anchor = holding[0]
    for n in holding[1:]:
        up_a, chain_b, meet = path_up(anchor, n)
        cur = anchor
        while cur != meet:
            td.bags[cur] = td.bags[cur] | {v}
            cur = parent[cur]
        for m in chain_b:
            td.bags[m] = td.bags[m] | {v}
        td.bags[meet] = td.bags[meet] | {v}


def _steiner_prune(td: TreeDecomposition, graph: Graph) -> None:
    """Shrink bags to the minimal subtrees needed for edge coverage."""
    adjacency = graph.neighbors()
    parent = td.parent_map()
    order = td.postorder()
    # choose one witness node per edge, then keep each vertex only on the
    # subtree spanning its witnesses
    witness: Dict[str, List[int]] = {v: [] for v in graph.vertices}
    for (u, v) in sorted(graph.edges):
        node = next(n for n in order if u in td.bags[n] and v in td.bags[n])
        witness[u].append(node)
        witness[v].append(node)
    for v in sorted(graph.vertices):
        holding = [n for n in order if v in td.bags[n]]
        if not holding:
            continue
        req = set(witness[v]) or {holding[0]}
        keep = _steiner_nodes(holding, req, parent)
        for n in holding:
            if n not in keep:
                td.bags[n] = td.bags[n] - {v}


def _steiner_nodes(holding, required, parent):
    """Minimal connected node set within ``holding`` spanning ``required``."""
    holding_set = set(holding)
    kids: Dict[int, List[int]] = {n: [] for n in holding}
    roots = []
    for n in holding:
        p = parent[n]
        if p in holding_set:
            kids[p].append(n)
        else:
            roots.append(n)
    keep = set()

    def walk(n) -> bool:
        found = n in required
        for k in kids[n]:
            if walk(k):
                found = True
        if found:
            keep.add(n)
        return found

    for r in roots:
        walk(r)
    # drop the chain above the topmost requirement/branching point
    for r in roots:
        cur = r
        while cur in keep and cur not in required:
            kept_children = [k for k in kids[cur] if k in keep]
            if len(kept_children) != 1:
                break
            keep.discard(cur)
            cur = kept_children[0]
    return keep
