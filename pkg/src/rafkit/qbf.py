"""QBF representation, brute-force evaluation, prenex conversion, and
QDIMACS/QCIR/DIMACS input-output.

The matrix is a conjunction of a CNF part and a DNF part; either part may
be absent (true).  Literals are signed integers over a name table.
Evaluation is expansion-based (assign the outermost variable both ways and
simplify), with unit propagation and all-exists / all-forall endgames so
that the structured instances produced by the encoders stay tractable.
"""

from __future__ import annotations

import os
import subprocess
import tempfile
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceeded, InputShapeError, RafkitError

NamedLit = Tuple[str, bool]

EXTERNAL_SOLVER_ENV = "RAF_QBF_SOLVER"


@dataclass(frozen=True)
class QbfInstance:
    names: Tuple[str, ...]                       # var number i+1 = names[i]
    blocks: Tuple[Tuple[str, Tuple[int, ...]], ...]   # ('e'|'a', var numbers)
    cnf: Tuple[frozenset, ...] = ()
    dnf: Optional[Tuple[frozenset, ...]] = None  # None = no DNF part (true)

    @property
    def rank(self) -> int:
        return len(self.blocks)

    def var_number(self, name: str) -> int:
        return self.names.index(name) + 1

    def lit_name(self, lit: int) -> NamedLit:
        return (self.names[abs(lit) - 1], lit > 0)

    def named_cnf(self) -> List[frozenset]:
        return [frozenset(self.lit_name(l) for l in c) for c in self.cnf]

    def named_dnf(self) -> Optional[List[frozenset]]:
        if self.dnf is None:
            return None
        return [frozenset(self.lit_name(l) for l in t) for t in self.dnf]


def build_qbf(blocks: Sequence[Tuple[str, Sequence[str]]],
              cnf: Sequence[Iterable[NamedLit]] = (),
              dnf: Optional[Sequence[Iterable[NamedLit]]] = None) -> QbfInstance:
    """Assemble an instance from named literals.

    Adjacent blocks with the same quantifier are merged, variables that do
    not occur in the matrix are dropped, and empty blocks disappear.  The
    matrix must be closed by the remaining declarations.
    """
    names: List[str] = []
    index: Dict[str, int] = {}

    def number(name: str) -> int:
        if name not in index:
            index[name] = len(names) + 1
            names.append(name)
        return index[name]

    declared = []
    for q, block_vars in blocks:
        if q not in ("e", "a"):
            raise RafkitError(f"quantifier must be 'e' or 'a', got {q!r}")
        declared.append((q, [number(v) for v in block_vars]))

    def code(clauses):
        out = []
        for clause in clauses:
            lits = frozenset((number(a) if pos else -number(a))
                             for (a, pos) in clause)
            if any(-l in lits for l in lits):
                continue  # tautological
            out.append(lits)
        return tuple(out)

    cnf_coded = code(cnf)
    dnf_coded = None if dnf is None else code(dnf)

    occurring = set()
    for c in cnf_coded:
        occurring.update(abs(l) for l in c)
    for t in dnf_coded or ():
        occurring.update(abs(l) for l in t)

    merged: List[Tuple[str, List[int]]] = []
    seen = set()
    for q, nums in declared:
        nums = [v for v in nums if v in occurring and v not in seen]
        seen.update(nums)
        if not nums:
            continue
        if merged and merged[-1][0] == q:
            merged[-1][1].extend(nums)
        else:
            merged.append((q, nums))
    if occurring - seen:
        missing = sorted(names[v - 1] for v in occurring - seen)
        raise RafkitError(f"matrix is not closed; unquantified: {missing}")

    return QbfInstance(tuple(names),
                       tuple((q, tuple(nums)) for q, nums in merged),
                       cnf_coded, dnf_coded)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

_DNF_TRUE = None  # sentinel meaning the DNF part is satisfied / absent


def _assign(cnf, dnf, lit):
    """Fix lit true; returns (cnf, dnf, matrix_false)."""
    new_cnf = []
    for clause in cnf:
        if lit in clause:
            continue
        if -lit in clause:
            clause = clause - {-lit}
            if not clause:
                return (), _DNF_TRUE, True
        new_cnf.append(clause)
    if dnf is _DNF_TRUE:
        return tuple(new_cnf), _DNF_TRUE, False
    new_dnf = []
    dnf_true = False
    for term in dnf:
        if -lit in term:
            continue
        if lit in term:
            term = term - {lit}
            if not term:
                dnf_true = True
                break
        new_dnf.append(term)
    if dnf_true:
        return tuple(new_cnf), _DNF_TRUE, False
    if not new_dnf:
        return (), _DNF_TRUE, True  # every term falsified
    return tuple(new_cnf), tuple(new_dnf), False


class _Dpll:
    """Plain DPLL with unit propagation on integer-literal clause sets."""

    def sat(self, clauses) -> bool:
        clauses = list(clauses)
        return self._solve(clauses)

    def _solve(self, clauses) -> bool:
        while True:
            unit = None
            for c in clauses:
                if not c:
                    return False
                if len(c) == 1:
                    unit = next(iter(c))
                    break
            if unit is None:
                break
            new = []
            for c in clauses:
                if unit in c:
                    continue
                if -unit in c:
                    c = c - {-unit}
                new.append(c)
            clauses = new
        if not clauses:
            return True
        counts: Dict[int, int] = {}
        for c in clauses:
            for l in c:
                counts[l] = counts.get(l, 0) + 1
        lit = max(counts, key=lambda l: (counts[l], -abs(l)))
        for choice in (lit, -lit):
            branch = []
            ok = True
            for c in clauses:
                if choice in c:
                    continue
                if -choice in c:
                    c = c - {-choice}
                    if not c:
                        ok = False
                        break
                branch.append(c)
            if ok and self._solve(branch):
                return True
        return False


_dpll = _Dpll()


def _sat_exists(cnf, dnf) -> bool:
    if dnf is _DNF_TRUE:
        return _dpll.sat(cnf)
    for term in sorted(dnf, key=len):
        clauses = list(cnf) + [frozenset([l]) for l in term]
        if _dpll.sat(clauses):
            return True
    return False


def _valid_forall(cnf, dnf) -> bool:
    if cnf:  # tautological clauses were dropped at construction
        return False
    if dnf is _DNF_TRUE:
        return True
    return not _dpll.sat([frozenset(-l for l in term) for term in dnf])


def evaluate_qbf(inst: QbfInstance, caps: Caps = DEFAULT_CAPS) -> bool:
    """Exact truth value by quantifier expansion.

    The cap bounds the number of quantified variables; instances from the
    encoders need a raised cap.
    """
    total = sum(len(nums) for _, nums in inst.blocks)
    if total > caps.qbf_variables:
        raise CapExceeded("QBF expansion", total, caps.qbf_variables)

    memo: Dict[tuple, bool] = {}

    def solve(blocks, cnf, dnf) -> bool:
        # global unit propagation: a universal unit falsifies the matrix in
        # one of its branches, an existential unit is forced everywhere
        while True:
            if any(not c for c in cnf):
                return False
            unit = next((next(iter(c)) for c in cnf if len(c) == 1), None)
            if unit is None:
                break
            quant = "e"
            for q, nums in blocks:
                if abs(unit) in nums:
                    quant = q
                    break
            if quant == "a":
                return False
            cnf, dnf, dead = _assign(cnf, dnf, unit)
            if dead:
                return False
        # restrict blocks to variables still occurring
        occurring = set()
        for c in cnf:
            occurring.update(abs(l) for l in c)
        if dnf is not _DNF_TRUE:
            occurring.update(abs(l) for t in dnf for l in t)
        blocks = tuple((q, tuple(v for v in nums if v in occurring))
                       for q, nums in blocks)
        blocks = tuple((q, nums) for q, nums in blocks if nums)
        if not blocks:
            return not cnf and dnf is _DNF_TRUE
        if all(q == "e" for q, _ in blocks):
            return _sat_exists(cnf, dnf)
        if all(q == "a" for q, _ in blocks):
            return _valid_forall(cnf, dnf)

        key = (blocks, cnf, dnf)
        hit = memo.get(key)
        if hit is not None:
            return hit

        q, nums = blocks[0]
        rest = blocks[1:]
        outer = set(nums)

        counts: Dict[int, int] = {}
        for c in cnf:
            w = 4 if len(c) <= 2 else 1
            for l in c:
                if abs(l) in outer:
                    counts[abs(l)] = counts.get(abs(l), 0) + w
        if dnf is not _DNF_TRUE:
            for t in dnf:
                w = 4 if len(t) <= 2 else 1
                for l in t:
                    if abs(l) in outer:
                        counts[abs(l)] = counts.get(abs(l), 0) + w
        var = max(outer, key=lambda v: (counts.get(v, 0), -v))
        nums2 = tuple(v for v in nums if v != var)
        nblocks = ((q, nums2),) + rest if nums2 else rest

        results = []
        for lit in (var, -var):
            ncnf, ndnf, dead = _assign(cnf, dnf, lit)
            value = False if dead else solve(nblocks, ncnf, ndnf)
            if q == "e" and value:
                memo[key] = True
                return True
            if q == "a" and not value:
                memo[key] = False
                return False
            results.append(value)
        result = results[0] if q == "a" else False
        memo[key] = result
        return result

    dnf = _DNF_TRUE if inst.dnf is None else inst.dnf
    if dnf is not _DNF_TRUE and not dnf:
        return False
    return solve(inst.blocks, inst.cnf, dnf)


# ---------------------------------------------------------------------------
# Prenex CNF
# ---------------------------------------------------------------------------

def prenex_cnf(inst: QbfInstance) -> QbfInstance:
    """Eliminate the DNF part with one selector variable per term.

    Selector definitions are placed in the innermost existential block
    (appended, or a fresh block when the instance ends universally), which
    preserves the truth value: for any assignment of the original
    variables the selectors can be chosen iff some term holds.
    """
    if inst.dnf is None:
        return inst
    named_blocks = [(q, [inst.names[v - 1] for v in nums])
                    for q, nums in inst.blocks]
    cnf = inst.named_cnf()
    used = set(inst.names)
    selectors = []
    one_of = []
    for i, term in enumerate(inst.named_dnf()):
        name = f"__sel{i}"
        while name in used:
            name = "_" + name
        used.add(name)
        selectors.append(name)
        one_of.append((name, True))
        for (a, pos) in term:
            cnf.append(frozenset([(name, False), (a, pos)]))
    cnf.append(frozenset(one_of))
    if named_blocks and named_blocks[-1][0] == "e":
        named_blocks[-1] = ("e", named_blocks[-1][1] + selectors)
    else:
        named_blocks.append(("e", selectors))
    return build_qbf(named_blocks, cnf, None)


# ---------------------------------------------------------------------------
# QDIMACS / QCIR / DIMACS
# ---------------------------------------------------------------------------

def serialize_qdimacs(inst: QbfInstance, comments: Iterable[str] = ()) -> str:
    """Bit-exact QDIMACS; requires a CNF-only matrix (prenex_cnf first)."""
    if inst.dnf is not None:
        raise RafkitError("qdimacs requires a CNF matrix; call prenex_cnf first")
    lines = [f"c {c}" for c in comments]
    lines += [f"c var {i + 1} = {n}" for i, n in enumerate(inst.names)]
    lines.append(f"p cnf {len(inst.names)} {len(inst.cnf)}")
    for q, nums in inst.blocks:
        lines.append(f"{q} {' '.join(str(v) for v in nums)} 0")
    for clause in inst.cnf:
        lines.append(" ".join(str(l) for l in sorted(clause, key=abs)) + " 0")
    return "\n".join(lines) + "\n"


def parse_qdimacs(text: str) -> QbfInstance:
    """Read QDIMACS, plus an extension: lines starting with ``t`` carry DNF
    terms the same way clause lines carry clauses."""
    names: Dict[int, str] = {}
    nvars = None
    blocks: List[Tuple[str, List[int]]] = []
    clauses: List[List[int]] = []
    terms: List[List[int]] = []
    seen_p = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 5 and parts[1] == "var" and parts[3] == "=":
                names[int(parts[2])] = parts[4]
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InputShapeError(f"line {lineno}: malformed p line")
            nvars = int(parts[2])
            seen_p = True
            continue
        if not seen_p:
            raise InputShapeError(f"line {lineno}: content before p line")
        parts = line.split()
        kind = parts[0]
        if kind in ("e", "a"):
            nums = [int(x) for x in parts[1:]]
            if nums[-1] != 0:
                raise InputShapeError(f"line {lineno}: block not 0-terminated")
            blocks.append((kind, nums[:-1]))
            continue
        if kind == "t":
            nums = [int(x) for x in parts[1:]]
        else:
            nums = [int(x) for x in parts]
        if not nums or nums[-1] != 0:
            raise InputShapeError(f"line {lineno}: clause not 0-terminated")
        (terms if kind == "t" else clauses).append(nums[:-1])
    if nvars is None:
        raise InputShapeError("missing p line")

    def name_of(v: int) -> str:
        return names.get(v, f"v{v}")

    declared = {v for _, nums in blocks for v in nums}
    mentioned = {abs(l) for group in (clauses, terms) for c in group for l in c}
    free = sorted(mentioned - declared)
    named_blocks = [(q, [name_of(v) for v in nums]) for q, nums in blocks]
    if free:  # free variables are outermost-existential by convention
        named_blocks.insert(0, ("e", [name_of(v) for v in free]))
    to_named = lambda rows: [[(name_of(abs(l)), l > 0) for l in row]
                             for row in rows]
    return build_qbf(named_blocks, to_named(clauses),
                     to_named(terms) if terms else None)


def serialize_qcir(inst: QbfInstance) -> str:
    """QCIR-G14 with the CNF/DNF structure kept as gates (no Tseitin)."""
    lines = ["#QCIR-G14"]
    for q, nums in inst.blocks:
        kw = "exists" if q == "e" else "forall"
        lines.append(f"{kw}({', '.join(inst.names[v - 1] for v in nums)})")
    gates = []
    counter = [0]

    def gate(kind, operands):
        counter[0] += 1
        gname = f"__g{counter[0]}"
        gates.append(f"{gname} = {kind}({', '.join(operands)})")
        return gname

    def litstr(l):
        name = inst.names[abs(l) - 1]
        return name if l > 0 else "-" + name

    clause_gates = [gate("or", [litstr(l) for l in sorted(c, key=abs)])
                    for c in inst.cnf]
    parts = []
    if clause_gates or inst.dnf is None:
        parts.append(gate("and", clause_gates))
    if inst.dnf is not None:
        term_gates = [gate("and", [litstr(l) for l in sorted(t, key=abs)])
                      for t in inst.dnf]
        parts.append(gate("or", term_gates))
    out = parts[0] if len(parts) == 1 else gate("and", parts)
    lines.append(f"output({out})")
    lines.extend(gates)
    return "\n".join(lines) + "\n"


def parse_dimacs_cnf(text: str):
    """Plain DIMACS CNF; returns (variable names, clauses of named literals)."""
    inst = parse_qdimacs(text)
    if inst.dnf is not None or any(q == "a" for q, _ in inst.blocks):
        raise InputShapeError("expected a plain CNF")
    return list(inst.names), inst.named_cnf()


def serialize_dimacs_cnf(names: Sequence[str], clauses) -> str:
    index = {n: i + 1 for i, n in enumerate(names)}
    lines = [f"c var {i + 1} = {n}" for i, n in enumerate(names)]
    lines.append(f"p cnf {len(names)} {len(clauses)}")
    for clause in clauses:
        lits = sorted((index[a] if pos else -index[a]) for (a, pos) in clause)
        lines.append(" ".join(str(l) for l in sorted(lits, key=abs)) + " 0")
    return "\n".join(lines) + "\n"


def external_qbf_verdict(inst: QbfInstance) -> Optional[bool]:
    """Run the solver named by $RAF_QBF_SOLVER on the prenex form, if set.

    The solver receives a QDIMACS path and must exit 10 (true) or 20
    (false).  Returns None when the variable is unset.
    """
    solver = os.environ.get(EXTERNAL_SOLVER_ENV)
    if not solver:
        return None
    text = serialize_qdimacs(prenex_cnf(inst))
    with tempfile.NamedTemporaryFile("w", suffix=".qdimacs", delete=False) as fh:
        fh.write(text)
        path = fh.name
    try:
        proc = subprocess.run([solver, path], capture_output=True)
    finally:
        os.unlink(path)
    if proc.returncode == 10:
        return True
    if proc.returncode == 20:
        return False
    raise RafkitError(f"external solver exited with {proc.returncode}")
