import itertools

import pytest
from hypothesis import given, settings, strategies as st

from rafkit.config import Caps
from rafkit.errors import CapExceeded, RafkitError
from rafkit.logic import (classical_consistent, clause_of, evaluate,
                          formula_clauses, negated_cnf_formula, partial_eval,
                          tseitin)
from rafkit.model import (And, BOT, Implies, Not, Or, TOP, Var, formula_vars,
                          iff)
from rafkit.parsing import parse_raf


def fml(text):
    raf = parse_raf(f"arg(z9). rc(z9): {text}.")
    (cond,) = raf.conditions("z9")
    return cond


def test_evaluate_research_week_writing_condition():
    cond = fml("(~p_hw | ~p_dl) & (p_dl -> p_hw)")
    assert evaluate(cond, {"p_hw": True, "p_dl": True}) is False
    assert evaluate(cond, {"p_hw": False, "p_dl": False}) is True


def test_evaluate_constants_and_unassigned():
    assert evaluate(TOP, {}) is True
    with pytest.raises(RafkitError, match="unassigned"):
        evaluate(Var("x"), {})


def test_evaluate_negated_dnf_pair():
    # two clauses blocking the terms x1 & ~x2 & y and x1 & ~x2 & ~y
    d = fml("(~x1 | x2 | ~y) & (~x1 | x2 | y)")
    assert evaluate(d, {"x1": True, "x2": False, "y": True}) is False
    assert evaluate(d, {"x1": True, "x2": False, "y": False}) is False
    assert evaluate(d, {"x1": False, "x2": False, "y": True}) is True


def test_consistency_research_week_rejection():
    conds = [fml("(~p_hw | ~p_dl) & (p_dl -> p_hw)"), fml("p_dl"),
             fml("~p_exp & (p_hw -> p_exp)")]
    assert classical_consistent(conds, {"noS": False, "Te": False}) is False
    assert classical_consistent(conds[1:], {}) is True


def test_consistency_empty_set():
    assert classical_consistent([], {}) is True


def test_consistency_residual_contradiction():
    # fixing the argument pattern leaves y & ~y
    d = fml("(~x1 | x2 | ~y) & (~x1 | x2 | y)")
    fixed = {"x1": True, "x2p": True, "x1p": False, "x2": False}
    assert classical_consistent([d], fixed) is False


def test_consistency_cap():
    f = Or(tuple(Var(f"v{i}") for i in range(6)))
    with pytest.raises(CapExceeded):
        classical_consistent([f], {}, Caps(free_variables=5))


def test_consistency_definition_extraction_keeps_exponent_small():
    # 30 defined variables would blow the brute-force cap if branched over
    conjuncts = [iff(Var(f"d{i}"), Var("x")) for i in range(30)]
    f = And(tuple(conjuncts + [Var("d0"), Not(Var("x"))]))
    assert classical_consistent([f], {}, Caps(free_variables=4)) is False
    g = And(tuple(conjuncts + [Var("d7")]))
    assert classical_consistent([g], {}, Caps(free_variables=4)) is True


def test_clause_of_shapes():
    assert clause_of(fml("a | ~b")) == frozenset({("a", True), ("b", False)})
    assert clause_of(fml("false")) == frozenset()
    assert clause_of(fml("a & b")) is None


def test_formula_clauses_equivalence():
    f = fml("(a -> b) & ~(c & a)")
    clauses = formula_clauses(f)
    for bits in itertools.product([False, True], repeat=3):
        nu = dict(zip("abc", bits))
        want = evaluate(f, nu)
        got = all(any(nu[v] == pos for (v, pos) in c) for c in clauses)
        assert want == got


names = st.sampled_from(["a", "b", "c", "d"])


@st.composite
def formulas(draw, depth=3):
    if depth == 0:
        return draw(st.one_of(st.builds(Var, names), st.sampled_from([TOP, BOT])))
    sub = formulas(depth=depth - 1)
    return draw(st.one_of(
        st.builds(Var, names),
        st.builds(Not, sub),
        st.builds(lambda a, b: And((a, b)), sub, sub),
        st.builds(lambda a, b: Or((a, b)), sub, sub),
        st.builds(Implies, sub, sub),
    ))


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_partial_eval_agrees_with_evaluate(f):
    names_ = sorted(formula_vars(f))
    for bits in itertools.product([False, True], repeat=len(names_)):
        nu = dict(zip(names_, bits))
        folded = partial_eval(f, nu)
        assert folded in (TOP, BOT)
        assert (folded == TOP) == evaluate(f, nu)


@settings(max_examples=150, deadline=None)
@given(formulas())
def test_tseitin_projection_preserves_models(f):
    clauses, aux_map, out = tseitin(f)
    names_ = sorted(formula_vars(f))
    if isinstance(out, bool):
        for bits in itertools.product([False, True], repeat=len(names_)):
            assert evaluate(f, dict(zip(names_, bits))) == out
        return
    aux = sorted(aux_map)
    for bits in itertools.product([False, True], repeat=len(names_)):
        nu = dict(zip(names_, bits))
        extensions = []
        for abits in itertools.product([False, True], repeat=len(aux)):
            full = dict(nu, **dict(zip(aux, abits)))
            if all(any(full[v] == pos for (v, pos) in c) for c in clauses):
                extensions.append(full)
        # full biconditionals force exactly one extension
        assert len(extensions) == 1
        assert extensions[0][out[0]] == (evaluate(f, nu) == out[1])


def test_tseitin_simple_atom_has_no_aux():
    clauses, aux_map, out = tseitin(Var("a"))
    assert clauses == [] and aux_map == {} and out == ("a", True)


def test_tseitin_negated_conjunction_shape():
    clauses, aux_map, out = tseitin(Not(And((Var("a"), Var("b")))))
    assert len(aux_map) == 1
    assert 3 <= len(clauses) <= 4
    assert out[1] is False


def test_negated_cnf_formula():
    f = negated_cnf_formula([frozenset([("a", True)]),
                             frozenset([("a", False), ("b", True)])])
    assert evaluate(f, {"a": True, "b": True}) is False
    assert evaluate(f, {"a": False, "b": True}) is True


@settings(max_examples=100, deadline=None)
@given(formulas())
def test_total_consistency_matches_evaluate(f):
    names_ = sorted(formula_vars(f))
    for bits in itertools.product([False, True], repeat=len(names_)):
        nu = dict(zip(names_, bits))
        assert classical_consistent([f], nu) == evaluate(f, nu)
