import pytest
from hypothesis import given, settings, strategies as st

from rafkit.asp import (Program, answer_sets, asp_consistent,
                        dependency_digraph, gl_reduct, is_answer_set,
                        is_tight, justified_model_check, satisfies)
from rafkit.errors import RafkitError
from rafkit.model import Rule


def R(head=(), pos=(), neg=()):
    return Rule.make(head, pos, neg)


def test_gl_reduct_drops_blocked_rules():
    p = Program.make([R(pos=["a"], neg=[]), R(neg=["a", "b"])])
    red = gl_reduct(p, {"a"})
    assert red.rules == frozenset([R(pos=["a"])])


def test_gl_reduct_identity_on_negation_free():
    p = Program.make([R(["x"], ["y"]), R(["y"])])
    assert gl_reduct(p, {"x"}) == p
    assert gl_reduct(p, set()) == p


def test_gl_reduct_choice_pair():
    p = Program.make([R(["x"], neg=["y"]), R(["y"], neg=["x"])])
    assert gl_reduct(p, {"x"}).rules == frozenset([R(["x"])])


def test_answer_set_choice_pair():
    p = Program.make([R(["x"], neg=["y"]), R(["y"], neg=["x"])])
    assert is_answer_set(p, {"x"}) is True
    assert is_answer_set(p, {"y"}) is True
    assert is_answer_set(p, {"x", "y"}) is False
    assert is_answer_set(p, set()) is False


def test_answer_set_empty_program():
    assert is_answer_set(Program.make([]), set()) is True


def test_answer_set_disjunctive_minimality():
    p = Program.make([R(["a", "b"])])
    assert is_answer_set(p, {"a", "b"}) is False
    assert is_answer_set(p, {"a"}) is True


def test_consistency_falsum():
    assert asp_consistent(Program.make([R()])) is False


def test_rejection_program_for_pair_is_consistent():
    # conditions of {a, d} plus facts and constraints: answer set {a, d}
    p = Program.make([
        R(pos=["a"]),                 # condition of b is not active here
        R(neg=["a", "b"]),            # condition of d
        R(["a"]), R(["d"]),           # facts
        R(pos=["b"]), R(pos=["c"]),   # constraints
    ])
    # condition of b excluded: programs of the active members only
    q = Program.make([
        R(neg=["a", "b"]),
        R(["a"]), R(["d"]),
        R(pos=["b"]), R(pos=["c"]),
    ])
    assert asp_consistent(q, forced={"a", "d"}, excluded={"b", "c"}) is True
    assert answer_sets(q, forced={"a", "d"}, excluded={"b", "c"}) == [{"a", "d"}]
    assert asp_consistent(p, forced={"a", "d"}, excluded={"b", "c"}) is False


def test_rejection_program_for_singleton_d_is_inconsistent():
    p = Program.make([
        R(neg=["a", "b"]),
        R(["d"]),
        R(pos=["a"]), R(pos=["b"]), R(pos=["c"]),
    ])
    assert asp_consistent(p, forced={"d"}, excluded={"a", "b", "c"}) is False


def test_tightness():
    assert is_tight(Program.make([R(["x"], ["y"]), R(["y"])])) is True
    assert is_tight(Program.make([])) is True
    assert is_tight(Program.make([R(["x"], ["x"])])) is False
    assert is_tight(Program.make([R(["x"], ["y"]), R(["y"], ["x"])])) is False


def test_dependency_digraph_edges():
    _, edges = dependency_digraph(Program.make([R(["x"], ["y"], ["z"])]))
    assert edges == {("x", "y")}


def test_justified_model_check_cases():
    assert justified_model_check(Program.make([R(["x"], neg=["y"])]), {"x"}) is True
    assert justified_model_check(Program.make([R(["x"])]), set()) is False
    assert justified_model_check(Program.make([R(["a", "b"])]), {"a"}) is True
    with pytest.raises(RafkitError, match="tight"):
        justified_model_check(Program.make([R(["x"], ["x"])]), {"x"})


def test_justified_mismatch_on_disjunctive_heads():
    # supportedness is weaker than minimality once heads are disjunctive
    p = Program.make([R(["a", "b"]), R(neg=["a"]), R(neg=["b"])])
    assert justified_model_check(p, {"a", "b"}) is True
    assert is_answer_set(p, {"a", "b"}) is False


atoms = st.sampled_from(["p", "q", "r", "s"])


@st.composite
def normal_tight_programs(draw):
    """Unit-head programs whose positive dependencies follow a fixed order."""
    order = ["p", "q", "r", "s"]
    rules = []
    for _ in range(draw(st.integers(0, 5))):
        hi = draw(st.integers(0, 3))
        head = [order[hi]]
        if draw(st.booleans()):
            head = []
        lower = order[:hi] if head else order
        pos = draw(st.lists(st.sampled_from(lower), max_size=2)) if lower else []
        neg = draw(st.lists(atoms, max_size=2))
        rules.append(R(head, pos, neg))
    return Program.make(rules)


@settings(max_examples=200, deadline=None)
@given(normal_tight_programs(), st.sets(atoms))
def test_justified_agrees_with_answer_sets_on_tight_normal(p, m):
    m = frozenset(m) & p.atoms()
    assert justified_model_check(p, m) == is_answer_set(p, m)


@settings(max_examples=150, deadline=None)
@given(normal_tight_programs(), st.sets(atoms))
def test_answer_set_implies_model(p, m):
    if is_answer_set(p, m):
        assert satisfies(p, m)


@settings(max_examples=100, deadline=None)
@given(normal_tight_programs(), st.sets(atoms))
def test_negation_free_reduct_is_identity(p, m):
    stripped = Program.make([R(r.head, r.pos) for r in p.rules])
    assert gl_reduct(stripped, m) == stripped
