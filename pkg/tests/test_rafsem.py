import pytest

from rafkit import afsem, rafsem
from rafkit.errors import RafkitError
from rafkit.logic import classical_consistent
from rafkit.model import ASP, CLASSICAL, Semantics, formula_vars
from rafkit.parsing import parse_raf
from rafkit.rafsem import (FILTERED, cons, cons_shortcut, cred,
                           enumerate_extensions, instance_consistent,
                           is_extension, rejection_instance)

S = Semantics


def member_sets(exts):
    return [set(e.members) for e in exts]


def test_rejection_instance_research_week(research_week):
    inst = rejection_instance(research_week, {"Re", "W", "T", "P"})
    assert inst.mode == CLASSICAL
    # T and P contribute the same formula, so three distinct conditions
    assert len(inst.formulas) == 3
    fixed = dict(inst.fixed)
    assert fixed == {"noS": False, "Te": False, "Re": True, "W": True,
                     "T": True, "P": True}
    assert instance_consistent(inst) is False
    assert classical_consistent(inst.formulas, fixed) is False


def test_rejection_instance_empty_candidate(research_week):
    inst = rejection_instance(research_week, set())
    assert inst.formulas == frozenset()
    assert instance_consistent(inst) is True


def test_rejection_instance_nonmonotonic_program(nonmonotonic):
    inst = rejection_instance(nonmonotonic, {"d"})
    assert inst.mode == ASP
    rendered = sorted(r.render() for r in inst.program.rules)
    assert rendered == [":- a", ":- b", ":- c", ":- not a, not b", "d"]
    assert instance_consistent(inst) is False


def test_research_week_stable_extension(research_week):
    assert is_extension(research_week, {"Re", "W", "T", "P"}, S.STAB) is True
    assert member_sets(enumerate_extensions(research_week, S.STAB)) == [
        {"Re", "W", "T", "P"}]


def test_empty_set_is_never_an_extension(research_week, nonmonotonic):
    for raf in (research_week, nonmonotonic):
        for sigma in S:
            assert is_extension(raf, set(), sigma) is False


def test_nonmonotonic_admissible_extensions(nonmonotonic):
    got = member_sets(enumerate_extensions(nonmonotonic, S.ADM))
    assert got == [{"d"}, {"a", "b"}]
    assert is_extension(nonmonotonic, {"a", "d"}, S.ADM) is False
    inst = rejection_instance(nonmonotonic, {"a", "d"})
    assert instance_consistent(inst) is True  # answer set {a, d}


def test_cons(nonmonotonic, research_week):
    assert cons(nonmonotonic, S.ADM) is True
    assert cons(research_week, S.STAB) is True
    top = parse_raf("arg(a). rc(a): true.")
    for sigma in S:
        assert cons(top, sigma) is False


def test_cred(nonmonotonic):
    assert cred(nonmonotonic, S.ADM, "a") is True
    assert cred(nonmonotonic, S.ADM, "c") is False
    with pytest.raises(RafkitError):
        cred(nonmonotonic, S.ADM, "zz")


def test_extensions_subset_of_base_extensions(nonmonotonic, research_week):
    for raf in (nonmonotonic, research_week):
        for sigma in S:
            base = {frozenset(m) for (m, _)
                    in afsem.enumerate_extensions(raf.af, sigma)}
            ours = {frozenset(e.members)
                    for e in enumerate_extensions(raf, sigma)}
            assert ours <= base - {frozenset()}


def test_enumeration_order_is_cardinality_then_lex():
    raf = parse_raf("arg(a). arg(b). rc(a): false. rc(b): false.")
    got = [e.members for e in enumerate_extensions(raf, S.CONF)]
    assert got == [("a",), ("b",), ("a", "b")]


def test_extension_carries_range(research_week):
    (ext,) = enumerate_extensions(research_week, S.STAB)
    assert set(ext.range) == set(research_week.af.arguments)


def test_shortcut_sound_direction(nonmonotonic):
    for sigma in (S.SEMIST, S.STAG):
        if cons(nonmonotonic, sigma):
            assert cons_shortcut(nonmonotonic, sigma) is True


def test_shortcut_can_overapproximate():
    # {e} is admissible and self-rejecting, but the only range-maximal
    # admissible set {e, a} is consistent, so existence fails while the
    # shortcut accepts.
    raf = parse_raf("arg(e). arg(a). rc(e): a.")
    assert cons_shortcut(raf, S.SEMIST) is True
    assert cons(raf, S.SEMIST) is False


def test_filtered_maximality_differs_from_base():
    raf = parse_raf("arg(e). arg(a). rc(e): a.")
    assert member_sets(enumerate_extensions(raf, S.SEMIST)) == []
    assert member_sets(
        enumerate_extensions(raf, S.SEMIST, maximality=FILTERED)) == [{"e"}]
