import pytest

from rafkit import afsem, rafsem
from rafkit.errors import InputShapeError, RafkitError
from rafkit.model import (AF, And, CAF, RcClass, Semantics, TOP, Var,
                          classify_rc)
from rafkit.qbf import build_qbf, evaluate_qbf
from rafkit.randgen import (rand_af, rand_caf, rand_cnf, rand_cred_disj_input,
                            rand_cred_prop_input, rand_cred_simple_input,
                            rand_qsat2_dnf, rand_qsat3_cnf, rng_for)
from rafkit.rafsem import FILTERED
from rafkit.translate import (CredInstance, af_to_raf, caf_oracle, caf_to_raf,
                              cred_hardness_instance, hardness_instance,
                              twofold_oracle, twofold_to_raf)

S = Semantics


def raf_extension_sets(raf, sigma, maximality="base"):
    return [frozenset(e.members)
            for e in rafsem.enumerate_extensions(raf, sigma,
                                                 maximality=maximality)]


def af_extension_sets(af, sigma):
    return sorted((frozenset(m) for (m, _) in afsem.enumerate_extensions(af, sigma)),
                  key=lambda s: (len(s), tuple(sorted(s))))


def test_af_to_raf_conference(conference):
    sim = af_to_raf(conference.af)
    assert classify_rc(sim) == RcClass.SIMPLE
    assert raf_extension_sets(sim, S.STAB) == [frozenset({"W", "T", "P"})]


def test_af_to_raf_drops_empty_only(nonmonotonic):
    sim = af_to_raf(nonmonotonic.af)
    got = raf_extension_sets(sim, S.ADM)
    assert got == [{"a"}, {"b"}, {"d"}, {"a", "b"}, {"a", "d"}]


def test_af_to_raf_self_attacker():
    af = AF.make(["a"], [("a", "a")])
    sim = af_to_raf(af)
    for sigma in S:
        assert raf_extension_sets(sim, sigma) == []


def test_af_to_raf_equivalence_suite():
    rng = rng_for(101)
    for _ in range(60):
        af = rand_af(rng)
        sim = af_to_raf(af)
        for sigma in S:
            want = [s for s in af_extension_sets(af, sigma) if s]
            assert raf_extension_sets(sim, sigma) == want


def test_caf_to_raf_adm_worked_example(nonmonotonic):
    caf = CAF(nonmonotonic.af, And((Var("a"), Var("b"))))
    sim = caf_to_raf(caf, S.ADM)
    assert sim.semantics == S.ADM
    assert raf_extension_sets(sim.raf, sim.semantics) == [{"a", "b"}]
    assert caf_oracle(caf, S.ADM) == [{"a", "b"}]


def test_caf_to_raf_trivial_constraint_stab(conference):
    caf = CAF(conference.af, TOP)
    sim = caf_to_raf(caf, S.STAB)
    assert raf_extension_sets(sim.raf, sim.semantics) == [{"W", "T", "P"}]


def test_caf_to_raf_pref_worked_example(nonmonotonic):
    caf = CAF(nonmonotonic.af, TOP)
    sim = caf_to_raf(caf, S.PREF)
    assert sim.semantics == S.ADM
    assert raf_extension_sets(sim.raf, sim.semantics) == [{"a", "b"}, {"a", "d"}]


def test_caf_oracle_bot_constraint(conference):
    from rafkit.model import BOT
    caf = CAF(conference.af, BOT)
    for sigma in (S.ADM, S.STAB, S.PREF, S.SEMIST, S.STAG):
        assert caf_oracle(caf, sigma) == []


def test_caf_oracle_stable_with_witness_constraint(conference):
    caf = CAF(conference.af, Var("W"))
    assert caf_oracle(caf, S.STAB) == [{"W", "T", "P"}]


CAF_SEMANTICS = (S.ADM, S.COMP, S.STAB, S.PREF, S.SEMIST, S.STAG)


def test_caf_to_raf_equivalence_suite():
    rng = rng_for(202)
    for _ in range(40):
        caf = rand_caf(rng, n_max=5)
        for sigma in CAF_SEMANTICS:
            sim = caf_to_raf(caf, sigma)
            want = [s for s in caf_oracle(caf, sigma) if s]
            got = raf_extension_sets(sim.raf, sim.semantics)
            assert got == want, (caf, sigma)


def test_twofold_worked_examples(no_stable):
    af = no_stable.af
    got = twofold_oracle(af, {"c", "d", "e"}, S.CONF, S.PREF)
    assert frozenset({"c"}) in got
    got = twofold_oracle(af, {"a", "b", "c"}, S.ADM, S.STAB)
    assert frozenset({"a"}) in got and frozenset({"b"}) in got
    full = twofold_oracle(af, set(af.arguments), S.ADM, S.STAB)
    both = [s for s in af_extension_sets(af, S.ADM)
            if afsem.satisfies(af, s, S.STAB)]
    assert got is not None and full == sorted(
        both, key=lambda s: (len(s), tuple(sorted(s))))


def test_twofold_to_raf_worked_example(no_stable):
    sim = twofold_to_raf(no_stable.af, {"a", "b", "c"})
    got = raf_extension_sets(sim, S.ADM)
    assert frozenset({"a"}) in got and frozenset({"b"}) in got


def test_twofold_empty_shrinking(no_stable):
    sim = twofold_to_raf(no_stable.af, set())
    for sigma in S:
        want = [s for s in twofold_oracle(no_stable.af, set(), sigma, S.STAB) if s]
        assert raf_extension_sets(sim, sigma) == want


def test_twofold_equivalence_suite():
    rng = rng_for(303)
    for _ in range(50):
        af = rand_af(rng)
        members = list(af.arguments)
        shrinking = {a for a in members if rng.random() < 0.5}
        sim = twofold_to_raf(af, shrinking)
        for sigma in S:
            want = [s for s in twofold_oracle(af, shrinking, sigma, S.STAB) if s]
            assert raf_extension_sets(sim, sigma) == want, (af, shrinking, sigma)


def test_prop_generator_on_known_valid_dnf():
    inst = build_qbf(
        [("e", ["x1", "x2"]), ("a", ["y"])],
        cnf=[],
        dnf=[[("x1", True), ("x2", False), ("y", True)],
             [("x1", True), ("x2", False), ("y", False)]])
    raf = hardness_instance(inst, RcClass.PROPOSITIONAL)
    assert classify_rc(raf) == RcClass.PROPOSITIONAL
    conds = {a: raf.conditions(a) for a in raf.af.arguments}
    assert (conds["x1"] == conds["x2"] == conds["x1__p"] == conds["x2__p"])
    assert len(conds["x1"]) == 2
    assert rafsem.is_extension(raf, {"x1", "x2__p"}, S.CONF) is True
    assert rafsem.cons(raf, S.CONF) is True


def test_simple_generator_unsat_input():
    names = ["x"]
    clauses = [frozenset([("x", True)]), frozenset([("x", False)])]
    raf = hardness_instance((names, clauses), RcClass.SIMPLE)
    assert classify_rc(raf) == RcClass.SIMPLE
    assert rafsem.cons(raf, S.CONF) is False


def test_disj_generator_trivial_inner_block():
    inst = build_qbf([("e", ["x"]), ("a", ["y"]), ("e", ["z"])],
                     cnf=[[("x", True), ("y", True), ("z", True)]])
    raf = hardness_instance(inst, RcClass.DISJUNCTIVE)
    assert classify_rc(raf) == RcClass.DISJUNCTIVE
    assert evaluate_qbf(inst) is True
    assert rafsem.cons(raf, S.CONF) is True


def test_generator_rejects_wrong_shape():
    cnf_inst = build_qbf([("e", ["x"]), ("a", ["y"])],
                         cnf=[[("x", True), ("y", True)]])
    with pytest.raises(InputShapeError):
        hardness_instance(cnf_inst, RcClass.PROPOSITIONAL)
    lonely = build_qbf([("e", ["x1", "x2"]), ("a", ["y"])],
                       dnf=[[("x1", True), ("x2", True)], [("x1", True), ("y", True)]])
    with pytest.raises(InputShapeError):
        hardness_instance(lonely, RcClass.PROPOSITIONAL)


@pytest.mark.parametrize("cls,gen,seed", [
    (RcClass.SIMPLE, None, 11),
    (RcClass.PROPOSITIONAL, rand_qsat2_dnf, 12),
    (RcClass.TIGHT, lambda rng: rand_qsat2_dnf(rng, three_dnf=False), 13),
    (RcClass.DISJUNCTIVE, rand_qsat3_cnf, 14),
])
def test_hardness_generator_equivalence_sample(cls, gen, seed):
    rng = rng_for(seed)
    for _ in range(40):
        if cls == RcClass.SIMPLE:
            names, clauses = rand_cnf(rng)
            source = (names, clauses)
            want = any(
                all(any((bits >> names.index(a) & 1) == pos for (a, pos) in c)
                    for c in clauses)
                for bits in range(1 << len(names)))
        else:
            source = gen(rng)
            want = evaluate_qbf(source)
        raf = hardness_instance(source, cls)
        assert rafsem.cons(raf, S.CONF) == want, source


def test_cred_simple_known_instances():
    valid = build_qbf([("a", ["y"]), ("e", ["z"])],
                      cnf=[[("y", True), ("z", True)],
                           [("y", False), ("z", True)]])
    assert evaluate_qbf(valid) is True
    out = cred_hardness_instance(valid, RcClass.SIMPLE)
    assert rafsem.cred(out.raf, S.SEMIST, out.query) is False
    assert rafsem.cred(out.raf, S.STAG, out.query) is False

    invalid = build_qbf([("a", ["y"]), ("e", ["z"])],
                        cnf=[[("y", True), ("z", True)], [("z", False), ("y", True)],
                             [("y", False), ("z", True)], [("z", False), ("y", False)]])
    assert evaluate_qbf(invalid) is False
    out = cred_hardness_instance(invalid, RcClass.SIMPLE)
    assert rafsem.cred(out.raf, S.SEMIST, out.query) is True
    assert rafsem.cred(out.raf, S.STAG, out.query) is True


@pytest.mark.parametrize("cls,gen,seed,n", [
    (RcClass.SIMPLE, rand_cred_simple_input, 21, 25),
    (RcClass.PROPOSITIONAL, rand_cred_prop_input, 22, 25),
    (RcClass.DISJUNCTIVE, rand_cred_disj_input, 23, 12),
])
def test_cred_generator_equivalence_sample(cls, gen, seed, n):
    rng = rng_for(seed)
    for _ in range(n):
        inst = gen(rng)
        want = evaluate_qbf(inst)
        out = cred_hardness_instance(inst, cls)
        maximality = "base" if cls == RcClass.SIMPLE else FILTERED
        for sigma in (S.SEMIST, S.STAG):
            got = not rafsem.cred(out.raf, sigma, out.query,
                                  maximality=maximality)
            assert got == want, (inst, sigma)
