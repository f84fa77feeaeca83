import pytest
from hypothesis import given, settings, strategies as st

from rafkit import afsem
from rafkit.errors import ValidationError
from rafkit.model import AF
from rafkit.qbf import build_qbf
from rafkit.td import (Graph, TreeDecomposition, bag_projection, heuristic_td,
                       normalize_td, primal_graph, read_pace, validate_td,
                       write_pace)

RESEARCH_WEEK_EDGES = {
    ("T", "noS"), ("P", "noS"), ("W", "noS"), ("Re", "Te"), ("Te", "W"),
    ("p_dl", "p_hw"), ("p_exp", "p_hw"),
    ("W", "p_hw"), ("W", "p_dl"), ("T", "p_dl"), ("P", "p_dl"),
    ("Te", "p_exp"), ("Re", "p_exp"), ("Re", "p_hw"),
}


def norm(pairs):
    return {(u, v) if u < v else (v, u) for (u, v) in pairs}


def research_week_td():
    td = TreeDecomposition()
    root = td.add_node({"noS", "P", "p_dl"})
    td.add_node({"T", "noS", "p_dl"}, root)
    right = td.add_node({"noS", "W", "p_dl"}, root)
    n4 = td.add_node({"W", "p_dl", "p_hw"}, right)
    n5 = td.add_node({"W", "p_hw", "Te"}, n4)
    td.add_node({"Te", "p_hw", "p_exp", "Re"}, n5)
    return td


def test_research_week_primal_graph(research_week):
    g = primal_graph(research_week)
    assert g.vertices == set(research_week.af.arguments) | {"p_dl", "p_hw", "p_exp"}
    assert g.edges == norm(RESEARCH_WEEK_EDGES)


def test_attackless_af_primal_graph():
    g = primal_graph(AF.make(["a", "b"]))
    assert g.edges == frozenset()


def test_cnf_primal_graph_is_clause_cooccurrence():
    inst = build_qbf([("e", ["x", "y", "z"])],
                     cnf=[[("x", True), ("y", True)], [("y", True), ("z", True)]])
    g = primal_graph(inst)
    assert g.edges == norm({("x", "y"), ("y", "z")})


def test_printed_decomposition_validates_with_width_3(research_week):
    g = primal_graph(research_week)
    assert validate_td(g, research_week_td()) == 3


def test_heuristic_on_research_week_graph(research_week):
    g = primal_graph(research_week)
    td = heuristic_td(g)
    assert validate_td(g, td) <= 3


def test_heuristic_edge_cases():
    edgeless = Graph.make([f"v{i}" for i in range(5)], [])
    td = heuristic_td(edgeless)
    assert validate_td(edgeless, td) == 0
    clique = Graph.make("abcde", [(x, y) for x in "abcde" for y in "abcde" if x < y])
    assert validate_td(clique, heuristic_td(clique)) == 4


def test_min_fill_on_trees_gives_width_1():
    g = Graph.make("abcdefg", [("a", "b"), ("a", "c"), ("b", "d"), ("b", "e"),
                               ("c", "f"), ("c", "g")])
    assert validate_td(g, heuristic_td(g)) == 1


def test_validation_errors_name_witnesses():
    g = Graph.make("ab", [("a", "b")])
    td = TreeDecomposition()
    r = td.add_node({"a"})
    td.add_node({"b"}, r)
    with pytest.raises(ValidationError, match=r"edge \(a,b\)"):
        validate_td(g, td)
    td2 = TreeDecomposition()
    td2.add_node({"a"})
    with pytest.raises(ValidationError, match="vertex 'b'"):
        validate_td(g, td2)
    # broken connectivity
    td3 = TreeDecomposition()
    r = td3.add_node({"a", "b"})
    m = td3.add_node({"b"}, r)
    td3.add_node({"a", "b"}, m)
    with pytest.raises(ValidationError, match="connectivity"):
        validate_td(g, td3)


def test_single_bag_width():
    g = Graph.make("abc", [("a", "b")])
    td = TreeDecomposition()
    td.add_node({"a", "b", "c"})
    assert validate_td(g, td) == 2


def test_normalize_binarizes_star():
    td = TreeDecomposition()
    root = td.add_node({"a", "b"})
    for _ in range(5):
        td.add_node({"a", "b"}, root)
    out = normalize_td(td)
    assert all(len(ks) <= 2 for ks in out.children.values())
    assert out.width() == td.width()


def test_normalize_preserves_validity_and_last(research_week):
    g = primal_graph(research_week)
    td = normalize_td(research_week_td(), research_week)
    assert validate_td(g, td) == 3
    last = td.last_map()
    assert set(last) == g.vertices
    # Re occurs in exactly one bag, the deep leaf
    assert td.bags[last["Re"]] == frozenset({"Te", "p_hw", "p_exp", "Re"})


def test_normalize_splits_crowded_nodes(research_week):
    td = TreeDecomposition()
    td.add_node(primal_graph(research_week).vertices)  # everything in one bag
    out = normalize_td(td, research_week, rc_limit=2)
    charged = [n for n in out.postorder() if out.charged(n)]
    assert len(charged) == 2  # 4 distinct conditions, <= 2 per node
    assert all(len(out.charged(n)) <= 2 for n in out.postorder())


def test_charge_covers_every_host_pair(research_week):
    g = primal_graph(research_week)
    td = normalize_td(heuristic_td(g), research_week)
    charged = set()
    for n in td.postorder():
        for cond in td.charged(n):
            for a in research_week.af.arguments:
                if a in td.bags[n] and cond in research_week.conditions(a):
                    charged.add((a, cond))
    want = {(a, c) for a in research_week.af.arguments
            for c in research_week.conditions(a)}
    assert charged == want


def test_bag_projection(research_week):
    td = research_week_td()
    nodes = {frozenset(b) for b in td.bags.values()}
    assert frozenset({"W", "p_dl", "p_hw"}) in nodes
    for n, bag in td.bags.items():
        proj = bag_projection(research_week, td, n)
        if bag == frozenset({"W", "p_dl", "p_hw"}):
            assert proj.arguments == ("W",)
            assert proj.attacks == ()
            assert len(proj.conditions) == 1  # the writing condition
        if bag == frozenset({"noS", "P", "p_dl"}):
            assert ("noS", "P") in proj.attacks
        if not set(proj.arguments):
            assert proj.conditions == ()


def test_pace_round_trip(research_week):
    g = primal_graph(research_week)
    td = heuristic_td(g)
    text = write_pace(td, g)
    again = read_pace(text)
    assert validate_td(g, again) == validate_td(g, td)


@st.composite
def random_graphs(draw):
    n = draw(st.integers(1, 8))
    vs = [f"v{i}" for i in range(n)]
    edges = [(x, y) for i, x in enumerate(vs) for y in vs[i + 1:]
             if draw(st.booleans())]
    return Graph.make(vs, edges)


@settings(max_examples=200, deadline=None)
@given(random_graphs(), st.sampled_from(["min-fill", "min-degree"]))
def test_heuristic_always_validates(g, heuristic):
    td = heuristic_td(g, heuristic)
    validate_td(g, td)


@settings(max_examples=100, deadline=None)
@given(random_graphs())
def test_normalize_keeps_width_and_unique_last(g):
    td = heuristic_td(g)
    out = normalize_td(td)
    assert validate_td(g, out) == validate_td(g, td)
    last = out.last_map()
    assert set(last) == g.vertices


def test_raf_primal_width_at_least_af_width(research_week):
    g_full = primal_graph(research_week)
    g_af = primal_graph(research_week.af)
    w_full = validate_td(g_full, heuristic_td(g_full))
    w_af = validate_td(g_af, heuristic_td(g_af))
    assert w_af <= w_full
