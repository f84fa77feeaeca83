"""Primal graphs, heuristic tree decompositions, validation, normalization.

Normalization produces the shape the encoders rely on: at most two
children per node, an intersection node under every join so that each
vertex has a unique topmost occurrence (its ``last`` node), and a charge
map that assigns every (host, rejection condition) pair to one node whose
bag covers it, split over bag copies so no node carries more than
width+1 conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import ValidationError
from .model import AF, RAF, condition_vars


@dataclass(frozen=True)
class Graph:
    vertices: frozenset
    edges: frozenset  # of 2-tuples (u, v) with u < v

    @staticmethod
    def make(vertices, edges) -> "Graph":
        vs = frozenset(vertices)
        es = set()
        for (u, v) in edges:
            if u == v:
                continue  # self-loops carry no information here
            es.add((u, v) if u < v else (v, u))
        return Graph(vs, frozenset(es))

    def neighbors(self) -> Dict[str, set]:
        adj = {v: set() for v in self.vertices}
        for (u, v) in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


def primal_graph(obj) -> Graph:
    """Primal graph of an AF, a RAF, or a QBF instance's matrix."""
    from .qbf import QbfInstance

    if isinstance(obj, RAF):
        vertices = set(obj.af.arguments) | obj.condition_atoms()
        edges = set(obj.af.attacks)
        for a in obj.af.arguments:
            for cond in obj.conditions(a):
                cvars = condition_vars(cond)
                edges.update((x, y) for x in cvars for y in cvars if x < y)
                edges.update((a, v) for v in cvars if v != a)
        return Graph.make(vertices, edges)
    if isinstance(obj, AF):
        return Graph.make(obj.arguments, obj.attacks)
    if isinstance(obj, QbfInstance):
        vertices = set()
        edges = set()
        groups = list(obj.named_cnf()) + list(obj.named_dnf() or [])
        for group in groups:
            names = sorted({a for (a, _) in group})
            vertices.update(names)
            edges.update((x, y) for x in names for y in names if x < y)
        vertices.update(obj.names)
        return Graph.make(vertices, edges)
    raise TypeError(f"no primal graph for {type(obj).__name__}")


class TreeDecomposition:
    """Rooted tree of bags.  Nodes are integer ids."""

    def __init__(self):
        self.bags: Dict[int, frozenset] = {}
        self.children: Dict[int, List[int]] = {}
        self.root: Optional[int] = None
        self.charges: Optional[Dict[int, tuple]] = None  # node -> conditions
        self._next = 0

    def add_node(self, bag, parent: Optional[int] = None) -> int:
        node = self._next
        self._next += 1
        self.bags[node] = frozenset(bag)
        self.children[node] = []
        if parent is None:
            if self.root is not None:
                raise ValidationError("tree decomposition already has a root")
            self.root = node
        else:
            self.children[parent].append(node)
        return node

    def parent_map(self) -> Dict[int, Optional[int]]:
        parent = {self.root: None}
        for node, kids in self.children.items():
            for k in kids:
                parent[k] = node
        return parent

    def postorder(self) -> List[int]:
        out: List[int] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            out.append(node)
            stack.extend(self.children[node])
        out.reverse()
        return out

    def width(self) -> int:
        return max(len(b) for b in self.bags.values()) - 1

    def charged(self, node: int) -> tuple:
        if self.charges is None:
            return ()
        return self.charges.get(node, ())

    def last_map(self) -> Dict[str, int]:
        """Vertex -> unique topmost node containing it.

        Requires the normalized shape: the parent of a vertex's topmost
        node must have exactly one child.
        """
        parent = self.parent_map()
        tops: Dict[str, int] = {}
        for node in self.postorder():
            for v in self.bags[node]:
                p = parent[node]
                if p is None or v not in self.bags[p]:
                    if v in tops:
                        raise ValidationError(
                            f"vertex {v!r} has two topmost occurrences "
                            f"(nodes {tops[v]} and {node}); not connected?")
                    tops[v] = node
        for v, node in tops.items():
            p = parent[node]
            if p is not None and len(self.children[p]) != 1:
                raise ValidationError(
                    f"vertex {v!r}: topmost node {node} hangs under a join; "
                    "normalize the decomposition first")
        return tops

    def copy(self) -> "TreeDecomposition":
        td = TreeDecomposition()
        td.bags = dict(self.bags)
        td.children = {n: list(ks) for n, ks in self.children.items()}
        td.root = self.root
        td.charges = None if self.charges is None else dict(self.charges)
        td._next = self._next
        return td


def validate_td(graph: Graph, td: TreeDecomposition) -> int:
    """Check the three decomposition conditions; returns the width."""
    if td.root is None or not td.bags:
        raise ValidationError("empty tree decomposition")
    covered = set()
    for bag in td.bags.values():
        covered |= bag
    missing = graph.vertices - covered
    if missing:
        raise ValidationError(f"vertex {sorted(missing)[0]!r} in no bag")
    extraneous = covered - graph.vertices
    if extraneous:
        raise ValidationError(f"bag vertex {sorted(extraneous)[0]!r} "
                              "is not a graph vertex")
    for (u, v) in sorted(graph.edges):
        if not any(u in bag and v in bag for bag in td.bags.values()):
            raise ValidationError(f"edge ({u},{v}) is in no bag")
    # connectivity: the nodes containing each vertex form a subtree
    parent = td.parent_map()
    for v in sorted(graph.vertices):
        holding = [n for n, bag in td.bags.items() if v in bag]
        tops = [n for n in holding
                if parent[n] is None or v not in td.bags[parent[n]]]
        if len(tops) > 1:
            raise ValidationError(
                f"vertex {v!r} violates connectivity (components at nodes "
                f"{sorted(tops)})")
    return td.width()


# ---------------------------------------------------------------------------
# Heuristic construction
# ---------------------------------------------------------------------------

def _elimination_order(graph: Graph, heuristic: str) -> List[Tuple[str, frozenset]]:
    adj = {v: set(ns) for v, ns in graph.neighbors().items()}

    def fill_count(v) -> int:
        ns = sorted(adj[v])
        return sum(1 for i, x in enumerate(ns) for y in ns[i + 1:]
                   if y not in adj[x])

    order = []
    while adj:
        if heuristic == "min-fill":
            v = min(adj, key=lambda u: (fill_count(u), u))
        elif heuristic == "min-degree":
            v = min(adj, key=lambda u: (len(adj[u]), u))
        else:
            raise ValidationError(f"unknown heuristic {heuristic!r}")
        ns = sorted(adj[v])
        order.append((v, frozenset([v, *ns])))
        for i, x in enumerate(ns):
            for y in ns[i + 1:]:
                adj[x].add(y)
                adj[y].add(x)
        for x in ns:
            adj[x].discard(v)
        del adj[v]
    return order


def heuristic_td(graph: Graph, heuristic: str = "min-fill") -> TreeDecomposition:
    """Elimination-order decomposition, rooted at the last-eliminated node."""
    td = TreeDecomposition()
    if not graph.vertices:
        td.add_node(frozenset())
        return td
    order = _elimination_order(graph, heuristic)
    position = {v: i for i, (v, _) in enumerate(order)}
    # build from the root (last elimination) downwards
    ids: Dict[int, int] = {}
    n = len(order)
    ids[n - 1] = td.add_node(order[n - 1][1])
    for i in range(n - 2, -1, -1):
        v, bag = order[i]
        later = [position[u] for u in bag if u != v and position[u] > i]
        attach = min(later) if later else n - 1
        ids[i] = td.add_node(bag, parent=ids[attach])
    return td


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------

def _binarize(td: TreeDecomposition) -> TreeDecomposition:
    out = TreeDecomposition()

    def walk(node, parent):
        new = out.add_node(td.bags[node], parent)
        kids = sorted(td.children[node])
        spine = new
        while len(kids) > 2:
            walk(kids.pop(0), spine)
            spine = out.add_node(td.bags[node], spine)
        for k in kids:
            walk(k, spine)

    walk(td.root, None)
    return out


def _insert_join_separators(td: TreeDecomposition) -> TreeDecomposition:
    """Put an intersection bag between a join and each of its children, so
    every vertex's topmost occurrence hangs under a one-child node."""
    out = TreeDecomposition()

    def walk(node, parent, via_bag):
        if via_bag is not None:
            parent = out.add_node(via_bag, parent)
        new = out.add_node(td.bags[node], parent)
        kids = sorted(td.children[node])
        for k in kids:
            sep = (td.bags[node] & td.bags[k]) if len(kids) == 2 else None
            walk(k, new, sep)

    walk(td.root, None, None)
    return out


def eligible_pairs(raf: RAF, bag) -> List[tuple]:
    """(host, condition) pairs whose clique {host} | var(cond) fits the bag."""
    out = []
    for a in raf.af.arguments:
        if a not in bag:
            continue
        for cond in sorted(raf.conditions(a), key=repr):
            if condition_vars(cond) <= bag:
                out.append((a, cond))
    return out


def normalize_td(td: TreeDecomposition, raf: Optional[RAF] = None,
                 rc_limit: Optional[int] = None) -> TreeDecomposition:
    """Binarize, separate joins, charge conditions, and split crowded nodes.

    Width never increases.  When a RAF is given, every (host, condition)
    pair is charged to exactly one node whose bag contains the host and
    the condition's variables; nodes charged with more than
    ``rc_limit`` (default width+1) conditions are split into copies.
    """
    out = _insert_join_separators(_binarize(td))
    if raf is None:
        return out
    limit = rc_limit if rc_limit is not None else max(1, out.width() + 1)

    # deterministic cover node per (host, condition): first in postorder
    post = out.postorder()
    assignment: Dict[int, List] = {}
    done = set()
    for node in post:
        bag = out.bags[node]
        for (a, cond) in eligible_pairs(raf, bag):
            if (a, cond) in done:
                continue
            done.add((a, cond))
            conds = assignment.setdefault(node, [])
            if cond not in conds:
                conds.append(cond)
    missing = []
    for a in raf.af.arguments:
        for cond in raf.conditions(a):
            if (a, cond) not in done:
                missing.append((a, cond))
    if missing:
        a, cond = missing[0]
        raise ValidationError(
            f"no bag covers rc({a}) with variables "
            f"{sorted(condition_vars(cond))}; not a decomposition of the "
            "rejection framework's primal graph?")

    # split nodes whose charge exceeds the limit into equal-bag chains
    final = TreeDecomposition()
    charges: Dict[int, tuple] = {}

    def walk(node, parent):
        conds = assignment.get(node, [])
        chunks = [conds[i:i + limit] for i in range(0, len(conds), limit)] or [[]]
        for chunk in chunks:
            new = final.add_node(out.bags[node], parent)
            if chunk:
                charges[new] = tuple(chunk)
            parent = new
        for k in sorted(out.children[node]):
            walk(k, parent)

    walk(out.root, None)
    final.charges = charges
    return final


# ---------------------------------------------------------------------------
# Bag projections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BagProjection:
    arguments: tuple      # A_t
    attacks: tuple        # R_t
    conditions: tuple     # C_t


def bag_projection(raf: RAF, td: TreeDecomposition, node: int) -> BagProjection:
    """Arguments, attacks, and rejection conditions local to one bag.

    A condition belongs to the bag when some hosting argument is in the
    bag and all of the condition's variables are contained in it.
    """
    bag = td.bags[node]
    args = tuple(a for a in raf.af.arguments if a in bag)
    atts = tuple(sorted((a, b) for (a, b) in raf.af.attacks
                        if a in bag and b in bag))
    conds = []
    for (_, cond) in eligible_pairs(raf, bag):
        if cond not in conds:
            conds.append(cond)
    return BagProjection(args, atts, tuple(conds))


# ---------------------------------------------------------------------------
# PACE-style exchange format
# ---------------------------------------------------------------------------

def write_pace(td: TreeDecomposition, graph: Graph) -> str:
    """``s td`` header, ``b`` bag lines, tree edges; vertex names are
    carried in ``c map`` comments."""
    names = sorted(graph.vertices)
    number = {v: i + 1 for i, v in enumerate(names)}
    nodes = td.postorder()
    node_id = {n: i + 1 for i, n in enumerate(nodes)}
    lines = [f"c map {i + 1} {v}" for i, v in enumerate(names)]
    lines.append(f"s td {len(nodes)} {td.width() + 1} {len(names)}")
    for n in nodes:
        bag = " ".join(str(number[v]) for v in sorted(td.bags[n]))
        lines.append(f"b {node_id[n]} {bag}".rstrip())
    parent = td.parent_map()
    for n in nodes:
        p = parent[n]
        if p is not None:
            lines.append(f"{node_id[p]} {node_id[n]}")
    return "\n".join(lines) + "\n"


def read_pace(text: str) -> TreeDecomposition:
    names: Dict[int, str] = {}
    bags: Dict[int, List[int]] = {}
    edges: List[Tuple[int, int]] = []
    header = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "c":
            if len(parts) == 4 and parts[1] == "map":
                names[int(parts[2])] = parts[3]
            continue
        if parts[0] == "s":
            header = parts
            continue
        if parts[0] == "b":
            bags[int(parts[1])] = [int(x) for x in parts[2:]]
            continue
        edges.append((int(parts[0]), int(parts[1])))
    if header is None or not bags:
        raise ValidationError("not a PACE tree decomposition")

    def vname(i: int) -> str:
        return names.get(i, f"v{i}")

    adjacency: Dict[int, List[int]] = {b: [] for b in bags}
    for (u, v) in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    td = TreeDecomposition()
    root = min(bags)
    seen = {root}
    ids = {root: td.add_node(frozenset(vname(i) for i in bags[root]))}
    queue = [root]
    while queue:
        cur = queue.pop(0)
        for nxt in sorted(adjacency[cur]):
            if nxt in seen:
                continue
            seen.add(nxt)
            ids[nxt] = td.add_node(frozenset(vname(i) for i in bags[nxt]),
                                   parent=ids[cur])
            queue.append(nxt)
    if len(seen) != len(bags):
        raise ValidationError("tree decomposition edges do not form a tree")
    return td
