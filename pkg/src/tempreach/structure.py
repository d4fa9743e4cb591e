"""Relational structures, tree decompositions and the reachability formulas.

The structure of a temporal graph has the vertices, edges and time-edges as
its universe, with two binary relations:

* ``R`` holds for time-edges ``(e1, t1), (e2, t2)`` whose edges share a
  vertex and with ``t1 < t2`` (``Rw`` additionally asks ``alpha <= t2 - t1
  <= beta``);
* ``L`` links each edge ``e`` to each of its time-edges ``(e, t)``.

Elements are tagged tuples: ``("v", id)``, ``("e", u, v)`` and
``("te", u, v, t)`` with ``u < v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from .graph import TemporalGraph, degree_summary, edge_key
from .reach import ReachabilityQuery

DEFAULT_TREE_CAP = 8
EXACT_TREEWIDTH_LIMIT = 10


class DecompositionError(ValueError):
    pass


class TreeCapError(ValueError):
    pass


def vertex_element(v: str) -> tuple:
    return ("v", v)


def edge_element(u: str, v: str) -> tuple:
    return ("e",) + edge_key(u, v)


def time_edge_element(u: str, v: str, t: int) -> tuple:
    return ("te",) + edge_key(u, v) + (t,)


# -- relational structure ---------------------------------------------------


@dataclass(frozen=True)
class RelationalStructure:
    universe: frozenset
    R: frozenset
    L: frozenset
    query: ReachabilityQuery | None = None

    @property
    def r_name(self) -> str:
        return "R" if self.query is None else "Rw"

    @property
    def relations(self) -> dict[str, frozenset]:
        return {self.r_name: self.R, "L": self.L}


def build_structure(g: TemporalGraph, q: ReachabilityQuery | None = None) -> RelationalStructure:
    """Structure of ``g``; with a query, ``R`` is restricted to the window."""
    universe = {vertex_element(v) for v in g.vertices}
    universe.update(edge_element(u, v) for u, v in g.edges)
    tes = [time_edge_element(*te.edge, te.time) for te in g.time_edges]
    universe.update(tes)
    L = frozenset((("e",) + te[1:3], te) for te in tes)

    by_vertex: dict[str, list[tuple]] = {v: [] for v in g.vertices}
    for te in tes:
        by_vertex[te[1]].append(te)
        by_vertex[te[2]].append(te)
    R = set()
    for incident in by_vertex.values():
        for a in incident:
            for b in incident:
                gap = b[3] - a[3]
                if gap <= 0:
                    continue
                if q is not None and not q.alpha <= gap <= q.beta:
                    continue
                R.add((a, b))
    return RelationalStructure(frozenset(universe), frozenset(R), L, q)


def graph_structure(G) -> RelationalStructure:
    """A static graph viewed as a structure: plain vertex ids, edges as ``R``."""
    G = _static(G)
    R = frozenset(edge_key(u, v) for u, v in G.edges)
    return RelationalStructure(frozenset(G.nodes), R, frozenset())


# -- tree decompositions ----------------------------------------------------


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed by integer nodes, a tree over the nodes, and a root."""

    bags: Mapping[int, frozenset]
    tree: tuple[tuple[int, int], ...]
    root: int = 0

    def __post_init__(self):
        object.__setattr__(self, "bags", {k: frozenset(b) for k, b in sorted(self.bags.items())})
        object.__setattr__(self, "tree", tuple(sorted(tuple(sorted(e)) for e in self.tree)))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def __eq__(self, other):
        if not isinstance(other, TreeDecomposition):
            return NotImplemented
        return (self.bags, self.tree, self.root) == (other.bags, other.tree, other.root)

    def __hash__(self):
        return hash((tuple(self.bags.items()), self.tree, self.root))


@dataclass(frozen=True)
class Validation:
    ok: bool
    message: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


def _fmt(x) -> str:
    if isinstance(x, tuple) and x and x[0] in ("v", "e", "te"):
        return "/".join(str(p) for p in x)
    if isinstance(x, tuple):
        return "(" + ", ".join(_fmt(p) for p in x) + ")"
    return str(x)


def validate_decomposition(td: TreeDecomposition, structure: RelationalStructure) -> Validation:
    """Check the two decomposition conditions; the message names the first failure."""
    nodes = sorted(td.bags)
    if not nodes:
        return Validation(False, "decomposition has no bags")
    if td.root not in td.bags:
        return Validation(False, f"root {td.root} has no bag")
    T = nx.Graph()
    T.add_nodes_from(nodes)
    for a, b in td.tree:
        if a not in td.bags or b not in td.bags:
            return Validation(False, f"tree edge {a}-{b} touches a node without a bag")
        T.add_edge(a, b)
    if not nx.is_tree(T):
        return Validation(False, "tree edges do not form a tree over the bag nodes")
    universe = structure.universe
    for s in nodes:
        if not td.bags[s] and universe:
            return Validation(False, f"bag {s} is empty")
        stray = sorted(td.bags[s] - universe, key=repr)
        if stray:
            return Validation(False, f"bag {s} holds {_fmt(stray[0])}, not in the universe")
    holders: dict = {a: [] for a in universe}
    for s in nodes:
        for a in td.bags[s]:
            holders[a].append(s)
    for a in sorted(universe):
        where = holders[a]
        if not where:
            return Validation(False, f"element {_fmt(a)} is in no bag")
        if not nx.is_connected(T.subgraph(where)):
            return Validation(False, f"bags holding {_fmt(a)} are not connected")
    for name, tuples in sorted(structure.relations.items()):
        for tup in sorted(tuples):
            common = set(holders[tup[0]])
            for a in tup[1:]:
                common &= set(holders[a])
            if not common:
                return Validation(False, f"no bag covers {name} tuple {_fmt(tup)}")
    return Validation(True)


def lift_decomposition(td: TreeDecomposition, g: TemporalGraph) -> TreeDecomposition:
    """Decomposition of the structure of ``g`` from one of its underlying graph.

    Each bag gains every edge and time-edge incident to one of its vertices,
    so widths grow to at most ``(2*Delta + 1) * (w + 1) - 1``.
    """
    check = validate_decomposition(td, graph_structure(g))
    if not check:
        raise DecompositionError(f"input is not a decomposition of the graph: {check.message}")
    incident: dict[str, set] = {v: set() for v in g.vertices}
    for te in g.time_edges:
        u, v = te.edge
        for x in (u, v):
            incident[x].add(edge_element(u, v))
            incident[x].add(time_edge_element(u, v, te.time))
    bags = {}
    for s, bag in td.bags.items():
        lifted = {vertex_element(v) for v in bag}
        for v in bag:
            lifted |= incident[v]
        bags[s] = frozenset(lifted)
    return TreeDecomposition(bags, td.tree, td.root)


def lifted_width_bound(g: TemporalGraph, width: int) -> int:
    return (2 * degree_summary(g).maximum + 1) * (width + 1) - 1


def _static(G) -> nx.Graph:
    if isinstance(G, TemporalGraph):
        return G.to_networkx()
    return G


def _sorted_graph(G) -> nx.Graph:
    # min-fill tie breaking depends on insertion order; fix it
    H = nx.Graph()
    H.add_nodes_from(sorted(G.nodes))
    H.add_edges_from(sorted(edge_key(u, v) for u, v in G.edges))
    return H


def _from_bag_graph(T: nx.Graph) -> TreeDecomposition:
    bags = sorted(T.nodes, key=lambda b: (-len(b), sorted(b)))
    ids = {b: i for i, b in enumerate(bags)}
    edges = [(ids[a], ids[b]) for a, b in T.edges]
    return TreeDecomposition({i: b for b, i in ids.items()}, tuple(edges), 0)


def decompose_heuristic(G, exact: bool = False) -> TreeDecomposition:
    """Tree decomposition of a static graph (or the underlying graph of a temporal one).

    By default a min-fill-in elimination ordering is used.  With ``exact``
    the ordering is found by dynamic programming over vertex subsets, which
    gives an optimal width; allowed for at most 10 vertices.
    """
    G = _sorted_graph(_static(G))
    if G.number_of_nodes() == 0:
        return TreeDecomposition({0: frozenset()}, (), 0)
    if exact:
        if G.number_of_nodes() > EXACT_TREEWIDTH_LIMIT:
            raise DecompositionError(
                f"exact mode is limited to {EXACT_TREEWIDTH_LIMIT} vertices, got {G.number_of_nodes()}"
            )
        return _from_order(G, _optimal_order(G))
    _, T = treewidth_min_fill_in(G)
    return _from_bag_graph(T)


def _optimal_order(G: nx.Graph) -> list:
    """Elimination order of minimum width (dynamic programming over subsets)."""
    nodes = sorted(G.nodes)
    n = len(nodes)
    nbr = [0] * n
    pos = {v: i for i, v in enumerate(nodes)}
    for u, v in G.edges:
        nbr[pos[u]] |= 1 << pos[v]
        nbr[pos[v]] |= 1 << pos[u]

    def q_size(S: int, v: int) -> int:
        # vertices outside S + v reachable from v through S
        seen = 1 << v
        frontier = [v]
        out = 0
        while frontier:
            x = frontier.pop()
            for w in range(n):
                bit = 1 << w
                if nbr[x] & bit and not seen & bit:
                    seen |= bit
                    if S & bit:
                        frontier.append(w)
                    else:
                        out += 1
        return out

    full = (1 << n) - 1
    best = {0: -1}
    choice = {}
    for S in range(1, full + 1):
        val = None
        for v in range(n):
            if S >> v & 1:
                rest = S & ~(1 << v)
                cand = max(best[rest], q_size(rest, v))
                if val is None or cand < val:
                    val, choice[S] = cand, v
        best[S] = val
    order = []
    S = full
    while S:
        v = choice[S]
        order.append(nodes[v])
        S &= ~(1 << v)
    return order[::-1]


def _from_order(G: nx.Graph, order: list) -> TreeDecomposition:
    H = {v: set(G[v]) for v in G.nodes}
    rank = {v: i for i, v in enumerate(order)}
    bags: dict[int, frozenset] = {}
    edges = []
    for i, v in enumerate(order):
        nb = H[v]
        bags[i] = frozenset(nb | {v})
        for a in nb:
            H[a] |= nb - {a}
            H[a].discard(v)
        if nb:
            edges.append((i, min(rank[a] for a in nb)))
    # components of G give a forest; chain their last bags together
    T = nx.Graph()
    T.add_nodes_from(bags)
    T.add_edges_from(edges)
    comps = sorted(sorted(c) for c in nx.connected_components(T))
    for a, b in zip(comps, comps[1:]):
        edges.append((a[-1], b[-1]))
    root = len(order) - 1
    return TreeDecomposition(bags, tuple(edges), root)


# -- rooted trees -----------------------------------------------------------


@dataclass(frozen=True)
class RootedTree:
    """Rooted tree with nodes numbered in preorder; node 0 is the root.

    ``parents[i]`` is the parent of node ``i + 1``.  Tree edge ``i`` (for
    ``i >= 1``) is the edge from node ``i`` to its parent.
    """

    parents: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.parents) + 1

    @property
    def root(self) -> int:
        return 0

    def parent(self, v: int) -> int | None:
        return None if v == 0 else self.parents[v - 1]

    def children(self, v: int) -> list[int]:
        return [i + 1 for i, p in enumerate(self.parents) if p == v]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(p, i + 1) for i, p in enumerate(self.parents)]

    @property
    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in range(self.size)}
        for p, c in self.edges:
            adj[p].append(c)
            adj[c].append(p)
        return adj

    @property
    def canonical(self) -> str:
        return _ahu(self, 0)


def _ahu(t: RootedTree, v: int) -> str:
    return "(" + "".join(sorted(_ahu(t, c) for c in t.children(v))) + ")"


def _from_canonical(code: str) -> RootedTree:
    parents: list[int] = []
    stack: list[int] = []
    count = 0
    for ch in code:
        if ch == "(":
            if stack:
                parents.append(stack[-1])
            stack.append(count)
            count += 1
        else:
            stack.pop()
    return RootedTree(tuple(parents))


def enumerate_rooted_trees(h: int, cap: int = DEFAULT_TREE_CAP) -> list[RootedTree]:
    """One representative per isomorphism class of rooted trees on ``h + 1`` nodes.

    Classes are told apart by AHU canonical strings; the output is sorted
    by them, and each tree's preorder visits children in canonical order.
    """
    if isinstance(h, bool) or not isinstance(h, int) or h < 1:
        raise ValueError(f"h must be a positive integer, got {h!r}")
    if h > cap:
        raise TreeCapError(f"h={h} exceeds the enumeration cap {cap}")
    codes = {"()"}
    for _ in range(h):
        grown = set()
        for code in codes:
            t = _from_canonical(code)
            for v in range(t.size):
                grown.add(RootedTree(t.parents + (v,)).canonical)
        codes = grown
    return [_from_canonical(c) for c in sorted(codes)]


def pairs(S: RootedTree) -> list[tuple[int, int]]:
    """Ordered pairs ``(i, j)`` of tree edges meeting at a vertex ``v``, where
    edge ``i`` is the first edge on the path from ``v`` to the root.

    Edges are named by their lower endpoint (see :class:`RootedTree`).
    """
    return [(v, c) for v in range(1, S.size) for c in S.children(v)]


# -- formulas ---------------------------------------------------------------


def _tree_conjunct(S: RootedTree, variant: str, rel: str) -> str:
    h = S.size - 1
    vars_ = [f"t{i}" for i in range(1, h + 1)]
    binders = " ".join(f"(te {x})" for x in vars_)
    atoms = [f"({rel} t{i} t{j})" for i, j in pairs(S)]
    body = "true" if not atoms else "(and " + " ".join(atoms) + ")"
    if variant == "time-edge":
        hit = "(or " + " ".join(f"(in {x} E)" for x in vars_) + ")"
    else:
        hit = "(exists ((e f)) (and (in f E) (or " + " ".join(f"(L f {x})" for x in vars_) + ")))"
    return f"(forall ({binders}) (implies {body} {hit}))"


def emit_mso_formula(h: int, variant: str = "time-edge", windowed: bool = False, cap: int = DEFAULT_TREE_CAP) -> str:
    """MSO sentence in one free set variable ``E`` bounding reachability by ``h``.

    One conjunct per rooted tree on ``h + 1`` nodes: every assignment of
    time-edges to the tree edges that is chained by ``R`` along each root
    path must use a deleted time-edge (time-edge variant) or a time-edge of
    a deleted edge (edge variant).  Tree edge ``i`` carries variable ``ti``.
    """
    variant = getattr(variant, "value", variant)
    if variant not in ("edge", "time-edge"):
        raise ValueError(f"unknown variant {variant!r}")
    trees = enumerate_rooted_trees(h, cap)
    rel = "Rw" if windowed else "R"
    lines = [
        f"; reachability at most {h}, variant {variant}, relation {rel}, {len(trees)} trees",
        "(formula (free (set E))",
        "  (and",
    ]
    lines += [f"    {_tree_conjunct(S, variant, rel)}" for S in trees]
    lines[-1] += "))"
    return "\n".join(lines) + "\n"
