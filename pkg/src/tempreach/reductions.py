"""Instance generators for the hardness reductions, with witness translation.

Three constructions are provided:

* :func:`reduce_clique_w1` turns a Clique instance ``(G, r)`` into an edge
  deletion instance with lifetime 2 and one label per edge.
* :func:`reduce_sat` turns a 3,4-SAT formula into an edge deletion instance
  with ``h = 7``, lifetime 2 and maximum temporal total degree at most 5.
* :func:`reduce_clique_ab_tree` turns a Clique instance into a time-edge
  deletion instance on a double star, for any window ``alpha <= beta``.

:func:`witness_forward` maps a clique / satisfying assignment to a deletion
witness of size exactly ``k``; :func:`witness_back` maps a feasible deletion
witness back to a clique / satisfying assignment.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

import networkx as nx

from .graph import TimeEdge, build, degree_summary, edge_key
from .reach import ReachabilityQuery
from .solvers import DeletionInstance, Variant, verify_solution


class ReductionError(ValueError):
    pass


class WitnessError(ValueError):
    pass


@dataclass(frozen=True)
class CliqueInstance:
    """Does ``graph`` contain a clique on ``r`` vertices?"""

    graph: nx.Graph
    r: int

    def __post_init__(self):
        G = nx.Graph()
        G.add_nodes_from(str(v) for v in self.graph.nodes)
        G.add_edges_from((str(u), str(v)) for u, v in self.graph.edges)
        if nx.number_of_selfloops(G):
            raise ReductionError("clique source graph has self-loops")
        object.__setattr__(self, "graph", G)

    @property
    def vertices(self) -> list[str]:
        return sorted(self.graph.nodes)

    @property
    def edges(self) -> list[tuple[str, str]]:
        return sorted(edge_key(u, v) for u, v in self.graph.edges)

    def is_clique(self, vs: Iterable[str]) -> bool:
        vs = list(vs)
        return len(set(vs)) == len(vs) and all(
            self.graph.has_edge(a, b) for a, b in itertools.combinations(vs, 2)
        )


@dataclass(frozen=True)
class SatInstance:
    """CNF with exactly three distinct variables per clause, each variable in
    at most four clauses and occurring in both polarities.

    Literals follow the DIMACS convention: ``+i`` / ``-i`` for ``x_i``.
    """

    clauses: tuple[tuple[int, int, int], ...]
    variables: tuple[int, ...] = ()

    def __post_init__(self):
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        used = sorted({abs(l) for c in clauses for l in c})
        variables = tuple(sorted(set(self.variables))) if self.variables else tuple(used)
        object.__setattr__(self, "clauses", clauses)
        object.__setattr__(self, "variables", variables)
        for j, c in enumerate(clauses, 1):
            if len(c) != 3 or len({abs(l) for l in c}) != 3 or 0 in c:
                raise ReductionError(f"clause {j} must have exactly 3 distinct variables: {c}")
        occ = {v: 0 for v in variables}
        pos, neg = set(), set()
        for c in clauses:
            for l in c:
                if abs(l) not in occ:
                    raise ReductionError(f"literal {l} uses an undeclared variable")
                occ[abs(l)] += 1
                (pos if l > 0 else neg).add(abs(l))
        for v, count in occ.items():
            if count > 4:
                raise ReductionError(f"variable {v} occurs in {count} > 4 clauses")
            if v not in pos or v not in neg:
                raise ReductionError(f"variable {v} does not occur in both polarities")

    def satisfied_by(self, assignment: Mapping[int, bool]) -> bool:
        return all(any(assignment[abs(l)] == (l > 0) for l in c) for c in self.clauses)


def normalize_sat(clauses: Iterable[Iterable[int]]) -> tuple[SatInstance, dict[int, bool]]:
    """Fix every single-polarity variable and drop the clauses it satisfies.

    Repeats until each remaining variable occurs in both polarities.  Returns
    the reduced instance and the forced partial assignment; the input is
    satisfiable iff the reduced instance is.
    """
    clauses = [tuple(c) for c in clauses]
    forced: dict[int, bool] = {}
    while True:
        pos = {l for c in clauses for l in c if l > 0}
        neg = {-l for c in clauses for l in c if l < 0}
        pure = (pos - neg) | (neg - pos)
        if not pure:
            break
        for v in sorted(pure):
            forced[v] = v in pos
        clauses = [c for c in clauses if not any(abs(l) in pure for l in c)]
    return SatInstance(tuple(clauses)), forced


@dataclass(frozen=True)
class ReductionOutput:
    reduction: str
    source: Any
    instance: DeletionInstance
    names: dict = field(default_factory=dict)

    def sidecar(self) -> dict:
        """JSON-ready description: instance parameters plus the name maps."""
        inst = self.instance
        return {
            "reduction": self.reduction,
            "variant": inst.variant.value,
            "alpha": inst.query.alpha,
            "beta": inst.query.beta,
            "k": inst.k,
            "h": inst.h,
            "names": self.names,
        }


# -- Clique -> edge deletion, lifetime 2 ------------------------------------


def _edge_name(u: str, v: str) -> str:
    return f"e:{u}-{v}"


def reduce_clique_w1(src: CliqueInstance, alpha: int = 1, beta: int | None = None) -> ReductionOutput:
    """Star-of-incidences construction: ``s`` joined to every vertex of ``G``
    at time 1, every vertex joined to its incident edge-vertices at time
    ``alpha + 1``; ``k = r`` and ``h = 1 + (n - r) + (m - C(r, 2))``.

    ``alpha``/``beta`` give the windowed form (the default is the classic
    ``(1, 2)`` query).
    """
    n, m, r = src.graph.number_of_nodes(), src.graph.number_of_edges(), src.r
    if r < 3:
        raise ReductionError(f"need r >= 3, got r={r}")
    if not m > r + math.comb(r, 2):
        raise ReductionError(f"need m > r + C(r,2) = {r + math.comb(r, 2)}, got m={m}")
    beta = alpha + 1 if beta is None else beta
    late = alpha + 1
    vnames = {u: f"v:{u}" for u in src.vertices}
    enames = {e: _edge_name(*e) for e in src.edges}
    edges = [("s", vnames[u], [1]) for u in src.vertices]
    for (a, b), name in enames.items():
        edges.append((vnames[a], name, [late]))
        edges.append((vnames[b], name, [late]))
    g = build(["s", *vnames.values(), *enames.values()], edges)
    h = 1 + (n - r) + (m - math.comb(r, 2))
    inst = DeletionInstance(g, Variant.EDGE, ReachabilityQuery(alpha, beta), r, h)
    if g.lifetime != late or any(len(ts) != 1 for ts in g.labels.values()):
        raise AssertionError("clique construction must have one label per edge")
    names = {
        "vertices": dict(vnames),
        "edges": {f"{a}-{b}": nm for (a, b), nm in enames.items()},
    }
    return ReductionOutput("clique-w1", src, inst, names)


# -- 3,4-SAT -> edge deletion, h = 7 ----------------------------------------


def _gadget(i: int) -> dict[str, Any]:
    return {
        "head": f"head:{i}",
        "pos": f"lit:+{i}",
        "neg": f"lit:-{i}",
        "pos_tip": f"tip:+{i}",
        "neg_tip": f"tip:-{i}",
        "pads": [f"pad:{i}:{j}" for j in (1, 2, 3)],
    }


def _literal_vertex(lit: int) -> str:
    return f"lit:{'+' if lit > 0 else '-'}{abs(lit)}"


def _literal_edge(lit: int) -> tuple[str, str]:
    sign = "+" if lit > 0 else "-"
    return edge_key(f"lit:{sign}{abs(lit)}", f"tip:{sign}{abs(lit)}")


def reduce_sat(src: SatInstance, alpha: int = 1, beta: int | None = None) -> ReductionOutput:
    """One 8-vertex gadget per variable and a clause vertex plus satellite per clause.

    Gadget for ``x_i``: the head vertex is joined at time 1 to both literal
    vertices and to three pendant vertices; each literal vertex has a
    pendant "tip" joined by its literal edge at time ``alpha + 1``.  A clause
    vertex is joined at time 1 to the literal vertices of its literals and to
    its satellite.  ``k = n`` and ``h = 7``.
    """
    beta = alpha + 1 if beta is None else beta
    late = alpha + 1
    verts: list[str] = []
    edges: list[tuple[str, str, list[int]]] = []
    gadgets = {}
    for i in src.variables:
        gd = _gadget(i)
        gadgets[i] = gd
        verts += [gd["head"], gd["pos"], gd["neg"], gd["pos_tip"], gd["neg_tip"], *gd["pads"]]
        for leaf in (gd["pos"], gd["neg"], *gd["pads"]):
            edges.append((gd["head"], leaf, [1]))
        edges.append((gd["pos"], gd["pos_tip"], [late]))
        edges.append((gd["neg"], gd["neg_tip"], [late]))
    clause_names = {}
    for j, c in enumerate(src.clauses, 1):
        cv, sv = f"C:{j}", f"sat:{j}"
        clause_names[j] = {"vertex": cv, "satellite": sv}
        verts += [cv, sv]
        for lit in c:
            edges.append((cv, _literal_vertex(lit), [1]))
        edges.append((cv, sv, [1]))
    g = build(verts, edges)
    n = len(src.variables)
    inst = DeletionInstance(g, Variant.EDGE, ReachabilityQuery(alpha, beta), n, 7)
    if g.m and (degree_summary(g).maximum > 5 or g.lifetime != late):
        raise AssertionError("SAT construction must have max degree <= 5 and lifetime 2")
    names = {
        "variables": {str(i): gd for i, gd in gadgets.items()},
        "clauses": {str(j): nm for j, nm in clause_names.items()},
    }
    return ReductionOutput("sat34", src, inst, names)


# -- Clique -> (alpha, beta) time-edge deletion on a double star ------------


def reduce_clique_ab_tree(src: CliqueInstance, alpha: int, beta: int) -> ReductionOutput:
    """Double star ``x - y``: ``m`` leaves ``u_i`` on ``x`` at time 1, ``xy``
    at times ``j*beta + 2`` for every source vertex ``v_j``, and a leaf
    ``w_i`` on ``y`` for every source edge ``e_i = v_a v_b`` at times
    ``a*beta + alpha + 2`` and ``b*beta + alpha + 2``.  ``k = r`` and
    ``h = 2m + 2 - C(r, 2)``.
    """
    q = ReachabilityQuery(alpha, beta)
    n, m, r = src.graph.number_of_nodes(), src.graph.number_of_edges(), src.r
    if r < 1:
        raise ReductionError(f"need r >= 1, got r={r}")
    if not r < n:
        raise ReductionError(f"need r < n, got r={r}, n={n}")
    if not math.comb(r, 2) < m:
        raise ReductionError(f"need C(r,2) < m, got C({r},2)={math.comb(r, 2)}, m={m}")
    index = {v: j for j, v in enumerate(src.vertices, 1)}
    verts = ["x", "y"]
    edges: list[tuple[str, str, list[int]]] = [("x", "y", [j * beta + 2 for j in range(1, n + 1)])]
    edge_names = {}
    for i, (a, b) in enumerate(src.edges, 1):
        verts += [f"u:{i}", f"w:{i}"]
        edges.append(("x", f"u:{i}", [1]))
        edges.append(("y", f"w:{i}", [index[a] * beta + alpha + 2, index[b] * beta + alpha + 2]))
        edge_names[f"{a}-{b}"] = {"index": i, "leaf": f"w:{i}", "pendant": f"u:{i}"}
    g = build(verts, edges)
    h = 2 * m + 2 - math.comb(r, 2)
    inst = DeletionInstance(g, Variant.TIME_EDGE, q, r, h)
    names = {
        "vertices": {v: {"index": j, "time": j * beta + 2} for v, j in index.items()},
        "edges": edge_names,
    }
    return ReductionOutput("clique-ab-tree", src, inst, names)


# -- witness translation ----------------------------------------------------


def witness_forward(output: ReductionOutput, source_witness) -> tuple:
    """Deletion witness of size exactly ``k`` from a clique or assignment."""
    src = output.source
    if output.reduction in ("clique-w1", "clique-ab-tree"):
        clique = sorted(str(v) for v in source_witness)
        if len(clique) != src.r or not src.is_clique(clique):
            raise WitnessError(f"not a clique of size {src.r}: {clique}")
        if output.reduction == "clique-w1":
            return tuple(sorted(edge_key("s", f"v:{u}") for u in clique))
        times = output.names["vertices"]
        return tuple(sorted(TimeEdge(("x", "y"), times[u]["time"]) for u in clique))
    if output.reduction == "sat34":
        assignment = {int(v): bool(val) for v, val in dict(source_witness).items()}
        if set(assignment) != set(src.variables) or not src.satisfied_by(assignment):
            raise WitnessError("assignment does not satisfy the formula")
        return tuple(sorted(_literal_edge(v if val else -v) for v, val in assignment.items()))
    raise ValueError(f"unknown reduction {output.reduction!r}")


def witness_back(output: ReductionOutput, witness: Iterable):
    """Clique (sorted vertex tuple) or assignment (dict) from a feasible witness."""
    witness = list(witness)
    inst = output.instance
    if not verify_solution(inst, witness):
        raise WitnessError("deletion witness is not feasible for the produced instance")
    src = output.source
    if output.reduction == "clique-w1":
        edges = [w.edge if isinstance(w, TimeEdge) else edge_key(*w) for w in witness]
        # every deleted edge is replaced by the edge from s to its vertex of G
        touched = {
            x[2:] for e in edges for x in e if x.startswith("v:")
        }
        clique = tuple(sorted(touched))
        if len(clique) != src.r or not src.is_clique(clique):
            raise WitnessError(f"normalized witness does not induce an r-clique: {clique}")
        return clique
    if output.reduction == "clique-ab-tree":
        by_time = {d["time"]: v for v, d in output.names["vertices"].items()}
        clique = tuple(
            sorted(by_time[w.time] for w in witness if w.edge == ("x", "y"))
        )
        if len(clique) != src.r or not src.is_clique(clique):
            raise WitnessError(f"deleted xy labels do not induce an r-clique: {clique}")
        return clique
    if output.reduction == "sat34":
        assignment: dict[int, bool] = {}
        for w in witness:
            a, b = w.edge if isinstance(w, TimeEdge) else edge_key(*w)
            if a.startswith("lit:") and b.startswith("tip:"):
                var = int(a[5:])
                if var in assignment:
                    raise WitnessError(f"both literal edges of x{var} deleted")
                assignment[var] = a[4] == "+"
        for v in src.variables:
            assignment.setdefault(v, True)
        if not src.satisfied_by(assignment):
            raise WitnessError("derived assignment does not satisfy the formula")
        return assignment
    raise ValueError(f"unknown reduction {output.reduction!r}")
