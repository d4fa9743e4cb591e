"""Brute-force reference implementations and seeded random instances.

Everything here is deliberately naive and shares no code with the engines it
checks.  The functions are only meant for desk-scale inputs.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable

import networkx as nx

from .graph import TemporalGraph, build


def simple_paths(g: TemporalGraph, source: str):
    """Yield every simple path from ``source`` as a vertex tuple (length >= 2)."""
    nbrs = {v: [] for v in g.vertices}
    for u, v in g.edges:
        nbrs[u].append(v)
        nbrs[v].append(u)

    def walk(path):
        for w in nbrs[path[-1]]:
            if w not in path:
                yield path + (w,)
                yield from walk(path + (w,))

    yield from walk((source,))


def path_is_temporal(g: TemporalGraph, path, alpha: int, beta: int) -> bool:
    label_sets = [g.label_set(a, b) for a, b in zip(path, path[1:])]
    for times in itertools.product(*label_sets):
        if all(alpha <= t2 - t1 <= beta for t1, t2 in zip(times, times[1:])):
            return True
    return False


def brute_reach_set(g: TemporalGraph, source: str, alpha: int, beta: int) -> frozenset[str]:
    found = {source}
    for path in simple_paths(g, source):
        if path[-1] not in found and path_is_temporal(g, path, alpha, beta):
            found.add(path[-1])
    return frozenset(found)


def brute_max_reach(g: TemporalGraph, alpha: int, beta: int) -> int:
    return max((len(brute_reach_set(g, v, alpha, beta)) for v in g.vertices), default=0)


def has_clique(G: nx.Graph, r: int) -> bool:
    return find_clique(G, r) is not None


def find_clique(G: nx.Graph, r: int):
    for combo in itertools.combinations(sorted(G.nodes), r):
        if all(G.has_edge(a, b) for a, b in itertools.combinations(combo, 2)):
            return combo
    return None


def satisfying_assignment(variables: Iterable[int], clauses) -> dict[int, bool] | None:
    variables = sorted(variables)
    for bits in itertools.product((True, False), repeat=len(variables)):
        assign = dict(zip(variables, bits))
        if all(any(assign[abs(l)] == (l > 0) for l in c) for c in clauses):
            return assign
    return None


def treewidth_by_orders(G: nx.Graph) -> int:
    """Minimum over all elimination orders of the maximum eliminated degree."""
    nodes = sorted(G.nodes)
    if not nodes:
        return -1
    best = len(nodes) - 1
    for order in itertools.permutations(nodes):
        H = {v: set(G[v]) for v in nodes}
        width = 0
        for v in order:
            nb = H.pop(v)
            width = max(width, len(nb))
            if width >= best:
                break
            for a in nb:
                H[a] |= nb - {a}
                H[a].discard(v)
        best = min(best, width)
    return best


def rooted_tree_classes(num_nodes: int) -> list[nx.Graph]:
    """Representatives of rooted trees on ``num_nodes`` nodes, via pairwise isomorphism."""
    reps: list[nx.Graph] = []
    if num_nodes == 1:
        T = nx.Graph()
        T.add_node(0, root=True)
        return [T]
    for tree in nx.nonisomorphic_trees(num_nodes):
        for root in tree.nodes:
            T = nx.Graph(tree)
            nx.set_node_attributes(T, {v: v == root for v in T.nodes}, "root")
            if not any(
                nx.is_isomorphic(T, R, node_match=lambda a, b: a["root"] == b["root"])
                for R in reps
            ):
                reps.append(T)
    return reps


# -- seeded random instances ------------------------------------------------


def random_temporal_graph(
    rng: random.Random,
    n: int,
    m: int,
    lifetime: int,
    max_labels: int = 3,
) -> TemporalGraph:
    verts = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(verts, 2))
    chosen = rng.sample(pairs, min(m, len(pairs)))
    edges = []
    for u, v in chosen:
        k = rng.randint(1, min(max_labels, lifetime))
        edges.append((u, v, rng.sample(range(1, lifetime + 1), k)))
    return build(verts, edges)


def random_static_graph(rng: random.Random, n: int, m: int) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(str(i) for i in range(1, n + 1))
    pairs = list(itertools.combinations(sorted(G.nodes), 2))
    G.add_edges_from(rng.sample(pairs, min(m, len(pairs))))
    return G


def random_34sat(rng: random.Random, n: int, num_clauses: int | None = None, tries: int = 10_000):
    """Random formula with 3 distinct variables per clause, each variable in
    2 to 4 clauses and occurring in both polarities."""
    lo, hi = -(-2 * n // 3), (4 * n) // 3
    if num_clauses is None:
        num_clauses = rng.randint(max(lo, 1), hi)
    if not lo <= num_clauses <= hi:
        raise ValueError(f"{num_clauses} clauses cannot hold {n} variables 2 to 4 times each")
    for _ in range(tries):
        slots = [v for v in range(1, n + 1) for _ in range(2)]
        spare = [v for v in range(1, n + 1) for _ in range(2)]
        slots += rng.sample(spare, 3 * num_clauses - 2 * n)
        rng.shuffle(slots)
        clauses = [slots[3 * j : 3 * j + 3] for j in range(num_clauses)]
        if any(len(set(c)) < 3 for c in clauses):
            continue
        signs = {}
        for v in range(1, n + 1):
            count = slots.count(v)
            s = [True, False] + [rng.random() < 0.5 for _ in range(count - 2)]
            rng.shuffle(s)
            signs[v] = s
        out = []
        for c in clauses:
            out.append(tuple(v if signs[v].pop() else -v for v in c))
        return out
    raise RuntimeError(f"no valid 3,4-SAT formula found for n={n}")
