"""(alpha, beta)-temporal reachability.

A temporal path is a simple path in the underlying graph whose edges are
assigned one of their labels each, with consecutive times differing by at
least ``alpha`` and at most ``beta``.  Classic temporal reachability
(strictly increasing times, no upper bound) is the ``(1, T)`` case.

Two regimes are handled differently:

* When ``beta`` can never bind (it is at least the largest possible gap
  between two labels), any temporal walk can be shortcut to a simple
  temporal path, so an earliest-arrival sweep is exact.
* Otherwise a walk sweep over ``(vertex, arrival time)`` states gives an
  upper bound, and an exact depth-first search over simple paths confirms
  members until the bound is met or the search is exhausted.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left
from dataclasses import dataclass
from typing import Mapping

from .graph import TemporalGraph, UnknownVertexError


class QueryError(ValueError):
    pass


@dataclass(frozen=True)
class ReachabilityQuery:
    """Window on the time difference between consecutive edges of a path."""

    alpha: int = 1
    beta: int = 1

    def __post_init__(self):
        for name in ("alpha", "beta"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, int):
                raise QueryError(f"{name} must be an integer, got {val!r}")
        if self.alpha < 1:
            raise QueryError(f"alpha must be >= 1, got {self.alpha}")
        if self.beta < self.alpha:
            raise QueryError(f"need alpha <= beta, got ({self.alpha}, {self.beta})")

    @classmethod
    def classic(cls, g: TemporalGraph) -> "ReachabilityQuery":
        """The ``(1, T)`` query giving plain temporal reachability on ``g``."""
        return cls(1, max(g.lifetime, 1))

    def binds(self, g: TemporalGraph) -> bool:
        """Whether the upper bound can cut off any pair of labels of ``g``."""
        return self.beta < g.lifetime - g.min_label


@dataclass(frozen=True)
class ReachReport:
    reach: Mapping[str, frozenset[str]]
    max_reachability: int
    argmax: frozenset[str]

    def lines(self) -> list[str]:
        out = [
            f"{v} {len(r)} : {' '.join(sorted(r))}" for v, r in sorted(self.reach.items())
        ]
        out.append(f"max {self.max_reachability} at {' '.join(sorted(self.argmax))}")
        return out


def _earliest_arrival(adj, s: int, alpha: int) -> set[int]:
    # arrival 0 at the source stands for "free to leave at any label"
    best = {s: 0}
    heap = [(0, s)]
    while heap:
        a, u = heapq.heappop(heap)
        if best.get(u, a) < a:
            continue
        lo = 1 if u == s else a + alpha
        for w, ts in adj[u]:
            i = bisect_left(ts, lo)
            if i == len(ts):
                continue
            t = ts[i]
            if w != s and t < best.get(w, 1 << 62):
                best[w] = t
                heapq.heappush(heap, (t, w))
    return set(best)


def _walk_triples(adj, s: int, alpha: int, beta: int) -> set[tuple[int, int, int]]:
    # states (vertex, arrival, previous vertex) of non-backtracking walks;
    # a simple path never returns along the edge it just used
    stack = [(w, t, s) for w, ts in adj[s] for t in ts]
    seen = set(stack)
    add, push, pop = seen.add, stack.append, stack.pop
    while stack:
        u, a, p = pop()
        lo, hi = a + alpha, a + beta
        for w, ts in adj[u]:
            if w == p or ts[-1] < lo:
                continue
            # label lists are short; a linear scan beats bisecting here
            for t in ts:
                if t < lo:
                    continue
                if t > hi:
                    break
                state = (w, t, u)
                if state not in seen:
                    add(state)
                    push(state)
    return seen


def walk_states(adj, s: int, alpha: int, beta: int) -> set[tuple[int, int]]:
    """``(vertex, arrival time)`` states of non-backtracking (alpha, beta)-walks from ``s``."""
    return {(u, a) for u, a, _ in _walk_triples(adj, s, alpha, beta)}


def walk_time_edges(adj, s: int, alpha: int, beta: int) -> set[tuple[int, int, int]]:
    """Time-edges ``(a, b, t)`` (``a < b``) used by some non-backtracking walk from ``s``.

    A superset of the time-edges lying on temporal paths from ``s``; deleting
    anything outside it leaves the reach set of ``s`` unchanged.
    """
    used = set()
    for u, t, p in _walk_triples(adj, s, alpha, beta):
        used.add((u, p, t) if u < p else (p, u, t))
    return used


def _simple_path_reach(adj, s: int, alpha: int, beta: int, bound: set[int]) -> set[int]:
    found = {s}
    # per (vertex, arrival): masks already expanded; a superset mask adds nothing
    expanded: dict[tuple[int, int], list[int]] = {}

    def extend(u: int, a: int | None, mask: int) -> bool:
        if a is not None:
            key = (u, a)
            prior = expanded.setdefault(key, [])
            for m in prior:
                if m & mask == m:
                    return False
            prior.append(mask)
        for w, ts in adj[u]:
            bit = 1 << w
            if mask & bit:
                continue
            if a is None:
                times = ts
            else:
                lo, hi = a + alpha, a + beta
                times = [t for t in ts[bisect_left(ts, lo):] if t <= hi]
            for t in times:
                found.add(w)
                if len(found) == len(bound):
                    return True
                if extend(w, t, mask | bit):
                    return True
        return False

    if len(bound) > 1:
        extend(s, None, 1 << s)
    return found


def _reach_indices(g: TemporalGraph, s: int, q: ReachabilityQuery) -> set[int]:
    adj = g.adjacency
    if not q.binds(g):
        return _earliest_arrival(adj, s, q.alpha)
    bound = {w for w, _ in walk_states(adj, s, q.alpha, q.beta)} | {s}
    if g.is_forest:
        # in a forest every non-backtracking walk is a path
        return bound
    return _simple_path_reach(adj, s, q.alpha, q.beta, bound)


def reach_and_walk_edges(
    g: TemporalGraph, s: int, q: ReachabilityQuery
) -> tuple[set[int], set[tuple[int, int, int]]]:
    """Reach set of vertex index ``s`` together with :func:`walk_time_edges`, in one sweep."""
    adj = g.adjacency
    triples = _walk_triples(adj, s, q.alpha, q.beta)
    used = {(u, p, t) if u < p else (p, u, t) for u, t, p in triples}
    bound = {u for u, _, _ in triples}
    bound.add(s)
    # without a binding window every walk shortcuts to a path
    if q.binds(g) and not g.is_forest:
        return _simple_path_reach(adj, s, q.alpha, q.beta, bound), used
    return bound, used


def reach_set(g: TemporalGraph, source: str, q: ReachabilityQuery) -> frozenset[str]:
    """Vertices reachable from ``source`` by (alpha, beta)-temporal paths."""
    try:
        s = g.index[source]
    except KeyError:
        raise UnknownVertexError(f"unknown source vertex {source!r}") from None
    verts = g.vertices
    return frozenset(verts[i] for i in _reach_indices(g, s, q))


def reach_size(g: TemporalGraph, source: str, q: ReachabilityQuery) -> int:
    return len(_reach_indices(g, g.index[source], q))


def reach_report(g: TemporalGraph, q: ReachabilityQuery) -> ReachReport:
    reach = {v: reach_set(g, v, q) for v in g.vertices}
    best = max((len(r) for r in reach.values()), default=0)
    argmax = frozenset(v for v, r in reach.items() if len(r) == best)
    return ReachReport(reach, best, argmax)


def max_reachability(g: TemporalGraph, q: ReachabilityQuery) -> int:
    return max((len(_reach_indices(g, i, q)) for i in range(g.n)), default=0)
