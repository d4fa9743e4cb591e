"""Time-labeled graphs: construction, deletion and degree parameters.

A :class:`TemporalGraph` is a simple undirected graph whose edges each carry
a non-empty, sorted set of positive integer time labels.  Vertex ids are
opaque strings; internally every vertex is mapped to a dense integer so the
reachability code can work on adjacency lists and bitmasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

Edge = tuple[str, str]


class GraphError(ValueError):
    """Base class for temporal graph validation failures."""


class DuplicateEdgeError(GraphError):
    pass


class EmptyLabelSetError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class UnknownVertexError(GraphError):
    pass


class InvalidLabelError(GraphError):
    pass


class InvalidVertexIdError(GraphError):
    pass


def edge_key(u: str, v: str) -> Edge:
    """Canonical (sorted) form of the undirected edge ``uv``."""
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True, order=True)
class TimeEdge:
    """An edge together with one of its time labels."""

    edge: Edge
    time: int

    def __post_init__(self):
        object.__setattr__(self, "edge", edge_key(*self.edge))

    def __str__(self):
        return f"({self.edge[0]}-{self.edge[1]}, {self.time})"


@dataclass(frozen=True)
class DegreeSummary:
    """Temporal total degree of every vertex and its maximum."""

    degrees: Mapping[str, int]
    maximum: int


def _check_vertex_id(v: str) -> None:
    if not isinstance(v, str) or not v or any(c.isspace() for c in v) or "/" in v:
        raise InvalidVertexIdError(
            f"vertex id must be a non-empty string without whitespace or '/': {v!r}"
        )


class TemporalGraph:
    """Immutable temporal graph ``(G, lambda)``.

    Use :func:`build` (or the constructor with already-canonical data) to
    create instances.  Deletions return new graphs.
    """

    __slots__ = ("_vertices", "_labels", "__dict__")

    def __init__(self, vertices: Iterable[str], labels: Mapping[Edge, Iterable[int]]):
        verts = sorted(set(vertices))
        for v in verts:
            _check_vertex_id(v)
        vset = set(verts)
        norm: dict[Edge, tuple[int, ...]] = {}
        for (u, v), ts in labels.items():
            if u == v:
                raise SelfLoopError(f"self-loop on {u!r}")
            for x in (u, v):
                if x not in vset:
                    raise UnknownVertexError(f"edge {u}-{v} has unknown endpoint {x!r}")
            key = edge_key(u, v)
            if key in norm:
                raise DuplicateEdgeError(f"duplicate edge {key[0]}-{key[1]}")
            ts = sorted(set(ts))
            if not ts:
                raise EmptyLabelSetError(f"edge {key[0]}-{key[1]} has no labels")
            for t in ts:
                if isinstance(t, bool) or not isinstance(t, int) or t < 1:
                    raise InvalidLabelError(f"edge {key[0]}-{key[1]} has invalid label {t!r}")
            norm[key] = tuple(ts)
        self._vertices = tuple(verts)
        self._labels = {e: norm[e] for e in sorted(norm)}

    @classmethod
    def _trusted(cls, vertices: tuple[str, ...], labels: dict[Edge, tuple[int, ...]]):
        # canonical inputs only: sorted vertices, sorted keys, sorted labels
        g = cls.__new__(cls)
        g._vertices = vertices
        g._labels = labels
        return g

    def _derive(self, labels: dict[Edge, tuple[int, ...]], changed: dict[Edge, tuple[int, ...] | None]):
        """Child graph sharing index and patching only the adjacency rows of ``changed`` edges."""
        g = TemporalGraph._trusted(self._vertices, labels)
        if self.__dict__.get("is_forest"):
            g.__dict__["is_forest"] = True
        if "adjacency" not in self.__dict__:
            return g
        idx = self.index
        rows = list(self.adjacency)
        for (u, v), ts in changed.items():
            for a, b in ((u, v), (v, u)):
                i, j = idx[a], idx[b]
                row = [entry for entry in rows[i] if entry[0] != j]
                if ts:
                    row.append((j, ts))
                    row.sort()
                rows[i] = tuple(row)
        g.__dict__["index"] = idx
        g.__dict__["adjacency"] = tuple(rows)
        return g

    # -- basic views -----------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self._labels)

    @property
    def labels(self) -> Mapping[Edge, tuple[int, ...]]:
        return dict(self._labels)

    def label_set(self, u: str, v: str) -> tuple[int, ...]:
        return self._labels[edge_key(u, v)]

    def has_edge(self, u: str, v: str) -> bool:
        return edge_key(u, v) in self._labels

    @cached_property
    def time_edges(self) -> tuple[TimeEdge, ...]:
        return tuple(TimeEdge(e, t) for e, ts in self._labels.items() for t in ts)

    def is_time_edge(self, te: TimeEdge) -> bool:
        ts = self._labels.get(te.edge)
        return ts is not None and te.time in ts

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return len(self._labels)

    @cached_property
    def lifetime(self) -> int:
        """Maximum label over all edges (0 for an edgeless graph)."""
        return max((ts[-1] for ts in self._labels.values()), default=0)

    @cached_property
    def min_label(self) -> int:
        return min((ts[0] for ts in self._labels.values()), default=0)

    def neighbors(self, v: str) -> tuple[str, ...]:
        i = self.index[v]
        return tuple(self._vertices[w] for w, _ in self.adjacency[i])

    # -- internal integer views ------------------------------------------

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self._vertices)}

    @cached_property
    def is_forest(self) -> bool:
        """Whether the underlying static graph is acyclic."""
        parent = list(range(len(self._vertices)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        idx = self.index
        for u, v in self._labels:
            a, b = find(idx[u]), find(idx[v])
            if a == b:
                return False
            parent[a] = b
        return True

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, tuple[int, ...]], ...], ...]:
        """Per vertex index: tuple of ``(neighbor index, labels)``."""
        idx = self.index
        adj: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in self._vertices]
        for (u, v), ts in self._labels.items():
            adj[idx[u]].append((idx[v], ts))
            adj[idx[v]].append((idx[u], ts))
        return tuple(tuple(sorted(a)) for a in adj)

    # -- value semantics -------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TemporalGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._labels == other._labels

    def __hash__(self):
        return hash((self._vertices, tuple(self._labels.items())))

    def __repr__(self):
        return (
            f"TemporalGraph(n={self.n}, m={self.m}, "
            f"time_edges={len(self.time_edges)}, lifetime={self.lifetime})"
        )

    def underlying_edges(self) -> list[Edge]:
        return list(self._labels)

    def to_networkx(self):
        import networkx as nx

        G = nx.Graph()
        G.add_nodes_from(self._vertices)
        for (u, v), ts in self._labels.items():
            G.add_edge(u, v, labels=ts)
        return G


def build(vertices: Iterable[str], edges: Iterable[tuple[str, str, Iterable[int]]]) -> TemporalGraph:
    """Build a graph from vertex ids and ``(u, v, labels)`` triples.

    Raises a distinct :class:`GraphError` subclass for a duplicate edge, an
    empty label set, a self-loop, an unknown endpoint or a non-positive label.
    """
    labels: dict[Edge, tuple[int, ...]] = {}
    for u, v, ts in edges:
        key = edge_key(u, v)
        if key in labels:
            raise DuplicateEdgeError(f"duplicate edge {key[0]}-{key[1]}")
        ts = tuple(ts)
        if not ts:
            raise EmptyLabelSetError(f"edge {key[0]}-{key[1]} has no labels")
        labels[key] = ts
    return TemporalGraph(vertices, labels)


def delete_edges(g: TemporalGraph, removed: Iterable[Edge]) -> TemporalGraph:
    removed = {edge_key(*e) for e in removed}
    for e in removed:
        if e not in g._labels:
            raise GraphError(f"not an edge: {e[0]}-{e[1]}")
    if not removed:
        return g
    labels = {e: ts for e, ts in g._labels.items() if e not in removed}
    return g._derive(labels, dict.fromkeys(removed))


def delete_time_edges(g: TemporalGraph, removed: Iterable[TimeEdge]) -> TemporalGraph:
    """Remove time-edges; edges left without labels disappear."""
    drop: dict[Edge, set[int]] = {}
    for te in removed:
        if not g.is_time_edge(te):
            raise GraphError(f"not a time-edge: {te}")
        drop.setdefault(te.edge, set()).add(te.time)
    if not drop:
        return g
    labels = {}
    changed = {}
    for e, ts in g._labels.items():
        if e in drop:
            ts = tuple(t for t in ts if t not in drop[e])
            changed[e] = ts or None
            if not ts:
                continue
        labels[e] = ts
    return g._derive(labels, changed)


def degree_summary(g: TemporalGraph) -> DegreeSummary:
    deg = {v: 0 for v in g.vertices}
    for (u, v), ts in g._labels.items():
        deg[u] += len(ts)
        deg[v] += len(ts)
    return DegreeSummary(deg, max(deg.values(), default=0))
