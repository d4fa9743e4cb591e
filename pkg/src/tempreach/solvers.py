"""Exact solvers for the edge and time-edge deletion problems.

Given a temporal graph, a window ``(alpha, beta)``, a budget ``k`` and a
threshold ``h``, decide whether deleting at most ``k`` units (edges, or
time-edges) brings every vertex's reach set down to at most ``h`` vertices.
Both solvers return the lexicographically least witness of minimum size.

Deletions only ever shrink reach sets, so a vertex that is within the
threshold stays within it.  Both solvers use this to recheck only the
vertices that violate the threshold in the input graph.
"""

from __future__ import annotations

import enum
import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .graph import Edge, GraphError, TemporalGraph, TimeEdge, delete_edges, delete_time_edges, edge_key
from .reach import ReachabilityQuery, _reach_indices, max_reachability, reach_and_walk_edges

Unit = Union[Edge, TimeEdge]


class Variant(str, enum.Enum):
    EDGE = "edge"
    TIME_EDGE = "time-edge"


class Status(str, enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    EXHAUSTED = "resource-exhausted"


class InstanceError(ValueError):
    pass


class InvalidUnitError(ValueError):
    pass


class OracleScaleExceeded(RuntimeError):
    """The exhaustive oracle was asked to enumerate more subsets than its cap."""


@dataclass(frozen=True)
class DeletionInstance:
    graph: TemporalGraph
    variant: Variant
    query: ReachabilityQuery
    k: int
    h: int

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.h < 1:
            raise InstanceError(f"threshold h must be >= 1, got {self.h}")
        if self.k < 0:
            raise InstanceError(f"budget k must be >= 0, got {self.k}")
        if self.k > len(self.units()):
            raise InstanceError(
                f"budget k={self.k} exceeds the {len(self.units())} deletable units"
            )

    def units(self) -> tuple[Unit, ...]:
        """Deletable units in canonical (sorted) order."""
        if self.variant is Variant.EDGE:
            return self.graph.edges
        return self.graph.time_edges

    def check_unit(self, unit) -> Unit:
        try:
            if self.variant is Variant.EDGE:
                if isinstance(unit, TimeEdge):
                    raise InvalidUnitError(f"time-edge {unit} given for the edge variant")
                unit = edge_key(*unit)
                if not self.graph.has_edge(*unit):
                    raise InvalidUnitError(f"not an edge of the graph: {unit[0]}-{unit[1]}")
            else:
                if not isinstance(unit, TimeEdge):
                    raise InvalidUnitError(f"edge {unit!r} given for the time-edge variant")
                if not self.graph.is_time_edge(unit):
                    raise InvalidUnitError(f"not a time-edge of the graph: {unit}")
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidUnitError):
                raise
            raise InvalidUnitError(f"malformed unit {unit!r}") from exc
        return unit

    def apply(self, witness: Iterable[Unit]) -> TemporalGraph:
        return _delete(self.graph, self.variant, witness)


@dataclass(frozen=True)
class DeletionSolution:
    status: Status
    witness: tuple[Unit, ...] = ()
    achieved_max_reachability: int = 0
    nodes_explored: int = 0

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


def _delete(g: TemporalGraph, variant: Variant, units: Iterable[Unit]) -> TemporalGraph:
    if variant is Variant.EDGE:
        return delete_edges(g, units)
    return delete_time_edges(g, units)


def verify_solution(inst: DeletionInstance, witness: Iterable[Unit]) -> bool:
    """True iff ``witness`` fits the budget and brings max reachability to ``<= h``."""
    units = [inst.check_unit(u) for u in witness]
    if len(set(units)) > inst.k:
        return False
    try:
        g = inst.apply(units)
    except GraphError as exc:
        raise InvalidUnitError(str(exc)) from exc
    return max_reachability(g, inst.query) <= inst.h


def _violators(g: TemporalGraph, q: ReachabilityQuery, h: int, among: Iterable[int]) -> list[int]:
    return [v for v in among if len(_reach_indices(g, v, q)) > h]


def _finish(inst: DeletionInstance, witness: Sequence[Unit], nodes: int) -> DeletionSolution:
    g = inst.apply(witness)
    return DeletionSolution(
        Status.FEASIBLE, tuple(witness), max_reachability(g, inst.query), nodes
    )


def _infeasible(inst: DeletionInstance, nodes: int, status=Status.INFEASIBLE) -> DeletionSolution:
    return DeletionSolution(status, (), max_reachability(inst.graph, inst.query), nodes)


DEFAULT_ORACLE_CAP = 2_000_000


def solve_exhaustive(inst: DeletionInstance, cap: int = DEFAULT_ORACLE_CAP) -> DeletionSolution:
    """Try every unit subset of size ``<= k`` in lexicographic order.

    Raises :class:`OracleScaleExceeded` when the number of subsets exceeds
    ``cap``.
    """
    units = inst.units()
    total = sum(math.comb(len(units), j) for j in range(inst.k + 1))
    if total > cap:
        raise OracleScaleExceeded(
            f"{total} subsets of {len(units)} units exceed the oracle cap {cap}"
        )
    g, q, h = inst.graph, inst.query, inst.h
    bad = _violators(g, q, h, range(g.n))
    nodes = 1
    if not bad:
        return _finish(inst, (), nodes)
    for size in range(1, inst.k + 1):
        for combo in itertools.combinations(units, size):
            nodes += 1
            g2 = _delete(g, inst.variant, combo)
            if not _violators(g2, q, h, bad) and max_reachability(g2, q) <= h:
                return _finish(inst, combo, nodes)
    return _infeasible(inst, nodes)


class _Exhausted(Exception):
    pass


@dataclass
class _Search:
    """Search state.  Units are handled as integer ids: positions in ``inst.units()``."""

    inst: DeletionInstance
    node_limit: int | None
    deadline: float | None
    nodes: int = 0
    unit_of: dict = field(default_factory=dict)
    units: tuple = ()
    memo: dict = field(default_factory=dict)

    def __post_init__(self):
        self.units = self.inst.units()
        pos = {u: i for i, u in enumerate(self.units)}
        idx = self.inst.graph.index
        for te in self.inst.graph.time_edges:
            a, b = idx[te.edge[0]], idx[te.edge[1]]
            key = (min(a, b), max(a, b), te.time)
            self.unit_of[key] = pos[te if self.inst.variant is Variant.TIME_EDGE else te.edge]

    def delete(self, g: TemporalGraph, ids) -> TemporalGraph:
        return _delete(g, self.inst.variant, [self.units[i] for i in ids])

    def tick(self):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _Exhausted
        if self.deadline is not None and self.nodes % 64 == 0 and time.monotonic() > self.deadline:
            raise _Exhausted

    def probe(self, g: TemporalGraph, v: int) -> tuple[int, frozenset]:
        reach, used = reach_and_walk_edges(g, v, self.inst.query)
        unit_of = self.unit_of
        return len(reach), frozenset([unit_of[x] for x in used])

    def child(self, g: TemporalGraph, deleted: frozenset, viol: dict, x: int) -> dict:
        """Violators (with their probes) after additionally deleting unit ``x``.

        Memoized on the deletion set: the same set is reached from several
        parents, and its violators do not depend on the route taken.
        """
        key = deleted | {x}
        hit = self.memo.get(key)
        if hit is None:
            g2 = self.delete(g, (x,))
            h = self.inst.h
            hit = {}
            for v, c in viol.items():
                if x in c[1]:
                    c = self.probe(g2, v)
                if c[0] > h:
                    hit[v] = c
            self.memo[key] = hit
        return hit

    def twins(self, g: TemporalGraph, forbidden: frozenset, pivot: int) -> tuple[set, set]:
        """Units on interchangeable pendant leaves.

        Leaves hanging off the same vertex with the same labels are permuted
        freely by automorphisms of ``g``.  When each carries a single unit,
        a solution may be assumed to use the smallest members of the class
        first, so only the smallest allowed member needs branching on; the
        rest are returned as ``redundant``.  If some member was already
        tried, no completion can use any other member, and those are
        returned as ``dead``.  Classes containing ``pivot`` are left alone
        so that the pivot's walks are unaffected by the permutation.
        """
        classes: dict = {}
        adjacency = g.adjacency
        for i, row in enumerate(adjacency):
            if len(row) != 1:
                continue
            z, ts = row[0]
            if len(adjacency[z]) == 1:
                continue  # an isolated edge; both ends are leaves
            if self.inst.variant is Variant.TIME_EDGE and len(ts) > 1:
                continue
            classes.setdefault((z, ts), []).append(i)
        dead: set = set()
        redundant: set = set()
        for (z, ts), leaves in classes.items():
            if len(leaves) < 2:
                continue
            members = sorted(self.unit_of[(min(i, z), max(i, z), ts[0])] for i in leaves)
            if any(u in forbidden for u in members):
                dead.update(u for u in members if u not in forbidden)
            elif pivot not in leaves:
                redundant.update(members[1:])
        return dead, redundant

    def expand(self, g, deleted: frozenset, viol: dict, forbidden: frozenset, pivot: int):
        """Child violators for every allowed unit on a violator walk.

        Returns ``(kept, redundant)``: ``kept`` maps each surviving unit to
        its child violators, and ``redundant`` marks kept units that need
        not be branched on (see :meth:`twins`).  Unit ``y`` is dropped when
        dominated by ``x``, meaning ``y`` lies on no walk of any vertex still
        violating after ``x`` is deleted; then any solution using ``y`` stays
        a solution with ``x`` in its place.  Forbidden units dominate too:
        every completion using them has already been refuted.
        """
        union = set().union(*(c[1] for c in viol.values()))
        children = {}
        live = {}
        for x in sorted(union):
            ch = self.child(g, deleted, viol, x)
            children[x] = ch
            live[x] = frozenset().union(*(c[1] for c in ch.values()))
        blockers = [x for x in live if x in forbidden]
        dead, redundant = self.twins(g, forbidden, pivot)
        rest = [
            y
            for y in sorted(union - forbidden)
            if y not in dead and all(y in live[x] for x in blockers)
        ]
        # keep strong dominators first so that a pruned unit always has a kept
        # (or forbidden) dominator; this rules out cyclic pruning
        score = {x: sum(1 for y in rest if y not in live[x]) for x in rest}
        kept: list = []
        for x in sorted(rest, key=lambda u: (-score[u], u)):
            if all(x in live[k] for k in kept):
                kept.append(x)
        return {x: children[x] for x in sorted(kept)}, redundant

    def search(self, g, deleted: tuple, forbidden: frozenset, budget: int, viol: dict):
        """Depth-first search for a completion of ``deleted`` using ``<= budget`` units.

        ``viol`` maps each violating vertex to ``(reach size, walk units)``
        in the current graph ``g``.  Units in ``forbidden`` are never deleted.
        """
        self.tick()
        if not viol:
            return deleted
        if budget == 0:
            return None
        if any(not (c[1] - forbidden) for c in viol.values()):
            return None
        pivot = min(viol, key=lambda v: (-viol[v][0], v))
        kept, redundant = self.expand(g, frozenset(deleted), viol, forbidden, pivot)
        cands = {v: c[1] & kept.keys() for v, c in viol.items()}
        if any(not c for c in cands.values()):
            return None
        if _packing_bound(cands.values()) > budget:
            return None

        branch = cands[pivot] - redundant
        # vertices dropping out of the child's violators shrank as well
        coverage = {
            u: sum(1 for v, c in viol.items() if v not in kept[u] or kept[u][v][0] < c[0])
            for u in branch
        }
        order = sorted(branch, key=lambda u: (-coverage[u], u))

        tried = set()
        for u in order:
            child = kept[u]
            g2 = self.delete(g, (u,)) if child and budget > 1 else None
            res = self.search(g2, deleted + (u,), forbidden | tried, budget - 1, child)
            if res is not None:
                return res
            tried.add(u)
        return None

    def root_violators(self, g, among) -> dict:
        h = self.inst.h
        return {v: c for v, c in ((v, self.probe(g, v)) for v in among) if c[0] > h}

    def lex_least(self, g, size: int, viol: dict) -> tuple:
        """Lexicographically least witness of exactly ``size`` units (size is minimal)."""
        relevant = sorted(set().union(*(c[1] for c in viol.values())))
        chosen: tuple = ()
        for pos in range(size):
            for i, u in enumerate(relevant):
                if chosen and u <= chosen[-1]:
                    continue
                child = self.child(g, frozenset(chosen), viol, u)
                g2 = self.delete(g, (u,))
                forbidden = frozenset(relevant[: i + 1])
                if self.search(g2, chosen + (u,), forbidden, size - pos - 1, child) is not None:
                    chosen += (u,)
                    g, viol = g2, child
                    break
            else:
                raise AssertionError("minimum witness vanished during canonicalization")
        return chosen


def _packing_bound(sets) -> int:
    """Size of a greedy family of pairwise disjoint candidate sets.

    Every feasible deletion set must hit each candidate set, so this is a
    lower bound on the number of further deletions needed.
    """
    sets = list(sets)
    if not sets:
        return 0
    overlap = [sum(1 for o in sets if o is not s and not s.isdisjoint(o)) for s in sets]
    best = 0
    for key in (lambda i: (len(sets[i]), overlap[i]), lambda i: (overlap[i], len(sets[i]))):
        used: set = set()
        count = 0
        for i in sorted(range(len(sets)), key=key):
            if used.isdisjoint(sets[i]):
                used |= sets[i]
                count += 1
        best = max(best, count)
    return best


def solve_bnb(
    inst: DeletionInstance,
    node_limit: int | None = None,
    time_limit: float | None = None,
    canonical: bool = False,
) -> DeletionSolution:
    """Branch-and-bound search for a minimum deletion witness.

    Iterative deepening over the budget; at each node the solver branches
    on the units used by walks from the violating vertex of largest reach.
    The witness is deterministic; with ``canonical`` it is additionally
    resolved to the lexicographically least one of minimum size, matching
    :func:`solve_exhaustive` exactly (at a noticeable extra cost).  Hitting
    ``node_limit`` or ``time_limit`` (seconds) yields status ``EXHAUSTED``.
    """
    g, q, h = inst.graph, inst.query, inst.h
    deadline = None if time_limit is None else time.monotonic() + time_limit
    ctx = _Search(inst, node_limit, deadline)
    if h >= g.n:
        return _finish(inst, (), 1)
    bad = _violators(g, q, h, range(g.n))
    if not bad:
        return _finish(inst, (), 1)
    try:
        viol = ctx.root_violators(g, bad)
        for budget in range(1, inst.k + 1):
            found = ctx.search(g, (), frozenset(), budget, viol)
            if found is not None:
                if canonical:
                    found = ctx.lex_least(g, len(found), viol)
                witness = tuple(ctx.units[i] for i in sorted(found))
                return _finish(inst, witness, ctx.nodes)
    except _Exhausted:
        return _infeasible(inst, ctx.nodes, Status.EXHAUSTED)
    return _infeasible(inst, ctx.nodes)


def solve(inst: DeletionInstance, engine: str = "bnb", **kwargs) -> DeletionSolution:
    if engine == "bnb":
        return solve_bnb(inst, **kwargs)
    if engine == "exhaustive":
        return solve_exhaustive(inst, **kwargs)
    raise ValueError(f"unknown engine {engine!r}")
