import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tempreach import (
    DeletionInstance,
    ReachabilityQuery,
    Status,
    TimeEdge,
    Variant,
    build,
    max_reachability,
    reach_size,
    solve,
    solve_bnb,
    solve_exhaustive,
    verify_solution,
)
from tempreach.oracles import find_clique, random_temporal_graph
from tempreach.reductions import CliqueInstance, SatInstance, reduce_clique_ab_tree, reduce_clique_w1, reduce_sat
from tempreach.solvers import InstanceError, InvalidUnitError, OracleScaleExceeded

from strategies import temporal_graphs, windows


def _path(n=4, times=(1, 2, 3)):
    verts = [f"p{i}" for i in range(n)]
    return build(verts, [(verts[i], verts[i + 1], [t]) for i, t in enumerate(times)])


def _c5_chords():
    G = nx.cycle_graph(5)
    G.add_edges_from([(0, 2), (1, 3), (2, 4)])
    return G


@pytest.mark.parametrize("h", [1, 2, 3, 4])
def test_zero_budget_feasible_iff_already_compliant(h):
    g = _path()
    q = ReachabilityQuery(1, 3)
    inst = DeletionInstance(g, Variant.EDGE, q, 0, h)
    for engine in ("bnb", "exhaustive"):
        assert solve(inst, engine).feasible == (max_reachability(g, q) <= h)


def test_satisfiable_formula_gives_one_literal_edge_per_gadget():
    out = reduce_sat(SatInstance(((1, 2, 3), (-1, -2, -3))))
    sol = solve_bnb(out.instance)
    assert sol.feasible
    assert len(sol.witness) == 3
    for gd in out.names["variables"].values():
        gadget = {gd["head"], gd["pos"], gd["neg"], gd["pos_tip"], gd["neg_tip"], *gd["pads"]}
        assert sum(set(w) <= gadget for w in sol.witness) == 1


def test_clique_instance_with_and_without_triangle():
    G = _c5_chords()
    out = reduce_clique_w1(CliqueInstance(G, 3))
    assert out.instance.h == 8
    assert solve_bnb(out.instance).feasible
    # a triangle-free graph with enough edges: the 8-cycle plus long chords
    F = nx.cycle_graph(8)
    F.add_edges_from([(0, 4), (2, 6)])
    assert find_clique(F, 3) is None
    assert not solve_bnb(reduce_clique_w1(CliqueInstance(F, 3)).instance).feasible


def test_h_at_least_n_is_trivially_feasible():
    g = _path()
    inst = DeletionInstance(g, Variant.TIME_EDGE, ReachabilityQuery(1, 1), 0, g.n)
    sol = solve_bnb(inst)
    assert sol.feasible and sol.witness == ()


def test_double_star_worked_example():
    # K4 minus an edge: 4 vertices, 5 edges, contains a triangle
    G = nx.complete_graph(4)
    G.remove_edge(0, 1)
    out = reduce_clique_ab_tree(CliqueInstance(G, 3), 2, 3)
    inst = out.instance
    assert (inst.k, inst.h) == (3, 9)
    assert inst.graph.label_set("x", "y") == (5, 8, 11, 14)
    assert solve_bnb(inst).feasible


def test_verify_empty_witness_on_compliant_graph():
    g = _path()
    inst = DeletionInstance(g, Variant.EDGE, ReachabilityQuery(1, 3), 0, g.n)
    assert verify_solution(inst, [])


def test_verify_clique_witness():
    out = reduce_clique_w1(CliqueInstance(_c5_chords(), 3))
    clique = find_clique(out.source.graph, 3)
    witness = [("s", f"v:{u}") for u in clique]
    assert verify_solution(out.instance, witness)
    g = out.instance.apply(witness)
    assert reach_size(g, "s", out.instance.query) == out.instance.h


def test_verify_rejects_oversized_witness():
    g = _path()
    inst = DeletionInstance(g, Variant.EDGE, ReachabilityQuery(1, 3), 1, 1)
    assert not verify_solution(inst, g.edges[:2])


def test_verify_rejects_wrong_unit_kind():
    g = _path()
    inst = DeletionInstance(g, Variant.EDGE, ReachabilityQuery(1, 3), 1, 1)
    with pytest.raises(InvalidUnitError):
        verify_solution(inst, [TimeEdge(("p0", "p1"), 1)])
    with pytest.raises(InvalidUnitError):
        verify_solution(inst, [("p0", "p2")])


@pytest.mark.parametrize("k, h", [(-1, 1), (0, 0), (99, 1)])
def test_instance_validation(k, h):
    with pytest.raises(InstanceError):
        DeletionInstance(_path(), Variant.EDGE, ReachabilityQuery(1, 1), k, h)


def test_exhaustive_cap():
    g = random_temporal_graph(random.Random(1), 8, 20, 4)
    inst = DeletionInstance(g, Variant.TIME_EDGE, ReachabilityQuery(1, 4), 6, 1)
    with pytest.raises(OracleScaleExceeded):
        solve_exhaustive(inst, cap=1000)


def test_node_limit_reports_exhaustion():
    out = reduce_clique_w1(CliqueInstance(_c5_chords(), 3))
    sol = solve_bnb(out.instance, node_limit=1)
    assert sol.status is Status.EXHAUSTED
    assert not sol.feasible


def test_bnb_agrees_with_exhaustive(rng):
    for _ in range(60):
        T = rng.randint(1, 4)
        g = random_temporal_graph(rng, rng.randint(2, 7), rng.randint(1, 10), T, max_labels=2)
        variant = rng.choice(list(Variant))
        a, b = rng.choice([(1, T), (1, 2), (2, 3), (2, 2), (1, 1)])
        inst = DeletionInstance(g, variant, ReachabilityQuery(a, b), rng.randint(0, min(3, len(g.edges if variant is Variant.EDGE else g.time_edges))), rng.randint(1, g.n))
        e, bb = solve_exhaustive(inst), solve_bnb(inst, canonical=True)
        assert (e.feasible, e.witness) == (bb.feasible, bb.witness)


@given(temporal_graphs(max_n=5, max_t=4, max_labels=2), windows(max_t=4), st.sampled_from(list(Variant)), st.data())
def test_bnb_minimum_matches_exhaustive(g, window, variant, data):
    units = g.edges if variant is Variant.EDGE else g.time_edges
    k = data.draw(st.integers(0, min(3, len(units))))
    h = data.draw(st.integers(1, max(g.n, 1)))
    inst = DeletionInstance(g, variant, ReachabilityQuery(*window), k, h)
    e, bb = solve_exhaustive(inst), solve_bnb(inst)
    assert e.feasible == bb.feasible
    assert len(e.witness) == len(bb.witness)
    if bb.feasible:
        assert verify_solution(inst, bb.witness)
        assert bb.achieved_max_reachability <= h


@given(temporal_graphs(max_n=5, max_t=3, max_labels=1), windows(max_t=3), st.data())
def test_single_label_variants_agree(g, window, data):
    k = data.draw(st.integers(0, min(3, g.m)))
    h = data.draw(st.integers(1, max(g.n, 1)))
    q = ReachabilityQuery(*window)
    e = solve_bnb(DeletionInstance(g, Variant.EDGE, q, k, h))
    t = solve_bnb(DeletionInstance(g, Variant.TIME_EDGE, q, k, h))
    assert e.feasible == t.feasible
    assert len(e.witness) == len(t.witness)


@given(temporal_graphs(max_n=5, max_t=4, max_labels=2), windows(max_t=4), st.data())
def test_feasibility_is_monotone_in_budget(g, window, data):
    h = data.draw(st.integers(1, max(g.n, 1)))
    q = ReachabilityQuery(*window)
    seen = [solve_bnb(DeletionInstance(g, Variant.TIME_EDGE, q, k, h)).feasible for k in range(min(3, len(g.time_edges)) + 1)]
    assert seen == sorted(seen)


def test_witness_is_deterministic():
    out = reduce_clique_w1(CliqueInstance(_c5_chords(), 3))
    assert solve_bnb(out.instance).witness == solve_bnb(out.instance).witness
