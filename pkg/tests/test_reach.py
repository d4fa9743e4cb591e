import networkx as nx
import pytest
from hypothesis import given

from tempreach import ReachabilityQuery, build, delete_edges, max_reachability, reach_report, reach_set
from tempreach.oracles import brute_reach_set, random_temporal_graph
from tempreach.reach import QueryError
from tempreach.reductions import CliqueInstance, SatInstance, reduce_clique_ab_tree, reduce_clique_w1, reduce_sat

from strategies import temporal_graphs, windows

FORMULA = SatInstance(((1, 2, 3), (-1, -2, -3)))


def test_isolated_vertex_reaches_itself():
    g = build(["a", "b", "c"], [("a", "b", [1])])
    assert reach_set(g, "c", ReachabilityQuery(1, 1)) == {"c"}


def test_head_vertex_reaches_its_gadget():
    g = reduce_sat(FORMULA).instance.graph
    got = reach_set(g, "head:1", ReachabilityQuery(1, 2))
    assert got == {"head:1", "lit:+1", "lit:-1", "tip:+1", "tip:-1", "pad:1:1", "pad:1:2", "pad:1:3"}


def test_satellite_reaches_only_its_clause():
    g = reduce_sat(FORMULA).instance.graph
    assert reach_set(g, "sat:1", ReachabilityQuery(1, 2)) == {"sat:1", "C:1"}


def test_edgeless_max_reachability_is_one():
    g = build(["a", "b", "c"], [])
    assert max_reachability(g, ReachabilityQuery(1, 3)) == 1


def test_clique_construction_max_at_source():
    G = nx.cycle_graph(5)
    G.add_edges_from([(0, 2), (1, 3), (2, 4)])
    out = reduce_clique_w1(CliqueInstance(G, 3))
    g, q = out.instance.graph, out.instance.query
    report = reach_report(g, q)
    assert report.max_reachability == 1 + 5 + 8
    assert report.argmax == {"s"}


def test_double_star_source_reaches_everything():
    G = nx.cycle_graph(5)
    out = reduce_clique_ab_tree(CliqueInstance(G, 3), 2, 3)
    g = out.instance.graph
    # |V| = 2m + 2 here: x, y, and one u- and one w-leaf per source edge
    assert g.n == 2 * 5 + 2
    assert reach_set(g, "x", out.instance.query) == set(g.vertices)


def test_window_blocks_late_continuation():
    g = build(["a", "b", "c"], [("a", "b", [1]), ("b", "c", [5])])
    assert reach_set(g, "a", ReachabilityQuery(1, 3)) == {"a", "b"}
    assert reach_set(g, "a", ReachabilityQuery(1, 4)) == {"a", "b", "c"}
    assert reach_set(g, "a", ReachabilityQuery(5, 5)) == {"a", "b"}


def test_paths_must_be_simple():
    # a-b-c-a triangle with a pendant d on a; the walk a,b,c,a,d is not a path
    g = build(
        ["a", "b", "c", "d"],
        [("a", "b", [1]), ("b", "c", [2]), ("a", "c", [3]), ("a", "d", [4])],
    )
    assert reach_set(g, "b", ReachabilityQuery(1, 1)) == {"a", "b", "c", "d"}
    # d's only edge is the latest one, so nothing continues from a
    assert reach_set(g, "d", ReachabilityQuery(1, 4)) == {"a", "d"}
    # from c the only way to d goes through a at time 3 then 4
    assert reach_set(g, "c", ReachabilityQuery(1, 1)) == {"a", "b", "c", "d"}


def test_report_lines_are_deterministic():
    g = build(["b", "a"], [("a", "b", [1])])
    assert reach_report(g, ReachabilityQuery(1, 4)).lines() == [
        "a 2 : a b",
        "b 2 : a b",
        "max 2 at a b",
    ]


@pytest.mark.parametrize("alpha, beta", [(0, 1), (2, 1), (-1, 3)])
def test_bad_windows_rejected(alpha, beta):
    with pytest.raises(QueryError):
        ReachabilityQuery(alpha, beta)


def test_matches_brute_force_on_seeded_graphs(rng):
    for _ in range(40):
        T = rng.randint(1, 6)
        g = random_temporal_graph(rng, rng.randint(1, 7), rng.randint(0, 10), T)
        for a, b in [(1, T), (1, 2), (2, 3), (2, 2)]:
            if a > b:
                continue
            q = ReachabilityQuery(a, b)
            for v in g.vertices:
                assert reach_set(g, v, q) == brute_reach_set(g, v, a, b)


@given(temporal_graphs(), windows())
def test_reach_equals_path_enumeration(g, window):
    q = ReachabilityQuery(*window)
    for v in g.vertices:
        assert reach_set(g, v, q) == brute_reach_set(g, v, *window)


@given(temporal_graphs(), windows())
def test_self_in_reach(g, window):
    q = ReachabilityQuery(*window)
    assert all(v in reach_set(g, v, q) for v in g.vertices)


@given(temporal_graphs(), windows())
def test_deletion_never_grows_reach(g, window):
    q = ReachabilityQuery(*window)
    base = {v: reach_set(g, v, q) for v in g.vertices}
    for e in g.edges:
        h = delete_edges(g, [e])
        assert all(reach_set(h, v, q) <= base[v] for v in g.vertices)


@given(temporal_graphs(max_t=4))
def test_wide_window_is_classic_reachability(g):
    wide = ReachabilityQuery(1, max(g.lifetime, 1))
    wider = ReachabilityQuery(1, max(g.lifetime, 1) + 7)
    assert all(reach_set(g, v, wide) == reach_set(g, v, wider) for v in g.vertices)


@given(temporal_graphs(max_n=5), windows())
def test_reach_is_between_one_and_n(g, window):
    assert 1 <= max_reachability(g, ReachabilityQuery(*window)) <= g.n
