"""Acceptance criteria 1-9, each at its stated scale and tolerance.

Every test records one ``criterion N: PASS|FAIL ...`` line; the lines are
printed in the pytest terminal summary, or directly when this file is run
as a script (``python tests/test_acceptance.py``).
"""

from __future__ import annotations

import itertools
import math
import random
import time

import networkx as nx

from tempreach import DeletionInstance, ReachabilityQuery, Variant, reach_set, reach_size, solve_bnb, solve_exhaustive
from tempreach.cli import run as cli_run
from tempreach.formats import write_tgf1
from tempreach.graph import degree_summary
from tempreach.oracles import brute_reach_set, has_clique, random_34sat, random_static_graph, random_temporal_graph, rooted_tree_classes, satisfying_assignment
from tempreach.reductions import CliqueInstance, SatInstance, reduce_clique_ab_tree, reduce_clique_w1, reduce_sat
from tempreach.solvers import OracleScaleExceeded
from tempreach.structure import build_structure, decompose_heuristic, emit_mso_formula, enumerate_rooted_trees, lift_decomposition, lifted_width_bound, validate_decomposition

RESULTS: dict[int, str] = {}


def record(num: int, ok: bool, detail: str, elapsed: float, limit: float | None = None) -> None:
    if limit is not None and elapsed > limit:
        ok, detail = False, f"{detail}; {elapsed:.1f}s exceeds {limit:.0f}s"
    RESULTS[num] = f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail}; {elapsed:.1f}s)"
    print(RESULTS[num])
    assert ok, RESULTS[num]


def _windows(T: int) -> list[tuple[int, int]]:
    return [(1, max(T, 1)), (1, 2), (2, 3), (2, 2)]


def _criterion1_graphs():
    rng = random.Random(1001)
    for _ in range(500):
        T = rng.randint(1, 6)
        n = rng.randint(1, 8)
        yield random_temporal_graph(rng, n, rng.randint(0, min(12, n * (n - 1) // 2)), T)


def test_criterion_1_reach_matches_path_enumeration():
    t0 = time.monotonic()
    bad = checks = 0
    for g in _criterion1_graphs():
        for a, b in _windows(g.lifetime):
            q = ReachabilityQuery(a, b)
            for v in g.vertices:
                checks += 1
                bad += reach_set(g, v, q) != brute_reach_set(g, v, a, b)
    record(1, bad == 0, f"{checks - bad}/{checks} reach sets equal on 500 graphs", time.monotonic() - t0, 60)


def test_criterion_2_self_reachability():
    t0 = time.monotonic()
    bad = checks = 0
    for g in _criterion1_graphs():
        for a, b in _windows(g.lifetime):
            q = ReachabilityQuery(a, b)
            for v in g.vertices:
                r = reach_set(g, v, q)
                checks += 1
                bad += not (v in r and len(r) >= 1)
    record(2, bad == 0, f"{checks - bad}/{checks} vertices reach themselves", time.monotonic() - t0)


def test_criterion_3_sat_reduction_ground_truth():
    t0 = time.monotonic()
    rng = random.Random(3003)
    agree = sizes_ok = n_sat = n_unsat = exhaustive_runs = 0
    for i in range(50):
        n = 3 + i % 6
        clauses = random_34sat(rng, n)
        truth = satisfying_assignment(range(1, n + 1), clauses) is not None
        n_sat += truth
        n_unsat += not truth
        inst = reduce_sat(SatInstance(tuple(clauses))).instance
        try:
            sol = solve_exhaustive(inst)
            exhaustive_runs += 1
        except OracleScaleExceeded:
            # beyond the subset cap; the branch-and-bound engine is exact
            # and cross-checked against the exhaustive one in criterion 7
            sol = solve_bnb(inst)
        agree += sol.feasible == truth
        sizes_ok += (not sol.feasible) or len(sol.witness) == n
    mixed = n_sat > 0 and n_unsat > 0
    detail = (
        f"{agree}/50 feasibility = satisfiability, {sizes_ok}/50 witness sizes = n, "
        f"{n_sat} sat / {n_unsat} unsat, exhaustive engine on {exhaustive_runs}"
    )
    if not mixed:
        detail += "; no unsatisfiable formula in the sample, and none exists for n <= 7"
    record(3, agree == 50 and sizes_ok == 50 and mixed, detail, time.monotonic() - t0, 300)


def _bipartite(rng: random.Random, n: int, m: int) -> nx.Graph:
    left = n // 2
    G = nx.Graph()
    G.add_nodes_from(str(i) for i in range(1, n + 1))
    cross = [(str(a), str(b)) for a in range(1, left + 1) for b in range(left + 1, n + 1)]
    G.add_edges_from(rng.sample(cross, min(m, len(cross))))
    return G


def _criterion4_graphs():
    # alternate dense random graphs with triangle-free bipartite ones so both
    # answers occur for r = 3 and r = 4
    rng = random.Random(4004)
    out = []
    while len(out) < 30:
        n = rng.randint(7, 9)
        if len(out) % 2:
            G = _bipartite(rng, n, rng.randint(11, (n // 2) * (n - n // 2)))
        else:
            G = random_static_graph(rng, n, rng.randint(11, min(24, n * (n - 1) // 2)))
        if G.number_of_edges() > 4 + math.comb(4, 2):
            out.append(G)
    return out


def test_criterion_4_clique_reductions_ground_truth():
    t0 = time.monotonic()
    tally: dict[str, list[int]] = {}
    for G in _criterion4_graphs():
        for r in (3, 4):
            truth = has_clique(G, r)
            runs = [(f"w1 r={r}", reduce_clique_w1(CliqueInstance(G, r)))]
            for ab in ((1, 1), (2, 3)):
                runs.append((f"ab-tree{ab} r={r}", reduce_clique_ab_tree(CliqueInstance(G, r), *ab)))
            for name, out in runs:
                ok = solve_bnb(out.instance).feasible == truth
                tally.setdefault(name, [0, 0])
                tally[name][0] += ok
                tally[name][1] += 1
    failing = [f"{k} {v[0]}/{v[1]}" for k, v in sorted(tally.items()) if v[0] != v[1]]
    detail = f"{sum(v[0] for v in tally.values())}/{sum(v[1] for v in tally.values())} agree with brute-force clique search"
    if failing:
        detail += "; mismatches: " + ", ".join(failing)
        detail += " (for r <= 3, C(r,2) <= r lets r pendant time-edges meet the threshold)"
    record(4, not failing, detail, time.monotonic() - t0, 300)


def _vertex_cover_number_is_two(G: nx.Graph) -> bool:
    def covers(S):
        return all(u in S or v in S for u, v in G.edges)

    if covers(set()) or any(covers({v}) for v in G.nodes):
        return False
    return any(covers(set(p)) for p in itertools.combinations(G.nodes, 2))


def test_criterion_5_structural_guarantees():
    t0 = time.monotonic()
    rng = random.Random(5005)
    bad = []
    for i in range(30):
        n = 3 + i % 6
        out = reduce_sat(SatInstance(tuple(random_34sat(rng, n))))
        g, q = out.instance.graph, ReachabilityQuery(1, 2)
        if degree_summary(g).maximum > 5 or g.lifetime != 2 or out.instance.h != 7:
            bad.append(f"sat#{i} shape")
        for gd in out.names["variables"].values():
            if reach_size(g, gd["head"], q) != 8:
                bad.append(f"sat#{i} head")
        for nm in out.names["clauses"].values():
            if reach_size(g, nm["vertex"], q) != 8 or reach_size(g, nm["satellite"], q) != 2:
                bad.append(f"sat#{i} clause")
    trees = 0
    for G in _criterion4_graphs():
        for ab in ((1, 1), (2, 3)):
            g = reduce_clique_ab_tree(CliqueInstance(G, 4), *ab).instance.graph
            T = nx.Graph(list(g.edges))
            T.add_nodes_from(g.vertices)
            trees += 1
            if not (nx.is_forest(T) and _vertex_cover_number_is_two(T)):
                bad.append("tree")
    detail = f"30 SAT outputs and {trees} double stars checked, {len(bad)} violations"
    record(5, not bad, detail, time.monotonic() - t0)


def test_criterion_6_lifted_width_bound():
    t0 = time.monotonic()
    rng = random.Random(6006)
    ok = 0
    for _ in range(30):
        n = rng.randint(2, 10)
        g = random_temporal_graph(rng, n, rng.randint(1, min(18, n * (n - 1) // 2)), 6)
        td = decompose_heuristic(g.to_networkx())
        lifted = lift_decomposition(td, g)
        ok += bool(validate_decomposition(lifted, build_structure(g))) and lifted.width <= lifted_width_bound(g, td.width)
    record(6, ok == 30, f"{ok}/30 lifted decompositions valid within (2D+1)(w+1)-1", time.monotonic() - t0, 30)


def test_criterion_7_bnb_matches_exhaustive():
    t0 = time.monotonic()
    rng = random.Random(7007)
    agree = 0
    for _ in range(300):
        T = rng.randint(1, 4)
        n = rng.randint(2, 7)
        g = random_temporal_graph(rng, n, rng.randint(1, min(10, n * (n - 1) // 2)), T, max_labels=2)
        variant = rng.choice(list(Variant))
        a, b = rng.choice(_windows(T) + [(1, 1)])
        units = g.edges if variant is Variant.EDGE else g.time_edges
        inst = DeletionInstance(g, variant, ReachabilityQuery(a, b), rng.randint(0, min(3, len(units))), rng.randint(1, n))
        e, bb = solve_exhaustive(inst), solve_bnb(inst)
        agree += e.feasible == bb.feasible and len(e.witness) == len(bb.witness)
    record(7, agree == 300, f"{agree}/300 agree on feasibility and minimum size", time.monotonic() - t0, 600)


def test_criterion_8_single_label_equivalence():
    t0 = time.monotonic()
    rng = random.Random(8008)
    agree = 0
    for i in range(100):
        T = rng.randint(1, 5)
        n = rng.randint(2, 7)
        g = random_temporal_graph(rng, n, rng.randint(1, min(10, n * (n - 1) // 2)), T, max_labels=1)
        a, b = rng.choice(_windows(T))
        q = ReachabilityQuery(a, b)
        # half the instances get the full budget, so the optimum is always found
        k = g.m if i % 2 else rng.randint(0, min(3, g.m))
        h = rng.randint(1, n)
        e = solve_bnb(DeletionInstance(g, Variant.EDGE, q, k, h))
        t = solve_bnb(DeletionInstance(g, Variant.TIME_EDGE, q, k, h))
        agree += e.feasible == t.feasible and len(e.witness) == len(t.witness)
    record(8, agree == 100, f"{agree}/100 identical feasibility and optimum size", time.monotonic() - t0)


def test_criterion_9_mso_emitter(tmp_path):
    t0 = time.monotonic()
    problems = []
    for h in (1, 2, 3):
        trees = len(enumerate_rooted_trees(h))
        if trees != len(rooted_tree_classes(h + 1)):
            problems.append(f"h={h} tree count")
        if emit_mso_formula(h).count("(forall") != trees:
            problems.append(f"h={h} conjuncts")
    rng = random.Random(9009)
    texts = set()
    for n in (3, 6, 12):
        graph, formula = tmp_path / f"g{n}.tgf", tmp_path / f"phi{n}.txt"
        graph.write_text(write_tgf1(random_temporal_graph(rng, n, 2 * n, 5)))
        code = cli_run(["structure", "--emit", "mso", "--h", "3", str(graph), "-o", str(formula)])
        texts.add((code, formula.read_text()))
    if len(texts) != 1 or next(iter(texts))[0] != 0:
        problems.append("formula depends on the input graph")
    detail = ", ".join(problems) or "conjuncts 1, 2, 4 match tree counts; same formula for 3 graphs"
    record(9, not problems, detail, time.monotonic() - t0)


def _main() -> int:
    import inspect
    import pathlib
    import tempfile

    failed = 0
    for num in range(1, 10):
        fn = next(v for k, v in globals().items() if k.startswith(f"test_criterion_{num}_"))
        try:
            if inspect.signature(fn).parameters:
                with tempfile.TemporaryDirectory() as d:
                    fn(pathlib.Path(d))
            else:
                fn()
        except AssertionError:
            failed += 1
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(_main())
