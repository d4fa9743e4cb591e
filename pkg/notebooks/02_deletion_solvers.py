"""Bounding reachability by deleting edges or single contacts.

Run with ``python notebooks/02_deletion_solvers.py``.
"""

import networkx as nx

from tempreach import DeletionInstance, ReachabilityQuery, Variant, build, solve_bnb, solve_exhaustive, verify_solution
from tempreach.formats import unit_line
from tempreach.oracles import find_clique
from tempreach.reductions import CliqueInstance, SatInstance, reduce_clique_w1, reduce_sat, witness_back

g = build(
    ["a", "b", "c", "d", "e"],
    [("a", "b", [1, 5]), ("b", "c", [2]), ("c", "d", [3, 6]), ("d", "e", [4]), ("b", "d", [2])],
)
q = ReachabilityQuery(1, 2)

# Whole edges versus individual time-edges.  Deleting an edge drops all of
# its labels, so the edge variant never needs more units; the time-edge
# variant removes fewer contacts.
for variant in Variant:
    for k in range(4):
        inst = DeletionInstance(g, variant, q, k, 2)
        sol = solve_bnb(inst)
        if sol.feasible:
            print(f"{variant.value:9s}: k={k} suffices, delete {', '.join(unit_line(u) for u in sol.witness)}")
            assert verify_solution(inst, sol.witness)
            break

# The exhaustive engine is the reference; both agree on the minimum size.
inst = DeletionInstance(g, Variant.TIME_EDGE, q, 3, 2)
print("exhaustive:", len(solve_exhaustive(inst).witness), "bnb:", len(solve_bnb(inst).witness))

# Hardness reductions produce instances whose answer is known by other means.
G = nx.cycle_graph(6)
G.add_edges_from([(0, 2), (2, 4), (1, 4)])
out = reduce_clique_w1(CliqueInstance(G, 3))
sol = solve_bnb(out.instance)
print(f"\nclique instance: {out.instance.graph.n} vertices, k={out.instance.k}, h={out.instance.h}")
print("solver feasible:", sol.feasible, "| triangle in source:", find_clique(G, 3))
print("clique read back from the witness:", witness_back(out, sol.witness))

formula = SatInstance(((1, 2, 3), (-1, -2, 4), (-3, -4, 1), (2, -4, -1)))
out = reduce_sat(formula)
sol = solve_bnb(out.instance)
print(f"\n3,4-SAT instance: {out.instance.graph.n} vertices, witness of {len(sol.witness)} edges")
print("assignment:", witness_back(out, sol.witness))
