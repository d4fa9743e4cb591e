"""Relational structures, lifted tree decompositions and the MSO sentences.

Run with ``python notebooks/03_structure_and_formulas.py``.
"""

from tempreach import ReachabilityQuery, build, degree_summary
from tempreach.formats import write_td1
from tempreach.structure import (
    build_structure,
    decompose_heuristic,
    emit_mso_formula,
    enumerate_rooted_trees,
    lift_decomposition,
    lifted_width_bound,
    validate_decomposition,
)

g = build(
    ["a", "b", "c", "d"],
    [("a", "b", [1, 3]), ("b", "c", [2]), ("c", "d", [4]), ("a", "c", [5])],
)

s = build_structure(g)
print(f"universe {len(s.universe)} elements, R {len(s.R)} pairs, L {len(s.L)} pairs")
sw = build_structure(g, ReachabilityQuery(1, 1))
print(f"with window (1,1): {len(sw.R)} pairs survive in {sw.r_name}")

# A decomposition of the underlying graph lifts to one of the structure.
td = decompose_heuristic(g.to_networkx())
lifted = lift_decomposition(td, g)
print(f"\ngraph width {td.width}, lifted width {lifted.width}, bound {lifted_width_bound(g, td.width)} (max degree {degree_summary(g).maximum})")
print("valid:", bool(validate_decomposition(lifted, s)))
print(write_td1(lifted))

# The sentence for threshold h has one conjunct per rooted tree on h+1 nodes.
for h in range(1, 6):
    print(f"h={h}: {len(enumerate_rooted_trees(h))} trees, {len(emit_mso_formula(h))} characters")
print()
print(emit_mso_formula(2))
