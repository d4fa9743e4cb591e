"""How the (alpha, beta) window changes who reaches whom.

Run with ``python notebooks/01_reachability_windows.py``.
"""

from tempreach import ReachabilityQuery, build, reach_report, reach_set

# A small contact network: each edge lists the days it was active.
g = build(
    ["ann", "bob", "cat", "dan", "eve"],
    [
        ("ann", "bob", [4]),
        ("bob", "cat", [2, 7]),
        ("cat", "dan", [3]),
        ("bob", "dan", [6]),
        ("dan", "eve", [8]),
    ],
)
print(f"{g.n} vertices, {g.m} edges, lifetime {g.lifetime}")

# With no upper bound on the gap (beta = lifetime) this is plain temporal
# reachability: times along a path only have to increase.
for line in reach_report(g, ReachabilityQuery.classic(g)).lines():
    print(line)

# Requiring the next contact within two days of the previous one cuts
# long waits: ann -(4)- bob -(7)- cat needs a gap of 3.  A minimum gap of 2
# restores it, and gaps of exactly 1 leave ann stuck at bob.
print()
for alpha, beta in [(1, 8), (1, 2), (2, 3), (1, 1)]:
    q = ReachabilityQuery(alpha, beta)
    print(f"window ({alpha},{beta}): ann reaches {sorted(reach_set(g, 'ann', q))}")
