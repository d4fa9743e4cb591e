"""Hypothesis strategies shared by the test modules."""

import itertools

from hypothesis import strategies as st

from tempreach import build


@st.composite
def temporal_graphs(draw, max_n=6, max_t=5, max_labels=3, min_n=1):
    n = draw(st.integers(min_n, max_n))
    verts = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(verts, 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    edges = []
    for u, v in chosen:
        ts = draw(st.sets(st.integers(1, max_t), min_size=1, max_size=max_labels))
        edges.append((u, v, sorted(ts)))
    return build(verts, edges)


@st.composite
def windows(draw, max_t=5):
    alpha = draw(st.integers(1, 3))
    beta = draw(st.integers(alpha, max_t + 1))
    return alpha, beta
