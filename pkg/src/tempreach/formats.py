"""Text formats: tgf1 graphs, td1 decompositions, witnesses, DIMACS sources.

tgf1::

    tgf1 <n> <m>
    v <id>                  (n lines)
    e <u> <v> t1,t2,...     (m lines, strictly increasing times)

td1::

    td1 <bags> <tree edges>
    b <node> <element> ...  (one line per bag; the first bag is the root)
    t <node> <node>         (tree edges)

Elements in td1 bags are plain vertex ids for graph decompositions, and
``v/<id>``, ``e/<u>/<v>`` or ``te/<u>/<v>/<t>`` for structure decompositions.

Witness files hold one unit per line: ``e <u> <v>`` or ``te <u> <v> <t>``.
Writers are deterministic and every file ends with a newline.  Lines that
are blank or start with ``#`` are ignored by the readers.
"""

from __future__ import annotations

from typing import Iterable

import networkx as nx

from .graph import Edge, GraphError, TemporalGraph, TimeEdge, build
from .structure import RelationalStructure, TreeDecomposition


class FormatError(ValueError):
    pass


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line.split()


def _int(tok: str, no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"line {no}: {what} must be an integer, got {tok!r}") from None


# -- tgf1 -------------------------------------------------------------------


def write_tgf1(g: TemporalGraph) -> str:
    out = [f"tgf1 {g.n} {g.m}"]
    out += [f"v {v}" for v in g.vertices]
    out += [f"e {u} {v} {','.join(map(str, ts))}" for (u, v), ts in g.labels.items()]
    return "\n".join(out) + "\n"


def read_tgf1(text: str) -> TemporalGraph:
    rows = list(_lines(text))
    if not rows or rows[0][1][0] != "tgf1":
        raise FormatError("missing 'tgf1 <n> <m>' header")
    no, head = rows[0]
    if len(head) != 3:
        raise FormatError(f"line {no}: header must be 'tgf1 <n> <m>'")
    n, m = _int(head[1], no, "n"), _int(head[2], no, "m")
    verts: list[str] = []
    edges: list[tuple[str, str, list[int]]] = []
    for no, toks in rows[1:]:
        if toks[0] == "v":
            if len(toks) != 2:
                raise FormatError(f"line {no}: expected 'v <id>'")
            if edges:
                raise FormatError(f"line {no}: vertex lines must precede edge lines")
            verts.append(toks[1])
        elif toks[0] == "e":
            if len(toks) != 4:
                raise FormatError(f"line {no}: expected 'e <u> <v> t1,t2,...'")
            times = [_int(t, no, "time") for t in toks[3].split(",")]
            if any(b <= a for a, b in zip(times, times[1:])):
                raise FormatError(f"line {no}: times must be strictly increasing")
            edges.append((toks[1], toks[2], times))
        else:
            raise FormatError(f"line {no}: unknown record {toks[0]!r}")
    if len(verts) != n or len(edges) != m:
        raise FormatError(
            f"header declares {n} vertices and {m} edges, found {len(verts)} and {len(edges)}"
        )
    if len(set(verts)) != n:
        raise FormatError("duplicate vertex id")
    try:
        return build(verts, edges)
    except GraphError as exc:
        raise FormatError(str(exc)) from exc


# -- witnesses ---------------------------------------------------------------


def unit_line(unit) -> str:
    if isinstance(unit, TimeEdge):
        return f"te {unit.edge[0]} {unit.edge[1]} {unit.time}"
    return f"e {unit[0]} {unit[1]}"


def write_witness(units: Iterable) -> str:
    return "".join(unit_line(u) + "\n" for u in units)


def read_witness(text: str) -> list:
    units: list = []
    for no, toks in _lines(text):
        if toks[0] == "e" and len(toks) == 3:
            units.append((toks[1], toks[2]))
        elif toks[0] == "te" and len(toks) == 4:
            units.append(TimeEdge((toks[1], toks[2]), _int(toks[3], no, "time")))
        else:
            raise FormatError(f"line {no}: expected 'e <u> <v>' or 'te <u> <v> <t>'")
    return units


# -- td1 --------------------------------------------------------------------


def element_token(x) -> str:
    if isinstance(x, tuple):
        return "/".join(str(p) for p in x)
    return str(x)


def parse_element(tok: str):
    parts = tok.split("/")
    if len(parts) == 1:
        return tok
    kind = parts[0]
    if kind == "v" and len(parts) == 2:
        return ("v", parts[1])
    if kind == "e" and len(parts) == 3:
        return ("e", parts[1], parts[2])
    if kind == "te" and len(parts) == 4 and parts[3].isdigit():
        return ("te", parts[1], parts[2], int(parts[3]))
    raise FormatError(f"malformed element {tok!r}")


def _elem_key(x):
    return (0, x) if isinstance(x, str) else (1, x)


def write_td1(td: TreeDecomposition) -> str:
    order = [td.root] + [s for s in td.bags if s != td.root]
    out = [f"td1 {len(td.bags)} {len(td.tree)}"]
    for s in order:
        elems = " ".join(element_token(x) for x in sorted(td.bags[s], key=_elem_key))
        out.append(f"b {s} {elems}".rstrip())
    out += [f"t {a} {b}" for a, b in td.tree]
    return "\n".join(out) + "\n"


def read_td1(text: str) -> TreeDecomposition:
    rows = list(_lines(text))
    if not rows or rows[0][1][0] != "td1":
        raise FormatError("missing 'td1' header")
    no, head = rows[0]
    counts = [_int(t, no, "count") for t in head[1:]]
    bags: dict[int, frozenset] = {}
    tree: list[tuple[int, int]] = []
    root = None
    for no, toks in rows[1:]:
        if toks[0] == "b":
            if len(toks) < 2:
                raise FormatError(f"line {no}: expected 'b <node> <elements...>'")
            s = _int(toks[1], no, "node")
            if s in bags:
                raise FormatError(f"line {no}: duplicate bag {s}")
            bags[s] = frozenset(parse_element(t) for t in toks[2:])
            root = s if root is None else root
        elif toks[0] == "t":
            if len(toks) != 3:
                raise FormatError(f"line {no}: expected 't <node> <node>'")
            tree.append((_int(toks[1], no, "node"), _int(toks[2], no, "node")))
        else:
            raise FormatError(f"line {no}: unknown record {toks[0]!r}")
    if counts and counts != [len(bags), len(tree)][: len(counts)]:
        raise FormatError(f"header counts {counts} do not match {len(bags)} bags, {len(tree)} edges")
    if root is None:
        raise FormatError("decomposition has no bags")
    return TreeDecomposition(bags, tuple(tree), root)


# -- relational structure (rs1) ---------------------------------------------


def write_structure(s: RelationalStructure) -> str:
    """``rs1 <|A|> <|R|> <|L|> <R name>``, then ``u``, relation and ``L`` lines."""
    name = s.r_name
    out = [f"rs1 {len(s.universe)} {len(s.R)} {len(s.L)} {name}"]
    out += [f"u {element_token(x)}" for x in sorted(s.universe)]
    out += [f"{name} {element_token(a)} {element_token(b)}" for a, b in sorted(s.R)]
    out += [f"L {element_token(a)} {element_token(b)}" for a, b in sorted(s.L)]
    return "\n".join(out) + "\n"


# -- DIMACS sources ---------------------------------------------------------


def read_dimacs_graph(text: str) -> nx.Graph:
    """``p edge <n> <m>`` then ``e <a> <b>`` lines over vertices ``1..n``."""
    G = nx.Graph()
    declared = None
    for no, toks in _lines(text):
        if toks[0] == "c":
            continue
        if toks[0] == "p":
            if len(toks) != 4 or toks[1] not in ("edge", "col"):
                raise FormatError(f"line {no}: expected 'p edge <n> <m>'")
            n, m = _int(toks[2], no, "n"), _int(toks[3], no, "m")
            G.add_nodes_from(str(i) for i in range(1, n + 1))
            declared = m
        elif toks[0] == "e":
            if declared is None:
                raise FormatError(f"line {no}: edge before the 'p' line")
            if len(toks) != 3:
                raise FormatError(f"line {no}: expected 'e <a> <b>'")
            a, b = (_int(t, no, "vertex") for t in toks[1:])
            if not (1 <= a <= G.number_of_nodes() and 1 <= b <= G.number_of_nodes()):
                raise FormatError(f"line {no}: vertex out of range")
            if a == b:
                raise FormatError(f"line {no}: self-loop")
            G.add_edge(str(a), str(b))
        else:
            raise FormatError(f"line {no}: unknown record {toks[0]!r}")
    if declared is None:
        raise FormatError("missing 'p edge <n> <m>' line")
    if G.number_of_edges() != declared:
        raise FormatError(f"declared {declared} edges, found {G.number_of_edges()} distinct")
    return G


def write_dimacs_graph(G: nx.Graph) -> str:
    """Vertices must be ``"1".."n"``."""
    edges = sorted(tuple(sorted((int(u), int(v)))) for u, v in G.edges)
    out = [f"p edge {G.number_of_nodes()} {len(edges)}"] + [f"e {a} {b}" for a, b in edges]
    return "\n".join(out) + "\n"


def read_dimacs_cnf(text: str) -> list[tuple[int, ...]]:
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    declared = None
    for no, toks in _lines(text):
        if toks[0] == "c":
            continue
        if toks[0] == "p":
            if len(toks) != 4 or toks[1] != "cnf":
                raise FormatError(f"line {no}: expected 'p cnf <vars> <clauses>'")
            declared = (_int(toks[2], no, "vars"), _int(toks[3], no, "clauses"))
            continue
        if declared is None:
            raise FormatError(f"line {no}: clause before the 'p' line")
        for tok in toks:
            lit = _int(tok, no, "literal")
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > declared[0]:
                    raise FormatError(f"line {no}: literal {lit} exceeds {declared[0]} variables")
                current.append(lit)
    if declared is None:
        raise FormatError("missing 'p cnf <vars> <clauses>' line")
    if current:
        raise FormatError("last clause is not terminated by 0")
    if len(clauses) != declared[1]:
        raise FormatError(f"declared {declared[1]} clauses, found {len(clauses)}")
    return clauses


def write_dimacs_cnf(clauses, num_vars: int | None = None) -> str:
    clauses = [tuple(c) for c in clauses]
    if num_vars is None:
        num_vars = max((abs(l) for c in clauses for l in c), default=0)
    out = [f"p cnf {num_vars} {len(clauses)}"] + [" ".join(map(str, c)) + " 0" for c in clauses]
    return "\n".join(out) + "\n"


__all__ = [
    "FormatError",
    "Edge",
    "read_tgf1",
    "write_tgf1",
    "read_witness",
    "write_witness",
    "unit_line",
    "read_td1",
    "write_td1",
    "parse_element",
    "element_token",
    "write_structure",
    "read_dimacs_graph",
    "write_dimacs_graph",
    "read_dimacs_cnf",
    "write_dimacs_cnf",
]
