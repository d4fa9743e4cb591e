"""Command-line entry point: ``tempreach <subcommand> ...``.

Exit codes: 0 success (feasible / verified), 1 infeasible or rejected,
2 resource exhaustion, 64 usage error, 65 invalid input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from typing import Callable

from . import formats, oracles, reductions, structure
from .graph import GraphError, TemporalGraph
from .reach import QueryError, ReachabilityQuery, reach_report, reach_set
from .solvers import (
    DEFAULT_ORACLE_CAP,
    DeletionInstance,
    InstanceError,
    InvalidUnitError,
    OracleScaleExceeded,
    Status,
    Variant,
    solve,
    solve_bnb,
    solve_exhaustive,
    verify_solution,
)

EXIT_OK, EXIT_NO, EXIT_EXHAUSTED, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 64, 65

ENGINES = ("bnb", "exhaustive")
REDUCTIONS = ("clique-w1", "sat34", "clique-ab-tree")
PARAM_KEYS = ("variant", "alpha", "beta", "k", "h")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    """Validated flags of one invocation."""

    subcommand: str
    inputs: list[str] = field(default_factory=list)
    variant: str | None = None
    alpha: int | None = None
    beta: int | None = None
    k: int | None = None
    h: int | None = None
    engine: str = "bnb"
    node_limit: int | None = None
    time_limit: float | None = None
    oracle_cap: int = DEFAULT_ORACLE_CAP
    canonical: bool = False
    params: str | None = None
    seed: int = 0
    output: str | None = None
    map_path: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise UsageError(f"unknown engine {self.engine!r}")
        if self.variant is not None and self.variant not in (v.value for v in Variant):
            raise UsageError(f"unknown variant {self.variant!r}")
        if self.alpha is not None and self.alpha < 1:
            raise UsageError(f"--alpha must be >= 1, got {self.alpha}")
        if None not in (self.alpha, self.beta) and self.alpha > self.beta:
            raise UsageError(f"need alpha <= beta, got ({self.alpha}, {self.beta})")
        for name in ("k", "node_limit", "oracle_cap"):
            val = getattr(self, name)
            if val is not None and val < 0:
                raise UsageError(f"--{name.replace('_', '-')} must be >= 0")
        if self.h is not None and self.h < 1:
            raise UsageError("--h must be >= 1")
        if self.time_limit is not None and self.time_limit <= 0:
            raise UsageError("--time-limit must be positive")

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__ if f not in ("subcommand", "extra")}
        vals = {k: v for k, v in vars(ns).items() if k in known}
        extra = {k: v for k, v in vars(ns).items() if k not in known and k != "subcommand"}
        return cls(ns.subcommand, extra=extra, **vals)


# -- io helpers ---------------------------------------------------------------


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="ascii") as fh:
            return fh.read()
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def _embedded_params(text: str) -> dict:
    """``# param key=value`` lines written by ``gen``."""
    out = {}
    for line in text.splitlines():
        toks = line.split()
        if len(toks) == 3 and toks[:2] == ["#", "param"] and "=" in toks[2]:
            key, val = toks[2].split("=", 1)
            if key in PARAM_KEYS:
                out[key] = val if key == "variant" else int(val)
    return out


def _load_graph(cfg: RunConfig, path: str) -> tuple[TemporalGraph, dict]:
    text = _read(path)
    try:
        return formats.read_tgf1(text), _embedded_params(text)
    except (formats.FormatError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _resolve(cfg: RunConfig, g: TemporalGraph, embedded: dict, need_kh: bool) -> dict:
    """Flags override ``--params`` which overrides parameters embedded in the graph."""
    merged = dict(embedded)
    if cfg.params:
        try:
            side = json.loads(_read(cfg.params))
        except json.JSONDecodeError as exc:
            raise InputError(f"{cfg.params}: {exc}") from None
        merged.update({k: side[k] for k in PARAM_KEYS if k in side})
    for key in PARAM_KEYS:
        if getattr(cfg, key) is not None:
            merged[key] = getattr(cfg, key)
    merged.setdefault("variant", Variant.EDGE.value)
    merged.setdefault("alpha", 1)
    merged.setdefault("beta", max(g.lifetime, merged["alpha"]))
    if need_kh:
        missing = [k for k in ("k", "h") if k not in merged]
        if missing:
            raise UsageError("missing " + ", ".join("--" + k for k in missing))
    return merged


def _instance(g: TemporalGraph, p: dict) -> DeletionInstance:
    try:
        return DeletionInstance(g, Variant(p["variant"]), ReachabilityQuery(p["alpha"], p["beta"]), p["k"], p["h"])
    except (InstanceError, QueryError, ValueError) as exc:
        raise InputError(str(exc)) from None


# -- subcommands ------------------------------------------------------------


def cmd_reach(cfg: RunConfig) -> int:
    g, embedded = _load_graph(cfg, cfg.inputs[0])
    p = _resolve(cfg, g, embedded, need_kh=False)
    try:
        q = ReachabilityQuery(p["alpha"], p["beta"])
    except QueryError as exc:
        raise InputError(str(exc)) from None
    report = reach_report(g, q)
    _write(cfg.output, "".join(line + "\n" for line in report.lines()))
    return EXIT_OK


def cmd_solve(cfg: RunConfig) -> int:
    g, embedded = _load_graph(cfg, cfg.inputs[0])
    inst = _instance(g, _resolve(cfg, g, embedded, need_kh=True))
    try:
        if cfg.engine == "bnb":
            sol = solve_bnb(inst, cfg.node_limit, cfg.time_limit, cfg.canonical)
        else:
            sol = solve_exhaustive(inst, cfg.oracle_cap)
    except OracleScaleExceeded as exc:
        print(f"tempreach: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    head = (
        f"# {sol.status.value} size={len(sol.witness)} "
        f"max_reach={sol.achieved_max_reachability} nodes={sol.nodes_explored}\n"
    )
    _write(cfg.output, head + formats.write_witness(sol.witness))
    if sol.status is Status.EXHAUSTED:
        print("tempreach: search limit reached before a decision", file=sys.stderr)
        return EXIT_EXHAUSTED
    return EXIT_OK if sol.feasible else EXIT_NO


def cmd_verify(cfg: RunConfig) -> int:
    g, embedded = _load_graph(cfg, cfg.inputs[0])
    inst = _instance(g, _resolve(cfg, g, embedded, need_kh=True))
    try:
        witness = formats.read_witness(_read(cfg.inputs[1]))
        ok = verify_solution(inst, witness)
    except (formats.FormatError, InvalidUnitError, GraphError) as exc:
        raise InputError(f"{cfg.inputs[1]}: {exc}") from None
    _write(cfg.output, "accepted\n" if ok else "rejected\n")
    return EXIT_OK if ok else EXIT_NO


def _source(cfg: RunConfig, reduction: str, text: str):
    try:
        if reduction == "sat34":
            inst, forced = reductions.normalize_sat(formats.read_dimacs_cnf(text))
            return inst, forced
        if cfg.extra.get("r") is None:
            raise UsageError(f"--r is required for {reduction}")
        return reductions.CliqueInstance(formats.read_dimacs_graph(text), cfg.extra["r"]), None
    except (formats.FormatError, reductions.ReductionError) as exc:
        raise InputError(f"{cfg.inputs[0]}: {exc}") from None


def cmd_gen(cfg: RunConfig) -> int:
    reduction = cfg.extra["reduction"]
    src, forced = _source(cfg, reduction, _read(cfg.inputs[0]))
    alpha = 1 if cfg.alpha is None else cfg.alpha
    try:
        if reduction == "clique-w1":
            out = reductions.reduce_clique_w1(src, alpha, cfg.beta)
        elif reduction == "sat34":
            out = reductions.reduce_sat(src, alpha, cfg.beta)
        else:
            if cfg.beta is None:
                raise UsageError("clique-ab-tree needs --beta")
            out = reductions.reduce_clique_ab_tree(src, alpha, cfg.beta)
    except reductions.ReductionError as exc:
        raise InputError(str(exc)) from None
    side = out.sidecar()
    if forced:
        side["forced"] = {str(v): val for v, val in sorted(forced.items())}
    params = "".join(f"# param {k}={side[k]}\n" for k in PARAM_KEYS)
    _write(cfg.output, f"# reduction {reduction}\n" + params + formats.write_tgf1(out.instance.graph))
    if cfg.map_path:
        _write(cfg.map_path, json.dumps(side, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def _load_td(path: str) -> structure.TreeDecomposition:
    try:
        return formats.read_td1(_read(path))
    except formats.FormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_structure(cfg: RunConfig) -> int:
    emit = cfg.extra["emit"]
    variant = cfg.variant or Variant.TIME_EDGE.value
    windowed = cfg.beta is not None or cfg.alpha is not None
    if emit == "mso":
        if cfg.h is None:
            raise UsageError("--emit mso needs --h")
        try:
            text = structure.emit_mso_formula(cfg.h, variant, windowed)
        except (structure.TreeCapError, ValueError) as exc:
            raise InputError(str(exc)) from None
        _write(cfg.output, text if text.endswith("\n") else text + "\n")
        return EXIT_OK
    if not cfg.inputs:
        raise UsageError(f"--emit {emit} needs an input graph")
    g, embedded = _load_graph(cfg, cfg.inputs[0])
    q = None
    if windowed:
        p = _resolve(cfg, g, {}, need_kh=False)
        q = ReachabilityQuery(p["alpha"], p["beta"])
    if emit == "relations":
        _write(cfg.output, formats.write_structure(structure.build_structure(g, q)))
        return EXIT_OK
    if cfg.extra.get("td"):
        td = _load_td(cfg.extra["td"])
    else:
        try:
            td = structure.decompose_heuristic(g.to_networkx(), exact=cfg.extra.get("exact", False))
        except structure.DecompositionError as exc:
            raise InputError(str(exc)) from None
    if cfg.extra.get("no_lift"):
        check = structure.validate_decomposition(td, structure.graph_structure(g.to_networkx()))
        if not check:
            raise InputError(f"invalid decomposition: {check.message}")
        _write(cfg.output, f"# width {td.width}\n" + formats.write_td1(td))
        return EXIT_OK
    try:
        lifted = structure.lift_decomposition(td, g)
    except structure.DecompositionError as exc:
        raise InputError(str(exc)) from None
    bound = structure.lifted_width_bound(g, td.width)
    head = f"# width {lifted.width} input_width {td.width} bound {bound}\n"
    _write(cfg.output, head + formats.write_td1(lifted))
    return EXIT_OK


# -- selftest -------------------------------------------------------------------


def _suite_reach(rng: random.Random) -> bool:
    T = rng.randint(1, 5)
    g = oracles.random_temporal_graph(rng, rng.randint(1, 6), rng.randint(0, 8), T, max_labels=2)
    a, b = rng.choice([(1, max(T, 1)), (1, 2), (2, 3), (2, 2)])
    q = ReachabilityQuery(a, b)
    return all(reach_set(g, v, q) == oracles.brute_reach_set(g, v, a, b) for v in g.vertices)


def _suite_solver(rng: random.Random) -> bool:
    T = rng.randint(1, 4)
    g = oracles.random_temporal_graph(rng, rng.randint(2, 6), rng.randint(1, 7), T, max_labels=2)
    variant = rng.choice(list(Variant))
    a, b = rng.choice([(1, max(T, 1)), (1, 2), (2, 3)])
    units = g.m if variant is Variant.EDGE else len(g.time_edges)
    inst = DeletionInstance(g, variant, ReachabilityQuery(a, b), rng.randint(0, min(3, units)), rng.randint(1, g.n))
    e, bb = solve_exhaustive(inst), solve_bnb(inst)
    return e.feasible == bb.feasible and len(e.witness) == len(bb.witness)


def _suite_clique(rng: random.Random) -> bool:
    n = rng.randint(4, 7)
    G = oracles.random_static_graph(rng, n, rng.randint(3, n * (n - 1) // 2))
    src = reductions.CliqueInstance(G, 3)
    try:
        out = reductions.reduce_clique_w1(src)
    except reductions.ReductionError:
        return True
    return solve(out.instance).feasible == oracles.has_clique(G, 3)


def _suite_sat(rng: random.Random) -> bool:
    clauses = oracles.random_34sat(rng, rng.randint(3, 5))
    src, forced = reductions.normalize_sat(clauses)
    n_vars = max(abs(l) for c in clauses for l in c)
    truth = oracles.satisfying_assignment(range(1, n_vars + 1), clauses) is not None
    return solve(reductions.reduce_sat(src).instance).feasible == truth


def _suite_lift(rng: random.Random) -> bool:
    g = oracles.random_temporal_graph(rng, rng.randint(1, 7), rng.randint(0, 9), 4, max_labels=2)
    td = structure.decompose_heuristic(g.to_networkx())
    lifted = structure.lift_decomposition(td, g)
    ok = structure.validate_decomposition(lifted, structure.build_structure(g))
    return bool(ok) and lifted.width <= structure.lifted_width_bound(g, td.width)


def _suite_trees(rng: random.Random) -> bool:
    h = rng.randint(1, 5)
    return len(structure.enumerate_rooted_trees(h)) == len(oracles.rooted_tree_classes(h + 1))


SUITES: dict[str, Callable[[random.Random], bool]] = {
    "reach-vs-brute-force": _suite_reach,
    "bnb-vs-exhaustive": _suite_solver,
    "clique-reduction": _suite_clique,
    "sat-reduction": _suite_sat,
    "lifted-width-bound": _suite_lift,
    "rooted-tree-counts": _suite_trees,
}


def cmd_selftest(cfg: RunConfig) -> int:
    rounds = cfg.extra.get("rounds") or 20
    failed = 0
    lines = []
    for name, suite in SUITES.items():
        rng = random.Random(f"{cfg.seed}:{name}")
        ok = sum(suite(rng) for _ in range(rounds))
        failed += rounds - ok
        lines.append(f"{'PASS' if ok == rounds else 'FAIL'} {name} {ok}/{rounds}\n")
    _write(cfg.output, "".join(lines))
    return EXIT_OK if failed == 0 else EXIT_NO


# -- parser -----------------------------------------------------------------


def _add_query(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=int, help="minimum gap between consecutive times (default 1)")
    p.add_argument("--beta", type=int, help="maximum gap (default: the lifetime)")


def _add_instance(p: argparse.ArgumentParser) -> None:
    _add_query(p)
    p.add_argument("--variant", choices=[v.value for v in Variant])
    p.add_argument("--k", type=int, help="deletion budget")
    p.add_argument("--h", type=int, help="reachability threshold")
    p.add_argument("--params", help="JSON sidecar supplying variant/alpha/beta/k/h")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tempreach", description="Temporal reachability tools.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("reach", help="per-vertex reachability report")
    p.add_argument("inputs", nargs=1, metavar="GRAPH", help="tgf1 file or '-'")
    _add_query(p)
    p.add_argument("-o", "--output")

    p = sub.add_parser("solve", help="decide a deletion instance")
    p.add_argument("inputs", nargs=1, metavar="GRAPH")
    _add_instance(p)
    p.add_argument("--engine", choices=ENGINES, default="bnb")
    p.add_argument("--node-limit", type=int)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    p.add_argument("--canonical", action="store_true", help="lexicographically least witness")
    p.add_argument("-o", "--output")

    p = sub.add_parser("verify", help="check a witness against an instance")
    p.add_argument("inputs", nargs=2, metavar=("GRAPH", "WITNESS"))
    _add_instance(p)
    p.add_argument("-o", "--output")

    p = sub.add_parser("gen", help="generate a reduction instance")
    p.add_argument("inputs", nargs=1, metavar="SOURCE", help="DIMACS graph or CNF")
    p.add_argument("--reduction", choices=REDUCTIONS, required=True)
    p.add_argument("--r", type=int, help="clique size")
    _add_query(p)
    p.add_argument("-o", "--output")
    p.add_argument("--map", dest="map_path", help="write the JSON sidecar here")

    p = sub.add_parser("structure", help="relational structure, decompositions, formulas")
    p.add_argument("inputs", nargs="?", metavar="GRAPH")
    p.add_argument("--emit", choices=("relations", "decomposition", "mso"), required=True)
    _add_query(p)
    p.add_argument("--variant", choices=[v.value for v in Variant])
    p.add_argument("--h", type=int)
    p.add_argument("--td", help="td1 decomposition of the underlying graph to lift")
    p.add_argument("--exact", action="store_true", help="exact treewidth (small graphs)")
    p.add_argument("--no-lift", action="store_true", help="emit the graph decomposition")
    p.add_argument("-o", "--output")

    p = sub.add_parser("selftest", help="run the oracle suites at desk scale")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=20)
    p.add_argument("-o", "--output")
    return parser


COMMANDS = {
    "reach": cmd_reach,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "gen": cmd_gen,
    "structure": cmd_structure,
    "selftest": cmd_selftest,
}


def run(argv: list[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        if ns.subcommand == "structure" and ns.inputs is not None:
            ns.inputs = [ns.inputs]
        elif ns.subcommand == "structure":
            ns.inputs = []
        cfg = RunConfig.from_namespace(ns)
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        print(f"tempreach: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"tempreach: invalid input: {_one_line(exc)}", file=sys.stderr)
        return EXIT_INVALID


def _one_line(exc: Exception) -> str:
    return " ".join(str(exc).split())


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
