"""Command-line front end for the cograph deletion solver.

One plain-text graph format goes in; reports, JSON, or benchmark CSV come
out.  Vertex labels are arbitrary tokens and are mapped to dense ids in
order of first appearance, so every report can speak in the caller's own
names.  Exit codes: 0 success, 1 negative answer (budget infeasible, a P4
found, no structure found, solution rejected), 2 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
import time
from dataclasses import dataclass

from .branching import CalibrationError, branching_factor, calibrate_c
from .editing import apply, deletion_set
from .graphs import (
    INF,
    CostOverflow,
    InputError,
    WeightedGraph,
    find_p4,
    is_cograph,
    path_graph,
    random_graph,
)
from .modular import modular_decomposition
from .solver import SolverConfig, solve
from .witness import DEFAULT_NODE_BUDGET, FAMILIES, find_witness, generate_chain, generate_family

MAX_WEIGHT = 2**32 - 1


class GraphFileError(Exception):
    """Malformed graph or solution file; message carries file:line."""


@dataclass(frozen=True)
class LabeledGraph:
    graph: WeightedGraph
    labels: tuple[str, ...]

    def label_pair(self, pair: tuple[int, int]) -> list[str]:
        return [self.labels[pair[0]], self.labels[pair[1]]]


def parse_graph(text: str, source: str = "<string>") -> LabeledGraph:
    """Parse the plain-text format: '# comment', 'v <label> <weight>',
    'e <label> <label>'.  Unweighted vertices default to weight 1."""

    def fail(lineno: int, msg: str):
        raise GraphFileError(f"{source}:{lineno}: {msg}")

    ids: dict[str, int] = {}
    weights: list[int] = []
    edge_rows: list[tuple[int, str, str]] = []

    def vertex_id(label: str) -> int:
        if label not in ids:
            ids[label] = len(weights)
            weights.append(1)
        return ids[label]

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "v":
            if len(tokens) != 3:
                fail(lineno, "vertex line needs a label and a weight")
            label, raw_weight = tokens[1], tokens[2]
            if label in ids:
                fail(lineno, f"duplicate declaration of vertex '{label}'")
            try:
                weight = int(raw_weight)
            except ValueError:
                fail(lineno, f"weight '{raw_weight}' is not an integer")
            if not 1 <= weight <= MAX_WEIGHT:
                fail(lineno, f"weight must be in [1, {MAX_WEIGHT}]")
            ids[label] = len(weights)
            weights.append(weight)
        elif tokens[0] == "e":
            if len(tokens) != 3:
                fail(lineno, "edge line needs exactly two labels")
            edge_rows.append((lineno, tokens[1], tokens[2]))
        else:
            fail(lineno, f"expected 'v' or 'e', got '{tokens[0]}'")

    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, a, b in edge_rows:
        if a == b:
            raise GraphFileError(f"{source}:{lineno}: self-loop at '{a}'")
        u, v = vertex_id(a), vertex_id(b)
        pair = (min(u, v), max(u, v))
        if pair in seen:
            raise GraphFileError(f"{source}:{lineno}: duplicate edge {a} {b}")
        seen.add(pair)
        edges.append(pair)

    labels = tuple(sorted(ids, key=ids.get))
    return LabeledGraph(WeightedGraph(len(weights), edges, weights), labels)


def load_graph(path: str) -> LabeledGraph:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise GraphFileError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_graph(text, source=path)


def serialize_graph(lg: LabeledGraph) -> str:
    lines = [f"v {label} {lg.graph.weights[i]}" for i, label in enumerate(lg.labels)]
    lines += [f"e {lg.labels[u]} {lg.labels[v]}" for u, v in lg.graph.edges()]
    return "\n".join(lines) + "\n"


def _parse_k(text: str):
    if text == "inf":
        return INF
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or 'inf'")
    if value < 0:
        raise argparse.ArgumentTypeError("budget must be nonnegative")
    return value


def _parse_vector(text: str) -> tuple[int, ...]:
    try:
        vec = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers")
    if not vec or any(x < 1 for x in vec):
        raise argparse.ArgumentTypeError("entries must be positive integers")
    return vec


def _parse_seeds(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--C",
        "--small-threshold",
        dest="small_threshold",
        type=int,
        default=12,
        metavar="N",
        help="below this many vertices the exhaustive solver takes over",
    )
    p.add_argument(
        "--c",
        "--witness-size",
        dest="witness_size",
        type=int,
        default=4,
        metavar="N",
        help="size parameter of the structures the branching hunts for",
    )
    p.add_argument("--epsilon", type=float, default=0.5, help="branching factor slack over 2")
    p.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_NODE_BUDGET,
        help="node budget per structure search",
    )
    p.add_argument("--no-peeling", action="store_true", help="keep path components in the recursion")
    p.add_argument("--strict", action="store_true", help="disable pruning shortcuts")
    p.add_argument("--parallel", action="store_true", help="explore top-level branches in a thread pool")


def _config_from(args) -> SolverConfig:
    return SolverConfig(
        small_threshold=args.small_threshold,
        witness_size=args.witness_size,
        epsilon=args.epsilon,
        budget=args.budget,
        enable_peeling=not args.no_peeling,
        parallel=args.parallel,
        strict=args.strict,
    )


def cmd_solve(args) -> int:
    lg = load_graph(args.path)
    result = solve(lg.graph, args.k, _config_from(args))
    outcome = result.outcome
    solved = outcome.cost != INF
    deletions = []
    if solved:
        deletions = [lg.label_pair(p) for p in outcome.solution.sorted_pairs()]
    if args.json:
        payload = {
            "status": "solved" if solved else "infeasible",
            "cost": outcome.cost if solved else None,
            "deletions": deletions,
            "stats": result.stats.as_dict(),
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif solved:
        print(f"cost {outcome.cost}")
        for a, b in deletions:
            print(f"delete {a} {b}")
        _print_stats(result.stats)
    else:
        shown = "inf" if args.k == INF else args.k
        print(f"infeasible within budget {shown}")
        _print_stats(result.stats)
    return 0 if solved else 1


def _print_stats(stats) -> None:
    d = stats.as_dict()
    print(
        "nodes {recursion_nodes} leaves {recursion_leaves} depth {max_depth} "
        "fallbacks {fallbacks_taken}".format(**d)
    )
    if d["rules_fired"]:
        fired = " ".join(f"{name} x{count}" for name, count in sorted(d["rules_fired"].items()))
        print(f"rules {fired}")


def cmd_check(args) -> int:
    lg = load_graph(args.path)
    wit = find_p4(lg.graph)
    if wit is None:
        print("cograph")
        return 0
    print("P4: " + " ".join(lg.labels[v] for v in wit.path))
    return 1


def cmd_decompose(args) -> int:
    lg = load_graph(args.path)
    dec = modular_decomposition(lg.graph)
    print(f"kind {dec.kind}")
    for block in dec.partition.blocks:
        print("block " + " ".join(lg.labels[v] for v in block))
    q = dec.quotient
    print(f"quotient {q.n} vertices {q.edge_count()} edges")
    q_labels = tuple(f"b{i}" for i in range(q.n))
    sys.stdout.write(serialize_graph(LabeledGraph(q, q_labels)))
    return 0


def cmd_factor(args) -> int:
    if args.vector is not None:
        print(f"factor {branching_factor(args.vector):.6f}")
        return 0
    cal = calibrate_c(args.epsilon, family="two-plus-exponential")
    print(f"c {cal.chosen_c}")
    print(f"factor {cal.certified_factor:.6f}")
    return 0


def cmd_witness(args) -> int:
    lg = load_graph(args.path)
    wit = find_witness(lg.graph, args.witness_size, args.budget)
    if wit is None:
        print("no structure found")
        return 1
    print(f"family {wit.family}")
    if wit.code is not None:
        print(f"code {wit.code}")
    for role in sorted(wit.embedding):
        print(f"  {role} {lg.labels[wit.embedding[role]]}")
    return 0


def cmd_verify(args) -> int:
    lg = load_graph(args.path)
    try:
        with open(args.solution, encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise GraphFileError(f"cannot read {args.solution}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"{args.solution}: not valid JSON ({exc.msg})") from exc
    if not isinstance(payload, dict) or "deletions" not in payload or "cost" not in payload:
        raise GraphFileError(f"{args.solution}: expected an object with 'cost' and 'deletions'")
    if payload["cost"] is None:
        raise GraphFileError(f"{args.solution}: contains no deletion set to verify")
    ids = {label: i for i, label in enumerate(lg.labels)}
    pairs = set()
    for item in payload["deletions"]:
        if not isinstance(item, list) or len(item) != 2:
            raise GraphFileError(f"{args.solution}: each deletion must be a pair of labels")
        a, b = item
        if a not in ids or b not in ids:
            raise GraphFileError(f"{args.solution}: unknown vertex label in pair {item}")
        pairs.add((ids[a], ids[b]))
    es = deletion_set(pairs)
    try:
        edited = apply(lg.graph, es)
    except InputError:
        print("violation: a listed pair is not an edge of the graph")
        return 1
    actual = es.cost(lg.graph)
    if actual != payload["cost"]:
        print(f"violation: stated cost {payload['cost']} but deletions cost {actual}")
        return 1
    if not is_cograph(edited):
        print("violation: an induced P4 survives the deletions")
        return 1
    print(f"ok cost {actual}")
    return 0


def _bench_instances(args):
    """Yield (name, LabeledGraph) rows for a directory or a generator string."""
    target = args.target
    if os.path.isdir(target):
        for fname in sorted(os.listdir(target)):
            path = os.path.join(target, fname)
            if os.path.isfile(path):
                yield fname, load_graph(path)
        return
    kind, _, rest = target.partition(":")
    params = {}
    if rest:
        for part in rest.split(","):
            key, eq, value = part.partition("=")
            if not eq:
                raise GraphFileError(f"bad generator parameter '{part}' (expected key=value)")
            params[key] = value
    try:
        if kind == "random":
            n = int(params.pop("n"))
            p = float(params.pop("p"))
            max_weight = int(params.pop("w", "1"))
            count = int(params.pop("count", "1"))
            _reject_extras(kind, params)
            for seed in args.seeds:
                rng = random.Random(seed)
                for i in range(count):
                    g = random_graph(n, p, rng, max_weight=max_weight)
                    yield f"random-n{n}-p{p}-s{seed}-{i}", _unit_labels(g)
        elif kind == "planted":
            family = params.pop("family")
            c = int(params.pop("c", "4"))
            _reject_extras(kind, params)
            if family not in FAMILIES[:-1]:
                raise GraphFileError(f"unknown family '{family}'")
            g, _ = generate_family(family, c)
            yield f"planted-{family}-c{c}", _unit_labels(g)
        elif kind == "paths":
            n = int(params.pop("n"))
            _reject_extras(kind, params)
            yield f"path-n{n}", _unit_labels(path_graph(n))
        elif kind == "chains":
            code = params.pop("code", None)
            if code is None:
                length = int(params.pop("length"))
                _reject_extras(kind, params)
                for seed in args.seeds:
                    rng = random.Random(seed)
                    rand_code = "".join(rng.choice("01") for _ in range(length))
                    g, _ = generate_chain(rand_code)
                    yield f"chain-len{length}-s{seed}", _unit_labels(g)
            else:
                _reject_extras(kind, params)
                g, _ = generate_chain(code)
                yield f"chain-{code}", _unit_labels(g)
        else:
            raise GraphFileError(
                f"'{target}' is neither a directory nor a known generator "
                "(random:, planted:, paths:, chains:)"
            )
    except KeyError as exc:
        raise GraphFileError(f"generator '{kind}' needs parameter {exc}") from None
    except ValueError as exc:
        raise GraphFileError(f"bad generator parameter for '{kind}': {exc}") from None


def _reject_extras(kind: str, params: dict) -> None:
    if params:
        raise GraphFileError(f"unknown parameter(s) for '{kind}': {', '.join(sorted(params))}")


def _unit_labels(g: WeightedGraph) -> LabeledGraph:
    return LabeledGraph(g, tuple(str(i) for i in range(g.n)))


def cmd_bench(args) -> int:
    cfg = _config_from(args)
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="", encoding="utf-8")
    try:
        writer = csv.writer(out)
        writer.writerow(["instance", "n", "m", "cost", "nodes", "time", "worst_rule"])
        for name, lg in _bench_instances(args):
            start = time.perf_counter()
            result = solve(lg.graph, args.k_max, cfg)
            elapsed = time.perf_counter() - start
            cost = result.outcome.cost
            writer.writerow(
                [
                    name,
                    lg.graph.n,
                    lg.graph.edge_count(),
                    "inf" if cost == INF else cost,
                    result.stats.recursion_nodes,
                    f"{elapsed:.3f}",
                    result.stats.worst_rule or "",
                ]
            )
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cographdel",
        description="Exact minimum-cost cograph edge deletion.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find a cheapest deletion set within a budget")
    p.add_argument("path", help="graph file")
    p.add_argument("--k", type=_parse_k, default=INF, help="cost budget; integer or 'inf'")
    _add_solver_flags(p)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="recognize cographs, or print an induced P4")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", help="print the maximal-strong-module partition")
    p.add_argument("path")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("factor", help="branching factor of a vector, or calibrate a size")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--vector", type=_parse_vector, help="claims, e.g. 1,2,2,2")
    group.add_argument(
        "--family",
        choices=("two-plus-exp",),
        help="calibrate the smallest structure size meeting 2+epsilon",
    )
    p.add_argument("--epsilon", type=float, default=0.5)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("witness", help="search a prime graph for a branching structure")
    p.add_argument("path")
    p.add_argument(
        "--c",
        "--witness-size",
        dest="witness_size",
        type=int,
        default=4,
        metavar="N",
        help="structure size parameter",
    )
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="check a solve --json output against its graph")
    p.add_argument("path", help="graph file")
    p.add_argument("solution", help="JSON produced by solve --json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time the solver over a directory or generated instances")
    p.add_argument("target", help="directory, or a random:/planted:/paths:/chains: generator")
    p.add_argument("--k-max", dest="k_max", type=_parse_k, default=INF)
    p.add_argument("--seeds", type=_parse_seeds, default=(0,), help="comma-separated")
    _add_solver_flags(p)
    p.add_argument("--out", default="-", help="CSV destination, '-' for stdout")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphFileError, InputError, CostOverflow, CalibrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
