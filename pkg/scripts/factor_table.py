"""Tabulate branching factors of every rule menu and the epsilon calibration.

Prints two tables: the claimed vector and factor of each branching rule on
its canonical trigger (worst factor first), and the smallest calibration
parameter reaching factor <= 2 + epsilon for a sweep of epsilons.

    python3 scripts/factor_table.py
    python3 scripts/factor_table.py --epsilons 1.0 0.5 0.25 0.1 --peel
"""

from __future__ import annotations

import argparse

from cographdel.branching import CalibrationError, branching_factor, calibrate_c
from cographdel.graphs import P4Witness, WeightedGraph, path_graph
from cographdel.rules import (
    path_context,
    rule_branch_around,
    rule_degree_two_run,
    rule_easy_chain,
    rule_fixed,
    rule_light_heavy_light,
    rule_many_neighbors,
    rule_no_two_heavy,
    rule_no_two_light,
    rule_p4_trivial,
    rule_three_neighbors,
    rule_zero_chain,
)
from cographdel.witness import FAMILIES, generate_chain, generate_family


def host(n, attachments=()):
    total = n + len(attachments)
    edges = [(i, i + 1) for i in range(n - 1)]
    for k, nbrs in enumerate(attachments):
        edges.extend((n + k, x) for x in nbrs)
    return WeightedGraph(total, edges)


def canonical_rules(cs):
    p4 = path_graph(4)
    yield "p4-trivial", "", rule_p4_trivial(p4, P4Witness((0, 1, 2, 3)))
    p8 = path_graph(8)
    yield "branch-around", "", rule_branch_around(p8, path_context(p8, range(8)), 4)
    for family in FAMILIES:
        if family == "chain":
            continue
        for c in cs:
            g, wit = generate_family(family, c)
            yield f"fixed:{family}", f"c={c}", rule_fixed(g, wit)
    for tail in ("011", "001", "0101"):
        g, ch = generate_chain("0" * (6 - len(tail)) + tail)
        yield "easy-chain", f"tail={tail}", rule_easy_chain(g, ch)
    for length in (6, 8, 10):
        g, ch = generate_chain("0" * length)
        yield "zero-chain", f"len={length}", rule_zero_chain(g, ch)
    triggers = [
        ("path:no-two-light", 8, [[2], [5]], rule_no_two_light, 4),
        ("path:three-light", 8, [[1], [6]], rule_no_two_light, 3),
        ("path:light-heavy-light", 9, [[4]], rule_light_heavy_light, 5),
        ("path:many-neighbors", 9, [[3, 5, 7]], rule_many_neighbors, 9),
        ("path:three-nbrs-split", 12, [[4, 6, 8]], rule_three_neighbors, 12),
        ("path:three-nbrs-wedge", 12, [[4, 5, 7]], rule_three_neighbors, 12),
        ("path:degree-two-run", 12, [[0]], rule_degree_two_run, 10),
        ("path:two-heavy-private", 9, [[3], [4]], rule_no_two_heavy, 4),
        ("path:two-heavy-anchored", 9, [[3, 5], [2, 4]], rule_no_two_heavy, 4),
        ("path:three-heavy", 9, [[3, 4], [4, 5]], rule_no_two_heavy, 4),
        ("path:heavy-staircase", 9, [[1, 2], [4, 5], [7, 8]], rule_no_two_heavy, 2),
    ]
    for name, path_len, attachments, build, arg in triggers:
        g = host(path_len, attachments)
        yield name, "", build(g, path_context(g, range(path_len)), arg)


def rule_table(cs, with_peel):
    rows = []
    seen = set()
    for name, params, rule in canonical_rules(cs):
        claimed = rule.claimed
        if with_peel and rule.peel_credit:
            claimed = tuple(t + rule.peel_credit for t in claimed)
        key = (name, params)
        if key in seen:
            continue
        seen.add(key)
        vec = ",".join(str(t) for t in claimed)
        if len(vec) > 40:
            vec = vec[:37] + "..."
        rows.append((branching_factor(claimed), name, params, len(claimed), vec))
    rows.sort(key=lambda r: (-r[0], r[1], r[2]))
    print(f"{'factor':>9}  {'rule':<27} {'params':<8} {'sets':>4}  claimed")
    for factor, name, params, sets, vec in rows:
        print(f"{factor:9.6f}  {name:<27} {params:<8} {sets:>4}  ({vec})")


def calibration_table(epsilons):
    print(f"\n{'epsilon':>8}  {'family':<22} {'c':>5}  {'certified factor':>16}")
    for eps in epsilons:
        for family in ("two-plus-exponential", "staircase"):
            try:
                cal = calibrate_c(eps, family=family)
                print(f"{eps:8.3f}  {family:<22} {cal.chosen_c:>5}  {cal.certified_factor:16.6f}")
            except CalibrationError as exc:
                print(f"{eps:8.3f}  {family:<22} {'-':>5}  unreachable ({exc})")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--c", type=int, nargs="+", default=[3, 4, 5],
                        help="family sizes for the fixed rules")
    parser.add_argument("--epsilons", type=float, nargs="+",
                        default=[1.0, 0.5, 0.3, 0.2, 0.1])
    parser.add_argument("--peel", action="store_true",
                        help="add each rule's peel credit to its claims")
    args = parser.parse_args(argv)
    rule_table(args.c, args.peel)
    calibration_table(args.epsilons)


if __name__ == "__main__":
    main()
