"""Branching rules over concrete obstructions.

Every rule inspects one obstruction (a fixed eleven-family pattern, a chain,
or an induced path together with its surroundings) and emits a RuleSet: a
menu of candidate deletion sets such that at least one optimal solution of
the host graph contains one menu entry in full.  The claimed vector records,
per entry, a certified lower bound on the entry's deletion cost; the solver
turns those claims into budget decrements.

Rules built from pure forcing covers hold for arbitrary vertex weights.  The
two rules whose safety rests on an exchange argument (three consecutive
degree-two path vertices, and the light-heavy-light pattern) additionally
require unit weights on a small window and refuse to fire otherwise; a
refusal always falls back to plain single-P4 branching in the solver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .editing import EditingSet, deletion_set
from .graphs import InputError, P4Witness, WeightedGraph, bits, checked_cost
from .witness import ChainDescriptor, Witness


@dataclass(frozen=True)
class RuleSet:
    """A menu of candidate deletion sets with claimed per-entry costs.

    ``build`` returns a fresh iterator on every call, so concurrent
    consumers may walk the menu independently.  ``peel_credit`` is an extra
    budget decrement that every entry earns on top of its claim because the
    entry's deletions split off a long path component that still has to be
    paid for; it is only exploited when the solver has peeling enabled.
    """

    name: str
    claimed: tuple[int, ...]
    build: Callable[[], Iterator[EditingSet]] = field(repr=False, compare=False)
    peel_credit: int = 0

    def __len__(self) -> int:
        return len(self.claimed)

    def iter_sets(self) -> Iterator[EditingSet]:
        return self.build()

    def sets(self) -> list[EditingSet]:
        return list(self.build())


@dataclass(frozen=True)
class ExactPath:
    """Directly computed optimum, returned when the host graph is one path."""

    cost: int
    deletions: tuple[tuple[int, int], ...]


def validate_rule(g: WeightedGraph, rule: RuleSet) -> None:
    """Check structural soundness of a rule against its host graph.

    Every entry must be a nonempty set of host edges, and every claim must
    be at least 1 and no larger than the entry's actual deletion cost.
    """
    entries = rule.sets()
    if len(entries) != len(rule.claimed):
        raise InputError(
            f"rule {rule.name}: {len(entries)} sets but "
            f"{len(rule.claimed)} claims"
        )
    for es, claim in zip(entries, rule.claimed):
        if not es.pairs:
            raise InputError(f"rule {rule.name}: empty deletion set")
        for u, v in es.pairs:
            if not g.has_edge(u, v):
                raise InputError(
                    f"rule {rule.name}: pair ({u},{v}) is not an edge"
                )
        if not 1 <= claim <= es.cost(g):
            raise InputError(
                f"rule {rule.name}: claim {claim} outside [1, cost] "
                f"for {sorted(es.pairs)}"
            )


def _require_edge(g: WeightedGraph, u: int, v: int) -> tuple[int, int]:
    if not g.has_edge(u, v):
        raise InputError(f"rule produced pair ({u},{v}) which is not an edge")
    return (u, v) if u < v else (v, u)


def _make_rule(
    name: str,
    g: WeightedGraph,
    plain: Iterable[Iterable[tuple[int, int]]],
    *,
    forced: Iterable[tuple[int, int]] = (),
    choices: Iterable[tuple[tuple[int, int], tuple[int, int]]] = (),
    claimed: tuple[int, ...] | None = None,
    peel_credit: int = 0,
) -> RuleSet:
    """Assemble a RuleSet from explicit entries plus a lazy choice product.

    ``plain`` entries are emitted as-is.  If ``choices`` is nonempty, one
    further entry is emitted per way of picking one pair from each choice,
    always joined with ``forced``; the full product is built lazily.  All
    referenced pairs are checked to be host edges up front.
    """
    plain_groups = tuple(
        tuple(_require_edge(g, u, v) for u, v in group) for group in plain
    )
    if any(not group for group in plain_groups):
        raise InputError(f"rule {name}: empty deletion set")
    forced_pairs = tuple(_require_edge(g, u, v) for u, v in forced)
    choice_pairs = tuple(
        (_require_edge(g, *a), _require_edge(g, *b)) for a, b in choices
    )
    if claimed is None:
        claimed = tuple(len(group) for group in plain_groups)
        if choice_pairs:
            size = len(forced_pairs) + len(choice_pairs)
            claimed += (size,) * (1 << len(choice_pairs))
        elif forced_pairs:
            claimed += (len(forced_pairs),)
    plain_sets = tuple(deletion_set(group) for group in plain_groups)

    def build() -> Iterator[EditingSet]:
        yield from plain_sets
        if forced_pairs or choice_pairs:
            for pick in itertools.product(*choice_pairs):
                yield deletion_set(forced_pairs + pick)

    return RuleSet(name, tuple(claimed), build, peel_credit)


# The trivial rule: hit one induced P4 on its three edges.


def rule_p4_trivial(g: WeightedGraph, wit: P4Witness) -> RuleSet:
    return _make_rule("p4-trivial", g, [[p] for p in wit.edges()])


# Fixed-family rules.  Each table lists, over role names, the deletion sets
# forced by the family's P4s; the embedding translates roles to host
# vertices.  For the co-families the listed pairs are host edges because
# they are non-edges of the primal pattern.


def rule_fixed(g: WeightedGraph, wit: Witness) -> RuleSet:
    if wit.family == "chain":
        raise InputError("chain witnesses use the chain rules, not the fixed tables")
    emb = wit.embedding
    c = wit.c
    name = f"fixed:{wit.family}"

    def v(t: int) -> int:
        return emb[f"v{t}"]

    def w(t: int) -> int:
        return emb[f"w{t}"]

    u = emb.get("u")

    if wit.family == "subdivided-star":
        plain = [
            [(w(1), v(1))],
            [(u, v(1))],
            [(u, v(t)) for t in range(2, c + 1)],
        ]
        return _make_rule(name, g, plain)
    if wit.family == "co-subdivided-star":
        choices = [((w(1), v(b)), (v(b), v(1))) for b in range(2, c + 1)]
        return _make_rule(name, g, [[(u, w(1))]], choices=choices)
    if wit.family == "matched-cliques":
        plain = [
            [(v(1), v(2))],
            [(v(2), w(2))],
            [(w(2), w(t)) for t in range(3, c + 1)],
        ]
        return _make_rule(name, g, plain)
    if wit.family == "co-matched-cliques":
        choices = [((w(2), v(t)), (v(t), w(1))) for t in range(3, c + 1)]
        return _make_rule(name, g, [[(v(1), w(2))]], choices=choices)
    if wit.family == "thin-spider":
        choices = [((w(1), w(t)), (w(t), v(t))) for t in range(2, c + 1)]
        return _make_rule(name, g, [[(v(1), w(1))]], choices=choices)
    if wit.family == "thick-spider":
        choices = [((w(1), v(t)), (v(t), w(2))) for t in range(3, c + 1)]
        return _make_rule(
            name,
            g,
            [[(v(1), w(2))], [(w(1), v(2))]],
            forced=[(w(1), w(2))],
            choices=choices,
        )
    if wit.family == "half-graph":
        choices = [((v(1), w(t)), (v(t), w(t))) for t in range(2, c + 1)]
        return _make_rule(name, g, [[(v(1), w(1))]], choices=choices)
    if wit.family == "co-half-graph":
        choices = [((v(c), w(t)), (w(t), w(c))) for t in range(1, c)]
        return _make_rule(name, g, [[(v(1), v(c))]], choices=choices)
    if wit.family == "staircase-apex":
        plain = [
            [(u, v(c))],
            [(v(c), w(c))],
            [(w(c), w(t)) for t in range(1, c)],
        ]
        return _make_rule(name, g, plain)
    if wit.family == "staircase-pendant":
        choices = [((v(1), w(t)), (v(t), w(t))) for t in range(2, c + 1)]
        return _make_rule(name, g, [[(u, v(1))]], choices=choices)
    if wit.family == "co-staircase-pendant":
        choices = [((u, v(t)), (v(t), v(1))) for t in range(2, c + 1)]
        return _make_rule(name, g, [[(w(c), u)]], choices=choices)
    raise InputError(f"unknown witness family {wit.family!r}")


# Chain rules.  A chain code gives each position's adjacency kind towards
# earlier positions: kind 1 is adjacent to its predecessor only, kind 0 to
# everything earlier except the predecessor.  Position 1 carries no kind of
# its own, and no rule below ever depends on it.


def rule_easy_chain(g: WeightedGraph, ch: ChainDescriptor) -> RuleSet:
    """Branch on a chain whose code ends in 0101, 001, or 011."""
    c = len(ch)
    if c < 6:
        raise InputError(f"chain of length {c} is too short for the suffix rules")

    def x(t: int) -> int:
        return ch.vertices[t - 1]

    code = ch.code
    if code.endswith("0101"):
        # Hitting the tail P4 x_c - x_{c-1} - x_{c-3} - x_{c-2} leaves, once
        # both tail edges are conserved, a forced deletion plus a fan of
        # two-way choices.  The fan stops at position c-5: the next position
        # is the predecessor of x_{c-3} and is not adjacent to it.
        plain = [[(x(c - 3), x(c - 2))], [(x(c - 1), x(c))]]
        forced = [(x(c - 3), x(c - 1))]
        choices = [((x(t), x(c - 3)), (x(t), x(c - 1))) for t in range(1, c - 4)]
        return _make_rule("easy-chain:0101", g, plain, forced=forced, choices=choices)
    if code.endswith("001"):
        choices = [((x(t), x(c - 2)), (x(t), x(c - 1))) for t in range(1, c - 3)]
        return _make_rule("easy-chain:001", g, [[(x(c - 1), x(c))]], choices=choices)
    if code.endswith("011"):
        plain = [
            [(x(c - 1), x(c))],
            [(x(c - 2), x(c - 1))],
            [(x(t), x(c - 2)) for t in range(1, c - 3)],
        ]
        return _make_rule("easy-chain:011", g, plain)
    raise InputError(f"chain suffix {code[-4:]!r} has no easy rule")


def rule_zero_chain(g: WeightedGraph, ch: ChainDescriptor) -> RuleSet:
    """Branch on an all-kind-0 chain, the complement of a path.

    Viewed in the complement, deletions become insertions into a path
    x_1 - ... - x_c.  Casing on the lowest insertion endpoint incident to
    x_1, then on the pair {x_1 x_3, x_1 x_4}, forces complete insertion
    sets whose costs grow linearly, translated back here as deletion sets
    of chain edges (all pairs at distance two or more).
    """
    c = len(ch)
    if c < 6:
        raise InputError(f"zero-chain rule needs length >= 6, got {c}")
    if any(kind != "0" for kind in ch.code[1:]):
        raise InputError("chain is not the complement of a path")

    def x(t: int) -> int:
        return ch.vertices[t - 1]

    groups: list[list[tuple[int, int]]] = [
        [(x(2), x(t)) for t in range(4, c + 1)],
        [(x(1), x(4))],
    ]
    for i in range(5, c + 1):
        groups.append(
            [(x(1), x(i))]
            + [(x(2), x(t)) for t in range(4, i)]
            + [(x(i), x(t)) for t in range(3, i - 1)]
        )
    groups.append([(x(1), x(3))] + [(x(3), x(t)) for t in range(5, c + 1)])
    groups.append([(x(1), x(3)), (x(1), x(5))])
    for j in range(6, c + 1):
        groups.append(
            [(x(1), x(3)), (x(1), x(j))]
            + [(x(3), x(t)) for t in range(5, j)]
            + [(x(j), x(t)) for t in range(4, j - 1)]
        )
    return _make_rule("zero-chain", g, groups)


# Induced-path machinery.


@dataclass(frozen=True)
class PathContext:
    """An induced path plus the facts the path rules consult about the host.

    ``outside`` is N(P) sorted ascending; ``partial`` its members with at
    least one non-neighbour on P; ``light[t-1]`` says whether the t-th path
    vertex has no neighbour outside P.
    """

    g: WeightedGraph
    path: tuple[int, ...]
    pmask: int
    outside: tuple[int, ...]
    partial: tuple[int, ...]
    light: tuple[bool, ...]

    def vertex(self, t: int) -> int:
        return self.path[t - 1]

    def edge(self, t: int) -> tuple[int, int]:
        return (self.path[t - 1], self.path[t])

    def is_light(self, t: int) -> bool:
        return self.light[t - 1]

    def outside_neighbors(self, x: int) -> list[int]:
        return list(bits(self.g.adj[x] & ~self.pmask))


def path_context(g: WeightedGraph, path: Iterable[int]) -> PathContext:
    xs = tuple(path)
    if len(xs) < 4:
        raise InputError("path context needs at least four vertices")
    if len(set(xs)) != len(xs):
        raise InputError("repeated vertex in path")
    for x in xs:
        if not 0 <= x < g.n:
            raise InputError(f"path vertex {x} out of range")
    for a in range(len(xs)):
        for b in range(a + 1, len(xs)):
            if g.has_edge(xs[a], xs[b]) != (b - a == 1):
                raise InputError("vertex sequence is not an induced path")
    pmask = 0
    for x in xs:
        pmask |= 1 << x
    reach = 0
    for x in xs:
        reach |= g.adj[x]
    outside = tuple(bits(reach & ~pmask))
    partial = tuple(u for u in outside if g.adj[u] & pmask != pmask)
    light = tuple(g.adj[x] & ~pmask == 0 for x in xs)
    return PathContext(g, xs, pmask, outside, partial, light)


def rule_branch_around(
    g: WeightedGraph, ctx: PathContext, i: int, first_claim: int = 1
) -> RuleSet:
    """The four-way branch on path edge e_i = x_i x_{i+1}.

    Either e_i goes, or both surrounding edges go, or conserving e_i with
    one neighbour edge forces the next edge out on the far side.
    """
    L = len(ctx.path)
    if not 3 <= i <= L - 3:
        raise InputError(f"branch-around needs interior index 3..{L - 3}, got {i}")
    e = ctx.edge
    if first_claim > g.pair_cost(*e(i)):
        raise InputError("first claim exceeds the cost of the focal edge")
    plain = [
        [e(i)],
        [e(i - 1), e(i + 1)],
        [e(i - 2), e(i + 1)],
        [e(i - 1), e(i + 2)],
    ]
    return _make_rule(
        "path:branch-around", g, plain, claimed=(first_claim, 2, 2, 2)
    )


def rule_degree_two_run(
    g: WeightedGraph, ctx: PathContext, min_run: int
) -> RuleSet | None:
    """Branch on a long run of degree-two path vertices.

    Any solution hits the leftmost and rightmost P4 of the run, which have
    disjoint edges, so nine two-edge sets cover everything.  Deleting such
    a pair strands a middle subpath of at least run-6 vertices whose own
    optimum is at least floor((run-7)/3); that surcharge is reported as
    peel credit rather than folded into the claims.
    """
    L = len(ctx.path)
    runs: list[tuple[int, int]] = []
    start = None
    for t in range(1, L + 1):
        if ctx.is_light(t) and g.degree(ctx.vertex(t)) == 2:
            if start is None:
                start = t
        elif start is not None:
            runs.append((start, t - 1))
            start = None
    if start is not None:
        runs.append((start, L))
    for s, e in runs:
        r = e - s + 1
        if r < max(min_run, 10):
            continue
        ed = ctx.edge
        plain = [
            [ed(a), ed(b)]
            for a in (s, s + 1, s + 2)
            for b in (e - 3, e - 2, e - 1)
        ]
        return _make_rule(
            "path:degree-two-run", g, plain, peel_credit=(r - 7) // 3
        )
    return None


def rule_many_neighbors(
    g: WeightedGraph, ctx: PathContext, u: int
) -> RuleSet | None:
    """Branch on an outside vertex adjacent to much of the path.

    At a spot where u misses x_t but sees x_{t+1}, conserving both the path
    edge and the contact edge turns every further u-neighbour on P (minus
    three positions shielding the spot) into a forced deletion.
    """
    adj = g.adj[u]
    for xs in (ctx.path, ctx.path[::-1]):
        L = len(xs)
        for t in range(1, L):
            xa, xb = xs[t - 1], xs[t]
            if adj >> xa & 1 or not adj >> xb & 1:
                continue
            banned = {xb}
            if t >= 2:
                banned.add(xs[t - 2])
            if t + 1 < L:
                banned.add(xs[t + 1])
            fan = [x for x in xs if adj >> x & 1 and x not in banned]
            if not fan:
                continue
            plain = [[(xa, xb)], [(xb, u)], [(u, z) for z in fan]]
            return _make_rule("path:many-nbrs", g, plain)
    return None


def _three_neighbors_oriented(
    g: WeightedGraph, u: int, xs: tuple[int, ...]
) -> RuleSet | None:
    L = len(xs)
    adj = g.adj[u]

    def x(t: int) -> int:
        return xs[t - 1]

    def ed(t: int) -> tuple[int, int]:
        return (xs[t - 1], xs[t])

    def has(t: int) -> bool:
        return bool(adj >> x(t) & 1)

    inner = [t for t in range(3, L - 1) if has(t)]
    if len(inner) < 3:
        return None
    for i in range(5, L - 1):
        if not (has(i) and not has(i - 1) and not has(i - 2)):
            continue
        if not has(i + 1):
            y, z = (x(t) for t in [t for t in inner if t != i][:2])
            plain = [
                [ed(i - 1)],
                [ed(i - 2), ed(i), (x(i), u)],
                [ed(i - 2), ed(i), (u, y), (u, z)],
                [ed(i - 3), ed(i), (x(i), u)],
                [ed(i - 2), ed(i + 1), (x(i), u)],
                [ed(i - 2), ed(i + 1), (u, y), (u, z)],
            ]
            return _make_rule("path:three-nbrs-split", g, plain)
        third = [t for t in inner if t not in (i, i + 1)]
        if not third:
            continue
        y = x(third[0])
        plain = [
            [ed(i - 1)],
            [(x(i), u), ed(i)],
            [(x(i), u), ed(i - 2), ed(i + 1), (x(i + 1), u)],
            [ed(i + 1), ed(i - 2), (u, y)],
            [ed(i), (u, x(i + 1)), ed(i - 2), (u, y)],
        ]
        return _make_rule("path:three-nbrs-wedge", g, plain)
    return None


def rule_three_neighbors(
    g: WeightedGraph, ctx: PathContext, u: int
) -> RuleSet | None:
    """Branch on an outside vertex with three neighbours among the inner path.

    Scans both orientations for two consecutive misses followed by a hit;
    the split/wedge variants depend on whether the following position is
    also hit.
    """
    for xs in (ctx.path, ctx.path[::-1]):
        rs = _three_neighbors_oriented(g, u, xs)
        if rs is not None:
            return rs
    return None


def _three_light(g: WeightedGraph, ctx: PathContext, j: int) -> RuleSet | None:
    L = len(ctx.path)
    if not 4 <= j <= L - 2:
        return None
    if not all(ctx.is_light(t) for t in (j - 1, j, j + 1)):
        return None
    # The e_j -> e_{j+1} exchange that justifies the first entry swaps
    # deletions of equal cost, so the window must be unit-weighted.
    if any(g.weights[ctx.vertex(t)] != 1 for t in range(j - 2, j + 3)):
        return None
    ed = ctx.edge
    plain = [[ed(j - 2), ed(j + 1)], [ed(j - 1)], [ed(j - 3), ed(j)]]
    return _make_rule("path:three-light", g, plain)


def rule_no_two_light(
    g: WeightedGraph, ctx: PathContext, i: int
) -> RuleSet | None:
    """Branch when x_i and x_{i+1} are both light.

    With heavy vertices on both flanks this is a branch-around whose two
    conserve entries additionally force every outside edge of the flanking
    heavy vertex.  With a third consecutive light vertex an exchange
    argument shrinks the menu to three entries instead.
    """
    L = len(ctx.path)
    if not (1 <= i < L and ctx.is_light(i) and ctx.is_light(i + 1)):
        return None
    if i >= 2 and ctx.is_light(i - 1):
        return _three_light(g, ctx, i)
    if i + 2 <= L and ctx.is_light(i + 2):
        return _three_light(g, ctx, i + 1)
    if not 3 <= i <= L - 3:
        return None
    x, ed = ctx.vertex, ctx.edge
    left = [(n, x(i - 1)) for n in ctx.outside_neighbors(x(i - 1))]
    right = [(n, x(i + 2)) for n in ctx.outside_neighbors(x(i + 2))]
    if not left or not right:
        return None
    plain = [
        [ed(i)],
        [ed(i - 1), ed(i + 1)],
        [ed(i - 2), ed(i + 1), *left],
        [ed(i - 1), ed(i + 2), *right],
    ]
    return _make_rule("path:no-two-light", g, plain, claimed=(1, 2, 3, 3))


def rule_light_heavy_light(
    g: WeightedGraph, ctx: PathContext, i: int
) -> RuleSet | None:
    """Branch around e_{i-1} when x_i is heavy between two light vertices.

    The branch skips the usual delete-both-surrounding entry: an exchange
    shows some optimal solution avoids that shape, which again needs unit
    weights on the window.
    """
    L = len(ctx.path)
    if not 4 <= i <= L - 2:
        return None
    if ctx.is_light(i) or not (ctx.is_light(i - 1) and ctx.is_light(i + 1)):
        return None
    if any(g.weights[ctx.vertex(t)] != 1 for t in range(i - 3, i + 3)):
        return None
    ed = ctx.edge
    plain = [[ed(i - 1)], [ed(i - 3), ed(i)], [ed(i - 2), ed(i + 1)]]
    return _make_rule("path:light-heavy-light", g, plain)


def _anchored_private(
    g: WeightedGraph, xs: tuple[int, ...], i: int, u: int, v: int
) -> RuleSet | None:
    """Two private heavy neighbours where v also reaches back to x_{i-1}.

    u is private to x_i and v to x_{i+1}.  Branches around e_{i+2} or
    e_{i+1} depending on whether u reaches x_{i+2}; all forcings are plain
    P4 hits, so any weights are fine.
    """
    L = len(xs)

    def x(t: int) -> int:
        return xs[t - 1]

    def ed(t: int) -> tuple[int, int]:
        return (xs[t - 1], xs[t])

    has = g.has_edge
    if i + 3 > L:
        return None
    if not has(u, x(i)) or has(u, x(i + 1)):
        return None
    if not has(v, x(i + 1)) or has(v, x(i)):
        return None
    if has(v, x(i + 2)) or has(v, x(i + 3)):
        return None
    if has(u, x(i + 2)):
        if i + 5 > L or has(u, x(i + 3)) or has(u, x(i + 4)):
            return None
        plain = [
            [ed(i + 2)],
            [ed(i + 1), ed(i + 3)],
            [ed(i), ed(i + 3), (x(i + 1), v)],
            [ed(i + 1), ed(i + 4), (x(i + 2), u)],
        ]
    else:
        if i < 2 or i + 4 > L:
            return None
        plain = [
            [ed(i + 1)],
            [ed(i), ed(i + 2)],
            [ed(i - 1), ed(i + 2), (x(i), u)],
            [ed(i), ed(i + 3), (x(i + 1), v)],
        ]
    return _make_rule(
        "path:two-heavy-anchored", g, plain, claimed=(1, 2, 3, 3)
    )


def _common_out(g: WeightedGraph, ctx: PathContext, s: int, t: int) -> list[int]:
    mask = g.adj[ctx.vertex(s)] & g.adj[ctx.vertex(t)] & ~ctx.pmask
    return list(bits(mask))


def _double_triangle(g: WeightedGraph, ctx: PathContext, i: int) -> RuleSet | None:
    """Three consecutive heavy vertices sharing outside neighbours pairwise."""
    L = len(ctx.path)
    if i < 1 or i + 5 > L:
        return None
    if any(ctx.is_light(t) for t in (i, i + 1, i + 2)):
        return None
    x, ed = ctx.vertex, ctx.edge
    has = g.has_edge
    u = next(
        (
            n
            for n in _common_out(g, ctx, i, i + 1)
            if not has(n, x(i + 2)) and not has(n, x(i + 3))
        ),
        None,
    )
    v = next(
        (
            n
            for n in _common_out(g, ctx, i + 1, i + 2)
            if not has(n, x(i + 3)) and not has(n, x(i + 4))
        ),
        None,
    )
    if u is None or v is None:
        return None
    plain = [
        [ed(i + 2)],
        [ed(i + 1), ed(i + 3)],
        [ed(i), ed(i + 3), (x(i + 1), u)],
        [ed(i + 1), ed(i + 4), (x(i + 2), v)],
    ]
    return _make_rule("path:three-heavy", g, plain, claimed=(1, 2, 3, 3))


def _heavy_staircase(g: WeightedGraph, ctx: PathContext, i: int) -> RuleSet | None:
    """The alternating light/heavy-pair ladder, branched on six entries."""
    L = len(ctx.path)
    x = ctx.vertex
    has = g.has_edge
    for p in range(max(1, i - 2), min(i + 2, L - 8) + 1):
        if not all(ctx.is_light(p + o) for o in (0, 3, 6)):
            continue
        if any(ctx.is_light(p + o) for o in (1, 2, 4, 5, 7, 8)):
            continue
        pred, a, b, cc, d, ee, f, gg = (x(p + o) for o in range(1, 9))
        u = next(
            (
                n
                for n in _common_out(g, ctx, p + 1, p + 2)
                if not has(n, b) and not has(n, cc)
            ),
            None,
        )
        v = next(
            (
                n
                for n in _common_out(g, ctx, p + 4, p + 5)
                if not has(n, a)
                and not has(n, b)
                and not has(n, ee)
                and not has(n, f)
            ),
            None,
        )
        w = next(
            (
                n
                for n in _common_out(g, ctx, p + 7, p + 8)
                if not has(n, ee) and not has(n, d)
            ),
            None,
        )
        if u is None or v is None or w is None:
            continue
        plain = [
            [(b, cc)],
            [(pred, a), (u, a), (cc, d), (cc, v)],
            [(a, b), (d, ee)],
            [(a, b), (cc, d), (f, gg), (f, w), (d, v)],
            [(a, b), (cc, d), (ee, f), (cc, v)],
            [(a, b), (cc, d), (ee, f), (d, v)],
        ]
        return _make_rule("path:heavy-staircase", g, plain)
    return None


def rule_no_two_heavy(
    g: WeightedGraph, ctx: PathContext, i: int
) -> RuleSet | None:
    """Branch when x_i and x_{i+1} are both heavy.

    Tries, in order: private outside neighbours on both sides (plain
    branch-around with one extra forced contact edge per conserve entry,
    or its anchored variant when a private neighbour reaches across), a
    heavy triple with pairwise common neighbours, and finally the
    staircase ladder.
    """
    L = len(ctx.path)
    if not (1 <= i < L) or ctx.is_light(i) or ctx.is_light(i + 1):
        return None
    x, ed = ctx.vertex, ctx.edge
    xi, xj = x(i), x(i + 1)
    priv_u = [n for n in ctx.outside_neighbors(xi) if not g.has_edge(n, xj)]
    priv_v = [n for n in ctx.outside_neighbors(xj) if not g.has_edge(n, xi)]
    if priv_u and priv_v:
        if 3 <= i <= L - 3:
            u0 = next(
                (n for n in priv_u if not g.has_edge(n, x(i + 2))), None
            )
            v0 = next(
                (n for n in priv_v if not g.has_edge(n, x(i - 1))), None
            )
            if u0 is not None and v0 is not None:
                plain = [
                    [ed(i)],
                    [ed(i - 1), ed(i + 1)],
                    [ed(i - 2), ed(i + 1), (xj, v0)],
                    [ed(i - 1), ed(i + 2), (xi, u0)],
                ]
                return _make_rule(
                    "path:two-heavy-private",
                    g,
                    plain,
                    claimed=(1, 2, 3, 3),
                )
        v1 = next((n for n in priv_v if g.has_edge(n, x(i - 1))), None)
        if v1 is not None:
            rs = _anchored_private(g, ctx.path, i, priv_u[0], v1)
            if rs is not None:
                return rs
        u1 = next((n for n in priv_u if g.has_edge(n, x(i + 2))), None)
        if u1 is not None:
            rs = _anchored_private(
                g, ctx.path[::-1], L - i, priv_v[0], u1
            )
            if rs is not None:
                return rs
    for base in (i, i - 1):
        rs = _double_triangle(g, ctx, base)
        if rs is not None:
            return rs
    return _heavy_staircase(g, ctx, i)


# Exact answer for standalone paths.


def _path_order(g: WeightedGraph) -> tuple[int, ...]:
    if g.n == 0:
        return ()
    if g.edge_count() != g.n - 1:
        raise InputError("not a path: wrong edge count")
    if any(g.degree(v) > 2 for v in range(g.n)):
        raise InputError("not a path: vertex of degree three or more")
    from .graphs import is_connected

    if not is_connected(g):
        raise InputError("not a path: disconnected")
    start = min(v for v in range(g.n) if g.degree(v) <= 1)
    order = [start]
    seen = {start}
    while len(order) < g.n:
        nxt = [w for w in g.neighbors(order[-1]) if w not in seen]
        order.append(nxt[0])
        seen.add(nxt[0])
    return tuple(order)


def _dp_over_order(
    g: WeightedGraph, xs: tuple[int, ...]
) -> tuple[int, list[tuple[int, int]]]:
    n = len(xs)
    if n <= 3:
        return 0, []
    best = [0] * (n + 1)
    pick = [0] * (n + 1)
    for i in range(4, n + 1):
        val, arg = None, 0
        for j in (i - 2, i - 1, i):
            cand = checked_cost(
                best[j - 1] + g.weights[xs[j - 2]] * g.weights[xs[j - 1]]
            )
            if val is None or cand < val:
                val, arg = cand, j
        best[i], pick[i] = val, arg
    deletions = []
    i = n
    while i >= 4:
        j = pick[i]
        a, b = xs[j - 2], xs[j - 1]
        deletions.append((a, b) if a < b else (b, a))
        i = j - 1
    deletions.reverse()
    return best[n], deletions


def path_dp(g: WeightedGraph) -> tuple[int, list[tuple[int, int]]]:
    """Exact minimum deletion cost for a graph that is a single path.

    Pieces of an edge-deleted path stay P4-free exactly when they keep at
    most three vertices, so the optimum satisfies a three-way recurrence
    over the position of the last deleted edge.  Raises InputError when the
    input is not a path.
    """
    xs = _path_order(g)
    return _dp_over_order(g, xs)


def rule_path(
    g: WeightedGraph, ctx: PathContext, c: int, with_peeling: bool = True
) -> RuleSet | ExactPath | None:
    """Dispatch over the path rules in their proof order, first match wins.

    Returns an ExactPath when the host graph is the path itself, a RuleSet
    when some case fires, and None when every case refuses; the solver then
    falls back to branching on a single P4.  The degree-two-run case is
    attempted only when the caller peels split-off path components, since
    its budget accounting assumes the middle piece is paid for immediately.
    """
    L = len(ctx.path)
    if g.n == L:
        cost, deletions = _dp_over_order(g, ctx.path)
        return ExactPath(cost, tuple(deletions))
    for t in range(3, L - 2):
        if g.pair_cost(*ctx.edge(t)) >= 2:
            return rule_branch_around(g, ctx, t, first_claim=2)
    if with_peeling:
        rs = rule_degree_two_run(g, ctx, max(c, 10))
        if rs is not None:
            return rs
    for u in ctx.partial:
        if 3 * (g.adj[u] & ctx.pmask).bit_count() >= c:
            rs = rule_many_neighbors(g, ctx, u)
            if rs is not None:
                return rs
    inner_mask = 0
    for t in range(3, L - 1):
        inner_mask |= 1 << ctx.vertex(t)
    for u in ctx.partial:
        if (g.adj[u] & inner_mask).bit_count() >= 3:
            rs = rule_three_neighbors(g, ctx, u)
            if rs is not None:
                return rs
    if c + 3 > L:
        return None
    if not ctx.is_light(c) and not ctx.is_light(c + 1):
        return rule_no_two_heavy(g, ctx, c)
    focus = c if ctx.is_light(c) else c + 1
    if focus + 2 > L:
        return None
    if ctx.is_light(focus + 1):
        return rule_no_two_light(g, ctx, focus)
    if not ctx.is_light(focus + 2):
        return rule_no_two_heavy(g, ctx, focus + 1)
    return rule_light_heavy_light(g, ctx, focus + 1)
