"""Detection of unavoidable structures in prime graphs, and chain analysis.

Every sufficiently large prime graph contains one of a short list of
structures (or their complements) as an induced subgraph: a subdivided
star, two cliques joined by a perfect matching, a thin or thick spider,
a half-graph staircase with an optional clique side and apex or pendant
vertex, or a chain.  Detection here is best-effort under a node budget:
the solver only needs a witness to improve its branching factor, never
for correctness, so a failed search simply returns None.

Naming convention: the v-side is always the independent side, w the
other side, u the extra vertex (center, apex, or pendant) where one
exists.  Complement families run the primal detector on the complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import (
    InputError,
    WeightedGraph,
    bits,
    complement,
)
from .modular import is_prime

FAMILIES = (
    "subdivided-star",
    "co-subdivided-star",
    "matched-cliques",
    "co-matched-cliques",
    "thin-spider",
    "thick-spider",
    "half-graph",
    "co-half-graph",
    "staircase-apex",
    "staircase-pendant",
    "co-staircase-pendant",
    "chain",
)

DEFAULT_NODE_BUDGET = 200_000


@dataclass
class Witness:
    family: str
    c: int
    embedding: dict[str, int]
    code: str | None = None  # chains only

    def vertices(self) -> list[int]:
        return list(self.embedding.values())


@dataclass(frozen=True)
class ChainDescriptor:
    """Ordered vertices where each is adjacent either to its predecessor
    only (type 1) or to every earlier vertex except the predecessor
    (type 0).  The first character of the code carries no information."""

    vertices: tuple[int, ...]
    code: str

    def __len__(self) -> int:
        return len(self.vertices)

    def slice(self, start: int, stop: int) -> "ChainDescriptor":
        return ChainDescriptor(self.vertices[start:stop], self.code[start:stop])


@dataclass(frozen=True)
class PatternResult:
    kind: str  # run0 | run1 | 0101 | 001 | 011
    position: int
    length: int


class _BudgetExpired(Exception):
    pass


# -- family structure table ---------------------------------------------


def _primal_family(family: str) -> tuple[str, bool]:
    if family.startswith("co-"):
        return family[3:], True
    return family, False


def _structure(family: str, c: int):
    """Search-ordered roles, required edge set, and id-order symmetry breaks.

    Returned edges are over role names; every unlisted role pair is a
    required non-edge.  gt pairs (r, s) demand vertex(r) > vertex(s) to cut
    permutations of interchangeable legs.
    """
    if c < 3:
        raise InputError("family structures need c >= 3")
    v = [f"v{i}" for i in range(1, c + 1)]
    w = [f"w{i}" for i in range(1, c + 1)]
    edges: set[frozenset[str]] = set()

    def add(a: str, b: str):
        edges.add(frozenset((a, b)))

    def clique(side):
        for i in range(c):
            for j in range(i + 1, c):
                add(side[i], side[j])

    def staircase():
        for i in range(c):
            for j in range(i, c):
                add(v[i], w[j])

    legs_interleaved = [r for pair in zip(v, w) for r in pair]
    leg_order = [(v[i], v[i - 1]) for i in range(1, c)]

    if family == "subdivided-star":
        for i in range(c):
            add("u", v[i])
            add(v[i], w[i])
        return ["u"] + legs_interleaved, edges, leg_order
    if family == "matched-cliques":
        clique(v)
        clique(w)
        for i in range(c):
            add(v[i], w[i])
        return legs_interleaved, edges, leg_order
    if family == "thin-spider":
        clique(w)
        for i in range(c):
            add(v[i], w[i])
        return w + v, edges, [(w[i], w[i - 1]) for i in range(1, c)]
    if family == "thick-spider":
        clique(w)
        for i in range(c):
            for j in range(c):
                if i != j:
                    add(v[i], w[j])
        return w + v, edges, [(w[i], w[i - 1]) for i in range(1, c)]
    if family == "half-graph":
        staircase()
        return legs_interleaved, edges, []
    if family == "staircase-apex":
        clique(w)
        staircase()
        for i in range(c):
            add("u", v[i])
        return legs_interleaved + ["u"], edges, []
    if family == "staircase-pendant":
        clique(w)
        staircase()
        add("u", v[0])
        return legs_interleaved + ["u"], edges, []
    raise InputError(f"unknown family {family!r}")


def _role_vertex_count(family: str, c: int) -> int:
    base, _ = _primal_family(family)
    return 2 * c + (1 if base in ("subdivided-star", "staircase-apex", "staircase-pendant") else 0)


def generate_family(family: str, c: int) -> tuple[WeightedGraph, Witness]:
    """Canonical unit-weight instance of a family with its embedding."""
    base, flipped = _primal_family(family)
    if base == "chain":
        raise InputError("use generate_chain for chains")
    roles, edges, _ = _structure(base, c)
    order = sorted(roles, key=_role_sort_key)
    index = {r: i for i, r in enumerate(order)}
    g = WeightedGraph(
        len(order), [(index[a], index[b]) for a, b in map(tuple, edges)]
    )
    if flipped:
        g = complement(g)
    return g, Witness(family, c, {r: index[r] for r in order})


def _role_sort_key(role: str):
    kind = role[0]
    rank = {"v": 0, "w": 1, "u": 2}[kind]
    return (rank, int(role[1:]) if len(role) > 1 else 0)


def generate_chain(code: str) -> tuple[WeightedGraph, ChainDescriptor]:
    if len(code) < 1 or any(ch not in "01" for ch in code):
        raise InputError("chain code must be a nonempty binary string")
    edges = []
    for i in range(1, len(code)):
        if code[i] == "1":
            edges.append((i, i - 1))
        else:
            edges.extend((i, j) for j in range(i - 1))
    g = WeightedGraph(len(code), edges)
    return g, ChainDescriptor(tuple(range(len(code))), code)


def encode_chain(g: WeightedGraph, vertices) -> str | None:
    """Binary code of an ordered vertex list, or None if it is not a chain.

    Position 0 copies position 1 (the first vertex's type is arbitrary).
    """
    vs = list(vertices)
    if len(set(vs)) != len(vs):
        return None
    out = []
    earlier = 0
    for i, x in enumerate(vs):
        if i >= 1:
            last = vs[i - 1]
            prefix = earlier & ~(1 << last)
            if g.has_edge(x, last) and g.adj[x] & prefix == 0:
                out.append("1")
            elif not g.has_edge(x, last) and g.adj[x] & prefix == prefix:
                out.append("0")
            else:
                return None
        earlier |= 1 << x
    if not out:
        return "1"
    return out[0] + "".join(out)


def verify_witness(g: WeightedGraph, wit: Witness) -> bool:
    verts = wit.vertices()
    if len(set(verts)) != len(verts):
        return False
    if any(not (0 <= x < g.n) for x in verts):
        return False
    if wit.family == "chain":
        if wit.code is None or len(wit.code) != len(verts):
            return False
        ordered = [wit.embedding[f"v{i}"] for i in range(1, len(verts) + 1)]
        code = encode_chain(g, ordered)
        return code is not None and code[1:] == wit.code[1:]
    base, flipped = _primal_family(wit.family)
    host = complement(g) if flipped else g
    roles, edges, _ = _structure(base, wit.c)
    if set(wit.embedding) != set(roles):
        return False
    for i, a in enumerate(roles):
        for b in roles[:i]:
            want = frozenset((a, b)) in edges
            if host.has_edge(wit.embedding[a], wit.embedding[b]) != want:
                return False
    return True


# -- backtracking detection ----------------------------------------------


def _find_embedding(g: WeightedGraph, family: str, c: int, budget: list[int]):
    roles, edges, gts = _structure(family, c)
    if g.n < len(roles):
        return None
    pos = {r: i for i, r in enumerate(roles)}
    cons: list[list[tuple[int, bool]]] = []
    gt_of: list[int | None] = []
    for i, r in enumerate(roles):
        cons.append([(j, frozenset((r, roles[j])) in edges) for j in range(i)])
        gt = None
        for a, b in gts:
            if a == r and pos[b] < i:
                gt = pos[b]
        gt_of.append(gt)
    placed = [0] * len(roles)
    full = g._full
    used = 0

    def rec(i: int) -> bool:
        nonlocal used
        if i == len(roles):
            return True
        cand = full & ~used
        for j, want in cons[i]:
            cand &= g.adj[placed[j]] if want else ~g.adj[placed[j]]
        if gt_of[i] is not None:
            cand &= -(1 << (placed[gt_of[i]] + 1))
        for x in bits(cand):
            if budget[0] <= 0:
                raise _BudgetExpired
            budget[0] -= 1
            placed[i] = x
            used |= 1 << x
            if rec(i + 1):
                return True
            used &= ~(1 << x)
        return False

    if rec(0):
        return {r: placed[i] for i, r in enumerate(roles)}
    return None


def find_chain(
    g: WeightedGraph, length: int, budget: list[int] | int = DEFAULT_NODE_BUDGET
) -> ChainDescriptor | None:
    """Longest-first DFS for a chain with exactly `length` vertices.

    Extension tries type 1 before type 0 and ascending vertex ids, so the
    result is deterministic for a fixed node budget.
    """
    if isinstance(budget, int):
        budget = [budget]
    if length < 1 or g.n < length:
        return None
    full = g._full
    out: list[int] = []
    code: list[str] = []

    def rec(used: int, adj_all: int, adj_none: int) -> bool:
        # adj_all / adj_none describe adjacency against the chain minus its
        # last vertex; both are `full` while the chain has a single vertex
        if len(out) == length:
            return True
        last = out[-1]
        row = g.adj[last]
        for mask, ch in ((row & adj_none, "1"), (~row & adj_all & full, "0")):
            for x in bits(mask & ~used):
                if budget[0] <= 0:
                    raise _BudgetExpired
                budget[0] -= 1
                out.append(x)
                code.append(ch)
                if rec(used | 1 << x, adj_all & row, adj_none & ~row):
                    return True
                out.pop()
                code.pop()
        return False

    try:
        for start in range(g.n):
            if budget[0] <= 0:
                raise _BudgetExpired
            budget[0] -= 1
            out.append(start)
            if rec(1 << start, full, full):
                first = code[0] if code else "1"
                return ChainDescriptor(tuple(out), first + "".join(code))
            out.pop()
    except _BudgetExpired:
        out.clear()
    return None


def find_witness(
    g: WeightedGraph,
    c: int,
    budget: int = DEFAULT_NODE_BUDGET,
    assume_prime: bool = False,
) -> Witness | None:
    """Search for any unavoidable structure of size parameter c.

    Specific families are tried first (alternating polarities), then a
    chain of length 12c.  Returns None when nothing is found within the
    node budget; the caller must treat that as "unknown", not absence.
    """
    if c < 3:
        raise InputError("find_witness needs c >= 3")
    if not assume_prime and not is_prime(g):
        raise InputError("witness search expects a prime graph")
    shared = [budget]
    co_g: WeightedGraph | None = None
    try:
        for family in FAMILIES[:-1]:
            if g.n < _role_vertex_count(family, c):
                continue
            base, flipped = _primal_family(family)
            if flipped:
                if co_g is None:
                    co_g = complement(g)
                host = co_g
            else:
                host = g
            emb = _find_embedding(host, base, c, shared)
            if emb is not None:
                wit = Witness(family, c, emb)
                assert verify_witness(g, wit)
                return wit
        chain = find_chain(g, 12 * c, shared)
    except _BudgetExpired:
        return None
    if chain is not None:
        emb = {f"v{i + 1}": x for i, x in enumerate(chain.vertices)}
        wit = Witness("chain", c, emb, code=chain.code)
        assert verify_witness(g, wit)
        return wit
    return None


# -- binary pattern analysis ---------------------------------------------

_PATTERNS = ("0101", "001", "011")


def classify_binary_pattern(b: str) -> PatternResult:
    """Locate a d/3-run of equal characters or one of three short patterns.

    Patterns are scanned left to right and take precedence over runs; all
    positions are 0-indexed.  One of the outcomes always exists.
    """
    d = len(b)
    if d < 6 or d % 3 != 0 or any(ch not in "01" for ch in b):
        raise InputError("pattern input must be binary with length >= 6 divisible by 3")
    for i in range(d):
        for pat in _PATTERNS:
            if b.startswith(pat, i):
                return PatternResult(pat, i, len(pat))
    run = d // 3
    for i in range(d - run + 1):
        seg = b[i : i + run]
        if seg == seg[0] * run:
            return PatternResult("run0" if seg[0] == "0" else "run1", i, run)
    raise AssertionError(f"no guaranteed outcome in {b!r}")


def find_forced_subchain(ch: ChainDescriptor) -> ChainDescriptor:
    """Length-c slice of a 4c-chain that is all-0s, all-1s, or pattern-ended.

    Classifies the last 3c characters: an equal-character run of length c
    yields the run slice directly; a pattern occurrence yields the slice
    ending right after the pattern.  Pattern characters always land at
    slice positions >= 1, so the arbitrary first character never matters.
    """
    length = len(ch)
    # below length 16 a pattern outcome cannot fit inside a c-slice
    # (e.g. an alternating code of length 12 admits only "0101")
    if length < 16 or length % 4 != 0:
        raise InputError("forced-subchain input must have length 4c >= 16")
    c = length // 4
    tail_start = length - 3 * c
    res = classify_binary_pattern(ch.code[tail_start:])
    if res.kind in ("run0", "run1"):
        start = tail_start + res.position
        return ch.slice(start, start + c)
    end = tail_start + res.position + res.length
    return ch.slice(end - c, end)
