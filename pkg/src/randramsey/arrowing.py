"""Exact two-color arrowing: minimum monochromatic copy counts by branch and bound.

Colors are 0 (red) and 1 (blue).  The search colors edges in a fixed order,
red before blue, and only accepts strict improvements, so the first optimal
leaf it reaches is the lexicographically least optimal coloring in that
order.  Subtrees can be farmed out to worker processes; the combined result
does not depend on how many workers ran.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .graphs import (
    BLUE, PINK, AZURE, RED, Edge, EdgeColoring, Graph, Pattern, PatternError,
    _norm, core_copies, copy_multiplicity, is_isomorphic, iter_embeddings,
)

DEFAULT_BUDGET = 20_000_000


class SearchBudgetExceeded(RuntimeError):
    """The search tree outgrew its node budget; no verdict was reached."""


@dataclass(frozen=True)
class ArrowReport:
    min_mono: int
    witness: EdgeColoring
    explored: int


def mono_copies(G: Graph, F: Pattern, chi: EdgeColoring) -> tuple[int, int]:
    """(red, blue) counts of copies of F whose edges all share that color."""
    if F.e_F == 0:
        raise PatternError("pattern has no edges")
    if chi.host != G:
        raise ValueError("coloring does not belong to this graph")
    w = copy_multiplicity(G, F)
    red = blue = 0
    for copy in core_copies(G, F):
        cols = {chi.colors[i] for i in copy}
        if cols == {RED}:
            red += w
        elif cols == {BLUE}:
            blue += w
    return red, blue


# search problem -----------------------------------------------------------

@dataclass(frozen=True)
class _Problem:
    m: int                       # edges of the host
    order: tuple[int, ...]       # host edge index at each search position
    completing: tuple[tuple[tuple[int, int], ...], ...]  # per position: (other-mask, weight)


def _edge_order(m: int, copies: list[tuple[int, ...]]) -> list[int]:
    """Greedy order: next edge completes the most copies, then lies in the most.

    Edges in no copy are irrelevant and excluded.
    """
    through = [0] * m
    for c in copies:
        for e in c:
            through[e] += 1
    relevant = [e for e in range(m) if through[e]]
    remaining_in = [len(c) for c in copies]
    by_edge: list[list[int]] = [[] for _ in range(m)]
    for ci, c in enumerate(copies):
        for e in c:
            by_edge[e].append(ci)
    order: list[int] = []
    chosen = set()
    while len(order) < len(relevant):
        best, best_key = -1, None
        for e in relevant:
            if e in chosen:
                continue
            closes = sum(1 for ci in by_edge[e] if remaining_in[ci] == 1)
            key = (closes, through[e], -e)
            if best_key is None or key > best_key:
                best, best_key = e, key
        order.append(best)
        chosen.add(best)
        for ci in by_edge[best]:
            remaining_in[ci] -= 1
    return order


def _build(G: Graph, F: Pattern) -> _Problem:
    if F.e_F == 0:
        raise PatternError("pattern has no edges")
    copies = core_copies(G, F)
    w = copy_multiplicity(G, F)
    order = _edge_order(G.m, copies)
    pos = {e: i for i, e in enumerate(order)}
    completing: list[list[tuple[int, int]]] = [[] for _ in order]
    for c in copies:
        ps = [pos[e] for e in c]
        last = max(ps)
        other = 0
        for p in ps:
            if p != last:
                other |= 1 << p
        completing[last].append((other, w))
    return _Problem(G.m, tuple(order), tuple(tuple(x) for x in completing))


def _dfs(prob: _Problem, upper: float, budget: int, prefix: Sequence[int] = ()):
    """Best cost strictly below ``upper`` in the subtree under ``prefix``.

    Returns (cost or None, blue-mask over positions, nodes explored).
    """
    size = len(prob.order)
    comp = prob.completing
    best = upper
    best_mask = None
    nodes = 0

    # replay the fixed prefix
    blue = 0
    cost = 0
    for t, c in enumerate(prefix):
        done = (1 << t) - 1
        red = done & ~blue
        for other, w in comp[t]:
            if c == RED and not other & blue:
                cost += w
            elif c == BLUE and not other & red:
                cost += w
        if c == BLUE:
            blue |= 1 << t
    if cost >= best:
        return None, None, 1

    def rec(t: int, blue: int, cost: int) -> None:
        nonlocal best, best_mask, nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"search exceeded {budget} nodes")
        if t == size:
            best, best_mask = cost, blue
            return
        red = ((1 << t) - 1) & ~blue
        cr = cb = 0
        for other, w in comp[t]:
            if not other & blue:
                cr += w
            if not other & red:
                cb += w
        if cost + cr < best:
            rec(t + 1, blue, cost + cr)
        # color-swap symmetry: the very first position stays red
        if t > 0 and cost + cb < best:
            rec(t + 1, blue | 1 << t, cost + cb)

    rec(len(prefix), blue, cost)
    return (best if best_mask is not None else None), best_mask, nodes


def _dfs_task(args):
    return _dfs(*args)


def _prefixes(size: int, depth: int) -> list[tuple[int, ...]]:
    depth = min(depth, size)
    if depth == 0:
        return [()]
    return [(RED,) + rest for rest in itertools.product((RED, BLUE), repeat=depth - 1)]


def _search(prob: _Problem, upper: float, budget: int, jobs: int = 1):
    """Run the search, optionally split over worker processes.

    Subtrees are keyed by a color prefix and combined in prefix order, so the
    chosen witness is the same for every worker count.
    """
    size = len(prob.order)
    if jobs <= 1 or size < 4:
        return _dfs(prob, upper, budget)
    depth = min(size, max(2, math.ceil(math.log2(jobs)) + 2))
    tasks = [(prob, upper, budget, p) for p in _prefixes(size, depth)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_dfs_task, tasks))
    total = sum(r[2] for r in results)
    if total > budget:
        raise SearchBudgetExceeded(f"search exceeded {budget} nodes")
    best, mask = None, None
    for cost, m, _ in results:
        if cost is not None and (best is None or cost < best):
            best, mask = cost, m
    return best, mask, total


def _witness(G: Graph, prob: _Problem, blue_mask: int) -> EdgeColoring:
    cols = [RED] * G.m
    for t, e in enumerate(prob.order):
        if blue_mask >> t & 1:
            cols[e] = BLUE
    return EdgeColoring(G, tuple(cols))


def min_mono_copies(G: Graph, F: Pattern, *, budget: int = DEFAULT_BUDGET,
                    jobs: int = 1) -> ArrowReport:
    """Least number of monochromatic copies of F over all 2-colorings of G."""
    prob = _build(G, F)
    best, mask, nodes = _search(prob, math.inf, budget, jobs)
    return ArrowReport(best, _witness(G, prob, mask), nodes)


def arrows_lambda(G: Graph, F: Pattern, lam: int, *, budget: int = DEFAULT_BUDGET,
                  jobs: int = 1) -> bool:
    """True iff every 2-coloring of G has at least ``lam`` monochromatic copies."""
    if lam <= 0:
        return True
    prob = _build(G, F)
    best, _, _ = _search(prob, lam, budget, jobs)
    return best is None


def arrows(G: Graph, F: Pattern, *, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> bool:
    return arrows_lambda(G, F, 1, budget=budget, jobs=jobs)


def robust_min_mono(G: Graph, F: Pattern, h: int, *, budget: int = DEFAULT_BUDGET) -> int:
    """Minimum of min_mono over subgraphs obtained by deleting at most h edges.

    Deleting edges never increases the minimum, so deletion sets of size
    exactly ``min(h, e(G))`` cover every case.
    """
    if not 0 <= h <= G.m:
        raise ValueError(f"h must lie in 0..{G.m}")
    if math.comb(G.m, h) > budget:
        raise SearchBudgetExceeded(f"{math.comb(G.m, h)} deletion sets exceed budget")
    best: float = math.inf
    spent = 0
    for removed in itertools.combinations(G.edges, h):
        H = G.without_edges(removed)
        cost, _, nodes = _search(_build(H, F), best, budget - spent)
        spent += nodes
        if cost is not None:
            best = cost
        if best == 0:
            break
    return int(best)


# rich pairs -----------------------------------------------------------------

@dataclass(frozen=True)
class RichPairGraph:
    """Pairs closing at least ``threshold`` monochromatic copies of F_i.

    ``x`` holds the total closing count per vertex pair, split into red and
    blue parts in ``x_red``/``x_blue``.
    """

    base: Graph
    x: dict[Edge, int]
    threshold: int
    x_red: dict[Edge, int]
    x_blue: dict[Edge, int]
    coloring: EdgeColoring


def rich_pairs(G: Graph, chi: EdgeColoring, F_i: Pattern, F_next: Pattern,
               f: Edge, ell: int) -> RichPairGraph:
    """Count, per vertex pair, the monochromatic F_i-copies it completes to F_next.

    The pair plays the role of the pattern edge ``f``.  Pairs that are
    already edges of G are counted the same way as non-edges.
    """
    f = _norm(*f)
    if f not in F_next.edges:
        raise PatternError(f"{f} is not an edge of F_next")
    if not is_isomorphic(F_next.minus(f).graph, F_i.graph):
        raise PatternError("F_next - f is not isomorphic to F_i")
    if ell < 0:
        raise ValueError("threshold must be nonnegative")
    if chi.host != G:
        raise ValueError("coloring does not belong to this graph")
    a, b = f
    rest = [e for e in F_next.edges if e != f]
    idx = G.edge_index
    found: set[tuple[Edge, frozenset, frozenset]] = set()
    if F_next.k <= G.n:
        for u, v in itertools.permutations(range(G.n), 2):
            for phi in iter_embeddings(F_next.graph, G, fixed={a: u, b: v}, skip=f):
                verts = frozenset(phi)
                img = frozenset(idx[_norm(phi[s], phi[t])] for s, t in rest)
                found.add((_norm(u, v), verts, img))
    x_red = {p: 0 for p in itertools.combinations(range(G.n), 2)}
    x_blue = dict(x_red)
    for pair, _, img in found:
        cols = {chi.colors[i] for i in img}
        if cols == {RED}:
            x_red[pair] += 1
        elif cols == {BLUE}:
            x_blue[pair] += 1
    x = {p: x_red[p] + x_blue[p] for p in x_red}
    base = Graph(G.n, tuple(p for p, val in x.items() if val >= ell))
    return RichPairGraph(base, x, ell, x_red, x_blue, chi)


def color_rich_graph(rp: RichPairGraph, chi: EdgeColoring, half_threshold: int) -> EdgeColoring:
    """Pink if the pair closes at least ``half_threshold`` red copies, else azure.

    A pair qualifying for both colors is pink.
    """
    if chi != rp.coloring:
        raise ValueError("rich-pair graph was built from a different coloring")
    cols = tuple(PINK if rp.x_red[e] >= half_threshold else AZURE for e in rp.base.edges)
    return EdgeColoring(rp.base, cols, ("pink", "azure"))
